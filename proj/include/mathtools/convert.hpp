#pragma once

#include <chrono>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "mathtools/document.hpp"
#include "mathtools/error.hpp"
#include "mathtools/parser.hpp"

namespace mathtools::convert {

/// Placeholder substituted by the TeX input in argument mode.
inline constexpr std::string_view kInputPlaceholder = "{input}";

enum class InputMode { argument, standard_input };

/// How to run one external LaTeX->MathML tool.
///
/// `command` is split into arguments on whitespace; single or double quotes
/// group words. The process must write MathML to stdout and exit with 0.
struct ConverterSpec {
    std::string name;
    std::string command;
    InputMode input_mode = InputMode::standard_input;
    std::chrono::milliseconds timeout{30000};

    /// Throws InvalidSpec.
    void validate() const;

    bool operator==(const ConverterSpec&) const = default;
};

struct ConversionResult {
    MathDoc mathml;
    std::string raw;
    ParseReport report;
    std::string tool;
    std::chrono::nanoseconds elapsed{0};
};

class InvalidSpec : public Error {
public:
    using Error::Error;
};

class DuplicateName : public Error {
public:
    explicit DuplicateName(const std::string& name) : Error("converter '" + name + "' is already registered") {}
};

class UnknownConverter : public Error {
public:
    explicit UnknownConverter(const std::string& name) : Error("no converter named '" + name + "'") {}
};

/// Failures of a conversion run. `raw` holds whatever the tool wrote to stdout.
class ConversionError : public Error {
public:
    ConversionError(const std::string& what, std::string raw) : Error(what), raw_(std::move(raw)) {}

    const std::string& raw() const noexcept { return raw_; }

private:
    std::string raw_;
};

class ToolUnavailable : public ConversionError {
public:
    using ConversionError::ConversionError;
};

class ToolFailed : public ConversionError {
public:
    ToolFailed(int exit_code, std::string stderr_excerpt, std::string raw)
        : ConversionError("tool exited with status " + std::to_string(exit_code) +
                              (stderr_excerpt.empty() ? "" : ": " + stderr_excerpt),
                          std::move(raw)),
          exit_code_(exit_code), stderr_excerpt_(std::move(stderr_excerpt)) {}

    int exit_code() const noexcept { return exit_code_; }
    const std::string& stderr_excerpt() const noexcept { return stderr_excerpt_; }

private:
    int exit_code_;
    std::string stderr_excerpt_;
};

class Timeout : public ConversionError {
public:
    using ConversionError::ConversionError;
};

class OutputNotMathML : public ConversionError {
public:
    using ConversionError::ConversionError;
};

/// Ordered, thread-safe set of converter specs.
class Registry {
public:
    Registry() = default;
    Registry(const Registry& other);
    Registry& operator=(const Registry& other);

    /// Throws DuplicateName or InvalidSpec.
    void register_converter(ConverterSpec spec);

    /// Names in registration order.
    std::vector<std::string> list() const;

    /// Throws UnknownConverter.
    ConverterSpec get(std::string_view name) const;

private:
    mutable std::shared_mutex mutex_;
    std::vector<ConverterSpec> specs_;
};

/// Reads a JSON array of {name, command, input_mode, timeout_ms} objects.
/// input_mode is "argument" or "stdin"; timeout_ms defaults to 30000.
/// Throws InvalidSpec or DuplicateName.
Registry load_registry(std::string_view json_text);

/// Runs converter `name` on `tex` and lenient-parses its output.
/// Throws UnknownConverter, ToolUnavailable, ToolFailed, Timeout or
/// OutputNotMathML.
ConversionResult convert(const Registry& registry, std::string_view name, std::string_view tex);

/// Built-in normal form: attributes sorted by key and the semantics children
/// ordered as presentation branch, content annotation-xml, then the other
/// annotations in their original order. Idempotent.
MathDoc canonicalize(const MathDoc& doc);

/// Pipes the serialized document through an external canonicalizer
/// registered like any converter (standard-input mode).
ConversionResult canonicalize_external(const Registry& registry, std::string_view name, const MathDoc& doc);

/// Specs for the bundled stub tool at `stub_executable`: identity,
/// echo-frac, fail, slow (10 ms timeout) and garbage.
std::vector<ConverterSpec> stub_specs(const std::string& stub_executable);

}  // namespace mathtools::convert
