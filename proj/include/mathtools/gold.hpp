#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mathtools/error.hpp"

namespace mathtools::gold {

/// One benchmark record.
///
/// JSON fields: id (positive integer), tex, mathml, and the optional title,
/// uri and check (tool name -> verdict). Any other field is kept in `extra`
/// and written back unchanged.
struct GoldEntry {
    std::int64_t id = 0;
    std::string tex;
    std::string mathml;
    std::optional<std::string> title;
    std::optional<std::string> uri;
    std::map<std::string, std::string> check;
    nlohmann::json extra = nlohmann::json::object();

    bool operator==(const GoldEntry&) const = default;
};

class SchemaError : public Error {
public:
    explicit SchemaError(const std::string& what, std::optional<std::int64_t> id = std::nullopt)
        : Error(id ? "gold entry " + std::to_string(*id) + ": " + what : what), id_(id) {}

    std::optional<std::int64_t> id() const noexcept { return id_; }

private:
    std::optional<std::int64_t> id_;
};

class InvalidGoldMathML : public Error {
public:
    InvalidGoldMathML(std::int64_t id, const std::string& why)
        : Error("gold entry " + std::to_string(id) + ": invalid mathml: " + why), id_(id) {}

    std::int64_t id() const noexcept { return id_; }

private:
    std::int64_t id_;
};

/// Parses and validates a JSON array of entries, keeping file order.
/// Throws SchemaError or InvalidGoldMathML.
std::vector<GoldEntry> load_gold(std::string_view json_text);

/// Pretty JSON with sorted keys and entries ordered by id.
std::string save_gold(std::vector<GoldEntry> entries);

enum class FindingKind {
    invalid_mathml,
    missing_presentation_branch,
    missing_content_branch,
    dangling_xref,
    missing_tex_annotation,
    tex_mismatch,
};

std::string_view to_string(FindingKind kind);

struct Finding {
    FindingKind kind;
    std::string message;
};

/// Problems with an entry; empty when valid.
std::vector<Finding> validate_entry(const GoldEntry& entry);

}  // namespace mathtools::gold
