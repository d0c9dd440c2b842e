#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace mathtools {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input is not acceptable XML/MathML (or needs a repair that strict mode forbids).
class MalformedInput : public Error {
public:
    MalformedInput(const std::string& what, std::size_t offset)
        : Error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

class DuplicateId : public Error {
public:
    explicit DuplicateId(std::string id)
        : Error("duplicate id '" + id + "'"), id_(std::move(id)) {}

    const std::string& id() const noexcept { return id_; }

private:
    std::string id_;
};

class MissingBranch : public Error {
public:
    using Error::Error;
};

class WouldBeEmpty : public Error {
public:
    using Error::Error;
};

class EmptyHistogram : public Error {
public:
    using Error::Error;
};

}  // namespace mathtools
