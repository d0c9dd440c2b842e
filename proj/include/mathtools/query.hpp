#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "mathtools/document.hpp"
#include "mathtools/error.hpp"

/// A small XPath subset for selecting MathML elements:
///
///     query     := path ( "|" path )*
///     path      := ( "/" | "//" )? step ( ( "/" | "//" ) step )*
///     step      := ( name | "*" ) ( "[@" key "=" quoted-value "]" )*
///
/// "/" selects children and "//" descendants of the previous step; a leading
/// separator applies to the document node. Without one the first step is a
/// child of the document node, i.e. it can only match the root element.
namespace mathtools::query {

enum class Axis { child, descendant };

struct Predicate {
    std::string key;
    std::string value;

    bool operator==(const Predicate&) const = default;
};

struct Step {
    Axis axis = Axis::child;
    std::string test;  // element name or "*"
    std::vector<Predicate> predicates;

    bool operator==(const Step&) const = default;
};

struct PathExpr {
    std::vector<Step> steps;

    bool operator==(const PathExpr&) const = default;
};

/// Union of paths, evaluated separately and merged in document order.
struct Query {
    std::vector<PathExpr> paths;

    bool operator==(const Query&) const = default;
};

class SyntaxError : public Error {
public:
    SyntaxError(const std::string& what, std::size_t position)
        : Error(what + " at position " + std::to_string(position)), position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

class UnknownName : public Error {
public:
    explicit UnknownName(const std::string& name) : Error("unknown library expression '" + name + "'") {}
};

/// Parses a single path (no union). Throws SyntaxError.
PathExpr parse_path(std::string_view text);

/// Parses a union of paths. Throws SyntaxError.
Query parse_query(std::string_view text);

std::string render(const PathExpr& expr);
std::string render(const Query& query);

/// Matching nodes in preorder, without duplicates.
std::vector<NodeId> select(const MathDoc& doc, const PathExpr& expr);
std::vector<NodeId> select(const MathDoc& doc, const Query& query);

struct LibraryEntry {
    std::string name;
    Query query;
    std::string text;
    std::string description;
};

/// Named catalogue of reliable expressions.
///
/// The shipped catalogue is compiled in from data/mathml_paths.tsv: one record
/// per line, `name<TAB>xpath<TAB>description`; blank lines and lines starting
/// with '#' are ignored.
class PathLibrary {
public:
    static const PathLibrary& shipped();

    /// Throws SyntaxError for a bad expression, Error for malformed records
    /// or duplicate names.
    static PathLibrary from_tsv(std::string_view tsv);

    /// Throws UnknownName.
    const LibraryEntry& get(std::string_view name) const;

    bool contains(std::string_view name) const;

    /// Entries sorted by name.
    std::vector<const LibraryEntry*> entries() const;

    std::string to_tsv() const;

private:
    std::map<std::string, LibraryEntry, std::less<>> entries_;
};

/// Shorthand for PathLibrary::shipped().get(name).query.
const Query& library_get(std::string_view name);

}  // namespace mathtools::query
