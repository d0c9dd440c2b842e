#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "mathtools/document.hpp"

namespace mathtools {

enum class ParseMode { strict, lenient };

enum class RepairKind {
    namespace_inserted,
    entity_replaced,
    /// A MathML namespace prefix was removed from an element or attribute name.
    attribute_namespace_dropped,
};

std::string_view to_string(RepairKind kind);

struct Repair {
    RepairKind kind;
    /// Byte offset into the original input.
    std::size_t location;

    bool operator==(const Repair&) const = default;
};

struct ParseReport {
    /// Repairs ordered by rule (namespace, entity, prefix), then by location.
    std::vector<Repair> repairs;
    std::vector<DanglingXref> dangling_xrefs;
};

struct ParseResult {
    MathDoc doc;
    ParseReport report;
};

/// Parses one `math` element.
///
/// Lenient mode applies three repairs and records each one:
///   1. a `math` element without any namespace declaration gets the MathML
///      namespace;
///   2. HTML5/MathML named entities become their characters;
///   3. prefixes bound to the MathML namespace are dropped from element and
///      attribute names.
/// Strict mode rejects every input that would need one of them.
///
/// Throws MalformedInput or DuplicateId.
ParseResult parse(std::string_view input, ParseMode mode = ParseMode::strict);

/// UTF-8 replacement for an HTML5 named character reference (without the
/// surrounding '&' and ';'), or nullptr if the name is unknown. The five XML
/// predefined entities are not part of this table.
const char* lookup_html_entity(std::string_view name);

}  // namespace mathtools
