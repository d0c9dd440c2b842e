#pragma once

// Namespace-agnostic XML reader used by the MathML parser. Supports elements,
// attributes, character and entity references, comments, processing
// instructions, CDATA sections and a skipped DOCTYPE. No DTD processing.

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mathtools::detail {

struct RawAttribute {
    std::string qname;
    std::string value;
    std::size_t offset = 0;
};

struct RawElement {
    std::string qname;
    std::vector<RawAttribute> attributes;
    std::string text;  // concatenated character data, untrimmed
    std::vector<RawElement> children;
    std::size_t offset = 0;    // position of '<'
    std::size_t name_end = 0;  // position just past the element name
};

/// Called for every named reference other than the five XML predefined ones.
/// Returns the replacement text or nullopt to reject the reference.
using EntityResolver = std::function<std::optional<std::string>(std::string_view name, std::size_t offset)>;

/// Reads exactly one root element. Throws MalformedInput.
RawElement read_xml(std::string_view input, const EntityResolver& resolve_entity);

}  // namespace mathtools::detail
