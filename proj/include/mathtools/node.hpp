#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mathtools {

inline constexpr std::string_view kMathMLNamespace = "http://www.w3.org/1998/Math/MathML";

struct Attribute {
    std::string key;
    std::string value;

    bool operator==(const Attribute&) const = default;
};

/// One XML element of a MathML tree.
///
/// Names are local names for MathML elements. Elements from a foreign
/// namespace (e.g. OpenMath inside an annotation-xml) keep their qualified
/// name and their namespace declarations as ordinary attributes.
///
/// Character data is stored as the concatenation of all text segments of the
/// element, trimmed at both ends. An empty result is stored as no text.
struct MathNode {
    std::string name;
    std::vector<Attribute> attributes;
    std::optional<std::string> text;
    std::vector<MathNode> children;

    /// Value of attribute `key`, or nullptr.
    const std::string* attribute(std::string_view key) const;

    /// Exact equality, attribute order included.
    bool operator==(const MathNode&) const = default;
};

/// Structural tree equality: names, attribute sets (order ignored), text and
/// child order.
bool tree_equal(const MathNode& a, const MathNode& b);

/// Number of nodes in the subtree rooted at `node`.
std::size_t subtree_size(const MathNode& node);

}  // namespace mathtools
