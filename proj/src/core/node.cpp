#include "mathtools/node.hpp"

#include <algorithm>

namespace mathtools {

const std::string* MathNode::attribute(std::string_view key) const {
    for (const auto& attr : attributes) {
        if (attr.key == key) return &attr.value;
    }
    return nullptr;
}

namespace {

std::vector<Attribute> sorted_attributes(const std::vector<Attribute>& attrs) {
    auto out = attrs;
    std::sort(out.begin(), out.end(),
              [](const Attribute& a, const Attribute& b) { return a.key < b.key; });
    return out;
}

}  // namespace

bool tree_equal(const MathNode& a, const MathNode& b) {
    if (a.name != b.name || a.text != b.text || a.children.size() != b.children.size() ||
        a.attributes.size() != b.attributes.size()) {
        return false;
    }
    if (a.attributes != b.attributes &&
        sorted_attributes(a.attributes) != sorted_attributes(b.attributes)) {
        return false;
    }
    for (std::size_t i = 0; i < a.children.size(); ++i) {
        if (!tree_equal(a.children[i], b.children[i])) return false;
    }
    return true;
}

std::size_t subtree_size(const MathNode& node) {
    std::size_t n = 1;
    for (const auto& child : node.children) n += subtree_size(child);
    return n;
}

}  // namespace mathtools
