#include "mathtools/document.hpp"

#include <algorithm>
#include <iterator>
#include <limits>

#include "mathtools/error.hpp"
#include "mathtools/serializer.hpp"

namespace mathtools {

namespace {

constexpr std::size_t kNoParent = std::numeric_limits<std::size_t>::max();

// Sorted for binary search.
constexpr std::string_view kContentElements[] = {
    "abs",        "and",         "apply",        "arccos",       "arcsin",
    "arctan",     "bind",        "bvar",         "cbytes",       "ceiling",
    "cerror",     "ci",          "cn",           "compose",      "condition",
    "conjugate",  "cos",         "cosh",         "cot",          "cs",
    "csymbol",    "curl",        "declare",      "degree",       "determinant",
    "diff",       "divergence",  "divide",       "domainofapplication", "emptyset",
    "eq",         "equivalent",  "exp",          "exponentiale", "factorial",
    "false",      "floor",       "gcd",          "geq",          "grad",
    "gt",         "ident",       "imaginaryi",   "implies",      "in",
    "infinity",   "int",         "intersect",    "interval",     "inverse",
    "lambda",     "lcm",         "leq",          "limit",        "list",
    "ln",         "log",         "logbase",      "lowlimit",     "lt",
    "matrix",     "matrixrow",   "max",          "min",          "minus",
    "neq",        "not",         "or",           "otherwise",    "pi",
    "piece",      "piecewise",   "plus",         "power",        "product",
    "root",       "set",         "share",        "sum",
};

}  // namespace

bool is_content_element(std::string_view name) {
    static_assert(std::is_sorted(std::begin(kContentElements), std::end(kContentElements)));
    return std::binary_search(std::begin(kContentElements), std::end(kContentElements), name);
}

struct MathDoc::Impl {
    MathNode root;
    std::vector<const MathNode*> nodes;
    std::vector<std::size_t> parents;
    std::vector<std::size_t> ends;

    std::optional<NodeId> semantics;
    std::optional<NodeId> presentation;
    std::optional<NodeId> content;
    std::optional<NodeId> content_container;
    std::vector<Annotation> annotations;
    std::map<std::string, NodeId, std::less<>> ids;
    std::vector<XrefLink> links;
    std::vector<DanglingXref> dangling;

    void index(const MathNode& node, std::size_t parent) {
        const std::size_t self = nodes.size();
        nodes.push_back(&node);
        parents.push_back(parent);
        ends.push_back(0);
        for (const auto& child : node.children) index(child, self);
        ends[self] = nodes.size();
    }

    // Preorder indices of the children of `parent`.
    std::vector<std::size_t> child_indices(std::size_t parent) const {
        std::vector<std::size_t> out;
        for (std::size_t i = parent + 1; i < ends[parent]; i = ends[i]) out.push_back(i);
        return out;
    }

    void detect_branches() {
        const auto top = child_indices(0);
        if (!top.empty() && nodes[top.front()]->name == "semantics") {
            const std::size_t sem = top.front();
            semantics = NodeId{sem};
            for (std::size_t c : child_indices(sem)) {
                const MathNode& child = *nodes[c];
                if (child.name == "annotation") {
                    annotations.push_back({value_or_empty(child, "encoding"), child.text.value_or("")});
                } else if (child.name == "annotation-xml") {
                    const std::string* enc = child.attribute("encoding");
                    if (enc && *enc == "MathML-Content" && !content_container) {
                        content_container = NodeId{c};
                        const auto inner = child_indices(c);
                        if (!inner.empty()) content = NodeId{inner.front()};
                    } else {
                        std::string payload;
                        for (const auto& grandchild : child.children) payload += serialize_node(grandchild);
                        annotations.push_back({enc ? *enc : std::string{}, std::move(payload)});
                    }
                } else if (!presentation) {
                    presentation = NodeId{c};
                }
            }
            return;
        }
        if (!top.empty() && is_content_element(nodes[top.front()]->name)) {
            content = NodeId{0};
            content_container = NodeId{0};
        } else {
            presentation = NodeId{0};
        }
    }

    void index_ids() {
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            const std::string* id = nodes[i]->attribute("id");
            if (!id) continue;
            if (!ids.emplace(*id, NodeId{i}).second) throw DuplicateId(*id);
        }
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            const std::string* xref = nodes[i]->attribute("xref");
            if (!xref) continue;
            if (auto it = ids.find(*xref); it != ids.end()) {
                links.push_back({NodeId{i}, it->second});
            } else {
                dangling.push_back({NodeId{i}, *xref});
            }
        }
    }

    static std::string value_or_empty(const MathNode& node, std::string_view key) {
        const std::string* v = node.attribute(key);
        return v ? *v : std::string{};
    }
};

MathDoc MathDoc::from_tree(MathNode root) {
    if (root.name != "math") throw MalformedInput("root element is <" + root.name + ">, expected <math>", 0);
    auto impl = std::make_shared<Impl>();
    impl->root = std::move(root);
    impl->index(impl->root, kNoParent);
    impl->detect_branches();
    impl->index_ids();
    return MathDoc(std::move(impl));
}

const MathNode& MathDoc::root() const { return impl_->root; }

const MathNode& MathDoc::node(NodeId id) const { return *impl_->nodes.at(id.index); }

std::size_t MathDoc::size() const { return impl_->nodes.size(); }

std::optional<NodeId> MathDoc::parent(NodeId id) const {
    const std::size_t p = impl_->parents.at(id.index);
    if (p == kNoParent) return std::nullopt;
    return NodeId{p};
}

std::size_t MathDoc::subtree_end(NodeId id) const { return impl_->ends.at(id.index); }

bool MathDoc::contains(NodeId ancestor, NodeId node) const {
    return node.index >= ancestor.index && node.index < subtree_end(ancestor);
}

std::optional<NodeId> MathDoc::semantics() const { return impl_->semantics; }
std::optional<NodeId> MathDoc::presentation_root() const { return impl_->presentation; }
std::optional<NodeId> MathDoc::content_root() const { return impl_->content; }
std::optional<NodeId> MathDoc::content_container() const { return impl_->content_container; }
const std::vector<Annotation>& MathDoc::annotations() const { return impl_->annotations; }

std::optional<NodeId> MathDoc::find_id(std::string_view id) const {
    if (auto it = impl_->ids.find(id); it != impl_->ids.end()) return it->second;
    return std::nullopt;
}

const std::map<std::string, NodeId, std::less<>>& MathDoc::ids() const { return impl_->ids; }
const std::vector<XrefLink>& MathDoc::xref_links() const { return impl_->links; }
const std::vector<DanglingXref>& MathDoc::dangling_xrefs() const { return impl_->dangling; }

}  // namespace mathtools
