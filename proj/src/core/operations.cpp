#include "mathtools/operations.hpp"

#include <stdexcept>

#include "mathtools/error.hpp"

namespace mathtools {

namespace {

MathNode shallow_copy(const MathNode& node) {
    MathNode out;
    out.name = node.name;
    out.attributes = node.attributes;
    out.text = node.text;
    return out;
}

void strip_cross_references(MathNode& node) {
    std::erase_if(node.attributes, [](const Attribute& a) { return a.key == "id" || a.key == "xref"; });
    for (auto& child : node.children) strip_cross_references(child);
}

// Preorder indices of the direct children of `parent`.
std::vector<std::size_t> child_indices(const MathDoc& doc, NodeId parent) {
    std::vector<std::size_t> out;
    for (std::size_t i = parent.index + 1; i < doc.subtree_end(parent); i = doc.subtree_end(NodeId{i})) {
        out.push_back(i);
    }
    return out;
}

}  // namespace

std::optional<Branch> parse_branch(std::string_view text) {
    if (text == "presentation") return Branch::presentation;
    if (text == "content") return Branch::content;
    if (text == "both") return Branch::both;
    return std::nullopt;
}

std::optional<CleanFeature> parse_clean_feature(std::string_view text) {
    if (text == "cross_references" || text == "cross-references") return CleanFeature::cross_references;
    if (text == "content_branch" || text == "content-branch") return CleanFeature::content_branch;
    if (text == "presentation_branch" || text == "presentation-branch") return CleanFeature::presentation_branch;
    if (text == "annotations") return CleanFeature::annotations;
    return std::nullopt;
}

MathDoc split_presentation(const MathDoc& doc) {
    const auto pres = doc.presentation_root();
    if (!pres) throw MissingBranch("document has no presentation branch");
    if (pres->index == 0) return MathDoc::from_tree(doc.root());
    MathNode math = shallow_copy(doc.root());
    math.children.push_back(doc.node(*pres));
    return MathDoc::from_tree(std::move(math));
}

MathDoc split_content(const MathDoc& doc) {
    const auto container = doc.content_container();
    if (!container) throw MissingBranch("document has no content branch");
    if (container->index == 0) return MathDoc::from_tree(doc.root());
    MathNode math = shallow_copy(doc.root());
    math.children = doc.node(*container).children;
    return MathDoc::from_tree(std::move(math));
}

std::optional<std::string> get_tex(const MathDoc& doc) {
    for (const auto& annotation : doc.annotations()) {
        if (annotation.encoding == "application/x-tex") return annotation.payload;
    }
    return std::nullopt;
}

std::vector<Identifier> extract_identifiers(const MathDoc& doc, Branch branch) {
    std::size_t begin = 0;
    std::size_t end = doc.size();
    if (branch == Branch::presentation) {
        const auto pres = doc.presentation_root();
        if (!pres) throw MissingBranch("document has no presentation branch");
        begin = pres->index;
        end = doc.subtree_end(*pres);
    } else if (branch == Branch::content) {
        const auto container = doc.content_container();
        if (!container) throw MissingBranch("document has no content branch");
        begin = container->index;
        end = doc.subtree_end(*container);
    }
    std::vector<Identifier> out;
    for (std::size_t i = begin; i < end; ++i) {
        const MathNode& node = doc.node(NodeId{i});
        if (node.name == "mi" || node.name == "ci") {
            out.push_back({node.name, node.text.value_or(""), NodeId{i}});
        }
    }
    return out;
}

MathDoc clean(const MathDoc& doc, const CleanFeatures& features) {
    if (features.empty()) throw std::invalid_argument("clean: empty feature set");
    const bool drop_pres = features.contains(CleanFeature::presentation_branch);
    const bool drop_content = features.contains(CleanFeature::content_branch);
    const bool drop_annotations = features.contains(CleanFeature::annotations);

    MathNode math = shallow_copy(doc.root());
    const auto semantics = doc.semantics();
    const auto top = child_indices(doc, NodeId{0});

    if (!semantics) {
        // The document's only branch is math itself.
        const bool is_content = doc.content_container() && doc.content_container()->index == 0;
        if ((is_content && drop_content) || (!is_content && drop_pres)) {
            throw WouldBeEmpty("removing the only branch leaves no math content");
        }
        math.children = doc.root().children;
    } else {
        for (std::size_t i : top) {
            if (i != semantics->index) math.children.push_back(doc.node(NodeId{i}));
        }
        const auto pres = doc.presentation_root();
        const auto container = doc.content_container();
        const bool had_branch = pres || container;
        const bool keep_pres = pres && !drop_pres;
        const bool keep_content = container && !drop_content;
        if (had_branch && !keep_pres && !keep_content) {
            throw WouldBeEmpty("removing both branches leaves no math content");
        }

        MathNode sem = shallow_copy(doc.node(*semantics));
        for (std::size_t c : child_indices(doc, *semantics)) {
            const NodeId id{c};
            const MathNode& child = doc.node(id);
            if (pres && id == *pres && drop_pres) continue;
            if (container && id == *container && drop_content) continue;
            if (child.name == "annotation" && drop_annotations) continue;
            sem.children.push_back(child);
        }

        std::vector<MathNode> replacement;
        if (sem.children.size() == 1 && (keep_pres != keep_content)) {
            if (keep_pres) {
                replacement.push_back(std::move(sem.children.front()));
            } else {
                replacement = std::move(sem.children.front().children);
            }
        } else {
            replacement.push_back(std::move(sem));
        }
        // semantics is the first child of math whenever it is detected.
        math.children.insert(math.children.begin(), std::make_move_iterator(replacement.begin()),
                             std::make_move_iterator(replacement.end()));
    }

    if (features.contains(CleanFeature::cross_references)) strip_cross_references(math);
    return MathDoc::from_tree(std::move(math));
}

std::optional<NodeId> resolve_xref(const MathDoc& doc, std::string_view id) {
    const auto self = doc.find_id(id);
    if (!self) return std::nullopt;
    if (const std::string* xref = doc.node(*self).attribute("xref")) return doc.find_id(*xref);
    for (const auto& link : doc.xref_links()) {
        if (link.target == *self && link.source != *self) return link.source;
    }
    return std::nullopt;
}

}  // namespace mathtools
