#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mathtools/node.hpp"

namespace mathtools {

/// Handle to a node: its index in the preorder enumeration of one MathDoc.
/// Handles are only meaningful for the document that produced them.
struct NodeId {
    std::size_t index = 0;

    auto operator<=>(const NodeId&) const = default;
};

struct Annotation {
    std::string encoding;
    std::string payload;

    bool operator==(const Annotation&) const = default;
};

struct DanglingXref {
    NodeId node;
    std::string target;

    bool operator==(const DanglingXref&) const = default;
};

/// A resolved cross reference: `source` carries xref="<id of target>".
struct XrefLink {
    NodeId source;
    NodeId target;

    bool operator==(const XrefLink&) const = default;
};

/// An immutable, indexed MathML formula.
///
/// The root is always a `math` element. Copies share the underlying tree.
/// Branch detection:
///   - with a `semantics` child of `math`, the presentation root is the first
///     semantics child that is neither `annotation` nor `annotation-xml`, and
///     the content root is the first element child of the first
///     `annotation-xml` whose encoding is exactly "MathML-Content";
///   - without one, `math` itself stands for the branch its children belong
///     to: content when the first child is a content MathML element,
///     presentation otherwise (including the childless `<math/>`).
class MathDoc {
public:
    /// Indexes `root`. Throws MalformedInput if the root is not `math`,
    /// DuplicateId if two nodes share an id attribute value.
    static MathDoc from_tree(MathNode root);

    const MathNode& root() const;
    const MathNode& node(NodeId id) const;

    /// Total number of nodes, root included.
    std::size_t size() const;

    std::optional<NodeId> parent(NodeId id) const;

    /// One past the last preorder index of the subtree rooted at `id`.
    std::size_t subtree_end(NodeId id) const;

    bool contains(NodeId ancestor, NodeId node) const;

    std::optional<NodeId> semantics() const;
    std::optional<NodeId> presentation_root() const;
    std::optional<NodeId> content_root() const;

    /// The element whose children form the content branch: the
    /// MathML-Content annotation-xml, or `math` for content-only documents.
    std::optional<NodeId> content_container() const;

    /// `annotation` and non-content `annotation-xml` children of semantics,
    /// in document order. annotation-xml payloads are compact serializations
    /// of their children.
    const std::vector<Annotation>& annotations() const;

    /// Node carrying id="`id`".
    std::optional<NodeId> find_id(std::string_view id) const;

    /// Map from id attribute value to node.
    const std::map<std::string, NodeId, std::less<>>& ids() const;

    /// Every xref attribute that names an existing id, in document order.
    const std::vector<XrefLink>& xref_links() const;

    /// Every xref attribute that names no id in this document.
    const std::vector<DanglingXref>& dangling_xrefs() const;

private:
    struct Impl;
    explicit MathDoc(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

    std::shared_ptr<const Impl> impl_;
};

/// Content MathML element names used to classify childless-semantics documents.
bool is_content_element(std::string_view name);

}  // namespace mathtools
