#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "mathtools/document.hpp"

namespace mathtools {

enum class Branch { presentation, content, both };

enum class CleanFeature { cross_references, content_branch, presentation_branch, annotations };

using CleanFeatures = std::set<CleanFeature>;

std::optional<Branch> parse_branch(std::string_view text);
std::optional<CleanFeature> parse_clean_feature(std::string_view text);

struct Identifier {
    std::string name;  // "mi" or "ci"
    std::string text;
    NodeId node;

    bool operator==(const Identifier&) const = default;
};

/// Standalone document holding only the presentation branch. xref attributes
/// are kept and usually dangle afterwards. Throws MissingBranch.
MathDoc split_presentation(const MathDoc& doc);

/// Standalone document holding only the content branch. Throws MissingBranch.
MathDoc split_content(const MathDoc& doc);

/// Payload of the first application/x-tex annotation.
std::optional<std::string> get_tex(const MathDoc& doc);

/// mi/ci elements of the requested branch in document order. `both` scans the
/// whole document. Throws MissingBranch.
std::vector<Identifier> extract_identifiers(const MathDoc& doc, Branch branch);

/// Removes the named features. When a semantics wrapper is left with a single
/// branch and nothing else, it is unwrapped. Removing an absent feature is a
/// no-op. Throws WouldBeEmpty if no branch would remain, std::invalid_argument
/// for an empty feature set.
MathDoc clean(const MathDoc& doc, const CleanFeatures& features);

/// Partner of the node carrying id="`id`": the node its xref points to, or,
/// when it has no xref, the first node whose xref points back at it. Absent
/// for unknown ids and dangling references.
std::optional<NodeId> resolve_xref(const MathDoc& doc, std::string_view id);

}  // namespace mathtools
