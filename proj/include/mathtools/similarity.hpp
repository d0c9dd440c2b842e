#pragma once

#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>

#include "mathtools/document.hpp"
#include "mathtools/error.hpp"

namespace mathtools::similarity {

enum class Scope { presentation, content, whole };

std::optional<Scope> parse_scope(std::string_view text);

/// Element-name frequencies. Zero counts are never stored.
class Histogram {
public:
    using Counts = std::map<std::string, std::uint64_t, std::less<>>;

    Histogram() = default;
    Histogram(std::initializer_list<std::pair<const std::string, std::uint64_t>> counts);

    void add(std::string_view name, std::uint64_t count = 1);

    std::uint64_t count(std::string_view name) const;
    std::uint64_t total() const { return total_; }
    bool empty() const { return total_ == 0; }
    const Counts& counts() const { return counts_; }

    bool operator==(const Histogram&) const = default;

private:
    Counts counts_;
    std::uint64_t total_ = 0;
};

/// `name<TAB>count` per line, keys in lexicographic order.
std::string to_text(const Histogram& h);

/// math, semantics, annotation and annotation-xml.
bool is_structural(std::string_view name);

/// Counts elements of `scope` by name. Throws MissingBranch.
Histogram histogram(const MathDoc& doc, Scope scope, bool include_structural = false);

Histogram accumulate(std::span<const Histogram> hs);

/// Sum over all names of |a[k] - b[k]|.
double hist_distance_absolute(const Histogram& a, const Histogram& b);

/// Absolute distance divided by a.total() + b.total(); 0 when both are empty.
double hist_distance_relative(const Histogram& a, const Histogram& b);

struct CostConfig {
    double insert = 1.0;
    double del = 1.0;
    double rename = 1.0;

    /// Throws std::invalid_argument unless every weight is finite and >= 0.
    void validate() const;
};

enum class LabelMode {
    name,
    /// Leaves are labelled by name and text, inner nodes by name.
    name_and_leaf_text,
};

/// Ordered tree edit distance (Zhang-Shasha).
double tree_edit_distance(const MathNode& a, const MathNode& b, const CostConfig& costs = {},
                          LabelMode labels = LabelMode::name);

/// Per-name transport cost: 0 for equal names, 1 otherwise, unless overridden.
class GroundDistance {
public:
    /// Throws std::invalid_argument for equal names or a negative/non-finite cost.
    void set_override(std::string_view a, std::string_view b, double cost);

    double operator()(std::string_view a, std::string_view b) const;

private:
    std::map<std::pair<std::string, std::string>, double> overrides_;
};

/// Earth mover's distance between a/a.total() and b/b.total(), solved
/// exactly as a transportation problem. Throws EmptyHistogram.
double emd(const Histogram& a, const Histogram& b, const GroundDistance& ground = {});

/// Throws EmptyHistogram.
double cosine_similarity(const Histogram& a, const Histogram& b);

enum class DocumentMeasure { emd, cosine };

/// Accumulates the histograms of each list and compares the sums. For
/// `cosine` the similarity is returned.
double document_distance(std::span<const MathDoc> a, std::span<const MathDoc> b, DocumentMeasure measure,
                         Scope scope, bool include_structural = false, const GroundDistance& ground = {});

}  // namespace mathtools::similarity
