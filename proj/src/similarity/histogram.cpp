#include "mathtools/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace mathtools::similarity {

std::optional<Scope> parse_scope(std::string_view text) {
    if (text == "presentation") return Scope::presentation;
    if (text == "content") return Scope::content;
    if (text == "whole") return Scope::whole;
    return std::nullopt;
}

Histogram::Histogram(std::initializer_list<std::pair<const std::string, std::uint64_t>> counts) {
    for (const auto& [name, count] : counts) add(name, count);
}

void Histogram::add(std::string_view name, std::uint64_t count) {
    if (count == 0) return;
    auto it = counts_.find(name);
    if (it == counts_.end()) it = counts_.emplace(std::string(name), 0).first;
    it->second += count;
    total_ += count;
}

std::uint64_t Histogram::count(std::string_view name) const {
    const auto it = counts_.find(name);
    return it == counts_.end() ? 0 : it->second;
}

std::string to_text(const Histogram& h) {
    std::string out;
    for (const auto& [name, count] : h.counts()) {
        out += name;
        out += '\t';
        out += std::to_string(count);
        out += '\n';
    }
    return out;
}

bool is_structural(std::string_view name) {
    return name == "math" || name == "semantics" || name == "annotation" || name == "annotation-xml";
}

Histogram histogram(const MathDoc& doc, Scope scope, bool include_structural) {
    std::size_t begin = 0;
    std::size_t end = doc.size();
    if (scope == Scope::presentation) {
        const auto pres = doc.presentation_root();
        if (!pres) throw MissingBranch("document has no presentation branch");
        begin = pres->index;
        end = doc.subtree_end(*pres);
    } else if (scope == Scope::content) {
        const auto container = doc.content_container();
        if (!container) throw MissingBranch("document has no content branch");
        begin = container->index;
        end = doc.subtree_end(*container);
    }
    Histogram h;
    for (std::size_t i = begin; i < end; ++i) {
        const std::string& name = doc.node(NodeId{i}).name;
        if (include_structural || !is_structural(name)) h.add(name);
    }
    return h;
}

Histogram accumulate(std::span<const Histogram> hs) {
    Histogram out;
    for (const auto& h : hs) {
        for (const auto& [name, count] : h.counts()) out.add(name, count);
    }
    return out;
}

namespace {

// Calls f(a_count, b_count) for every name in the union of both supports.
template <typename F>
void for_union(const Histogram& a, const Histogram& b, F&& f) {
    auto ia = a.counts().begin();
    auto ib = b.counts().begin();
    const auto ea = a.counts().end();
    const auto eb = b.counts().end();
    while (ia != ea || ib != eb) {
        if (ib == eb || (ia != ea && ia->first < ib->first)) {
            f(ia->second, std::uint64_t{0});
            ++ia;
        } else if (ia == ea || ib->first < ia->first) {
            f(std::uint64_t{0}, ib->second);
            ++ib;
        } else {
            f(ia->second, ib->second);
            ++ia;
            ++ib;
        }
    }
}

}  // namespace

double hist_distance_absolute(const Histogram& a, const Histogram& b) {
    std::uint64_t sum = 0;
    for_union(a, b, [&](std::uint64_t x, std::uint64_t y) { sum += x > y ? x - y : y - x; });
    return static_cast<double>(sum);
}

double hist_distance_relative(const Histogram& a, const Histogram& b) {
    const std::uint64_t norm = a.total() + b.total();
    if (norm == 0) return 0.0;
    return hist_distance_absolute(a, b) / static_cast<double>(norm);
}

double cosine_similarity(const Histogram& a, const Histogram& b) {
    if (a.empty() || b.empty()) throw EmptyHistogram("cosine similarity needs two non-empty histograms");
    double dot = 0.0;
    double na = 0.0;
    double nb = 0.0;
    for_union(a, b, [&](std::uint64_t x, std::uint64_t y) {
        const double dx = static_cast<double>(x);
        const double dy = static_cast<double>(y);
        dot += dx * dy;
        na += dx * dx;
        nb += dy * dy;
    });
    // sqrt(na * nb) rather than sqrt(na) * sqrt(nb): a vector against itself
    // then gives exactly 1.
    return std::clamp(dot / std::sqrt(na * nb), 0.0, 1.0);
}

double document_distance(std::span<const MathDoc> a, std::span<const MathDoc> b, DocumentMeasure measure,
                         Scope scope, bool include_structural, const GroundDistance& ground) {
    const auto sum = [&](std::span<const MathDoc> docs) {
        std::vector<Histogram> hs;
        hs.reserve(docs.size());
        for (const auto& doc : docs) hs.push_back(histogram(doc, scope, include_structural));
        return accumulate(hs);
    };
    const Histogram ha = sum(a);
    const Histogram hb = sum(b);
    return measure == DocumentMeasure::emd ? emd(ha, hb, ground) : cosine_similarity(ha, hb);
}

}  // namespace mathtools::similarity
