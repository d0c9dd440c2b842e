#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "mathtools/similarity.hpp"

namespace mathtools::similarity {

void CostConfig::validate() const {
    for (double w : {insert, del, rename}) {
        if (!std::isfinite(w) || w < 0.0) throw std::invalid_argument("edit costs must be finite and >= 0");
    }
}

namespace {

// Postorder view of a tree: interned labels and leftmost-leaf indices.
struct PostorderTree {
    std::vector<int> labels;
    std::vector<std::size_t> leftmost;
    std::vector<std::size_t> keyroots;
};

class LabelInterner {
public:
    int intern(const MathNode& node, LabelMode mode) {
        std::string key = node.name;
        if (mode == LabelMode::name_and_leaf_text && node.children.empty() && node.text) {
            key += '\0';
            key += *node.text;
        }
        return ids_.try_emplace(std::move(key), static_cast<int>(ids_.size())).first->second;
    }

private:
    std::unordered_map<std::string, int> ids_;
};

std::size_t build(const MathNode& node, PostorderTree& tree, LabelInterner& interner, LabelMode mode) {
    std::size_t first_leaf = 0;
    bool have_leaf = false;
    for (const auto& child : node.children) {
        const std::size_t child_index = build(child, tree, interner, mode);
        if (!have_leaf) {
            first_leaf = tree.leftmost[child_index];
            have_leaf = true;
        }
    }
    const std::size_t self = tree.labels.size();
    tree.labels.push_back(interner.intern(node, mode));
    tree.leftmost.push_back(have_leaf ? first_leaf : self);
    return self;
}

PostorderTree postorder(const MathNode& root, LabelInterner& interner, LabelMode mode) {
    PostorderTree tree;
    build(root, tree, interner, mode);
    // Keyroots: the highest node for each distinct leftmost leaf.
    const std::size_t n = tree.labels.size();
    std::vector<bool> seen(n, false);
    for (std::size_t i = n; i-- > 0;) {
        if (!seen[tree.leftmost[i]]) {
            seen[tree.leftmost[i]] = true;
            tree.keyroots.push_back(i);
        }
    }
    std::sort(tree.keyroots.begin(), tree.keyroots.end());
    return tree;
}

}  // namespace

double tree_edit_distance(const MathNode& a, const MathNode& b, const CostConfig& costs, LabelMode labels) {
    costs.validate();
    LabelInterner interner;
    const PostorderTree ta = postorder(a, interner, labels);
    const PostorderTree tb = postorder(b, interner, labels);
    const std::size_t na = ta.labels.size();
    const std::size_t nb = tb.labels.size();

    std::vector<double> treedist(na * nb, 0.0);
    const auto td = [&](std::size_t i, std::size_t j) -> double& { return treedist[i * nb + j]; };
    std::vector<double> forest((na + 1) * (nb + 1), 0.0);

    for (std::size_t kr_a : ta.keyroots) {
        for (std::size_t kr_b : tb.keyroots) {
            const std::size_t la = ta.leftmost[kr_a];
            const std::size_t lb = tb.leftmost[kr_b];
            const std::size_t rows = kr_a - la + 2;
            const std::size_t cols = kr_b - lb + 2;
            // fd(x, y): distance between forests a[la..la+x-1] and b[lb..lb+y-1].
            const auto fd = [&](std::size_t x, std::size_t y) -> double& { return forest[x * cols + y]; };
            fd(0, 0) = 0.0;
            for (std::size_t x = 1; x < rows; ++x) fd(x, 0) = fd(x - 1, 0) + costs.del;
            for (std::size_t y = 1; y < cols; ++y) fd(0, y) = fd(0, y - 1) + costs.insert;
            for (std::size_t x = 1; x < rows; ++x) {
                const std::size_t i = la + x - 1;
                for (std::size_t y = 1; y < cols; ++y) {
                    const std::size_t j = lb + y - 1;
                    const double remove = fd(x - 1, y) + costs.del;
                    const double add = fd(x, y - 1) + costs.insert;
                    if (ta.leftmost[i] == la && tb.leftmost[j] == lb) {
                        const double relabel = ta.labels[i] == tb.labels[j] ? 0.0 : costs.rename;
                        fd(x, y) = std::min({remove, add, fd(x - 1, y - 1) + relabel});
                        td(i, j) = fd(x, y);
                    } else {
                        const std::size_t px = ta.leftmost[i] - la;
                        const std::size_t py = tb.leftmost[j] - lb;
                        fd(x, y) = std::min({remove, add, fd(px, py) + td(i, j)});
                    }
                }
            }
        }
    }
    return td(na - 1, nb - 1);
}

}  // namespace mathtools::similarity
