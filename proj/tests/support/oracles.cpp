#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>

namespace mathtools::testing {

namespace {

int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

bool chance(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& items) {
    return items[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(items.size()) - 1))];
}

MathNode element(std::string name, std::string text = {}) {
    MathNode n;
    n.name = std::move(name);
    if (!text.empty()) n.text = std::move(text);
    return n;
}

const std::vector<std::string> kLetters{"a", "b", "x", "y", "n"};

MathNode pres_expr(Rng& rng, int depth) {
    const int kind = depth <= 0 ? uniform(rng, 0, 2) : uniform(rng, 0, 7);
    switch (kind) {
        case 0: {
            MathNode mi = element("mi", pick(rng, kLetters));
            if (chance(rng, 0.2)) mi.attributes.push_back({"mathvariant", "normal"});
            return mi;
        }
        case 1: return element("mn", std::to_string(uniform(rng, 0, 9)));
        case 2: return element("mo", pick(rng, std::vector<std::string>{"+", "-", "=", "("}));
        case 3:
        case 4: {
            MathNode row = element("mrow");
            const int k = uniform(rng, 1, 3);
            for (int i = 0; i < k; ++i) row.children.push_back(pres_expr(rng, depth - 1));
            return row;
        }
        case 5: {
            MathNode n = element(pick(rng, std::vector<std::string>{"mfrac", "msup", "msub"}));
            n.children.push_back(pres_expr(rng, depth - 1));
            n.children.push_back(pres_expr(rng, depth - 1));
            return n;
        }
        case 6: {
            MathNode n = element("msqrt");
            n.children.push_back(pres_expr(rng, depth - 1));
            return n;
        }
        default: {
            MathNode n = element("mstyle");
            n.attributes.push_back({"displaystyle", chance(rng, 0.5) ? "true" : "false"});
            n.children.push_back(pres_expr(rng, depth - 1));
            return n;
        }
    }
}

MathNode content_expr(Rng& rng, int depth) {
    const int kind = depth <= 0 ? uniform(rng, 0, 2) : uniform(rng, 0, 4);
    switch (kind) {
        case 0: return element("ci", pick(rng, kLetters));
        case 1: return element("cn", std::to_string(uniform(rng, 0, 9)));
        case 2: {
            MathNode cs = element("csymbol", pick(rng, std::vector<std::string>{"sin", "exp"}));
            cs.attributes.push_back({"cd", "transc1"});
            return cs;
        }
        default: {
            MathNode apply = element("apply");
            apply.children.push_back(
                element(pick(rng, std::vector<std::string>{"plus", "times", "divide", "minus", "power"})));
            const int k = uniform(rng, 1, 3);
            for (int i = 0; i < k; ++i) apply.children.push_back(content_expr(rng, depth - 1));
            return apply;
        }
    }
}

void collect(MathNode& n, std::vector<MathNode*>& out) {
    out.push_back(&n);
    for (auto& c : n.children) collect(c, out);
}

// Gives some nodes of each branch ids and links a few of them across.
void cross_reference(Rng& rng, MathNode& pres, MathNode* content) {
    std::vector<MathNode*> p;
    std::vector<MathNode*> c;
    collect(pres, p);
    if (content) collect(*content, c);
    std::vector<std::string> p_ids;
    std::vector<std::string> c_ids;
    for (auto* n : p) {
        if (chance(rng, 0.6)) {
            p_ids.push_back("p." + std::to_string(p_ids.size() + 1));
            n->attributes.push_back({"id", p_ids.back()});
        }
    }
    for (auto* n : c) {
        if (chance(rng, 0.6)) {
            c_ids.push_back("c." + std::to_string(c_ids.size() + 1));
            n->attributes.push_back({"id", c_ids.back()});
        }
    }
    auto link = [&](std::vector<MathNode*>& nodes, const std::vector<std::string>& targets) {
        for (auto* n : nodes) {
            if (!chance(rng, 0.5)) continue;
            if (!targets.empty() && chance(rng, 0.9)) n->attributes.push_back({"xref", pick(rng, targets)});
            else n->attributes.push_back({"xref", "missing." + std::to_string(uniform(rng, 1, 9))});
        }
    };
    link(p, c_ids);
    link(c, p_ids);
}

}  // namespace

MathNode random_tree(Rng& rng, int max_nodes, const std::vector<std::string>& labels) {
    const int n = uniform(rng, 1, max_nodes);
    // Build as parent links first so appending never invalidates pointers.
    std::vector<int> parent(static_cast<std::size_t>(n), -1);
    std::vector<std::vector<int>> kids(static_cast<std::size_t>(n));
    for (int i = 1; i < n; ++i) {
        parent[static_cast<std::size_t>(i)] = uniform(rng, 0, i - 1);
        kids[static_cast<std::size_t>(parent[static_cast<std::size_t>(i)])].push_back(i);
    }
    std::vector<std::string> names(static_cast<std::size_t>(n));
    std::vector<std::string> texts(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        names[static_cast<std::size_t>(i)] = pick(rng, labels);
        if (chance(rng, 0.5)) texts[static_cast<std::size_t>(i)] = pick(rng, std::vector<std::string>{"1", "2"});
    }
    auto build = [&](auto&& self, int i) -> MathNode {
        MathNode node = element(names[static_cast<std::size_t>(i)], texts[static_cast<std::size_t>(i)]);
        for (int k : kids[static_cast<std::size_t>(i)]) node.children.push_back(self(self, k));
        return node;
    };
    return build(build, 0);
}

similarity::Histogram random_histogram(Rng& rng, int alphabet, int max_count) {
    similarity::Histogram h;
    while (h.empty()) {
        for (int i = 0; i < alphabet; ++i) {
            const int c = uniform(rng, 0, max_count);
            if (c > 0) h.add("e" + std::to_string(i), static_cast<std::uint64_t>(c));
        }
    }
    return h;
}

MathNode random_formula(Rng& rng) {
    MathNode math = element("math");
    const int shape = uniform(rng, 0, 9);
    if (shape == 0) {
        math.children.push_back(content_expr(rng, 3));
        cross_reference(rng, math.children.front(), nullptr);
        return math;
    }
    if (shape == 1) {
        const int k = uniform(rng, 1, 3);
        for (int i = 0; i < k; ++i) math.children.push_back(pres_expr(rng, 3));
        return math;
    }
    MathNode pres = pres_expr(rng, 3);
    MathNode content = content_expr(rng, 3);
    cross_reference(rng, pres, &content);
    MathNode semantics = element("semantics");
    semantics.children.push_back(std::move(pres));
    MathNode ax = element("annotation-xml");
    ax.attributes.push_back({"encoding", "MathML-Content"});
    ax.children.push_back(std::move(content));
    if (chance(rng, 0.2)) {
        MathNode alt = element("annotation-xml");
        alt.attributes.push_back({"encoding", "MathML-Presentation"});
        alt.children.push_back(element("mi", "z"));
        semantics.children.push_back(std::move(alt));
    }
    semantics.children.push_back(std::move(ax));
    if (chance(rng, 0.8)) {
        MathNode tex = element("annotation", "x+1");
        tex.attributes.push_back({"encoding", "application/x-tex"});
        semantics.children.push_back(std::move(tex));
    }
    math.children.push_back(std::move(semantics));
    if (chance(rng, 0.3)) math.attributes.push_back({"display", "block"});
    return math;
}

std::vector<NodeId> brute_force_select(const MathDoc& doc, const query::Query& q) {
    auto step_ok = [&](const query::Step& step, NodeId id) {
        const MathNode& n = doc.node(id);
        if (step.test != "*" && step.test != n.name) return false;
        for (const auto& p : step.predicates) {
            const std::string* v = n.attribute(p.key);
            if (!v || *v != p.value) return false;
        }
        return true;
    };
    auto matches = [&](auto&& self, const query::PathExpr& path, std::size_t k, NodeId id) -> bool {
        const query::Step& step = path.steps[k];
        if (!step_ok(step, id)) return false;
        if (k == 0) return step.axis == query::Axis::descendant || id.index == 0;
        auto up = doc.parent(id);
        if (step.axis == query::Axis::child) return up && self(self, path, k - 1, *up);
        for (; up; up = doc.parent(*up)) {
            if (self(self, path, k - 1, *up)) return true;
        }
        return false;
    };
    std::vector<NodeId> out;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const NodeId id{i};
        for (const auto& path : q.paths) {
            if (!path.steps.empty() && matches(matches, path, path.steps.size() - 1, id)) {
                out.push_back(id);
                break;
            }
        }
    }
    return out;
}

MappingEnumeration::MappingEnumeration(const MathNode& a, const MathNode& b, bool leaf_text_labels) {
    struct Flat {
        std::vector<std::string> label;
        std::vector<int> end;
    };
    auto flatten = [&](const MathNode& root) {
        Flat f;
        auto walk = [&](auto&& self, const MathNode& n) -> void {
            const std::size_t me = f.label.size();
            std::string label = n.name;
            if (leaf_text_labels && n.children.empty() && n.text) label += "\x1f" + *n.text;
            f.label.push_back(label);
            f.end.push_back(0);
            for (const auto& c : n.children) self(self, c);
            f.end[me] = static_cast<int>(f.label.size());
        };
        walk(walk, root);
        return f;
    };
    const Flat fa = flatten(a);
    const Flat fb = flatten(b);
    n1_ = static_cast<int>(fa.label.size());
    n2_ = static_cast<int>(fb.label.size());
    auto anc = [](const Flat& f, int i, int j) { return i < j && j < f.end[static_cast<std::size_t>(i)]; };

    std::set<std::pair<int, int>> shapes;
    std::vector<std::pair<int, int>> pairs;
    std::vector<bool> used(static_cast<std::size_t>(n2_), false);
    auto assign = [&](auto&& self, int i, int renames) -> void {
        if (i == n1_) {
            ++count_;
            shapes.insert({static_cast<int>(pairs.size()), renames});
            return;
        }
        self(self, i + 1, renames);
        for (int j = 0; j < n2_; ++j) {
            if (used[static_cast<std::size_t>(j)]) continue;
            bool ok = true;
            for (const auto& [pi, pj] : pairs) {
                // pi < i always, so preorder must be preserved as pj < j, and
                // ancestry must agree in both trees.
                if (!(pj < j) || anc(fa, pi, i) != anc(fb, pj, j)) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;
            used[static_cast<std::size_t>(j)] = true;
            pairs.emplace_back(i, j);
            const bool differ = fa.label[static_cast<std::size_t>(i)] != fb.label[static_cast<std::size_t>(j)];
            self(self, i + 1, renames + (differ ? 1 : 0));
            pairs.pop_back();
            used[static_cast<std::size_t>(j)] = false;
        }
    };
    assign(assign, 0, 0);
    shapes_.assign(shapes.begin(), shapes.end());
}

double MappingEnumeration::min_cost(const similarity::CostConfig& costs) const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& [k, r] : shapes_) {
        const double c = r * costs.rename + (n1_ - k) * costs.del + (n2_ - k) * costs.insert;
        best = std::min(best, c);
    }
    return best;
}

double transport_oracle(const similarity::Histogram& a, const similarity::Histogram& b, const GroundTable& table) {
    std::vector<std::pair<std::string, std::int64_t>> supply;
    std::vector<std::pair<std::string, std::int64_t>> demand;
    const auto ta = static_cast<std::int64_t>(a.total());
    const auto tb = static_cast<std::int64_t>(b.total());
    for (const auto& [k, v] : a.counts()) supply.emplace_back(k, static_cast<std::int64_t>(v) * tb);
    for (const auto& [k, v] : b.counts()) demand.emplace_back(k, static_cast<std::int64_t>(v) * ta);
    const int m = static_cast<int>(supply.size());
    const int n = static_cast<int>(demand.size());
    auto cost = [&](int i, int j) {
        const auto& x = supply[static_cast<std::size_t>(i)].first;
        const auto& y = demand[static_cast<std::size_t>(j)].first;
        if (auto it = table.find({x, y}); it != table.end()) return it->second;
        if (auto it = table.find({y, x}); it != table.end()) return it->second;
        return x == y ? 0.0 : 1.0;
    };

    // Nodes: 0 = source, 1..m supplies, m+1..m+n demands, m+n+1 = sink.
    const int nodes = m + n + 2;
    const int sink = nodes - 1;
    std::vector<std::int64_t> flow(static_cast<std::size_t>(m * n), 0);
    std::vector<std::int64_t> left_s(static_cast<std::size_t>(m));
    std::vector<std::int64_t> left_d(static_cast<std::size_t>(n));
    for (int i = 0; i < m; ++i) left_s[static_cast<std::size_t>(i)] = supply[static_cast<std::size_t>(i)].second;
    for (int j = 0; j < n; ++j) left_d[static_cast<std::size_t>(j)] = demand[static_cast<std::size_t>(j)].second;

    for (;;) {
        // Bellman-Ford on the residual graph.
        std::vector<double> dist(static_cast<std::size_t>(nodes), std::numeric_limits<double>::infinity());
        std::vector<int> prev(static_cast<std::size_t>(nodes), -1);
        dist[0] = 0;
        for (int round = 0; round < nodes; ++round) {
            bool changed = false;
            auto relax = [&](int u, int v, double w) {
                const auto du = dist[static_cast<std::size_t>(u)];
                if (du + w < dist[static_cast<std::size_t>(v)] - 1e-15) {
                    dist[static_cast<std::size_t>(v)] = du + w;
                    prev[static_cast<std::size_t>(v)] = u;
                    changed = true;
                }
            };
            for (int i = 0; i < m; ++i) {
                if (left_s[static_cast<std::size_t>(i)] > 0) relax(0, 1 + i, 0);
            }
            for (int i = 0; i < m; ++i) {
                for (int j = 0; j < n; ++j) {
                    if (dist[static_cast<std::size_t>(1 + i)] < std::numeric_limits<double>::infinity()) {
                        relax(1 + i, 1 + m + j, cost(i, j));
                    }
                    if (flow[static_cast<std::size_t>(i * n + j)] > 0 &&
                        dist[static_cast<std::size_t>(1 + m + j)] < std::numeric_limits<double>::infinity()) {
                        relax(1 + m + j, 1 + i, -cost(i, j));
                    }
                }
            }
            for (int j = 0; j < n; ++j) {
                if (left_d[static_cast<std::size_t>(j)] > 0 &&
                    dist[static_cast<std::size_t>(1 + m + j)] < std::numeric_limits<double>::infinity()) {
                    relax(1 + m + j, sink, 0);
                }
            }
            if (!changed) break;
        }
        if (prev[static_cast<std::size_t>(sink)] < 0) break;

        std::vector<int> path{sink};
        while (path.back() != 0) path.push_back(prev[static_cast<std::size_t>(path.back())]);
        std::reverse(path.begin(), path.end());
        std::int64_t amount = std::numeric_limits<std::int64_t>::max();
        for (std::size_t s = 0; s + 1 < path.size(); ++s) {
            const int u = path[s];
            const int v = path[s + 1];
            if (u == 0) amount = std::min(amount, left_s[static_cast<std::size_t>(v - 1)]);
            else if (v == sink) amount = std::min(amount, left_d[static_cast<std::size_t>(u - 1 - m)]);
            else if (u > m) amount = std::min(amount, flow[static_cast<std::size_t>((v - 1) * n + (u - 1 - m))]);
        }
        for (std::size_t s = 0; s + 1 < path.size(); ++s) {
            const int u = path[s];
            const int v = path[s + 1];
            if (u == 0) left_s[static_cast<std::size_t>(v - 1)] -= amount;
            else if (v == sink) left_d[static_cast<std::size_t>(u - 1 - m)] -= amount;
            else if (u <= m) flow[static_cast<std::size_t>((u - 1) * n + (v - 1 - m))] += amount;
            else flow[static_cast<std::size_t>((v - 1) * n + (u - 1 - m))] -= amount;
        }
    }
    for (auto s : left_s) {
        if (s != 0) throw std::logic_error("transport oracle left supply unmatched");
    }
    double total = 0;
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) total += static_cast<double>(flow[static_cast<std::size_t>(i * n + j)]) * cost(i, j);
    }
    return total / static_cast<double>(ta * tb);
}

double half_l1_normalized(const similarity::Histogram& a, const similarity::Histogram& b) {
    std::set<std::string> names;
    for (const auto& [k, v] : a.counts()) names.insert(k);
    for (const auto& [k, v] : b.counts()) names.insert(k);
    double sum = 0;
    for (const auto& k : names) {
        sum += std::abs(static_cast<double>(a.count(k)) / static_cast<double>(a.total()) -
                        static_cast<double>(b.count(k)) / static_cast<double>(b.total()));
    }
    return sum / 2;
}

double cosine_oracle(const similarity::Histogram& a, const similarity::Histogram& b) {
    double dot = 0;
    double na = 0;
    double nb = 0;
    for (const auto& [k, v] : a.counts()) {
        dot += static_cast<double>(v) * static_cast<double>(b.count(k));
        na += static_cast<double>(v) * static_cast<double>(v);
    }
    for (const auto& [k, v] : b.counts()) nb += static_cast<double>(v) * static_cast<double>(v);
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

std::map<std::string, std::uint64_t> count_names(const MathNode& node) {
    std::map<std::string, std::uint64_t> counts;
    auto walk = [&](auto&& self, const MathNode& n) -> void {
        ++counts[n.name];
        for (const auto& c : n.children) self(self, c);
    };
    walk(walk, node);
    return counts;
}

}  // namespace mathtools::testing
