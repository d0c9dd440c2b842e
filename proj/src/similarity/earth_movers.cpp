#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "mathtools/similarity.hpp"

namespace mathtools::similarity {

void GroundDistance::set_override(std::string_view a, std::string_view b, double cost) {
    if (a == b) throw std::invalid_argument("ground distance of a name to itself is fixed at 0");
    if (!std::isfinite(cost) || cost < 0.0) throw std::invalid_argument("ground distance must be finite and >= 0");
    auto key = a < b ? std::pair{std::string(a), std::string(b)} : std::pair{std::string(b), std::string(a)};
    overrides_[std::move(key)] = cost;
}

double GroundDistance::operator()(std::string_view a, std::string_view b) const {
    if (a == b) return 0.0;
    if (!overrides_.empty()) {
        auto key = a < b ? std::pair{std::string(a), std::string(b)} : std::pair{std::string(b), std::string(a)};
        if (auto it = overrides_.find(key); it != overrides_.end()) return it->second;
    }
    return 1.0;
}

namespace {

// Transportation simplex (MODI) over a spanning-tree basis.
//
// Supplies and demands are integers stored in doubles, so every basic
// solution is integral and pivots are exact below 2^53.
class TransportationSimplex {
public:
    TransportationSimplex(std::vector<double> supply, std::vector<double> demand, std::vector<double> cost)
        : m_(supply.size()), n_(demand.size()), cost_(std::move(cost)), flow_(m_ * n_, 0.0),
          basic_(m_ * n_, false) {
        double max_cost = 0.0;
        for (double c : cost_) max_cost = std::max(max_cost, c);
        eps_ = 1e-12 * std::max(1.0, max_cost);
        northwest_corner(std::move(supply), std::move(demand));
    }

    double solve() {
        // Bland's rule (first improving cell, lowest-index leaving cell)
        // rules out cycling on degenerate bases.
        const std::size_t max_iterations = 1000 + 50 * m_ * n_ * (m_ + n_);
        for (std::size_t iter = 0; iter < max_iterations; ++iter) {
            compute_potentials();
            std::size_t entering = m_ * n_;
            for (std::size_t cell = 0; cell < m_ * n_; ++cell) {
                if (basic_[cell]) continue;
                const std::size_t i = cell / n_;
                const std::size_t j = cell % n_;
                if (cost_[cell] - u_[i] - v_[j] < -eps_) {
                    entering = cell;
                    break;
                }
            }
            if (entering == m_ * n_) return objective();
            pivot(entering);
        }
        throw std::logic_error("transportation simplex did not converge");
    }

private:
    void northwest_corner(std::vector<double> supply, std::vector<double> demand) {
        std::size_t i = 0;
        std::size_t j = 0;
        for (;;) {
            const double q = std::min(supply[i], demand[j]);
            flow_[i * n_ + j] = q;
            basic_[i * n_ + j] = true;
            supply[i] -= q;
            demand[j] -= q;
            if (i == m_ - 1 && j == n_ - 1) break;
            if ((supply[i] == 0.0 && i < m_ - 1) || j == n_ - 1) {
                ++i;
            } else {
                ++j;
            }
        }
    }

    // Basis tree over nodes 0..m-1 (rows) and m..m+n-1 (columns).
    std::vector<std::vector<std::size_t>> basis_adjacency() const {
        std::vector<std::vector<std::size_t>> adj(m_ + n_);
        for (std::size_t cell = 0; cell < m_ * n_; ++cell) {
            if (!basic_[cell]) continue;
            adj[cell / n_].push_back(m_ + cell % n_);
            adj[m_ + cell % n_].push_back(cell / n_);
        }
        return adj;
    }

    void compute_potentials() {
        u_.assign(m_, 0.0);
        v_.assign(n_, 0.0);
        const auto adj = basis_adjacency();
        std::vector<bool> done(m_ + n_, false);
        std::vector<std::size_t> stack{0};
        done[0] = true;
        while (!stack.empty()) {
            const std::size_t node = stack.back();
            stack.pop_back();
            for (std::size_t next : adj[node]) {
                if (done[next]) continue;
                done[next] = true;
                if (node < m_) {
                    v_[next - m_] = cost_[node * n_ + (next - m_)] - u_[node];
                } else {
                    u_[next] = cost_[next * n_ + (node - m_)] - v_[node - m_];
                }
                stack.push_back(next);
            }
        }
    }

    void pivot(std::size_t entering) {
        const std::size_t row = entering / n_;
        const std::size_t col = m_ + entering % n_;
        // Tree path from the entering column back to the entering row.
        const auto adj = basis_adjacency();
        std::vector<std::size_t> parent(m_ + n_, std::numeric_limits<std::size_t>::max());
        std::vector<std::size_t> queue{col};
        parent[col] = col;
        for (std::size_t k = 0; k < queue.size() && parent[row] == std::numeric_limits<std::size_t>::max(); ++k) {
            for (std::size_t next : adj[queue[k]]) {
                if (parent[next] != std::numeric_limits<std::size_t>::max()) continue;
                parent[next] = queue[k];
                queue.push_back(next);
            }
        }
        // Cells on the cycle after the entering one alternate -, +, -, ...
        // walking from row back towards col.
        std::vector<std::size_t> cycle;
        for (std::size_t node = row; node != col; node = parent[node]) {
            const std::size_t other = parent[node];
            cycle.push_back(node < m_ ? node * n_ + (other - m_) : other * n_ + (node - m_));
        }
        double theta = std::numeric_limits<double>::infinity();
        std::size_t leaving = m_ * n_;
        for (std::size_t k = 0; k < cycle.size(); k += 2) {
            const std::size_t cell = cycle[k];
            if (flow_[cell] < theta || (flow_[cell] == theta && cell < leaving)) {
                theta = flow_[cell];
                leaving = cell;
            }
        }
        flow_[entering] = theta;
        for (std::size_t k = 0; k < cycle.size(); ++k) flow_[cycle[k]] += (k % 2 == 0) ? -theta : theta;
        basic_[entering] = true;
        basic_[leaving] = false;
        flow_[leaving] = 0.0;
    }

    double objective() const {
        double total = 0.0;
        for (std::size_t cell = 0; cell < m_ * n_; ++cell) {
            if (basic_[cell]) total += flow_[cell] * cost_[cell];
        }
        return total;
    }

    std::size_t m_;
    std::size_t n_;
    std::vector<double> cost_;
    std::vector<double> flow_;
    std::vector<bool> basic_;
    std::vector<double> u_;
    std::vector<double> v_;
    double eps_ = 0.0;
};

}  // namespace

double emd(const Histogram& a, const Histogram& b, const GroundDistance& ground) {
    if (a.empty() || b.empty()) throw EmptyHistogram("earth mover's distance needs two non-empty histograms");
    if (a == b) return 0.0;
    // Scale a/A and b/B by A*B: row i supplies a_i*B, column j demands b_j*A.
    const double total_a = static_cast<double>(a.total());
    const double total_b = static_cast<double>(b.total());
    std::vector<const std::string*> rows;
    std::vector<const std::string*> cols;
    std::vector<double> supply;
    std::vector<double> demand;
    for (const auto& [name, count] : a.counts()) {
        rows.push_back(&name);
        supply.push_back(static_cast<double>(count) * total_b);
    }
    for (const auto& [name, count] : b.counts()) {
        cols.push_back(&name);
        demand.push_back(static_cast<double>(count) * total_a);
    }
    if (total_a * total_b > 9007199254740992.0) {
        throw std::overflow_error("histogram totals too large for exact transport");
    }
    std::vector<double> cost;
    cost.reserve(rows.size() * cols.size());
    for (const auto* r : rows) {
        for (const auto* c : cols) cost.push_back(ground(*r, *c));
    }
    TransportationSimplex solver(std::move(supply), std::move(demand), std::move(cost));
    return solver.solve() / (total_a * total_b);
}

}  // namespace mathtools::similarity
