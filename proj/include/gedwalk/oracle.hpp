#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gedwalk/graph.hpp"
#include "gedwalk/walk_engine.hpp"

namespace gedwalk::oracle {

/// Hard limits for the brute-force references. Exceeding one aborts with an
/// exception; the oracles never truncate silently.
struct GuardRails {
    std::size_t max_vertices = 12;
    int max_length = 16;
    std::uint64_t max_visits = 500'000'000; // DFS step budget
    std::uint64_t max_subsets = 100'000;    // exhaustive search budget
};

/// Enumerated tallies for one walk length: how much walk weight touches the
/// queried group and how much exists overall. Both are plain counts on
/// unweighted graphs, with 0 <= hits <= total.
struct WalkEnumeration {
    int length = 0;
    double hits = 0.0;
    double total = 0.0;
};

/// Exhaustive depth-first enumeration of every walk up to a maximum length,
/// tallied by (length, set of visited vertices). Weighted graphs tally the
/// product of edge weights instead of a unit count. Queries for phi_i(S) are
/// answered by subtracting the walks confined to the complement of S, via a
/// sum-over-subsets table. Intentionally shares no code with the level
/// recurrences it is used to verify.
class WalkTable {
public:
    WalkTable(const Graph &g, int max_len, GuardRails rails = {}) : n_(g.num_vertices()) {
        if (n_ > rails.max_vertices)
            throw std::invalid_argument("WalkTable: graph exceeds guard rail of "
                                        + std::to_string(rails.max_vertices) + " vertices");
        if (max_len < 0 || max_len > rails.max_length)
            throw std::invalid_argument("WalkTable: length exceeds guard rail of "
                                        + std::to_string(rails.max_length));
        max_len_ = max_len;
        const std::size_t masks = std::size_t{1} << n_;
        tally_.assign(static_cast<std::size_t>(max_len + 1), std::vector<double>(masks, 0.0));
        std::uint64_t visits = 0;
        for (node_t s = 0; s < n_; ++s)
            dfs(g, s, 0, std::uint32_t{1} << s, 1.0, visits, rails);

        totals_.assign(static_cast<std::size_t>(max_len + 1), 0.0);
        for (int i = 0; i <= max_len; ++i)
            for (double t : tally_[static_cast<std::size_t>(i)])
                totals_[static_cast<std::size_t>(i)] += t;

        // In-place sum over subsets: afterwards tally_[i][T] equals the
        // weight of i-walks whose vertex set is contained in T.
        for (auto &level : tally_)
            for (std::size_t bit = 0; bit < n_; ++bit)
                for (std::size_t m = 0; m < masks; ++m)
                    if (m & (std::size_t{1} << bit))
                        level[m] += level[m ^ (std::size_t{1} << bit)];
    }

    int max_length() const { return max_len_; }

    /// Weighted count of all i-walks.
    double total(int i) const { return totals_.at(static_cast<std::size_t>(i)); }

    /// Weighted count of i-walks containing at least one vertex of S.
    double phi(std::span<const node_t> group, int i) const {
        std::uint32_t smask = 0;
        for (node_t v : group) {
            if (v >= n_)
                throw std::invalid_argument("WalkTable::phi: vertex out of range");
            smask |= std::uint32_t{1} << v;
        }
        return phi_mask(smask, i);
    }

    double phi_mask(std::uint32_t smask, int i) const {
        const std::uint32_t full = static_cast<std::uint32_t>((std::size_t{1} << n_) - 1);
        const auto &avoid = tally_.at(static_cast<std::size_t>(i));
        return total(i) - avoid[full & ~smask];
    }

    WalkEnumeration enumerate(std::span<const node_t> group, int i) const {
        return {i, phi(group, i), total(i)};
    }

private:
    void dfs(const Graph &g, node_t v, int depth, std::uint32_t mask, double weight,
             std::uint64_t &visits, const GuardRails &rails) {
        if (++visits > rails.max_visits)
            throw std::invalid_argument("WalkTable: DFS budget exceeded");
        tally_[static_cast<std::size_t>(depth)][mask] += weight;
        if (depth == max_len_)
            return;
        const auto nbrs = g.out_neighbors(v);
        const auto ws = g.out_weights(v);
        for (std::size_t i = 0; i < nbrs.size(); ++i) {
            const node_t u = nbrs[i];
            const double w = g.is_weighted() ? ws[i] : 1.0;
            dfs(g, u, depth + 1, mask | (std::uint32_t{1} << u), weight * w, visits, rails);
        }
    }

    std::size_t n_;
    int max_len_ = 0;
    std::vector<std::vector<double>> tally_;
    std::vector<double> totals_;
};

/// Number (weighted sum) of i-walks that contain at least one vertex of S,
/// by direct enumeration.
inline double enumerate_phi(const Graph &g, std::span<const node_t> group, int i,
                            GuardRails rails = {12, 8}) {
    return WalkTable(g, i, rails).phi(group, i);
}

/// Truncated series sum_{i=1..L} alpha^i phi_i(S) from enumerated counts.
inline double exact_ged_truncated(const Graph &g, std::span<const node_t> group, double alpha,
                                  int max_len, GuardRails rails = {}) {
    const WalkTable table(g, max_len, rails);
    double acc = 0.0;
    double scale = 1.0;
    for (int i = 1; i <= max_len; ++i) {
        scale *= alpha;
        acc += scale * table.phi(group, i);
    }
    return acc;
}

/// Truncated Katz centrality sum_{i=1..ell} alpha^i omega_i(x) via repeated
/// neighbor sums (independent of the engine's recurrences).
inline double katz_partial(const Graph &g, node_t x, double alpha, int ell) {
    if (x >= g.num_vertices())
        throw std::invalid_argument("katz_partial: vertex out of range");
    if (ell < 1)
        throw std::invalid_argument("katz_partial: ell must be >= 1");
    const std::size_t n = g.num_vertices();
    std::vector<double> cur(n, 1.0), next(n, 0.0);
    double acc = 0.0;
    double scale = 1.0;
    for (int i = 1; i <= ell; ++i) {
        for (node_t v = 0; v < n; ++v) {
            const auto nbrs = g.out_neighbors(v);
            const auto ws = g.out_weights(v);
            double s = 0.0;
            if (g.is_weighted()) {
                for (std::size_t j = 0; j < nbrs.size(); ++j)
                    s += ws[j] * cur[nbrs[j]];
            } else {
                for (node_t u : nbrs)
                    s += cur[u];
            }
            next[v] = s;
        }
        std::swap(cur, next);
        scale *= alpha;
        acc += scale * cur[x];
    }
    return acc;
}

/// Evaluates ged_score for every k-subset (lexicographic id order, strict
/// improvement to keep the id-lexicographic tie-break) and returns the best
/// group with its score.
inline std::pair<std::vector<node_t>, double>
exhaustive_best_group(const Graph &g, std::size_t k, double alpha, double eps,
                      const TailBoundConfig &cfg, GuardRails rails = {}) {
    const std::size_t n = g.num_vertices();
    if (k < 1 || k > n)
        throw std::invalid_argument("exhaustive_best_group: need 1 <= k <= n");
    std::uint64_t combos = 1;
    for (std::size_t i = 0; i < k; ++i) {
        combos = combos * (n - i) / (i + 1);
        if (combos > rails.max_subsets)
            throw std::invalid_argument("exhaustive_best_group: subset budget exceeded");
    }

    std::vector<node_t> subset(k);
    for (std::size_t i = 0; i < k; ++i)
        subset[i] = static_cast<node_t>(i);
    std::vector<node_t> best;
    double best_score = -1.0;
    while (true) {
        const double score = ged_score(g, std::span<const node_t>(subset), alpha, eps, cfg).partial;
        if (score > best_score) {
            best_score = score;
            best = subset;
        }
        // next combination
        std::size_t i = k;
        while (i > 0 && subset[i - 1] == n - k + i - 1)
            --i;
        if (i == 0)
            break;
        ++subset[i - 1];
        for (std::size_t j = i; j < k; ++j)
            subset[j] = subset[j - 1] + 1;
    }
    return {best, best_score};
}

} // namespace gedwalk::oracle
