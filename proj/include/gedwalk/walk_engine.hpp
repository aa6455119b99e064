#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "gedwalk/errors.hpp"
#include "gedwalk/graph.hpp"
#include "gedwalk/parallel.hpp"

namespace gedwalk {

/// Membership indicator over the vertex set; mask[v] != 0 means v is in the
/// group.
using GroupMask = std::vector<std::uint8_t>;

inline GroupMask make_group_mask(std::size_t n, std::span<const node_t> group) {
    GroupMask mask(n, 0);
    for (node_t v : group) {
        if (v >= n)
            throw std::invalid_argument("group vertex " + std::to_string(v) + " out of range");
        mask[v] = 1;
    }
    return mask;
}

/// Scaled walk tallies for one level i: hit[v] = alpha^i * (number of i-walks
/// ending at v that touch the group), miss[v] = alpha^i * (number of i-walks
/// ending at v that avoid it). Weighted graphs count each walk with the
/// product of its edge weights.
struct LevelState {
    int level = 0;
    std::vector<double> hit;
    std::vector<double> miss;
};

/// Level 0: a 0-walk is a single vertex, so hit[v] = [v in S] and
/// miss[v] = [v not in S].
inline LevelState initial_level_state(const Graph &g, const GroupMask &group) {
    const std::size_t n = g.num_vertices();
    LevelState st;
    st.level = 0;
    st.hit.assign(n, 0.0);
    st.miss.assign(n, 0.0);
    for (node_t v = 0; v < n; ++v)
        (group[v] ? st.hit[v] : st.miss[v]) = 1.0;
    return st;
}

namespace detail {

constexpr node_t no_extra_vertex = std::numeric_limits<node_t>::max();

/// One application of the walk recurrences, extending every (i-1)-walk by one
/// arc into its endpoint. Membership is group[v] with an optional extra
/// vertex treated as a member, which lets callers evaluate S and S + {x}
/// against one shared mask. Writes are disjoint per vertex, so the vertex
/// loop is data-parallel and the output is identical for any worker count.
inline void level_step_into(const Graph &g, const LevelState &prev, const GroupMask &group,
                            node_t extra, double alpha, LevelState &next) {
    const std::size_t n = g.num_vertices();
    next.level = prev.level + 1;
    next.hit.resize(n);
    next.miss.resize(n);
    par::for_blocks(n, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t vi = lo; vi < hi; ++vi) {
            const node_t v = static_cast<node_t>(vi);
            const auto nbrs = g.in_neighbors(v);
            const bool member = group[v] || v == extra;
            if (g.is_weighted()) {
                const auto ws = g.in_weights(v);
                if (member) {
                    double acc = 0.0;
                    for (std::size_t i = 0; i < nbrs.size(); ++i)
                        acc += ws[i] * (prev.hit[nbrs[i]] + prev.miss[nbrs[i]]);
                    next.hit[v] = alpha * acc;
                    next.miss[v] = 0.0;
                } else {
                    double h = 0.0, m = 0.0;
                    for (std::size_t i = 0; i < nbrs.size(); ++i) {
                        h += ws[i] * prev.hit[nbrs[i]];
                        m += ws[i] * prev.miss[nbrs[i]];
                    }
                    next.hit[v] = alpha * h;
                    next.miss[v] = alpha * m;
                }
            } else {
                if (member) {
                    double acc = 0.0;
                    for (node_t u : nbrs)
                        acc += prev.hit[u] + prev.miss[u];
                    next.hit[v] = alpha * acc;
                    next.miss[v] = 0.0;
                } else {
                    double h = 0.0, m = 0.0;
                    for (node_t u : nbrs) {
                        h += prev.hit[u];
                        m += prev.miss[u];
                    }
                    next.hit[v] = alpha * h;
                    next.miss[v] = alpha * m;
                }
            }
        }
    });
}

/// Accumulates in ascending vertex order (deterministic across thread
/// counts) and rejects non-finite values.
inline double checked_sum(const std::vector<double> &xs, const char *what) {
    double s = 0.0;
    for (double x : xs)
        s += x;
    if (!std::isfinite(s))
        throw NumericError(std::string(what) + ": non-finite accumulation (overflow)");
    return s;
}

/// One level of the group-avoiding (miss) recurrence alone. Gathers over
/// in-neighbors when `reverse_walks` is false (walks ending at v) and over
/// out-neighbors when true (walks starting at v, i.e. the same recurrence on
/// the reverse graph).
inline void miss_step_into(const Graph &g, const std::vector<double> &prev,
                           const GroupMask &group, node_t extra, double alpha,
                           bool reverse_walks, std::vector<double> &next) {
    const std::size_t n = g.num_vertices();
    next.resize(n);
    par::for_blocks(n, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t vi = lo; vi < hi; ++vi) {
            const node_t v = static_cast<node_t>(vi);
            if (group[v] || v == extra) {
                next[v] = 0.0;
                continue;
            }
            const auto nbrs = reverse_walks ? g.out_neighbors(v) : g.in_neighbors(v);
            double acc = 0.0;
            if (g.is_weighted()) {
                const auto ws = reverse_walks ? g.out_weights(v) : g.in_weights(v);
                for (std::size_t i = 0; i < nbrs.size(); ++i)
                    acc += ws[i] * prev[nbrs[i]];
            } else {
                for (node_t u : nbrs)
                    acc += prev[u];
            }
            next[v] = alpha * acc;
        }
    });
}

inline std::vector<double> initial_miss_state(const Graph &g, const GroupMask &group,
                                              node_t extra) {
    std::vector<double> state(g.num_vertices(), 0.0);
    for (node_t v = 0; v < g.num_vertices(); ++v)
        if (!group[v] && v != extra)
            state[v] = 1.0;
    return state;
}

struct SweepBuffers {
    LevelState a;
    LevelState b;
};

/// GED_{<=ell}(S u {extra}) = sum_{i=1..ell} alpha^i phi_i, computed by ell
/// applications of the recurrences. Optionally records the per-level hit
/// contributions and/or the per-level miss totals (index 0 unused).
inline double phi_partial_impl(const Graph &g, const GroupMask &group, node_t extra, int ell,
                               double alpha, SweepBuffers &buf,
                               std::vector<double> *per_level = nullptr,
                               std::vector<double> *miss_totals = nullptr) {
    buf.a = initial_level_state(g, group);
    if (extra != no_extra_vertex) {
        buf.a.hit[extra] = 1.0;
        buf.a.miss[extra] = 0.0;
    }
    if (miss_totals)
        miss_totals->assign(static_cast<std::size_t>(ell) + 1, 0.0);
    double acc = 0.0;
    for (int i = 1; i <= ell; ++i) {
        level_step_into(g, buf.a, group, extra, alpha, buf.b);
        std::swap(buf.a, buf.b);
        const double s = checked_sum(buf.a.hit, "phi_partial");
        if (per_level)
            per_level->push_back(s);
        if (miss_totals)
            (*miss_totals)[static_cast<std::size_t>(i)] =
                checked_sum(buf.a.miss, "phi_partial miss");
        acc += s;
    }
    return acc;
}

/// Scaled total-walk state: value[v] = alpha^i * (weighted count of i-walks
/// starting at v).
struct WalkSumState {
    int level = 0;
    std::vector<double> value;
};

inline WalkSumState initial_walk_sum_state(const Graph &g) {
    WalkSumState st;
    st.level = 0;
    st.value.assign(g.num_vertices(), 1.0);
    return st;
}

inline void walk_sum_step(const Graph &g, const WalkSumState &prev, double alpha,
                          WalkSumState &next) {
    const std::size_t n = g.num_vertices();
    next.level = prev.level + 1;
    next.value.resize(n);
    par::for_blocks(n, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t vi = lo; vi < hi; ++vi) {
            const node_t v = static_cast<node_t>(vi);
            const auto nbrs = g.out_neighbors(v);
            double acc = 0.0;
            if (g.is_weighted()) {
                const auto ws = g.out_weights(v);
                for (std::size_t i = 0; i < nbrs.size(); ++i)
                    acc += ws[i] * prev.value[nbrs[i]];
            } else {
                for (node_t u : nbrs)
                    acc += prev.value[u];
            }
            next.value[v] = alpha * acc;
        }
    });
}

} // namespace detail

/// Advances the hit/miss recurrences by one level for the given group.
inline LevelState level_step(const Graph &g, const LevelState &prev, const GroupMask &group,
                             double alpha) {
    LevelState next;
    detail::level_step_into(g, prev, group, detail::no_extra_vertex, alpha, next);
    return next;
}

/// Partial score GED_{<=ell}(S).
inline double phi_partial(const Graph &g, const GroupMask &group, int ell, double alpha) {
    if (ell < 0)
        throw std::invalid_argument("phi_partial: ell must be >= 0");
    detail::SweepBuffers buf;
    return detail::phi_partial_impl(g, group, detail::no_extra_vertex, ell, alpha, buf);
}

inline double phi_partial(const Graph &g, std::span<const node_t> group, int ell, double alpha) {
    return phi_partial(g, make_group_mask(g.num_vertices(), group), ell, alpha);
}

/// alpha^ell times the weighted number of ell-walks (summed over all start
/// vertices).
inline double sum_walks(const Graph &g, int ell, double alpha) {
    if (ell < 0)
        throw std::invalid_argument("sum_walks: ell must be >= 0");
    detail::WalkSumState cur = detail::initial_walk_sum_state(g);
    detail::WalkSumState next;
    for (int i = 0; i < ell; ++i) {
        detail::walk_sum_step(g, cur, alpha, next);
        std::swap(cur, next);
    }
    return detail::checked_sum(cur.value, "sum_walks");
}

enum class BoundKind { combinatorial, spectral };

/// Estimates the largest singular value of the adjacency matrix by power
/// iteration on A A^T (A * A for undirected graphs, which avoids the sign
/// oscillation of bipartite spectra) from a seeded positive vector. The
/// returned value is inflated by (1 + 10 tol) so that it over-approximates
/// sigma_max with high confidence; an under-estimate would make the spectral
/// tail bound unsound.
inline double estimate_sigma_max(const Graph &g, double tol = 1e-7, int max_iters = 1000,
                                 std::uint64_t seed = 1) {
    const std::size_t n = g.num_vertices();
    if (n == 0 || g.num_edges() == 0)
        return 0.0;
    std::mt19937_64 rng(seed);
    std::vector<double> x(n), y(n), z(n);
    double norm = 0.0;
    for (auto &xi : x) {
        xi = 1.0 + static_cast<double>(rng() >> 11) * 0x1.0p-53;
        norm += xi * xi;
    }
    norm = std::sqrt(norm);
    for (auto &xi : x)
        xi /= norm;

    auto matvec = [&](bool transpose, const std::vector<double> &in, std::vector<double> &out) {
        par::for_blocks(n, [&](std::size_t lo, std::size_t hi) {
            for (std::size_t vi = lo; vi < hi; ++vi) {
                const node_t v = static_cast<node_t>(vi);
                const auto nbrs = transpose ? g.in_neighbors(v) : g.out_neighbors(v);
                const auto ws = transpose ? g.in_weights(v) : g.out_weights(v);
                double acc = 0.0;
                if (g.is_weighted()) {
                    for (std::size_t i = 0; i < nbrs.size(); ++i)
                        acc += ws[i] * in[nbrs[i]];
                } else {
                    for (node_t u : nbrs)
                        acc += in[u];
                }
                out[v] = acc;
            }
        });
    };

    double sigma = 0.0;
    for (int iter = 0; iter < max_iters; ++iter) {
        matvec(true, x, y); // y = A^T x
        double lam = 0.0;   // x^T A A^T x = |A^T x|^2
        for (double yi : y)
            lam += yi * yi;
        const double next_sigma = std::sqrt(std::max(lam, 0.0));
        matvec(false, y, z); // z = A y
        double znorm = 0.0;
        for (double zi : z)
            znorm += zi * zi;
        znorm = std::sqrt(znorm);
        const bool converged = std::abs(next_sigma - sigma) <= tol * std::max(next_sigma, 1e-300);
        sigma = next_sigma;
        if (converged || znorm == 0.0)
            break;
        for (std::size_t i = 0; i < n; ++i)
            x[i] = z[i] / znorm;
    }
    return sigma * (1.0 + 10.0 * tol);
}

/// Parameters of a tail bound on GED_{>ell}(V): the bound kind, the decay
/// alpha, and the quantity it leans on (deg_max or an over-estimated
/// sigma_max). Valid only while decay() < 1.
struct TailBoundConfig {
    BoundKind kind = BoundKind::combinatorial;
    double alpha = 0.0;
    double sigma_hat = 0.0; // spectral only
    double deg_max = 0.0;   // combinatorial only
    std::size_t n = 0;

    static TailBoundConfig combinatorial(const Graph &g, double alpha) {
        return {BoundKind::combinatorial, alpha, 0.0, g.max_out_strength(), g.num_vertices()};
    }
    static TailBoundConfig spectral(const Graph &g, double alpha, double sigma_hat) {
        return {BoundKind::spectral, alpha, sigma_hat, 0.0, g.num_vertices()};
    }
    static TailBoundConfig spectral_estimated(const Graph &g, double alpha, double tol = 1e-7,
                                              std::uint64_t seed = 1) {
        return spectral(g, alpha, estimate_sigma_max(g, tol, 1000, seed));
    }

    double decay() const {
        return alpha * (kind == BoundKind::combinatorial ? deg_max : sigma_hat);
    }

    void validate() const {
        if (!(alpha > 0.0) || !std::isfinite(alpha))
            throw NumericError("alpha must be positive and finite");
        const double d = decay();
        if (!(d < 1.0))
            throw NumericError(
                kind == BoundKind::combinatorial
                    ? "alpha * deg_max = " + std::to_string(d) + " >= 1: series may diverge"
                    : "alpha * sigma_hat = " + std::to_string(d) + " >= 1: series may diverge");
    }
};

/// Upper bound on the series tail GED_{>ell}(S) for every S, given the
/// scaled walk sum alpha^ell * sum_x omega_ell(x) from sum_walks.
/// Combinatorial: decay/(1-decay) * scaled_sum. Spectral: the same with an
/// extra sqrt(n) factor.
inline double tail_bound(const TailBoundConfig &cfg, double scaled_walk_sum) {
    cfg.validate();
    if (scaled_walk_sum < 0.0)
        throw std::invalid_argument("tail_bound: negative walk sum");
    const double d = cfg.decay();
    const double base = d / (1.0 - d) * scaled_walk_sum;
    if (cfg.kind == BoundKind::spectral)
        return std::sqrt(static_cast<double>(cfg.n)) * base;
    return base;
}

enum class AlphaMode { combinatorial, spectral };

/// Scale-free decay choice: alpha = delta / deg_max or delta / sigma_hat,
/// so that decay() == delta (up to estimation slack in spectral mode).
inline double choose_alpha(AlphaMode mode, const Graph &g, double delta, double tol = 1e-7,
                           std::uint64_t seed = 1) {
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("choose_alpha: delta must lie in (0,1)");
    const double denom = mode == AlphaMode::combinatorial ? g.max_out_strength()
                                                          : estimate_sigma_max(g, tol, 1000, seed);
    if (!(denom > 0.0))
        throw DataError("choose_alpha: graph has no arcs");
    return delta / denom;
}

/// Result of the additive-error scorer: the exact partial sum, the tail
/// bound certifying GED(S) in [partial, partial + tail], the level reached,
/// and per-level contributions alpha^i phi_i(S) for diagnostics.
struct ScoreResult {
    double partial = 0.0;
    double tail = 0.0;
    int ell = 0;
    std::vector<double> level_contributions;
};

namespace detail {

/// Runtime cap on the number of levels, from the iteration bound
/// log(n/eps)/log(1/decay) scaled by 2.5 and a safety factor of 4. Hitting
/// it means the configured bound cannot certify the requested accuracy
/// (typically a sigma_hat inconsistency).
inline int level_cap(const TailBoundConfig &cfg, double eps) {
    const double d = cfg.decay();
    if (d <= 0.0)
        return 8;
    const double ratio = std::log(std::max(1.0, static_cast<double>(cfg.n) / eps))
                         / std::log(1.0 / d);
    return 4 * std::max(1, static_cast<int>(std::ceil(2.5 * ratio)));
}

} // namespace detail

/// Approximates GED(S) within an additive eps: accumulates exact partial
/// sums level by level and stops as soon as the configured tail bound drops
/// below eps.
inline ScoreResult ged_score(const Graph &g, const GroupMask &group, double alpha, double eps,
                             const TailBoundConfig &cfg) {
    if (!(eps > 0.0))
        throw std::invalid_argument("ged_score: eps must be positive");
    if (cfg.alpha != alpha)
        throw std::invalid_argument("ged_score: alpha does not match the bound config");
    cfg.validate();
    const int cap = detail::level_cap(cfg, eps);

    ScoreResult result;
    detail::SweepBuffers buf;
    buf.a = initial_level_state(g, group);
    detail::WalkSumState wcur = detail::initial_walk_sum_state(g);
    detail::WalkSumState wnext;
    double acc = 0.0;
    for (int i = 1;; ++i) {
        detail::level_step_into(g, buf.a, group, detail::no_extra_vertex, alpha, buf.b);
        std::swap(buf.a, buf.b);
        const double contrib = detail::checked_sum(buf.a.hit, "ged_score");
        acc += contrib;
        result.level_contributions.push_back(contrib);

        detail::walk_sum_step(g, wcur, alpha, wnext);
        std::swap(wcur, wnext);
        const double scaled_sum = detail::checked_sum(wcur.value, "ged_score walk sum");
        const double bound = tail_bound(cfg, scaled_sum);
        if (bound < eps) {
            result.partial = acc;
            result.tail = bound;
            result.ell = i;
            return result;
        }
        if (i >= cap)
            throw NumericError("ged_score: level cap " + std::to_string(cap)
                               + " exceeded; tail bound is inconsistent with eps="
                               + std::to_string(eps));
    }
}

inline ScoreResult ged_score(const Graph &g, std::span<const node_t> group, double alpha,
                             double eps, const TailBoundConfig &cfg) {
    return ged_score(g, make_group_mask(g.num_vertices(), group), alpha, eps, cfg);
}

} // namespace gedwalk
