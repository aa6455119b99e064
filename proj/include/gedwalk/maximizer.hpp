#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <queue>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "gedwalk/errors.hpp"
#include "gedwalk/graph.hpp"
#include "gedwalk/parallel.hpp"
#include "gedwalk/rng.hpp"
#include "gedwalk/walk_engine.hpp"

namespace gedwalk {

/// Output of a greedy maximization run. The true score is certified to lie
/// in [score_lower, score_lower + score_tail]; score_lower is the exact
/// partial GED_{<=ell}(S) at the final level.
struct GroupResult {
    std::vector<node_t> members;    // in pick order
    std::vector<double> pick_gains; // exact partial marginal gain at selection
    int ell = 1;
    double score_lower = 0.0;
    double score_tail = 0.0;
    std::uint64_t bound_evaluations = 0;
    std::uint64_t ell_doublings = 0;
    std::uint64_t queue_pops = 0;
    /// Stochastic only: every pick's sample was capped at the full candidate
    /// set, so the run reproduced the lazy algorithm exactly.
    bool degenerated_to_lazy = false;
    std::size_t sample_size = 0; // stochastic only
};

/// Per-vertex marginal-gain bounds driving the lazy queues. Stored values
/// never under-estimate the current true L_ell/U_ell: they are exact for
/// vertices seen at the current epoch and stale over-estimates otherwise.
struct GainBounds {
    std::vector<double> lower;
    std::vector<double> upper;
    std::vector<std::uint64_t> seen; // epoch of the last exact evaluation
    int ell = 1;
};

struct MaximizeOptions {
    /// Refresh every queued candidate instead of only the queue top. Same
    /// output, different counters.
    bool eager = false;
    /// Stale entries refreshed per queue inspection. Fixed (never derived
    /// from the worker count) so that counters are thread-count independent.
    std::size_t refresh_batch = 16;
};

/// Exact partial marginal gain GED_{<=ell}(S + {x}) - GED_{<=ell}(S).
inline double marginal_partial(const Graph &g, const GroupMask &group, node_t x, int ell,
                               double alpha) {
    if (x >= g.num_vertices())
        throw std::invalid_argument("marginal_partial: vertex out of range");
    if (group[x])
        throw std::invalid_argument("marginal_partial: x already belongs to the group");
    detail::SweepBuffers buf;
    const double with_x = detail::phi_partial_impl(g, group, x, ell, alpha, buf);
    const double without = detail::phi_partial_impl(g, group, detail::no_extra_vertex, ell,
                                                    alpha, buf);
    return with_x - without;
}

inline double marginal_partial(const Graph &g, std::span<const node_t> group, node_t x, int ell,
                               double alpha) {
    return marginal_partial(g, make_group_mask(g.num_vertices(), group), x, ell, alpha);
}

/// Initialization values for the lazy queues: for every x not in S, the sum
/// over i <= ell of alpha^i P_i(S,x), where P_i convolves the group-avoiding
/// walk counts ending at x with those starting at x. P_i over-counts walks
/// that cross x several times, so the result upper-bounds the exact partial
/// marginal gain; adding the tail bound B_ell(V) gives a valid upper-bound
/// seed. One forward and one reverse sweep, O(ell*(n+m)) for all x at once.
inline std::vector<double> init_gain_bounds(const Graph &g, const GroupMask &group, int ell,
                                            double alpha) {
    if (ell < 1)
        throw std::invalid_argument("init_gain_bounds: ell must be >= 1");
    const std::size_t n = g.num_vertices();
    constexpr node_t none = detail::no_extra_vertex;

    // Forward alpha-scaled miss levels: fwd[i][v] = alpha^i * (i-walks ending
    // at v that avoid S).
    std::vector<std::vector<double>> fwd(static_cast<std::size_t>(ell) + 1);
    fwd[0] = detail::initial_miss_state(g, group, none);
    for (int i = 1; i <= ell; ++i)
        detail::miss_step_into(g, fwd[static_cast<std::size_t>(i - 1)], group, none, alpha,
                               false, fwd[static_cast<std::size_t>(i)]);

    // suffix[v] starts as sum_{a<=ell} fwd[a][v] and loses one level per
    // reverse step, so at step j it holds sum_{a<=ell-j}.
    std::vector<double> suffix(n, 0.0);
    for (const auto &level : fwd)
        for (std::size_t v = 0; v < n; ++v)
            suffix[v] += level[v];

    std::vector<double> rev = fwd[0]; // psi-miss level 0
    std::vector<double> rev_next(n, 0.0);
    std::vector<double> total(n, 0.0);
    for (int j = 0; j <= ell; ++j) {
        if (j > 0) {
            detail::miss_step_into(g, rev, group, none, alpha, true, rev_next);
            std::swap(rev, rev_next);
            const auto &drop = fwd[static_cast<std::size_t>(ell - j + 1)];
            for (std::size_t v = 0; v < n; ++v)
                suffix[v] -= drop[v];
        }
        for (std::size_t v = 0; v < n; ++v)
            total[v] += rev[v] * suffix[v];
    }
    // Remove the (i=0, j=0) term, which corresponds to the empty walk.
    for (node_t v = 0; v < n; ++v)
        if (!group[v])
            total[v] -= 1.0;
    return total;
}

inline std::vector<double> init_gain_bounds(const Graph &g, std::span<const node_t> group,
                                            int ell, double alpha) {
    return init_gain_bounds(g, make_group_mask(g.num_vertices(), group), ell, alpha);
}

namespace detail {

struct HeapEntry {
    double prio;
    node_t id;
    std::uint32_t version;
};

struct HeapLess {
    bool operator()(const HeapEntry &a, const HeapEntry &b) const {
        if (a.prio != b.prio)
            return a.prio < b.prio;
        return a.id > b.id; // smaller id wins ties
    }
};

using LazyHeap = std::priority_queue<HeapEntry, std::vector<HeapEntry>, HeapLess>;

/// Shared machinery of the lazy and stochastic greedy strategies: two lazy
/// priority queues over the marginal-gain bounds, epsilon/k-separation of
/// the lower-bound maximizer against the upper-bound runner-up, and
/// geometric level doubling with Lemma-style re-initialization.
class GreedyEngine {
public:
    GreedyEngine(const Graph &g, std::size_t k, double alpha, double eps,
                 const TailBoundConfig &cfg, const MaximizeOptions &opts)
        : g_(g), k_(k), alpha_(alpha), eps_(eps), cfg_(cfg), opts_(opts) {
        const std::size_t n = g.num_vertices();
        s_mask_.assign(n, 0);
        gb_.lower.assign(n, 0.0);
        gb_.upper.assign(n, 0.0);
        gb_.seen.assign(n, 0);
        gb_.ell = 1;
        version_.assign(n, 0);
        active_.assign(n, 0);
        wstate_ = initial_walk_sum_state(g);
        advance_walk_sums(1);
        partial_s_ =
            phi_partial_impl(g_, s_mask_, no_extra_vertex, gb_.ell, alpha_, shared_buf_,
                             nullptr, &miss_sums_s_);
    }

    const std::vector<node_t> &members() const { return members_; }
    int ell() const { return gb_.ell; }

    void set_candidates(std::vector<node_t> candidates) {
        candidates_ = std::move(candidates);
        rebuild_queues();
    }

    /// Runs separation attempts, doubling ell as needed, until one vertex is
    /// accepted into the group.
    void run_pick() {
        while (true) {
            const node_t u = lazy_update(ql_);
            if (u == no_extra_vertex)
                throw std::invalid_argument("maximize: no candidates left");
            active_[u] = 0; // removed from both queues
            const node_t v = lazy_update(qu_);
            const bool separated =
                v == no_extra_vertex || gb_.lower[u] > gb_.upper[v] - eps_ / static_cast<double>(k_);
            if (separated) {
                accept(u);
                return;
            }
            // u goes back into the pool; the rebuild after doubling re-seeds
            // it together with every other candidate.
            double_ell();
        }
    }

    GroupResult finish() {
        GroupResult r;
        r.members = members_;
        r.pick_gains = pick_gains_;
        r.ell = gb_.ell;
        r.score_lower = partial_s_;
        r.score_tail = bound_;
        r.bound_evaluations = bound_evaluations_;
        r.ell_doublings = ell_doublings_;
        r.queue_pops = queue_pops_;
        return r;
    }

private:
    bool in_group(node_t x) const { return s_mask_[x] != 0; }

    bool entry_valid(const HeapEntry &e) const {
        return active_[e.id] && e.version == version_[e.id];
    }

    void requeue(node_t x) {
        ++version_[x];
        ql_.push({gb_.lower[x], x, version_[x]});
        qu_.push({gb_.upper[x], x, version_[x]});
    }

    void advance_walk_sums(int target_level) {
        while (wstate_.level < target_level) {
            walk_sum_step(g_, wstate_, alpha_, wnext_);
            std::swap(wstate_, wnext_);
        }
        scaled_sum_ = checked_sum(wstate_.value, "maximize walk sum");
        bound_ = tail_bound(cfg_, scaled_sum_);
    }

    void rebuild_queues() {
        ql_ = LazyHeap();
        qu_ = LazyHeap();
        std::fill(active_.begin(), active_.end(), std::uint8_t{0});
        const auto seeds = init_gain_bounds(g_, s_mask_, gb_.ell, alpha_);
        for (node_t x : candidates_) {
            if (in_group(x))
                continue;
            active_[x] = 1;
            gb_.lower[x] = seeds[x];
            gb_.upper[x] = seeds[x] + bound_;
            gb_.seen[x] = 0; // seeded, not exact
            requeue(x);
        }
    }

    void double_ell() {
        gb_.ell *= 2;
        ++ell_doublings_;
        ++epoch_;
        advance_walk_sums(gb_.ell);
        partial_s_ = phi_partial_impl(g_, s_mask_, no_extra_vertex, gb_.ell, alpha_, shared_buf_,
                                      nullptr, &miss_sums_s_);
        rebuild_queues();
    }

    void accept(node_t u) {
        members_.push_back(u);
        pick_gains_.push_back(gb_.lower[u]);
        partial_s_ += gb_.lower[u];
        s_mask_[u] = 1;
        active_[u] = 0;
        ++epoch_; // exact values of other candidates refer to the old group
        refresh_miss_sums();
    }

    /// Re-derives the per-level totals of group-avoiding walks for the
    /// current (S, ell); candidate evaluations subtract against these.
    void refresh_miss_sums() {
        miss_sums_s_.assign(static_cast<std::size_t>(gb_.ell) + 1, 0.0);
        std::vector<double> cur = initial_miss_state(g_, s_mask_, no_extra_vertex);
        std::vector<double> next;
        for (int i = 1; i <= gb_.ell; ++i) {
            miss_step_into(g_, cur, s_mask_, no_extra_vertex, alpha_, false, next);
            std::swap(cur, next);
            miss_sums_s_[static_cast<std::size_t>(i)] = checked_sum(cur, "maximize miss sum");
        }
    }

    /// Exact L_ell(S, x) for every batch member. The walks gained by adding
    /// x are exactly the S-avoiding walks that the extra exclusion removes,
    /// so one miss-channel sweep against the cached totals suffices:
    /// L = sum_i (missTotal_i(S) - missTotal_i(S + {x})).
    void evaluate_batch(const std::vector<node_t> &batch) {
        par::for_blocks(
            batch.size(),
            [&](std::size_t lo, std::size_t hi) {
                std::vector<double> cur, next;
                for (std::size_t i = lo; i < hi; ++i) {
                    const node_t x = batch[i];
                    cur = initial_miss_state(g_, s_mask_, x);
                    double gain = 0.0;
                    for (int level = 1; level <= gb_.ell; ++level) {
                        miss_step_into(g_, cur, s_mask_, x, alpha_, false, next);
                        std::swap(cur, next);
                        gain += miss_sums_s_[static_cast<std::size_t>(level)]
                                - checked_sum(cur, "maximize gain");
                    }
                    gb_.lower[x] = gain;
                    gb_.upper[x] = gain + bound_;
                }
            },
            1);
        for (node_t x : batch) {
            gb_.seen[x] = epoch_;
            requeue(x);
        }
        bound_evaluations_ += batch.size();
    }

    /// Refreshes queue tops until the maximum is exact at the current epoch,
    /// then returns it (its entry stays queued). Stale candidates are
    /// refreshed in deterministic fixed-size batches; evaluating more
    /// vertices than strictly necessary never changes the returned argmax,
    /// only the evaluation counters.
    node_t lazy_update(LazyHeap &q) {
        std::vector<node_t> batch;
        std::vector<HeapEntry> fresh_popped;
        while (true) {
            while (!q.empty() && !entry_valid(q.top()))
                q.pop();
            if (q.empty())
                return no_extra_vertex;
            if (gb_.seen[q.top().id] == epoch_)
                return q.top().id;

            batch.clear();
            fresh_popped.clear();
            const std::size_t limit = opts_.eager ? candidates_.size() : opts_.refresh_batch;
            while (batch.size() < limit && !q.empty()) {
                if (!entry_valid(q.top())) {
                    q.pop();
                    continue;
                }
                const HeapEntry e = q.top();
                q.pop();
                ++queue_pops_;
                if (gb_.seen[e.id] == epoch_) {
                    fresh_popped.push_back(e);
                    if (!opts_.eager)
                        break; // everything below has a smaller priority
                    continue;
                }
                batch.push_back(e.id);
            }
            evaluate_batch(batch);
            for (const HeapEntry &e : fresh_popped)
                q.push(e);
        }
    }

    const Graph &g_;
    std::size_t k_;
    double alpha_;
    double eps_;
    TailBoundConfig cfg_;
    MaximizeOptions opts_;

    GroupMask s_mask_;
    std::vector<node_t> members_;
    std::vector<double> pick_gains_;
    std::vector<node_t> candidates_;
    GainBounds gb_;
    std::vector<std::uint32_t> version_;
    std::vector<std::uint8_t> active_;
    LazyHeap ql_;
    LazyHeap qu_;

    double partial_s_ = 0.0; // GED_{<=ell}(S)
    double scaled_sum_ = 0.0;
    double bound_ = 0.0;               // B_ell(V)
    std::vector<double> miss_sums_s_;  // per-level totals of S-avoiding walks
    WalkSumState wstate_;
    WalkSumState wnext_;
    SweepBuffers shared_buf_;

    std::uint64_t epoch_ = 1;
    std::uint64_t bound_evaluations_ = 0;
    std::uint64_t ell_doublings_ = 0;
    std::uint64_t queue_pops_ = 0;
};

inline void validate_maximize_args(const Graph &g, std::size_t k, double alpha, double eps,
                                   const TailBoundConfig &cfg) {
    if (k < 1 || k > g.num_vertices())
        throw std::invalid_argument("maximize: need 1 <= k <= n");
    if (!(eps > 0.0))
        throw std::invalid_argument("maximize: eps must be positive");
    if (cfg.alpha != alpha)
        throw std::invalid_argument("maximize: alpha does not match the bound config");
    cfg.validate();
}

} // namespace detail

/// Lazy-greedy maximization: repeatedly accepts the vertex whose exact
/// partial marginal gain is (eps/k)-separated from every rival's upper
/// bound, doubling the walk length whenever separation fails. Returns a
/// group of size k with GED(S) >= (1 - 1/e) * OPT - eps. Deterministic,
/// including across worker counts; ties go to the smaller vertex id.
inline GroupResult maximize_lazy(const Graph &g, std::size_t k, double alpha, double eps,
                                 const TailBoundConfig &cfg, const MaximizeOptions &opts = {}) {
    detail::validate_maximize_args(g, k, alpha, eps, cfg);
    detail::GreedyEngine engine(g, k, alpha, eps, cfg, opts);
    std::vector<node_t> all(g.num_vertices());
    std::iota(all.begin(), all.end(), node_t{0});
    engine.set_candidates(std::move(all));
    while (engine.members().size() < k)
        engine.run_pick();
    return engine.finish();
}

/// Stochastic greedy: each pick draws ceil((n/k) ln(1/eta)) candidates
/// uniformly without replacement from the non-members and runs the lazy
/// separation machinery on that sample only; the sample persists across
/// level doublings within the pick. Expected score (1 - 1/e - eta) * OPT -
/// eps. When the sample covers all remaining vertices the run degrades to
/// the lazy algorithm and produces its exact output.
inline GroupResult maximize_stochastic(const Graph &g, std::size_t k, double alpha, double eps,
                                       double eta, std::uint64_t seed,
                                       const TailBoundConfig &cfg,
                                       const MaximizeOptions &opts = {}) {
    detail::validate_maximize_args(g, k, alpha, eps, cfg);
    if (!(eta > 0.0 && eta < 1.0))
        throw std::invalid_argument("maximize_stochastic: eta must lie in (0,1)");
    const std::size_t n = g.num_vertices();
    const std::size_t sample_target = static_cast<std::size_t>(std::ceil(
        static_cast<double>(n) / static_cast<double>(k) * std::log(1.0 / eta)));

    detail::GreedyEngine engine(g, k, alpha, eps, cfg, opts);
    std::mt19937_64 rng(seed);
    bool all_picks_capped = true;
    std::vector<node_t> remaining;
    while (engine.members().size() < k) {
        remaining.clear();
        GroupMask picked = make_group_mask(n, engine.members());
        for (node_t v = 0; v < n; ++v)
            if (!picked[v])
                remaining.push_back(v);
        const std::size_t s = std::min(sample_target, remaining.size());
        if (s != remaining.size())
            all_picks_capped = false;
        for (std::size_t i = 0; i < s; ++i) {
            const std::size_t j =
                i + static_cast<std::size_t>(detail::bounded(rng, remaining.size() - i));
            std::swap(remaining[i], remaining[j]);
        }
        std::vector<node_t> sample(remaining.begin(), remaining.begin() + static_cast<long>(s));
        std::sort(sample.begin(), sample.end());
        engine.set_candidates(std::move(sample));
        engine.run_pick();
    }
    GroupResult r = engine.finish();
    r.degenerated_to_lazy = all_picks_capped;
    r.sample_size = std::min(sample_target, n);
    return r;
}

/// Greedy edge-coverage baseline: k rounds, each picking the vertex incident
/// to the most not-yet-covered edges (smaller id on ties). This is the group
/// that GED-Walk maximization converges to as alpha tends to zero.
inline std::vector<node_t> group_degree_greedy(const Graph &g, std::size_t k) {
    const std::size_t n = g.num_vertices();
    if (k > n)
        throw std::invalid_argument("group_degree_greedy: k exceeds vertex count");
    std::vector<std::pair<node_t, node_t>> edges;
    std::vector<std::vector<std::uint32_t>> incident(n);
    for (node_t u = 0; u < n; ++u) {
        for (node_t v : g.out_neighbors(u)) {
            if (!g.is_directed() && v < u)
                continue;
            const auto idx = static_cast<std::uint32_t>(edges.size());
            edges.emplace_back(u, v);
            incident[u].push_back(idx);
            incident[v].push_back(idx);
        }
    }
    std::vector<std::size_t> gain(n);
    for (node_t v = 0; v < n; ++v)
        gain[v] = incident[v].size();
    std::vector<std::uint8_t> covered(edges.size(), 0);
    std::vector<std::uint8_t> picked(n, 0);
    std::vector<node_t> result;
    result.reserve(k);
    for (std::size_t round = 0; round < k; ++round) {
        node_t best = 0;
        bool found = false;
        for (node_t v = 0; v < n; ++v) {
            if (picked[v])
                continue;
            if (!found || gain[v] > gain[best]) {
                best = v;
                found = true;
            }
        }
        picked[best] = 1;
        result.push_back(best);
        for (std::uint32_t e : incident[best]) {
            if (covered[e])
                continue;
            covered[e] = 1;
            const auto [a, b] = edges[e];
            --gain[a];
            --gain[b];
        }
    }
    return result;
}

} // namespace gedwalk
