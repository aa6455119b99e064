#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "gedwalk/graph.hpp"
#include "gedwalk/maximizer.hpp"
#include "gedwalk/parallel.hpp"
#include "gedwalk/walk_engine.hpp"

namespace gedwalk {

/// Graph-level feature vector of length bins + 1: the score of the selected
/// group followed by a histogram of the remaining vertices' marginal gains.
struct FeatureVector {
    std::vector<double> values;
    std::vector<node_t> group;
    int ell = 1;
};

/// Maximizes a size-k group, then summarizes the partial marginal gains of
/// every non-member (at the maximizer's final level) in an equal-width
/// histogram over [0, max gain]; a vertex sitting exactly at the maximum
/// lands in the last bin. If every gain is equal the whole mass goes to the
/// last bin, except that an all-zero profile fills the first bin.
inline FeatureVector ged_feature_vector(const Graph &g, std::size_t k, std::size_t bins,
                                        double alpha, double eps, const TailBoundConfig &cfg,
                                        const MaximizeOptions &opts = {}) {
    const std::size_t n = g.num_vertices();
    if (k >= n)
        throw std::invalid_argument("ged_feature_vector: need k < n");
    if (bins < 1)
        throw std::invalid_argument("ged_feature_vector: need at least one bin");

    const GroupResult picked = maximize_lazy(g, k, alpha, eps, cfg, opts);
    const GroupMask mask = make_group_mask(n, picked.members);

    std::vector<node_t> rest;
    rest.reserve(n - k);
    for (node_t v = 0; v < n; ++v)
        if (!mask[v])
            rest.push_back(v);

    std::vector<double> gains(rest.size());
    par::for_blocks(
        rest.size(),
        [&](std::size_t lo, std::size_t hi) {
            detail::SweepBuffers buf;
            for (std::size_t i = lo; i < hi; ++i) {
                const double with_x =
                    detail::phi_partial_impl(g, mask, rest[i], picked.ell, alpha, buf);
                gains[i] = std::max(0.0, with_x - picked.score_lower);
            }
        },
        1);

    FeatureVector fv;
    fv.group = picked.members;
    fv.ell = picked.ell;
    fv.values.assign(bins + 1, 0.0);
    fv.values[0] = picked.score_lower;
    const double max_gain = gains.empty() ? 0.0 : *std::max_element(gains.begin(), gains.end());
    for (double gain : gains) {
        std::size_t bin;
        if (max_gain <= 0.0)
            bin = 0;
        else
            bin = std::min(bins - 1,
                           static_cast<std::size_t>(std::floor(gain / max_gain
                                                               * static_cast<double>(bins))));
        fv.values[1 + bin] += 1.0;
    }
    return fv;
}

} // namespace gedwalk
