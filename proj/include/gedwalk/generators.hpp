#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "gedwalk/graph.hpp"
#include "gedwalk/rng.hpp"

namespace gedwalk {

/// G(n,p): every unordered pair is an edge independently with probability p.
/// Pairs are visited in lexicographic order with geometric skips, so the
/// output is reproducible bit-for-bit from (n, p, seed) and construction
/// costs O(n + m) expected time.
inline Graph gen_erdos_renyi(std::size_t n, double p, std::uint64_t seed) {
    if (n < 1)
        throw std::invalid_argument("gen_erdos_renyi: n must be >= 1");
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("gen_erdos_renyi: p must lie in [0,1]");
    std::vector<Graph::EdgeInput> edges;
    if (n >= 2 && p > 0.0) {
        const std::uint64_t total = static_cast<std::uint64_t>(n) * (n - 1) / 2;
        if (p >= 1.0) {
            edges.reserve(total);
            for (node_t u = 0; u + 1 < n; ++u)
                for (node_t v = u + 1; v < n; ++v)
                    edges.push_back({u, v, 1.0});
        } else {
            std::mt19937_64 rng(seed);
            const double log_q = std::log1p(-p);
            edges.reserve(static_cast<std::size_t>(static_cast<double>(total) * p * 1.1) + 16);
            std::uint64_t idx = 0; // next candidate pair
            std::uint64_t row = 0, row_base = 0;
            while (true) {
                const double u01 = detail::unit_interval(rng);
                if (u01 <= 0.0)
                    break; // skip beyond the end
                const double skip = std::floor(std::log(u01) / log_q);
                if (skip >= static_cast<double>(total - idx))
                    break;
                idx += static_cast<std::uint64_t>(skip);
                while (idx - row_base >= n - 1 - row) {
                    row_base += n - 1 - row;
                    ++row;
                }
                const node_t u = static_cast<node_t>(row);
                const node_t v = static_cast<node_t>(row + 1 + (idx - row_base));
                edges.push_back({u, v, 1.0});
                if (++idx >= total)
                    break;
            }
        }
    }
    return Graph::build(n, std::move(edges), false);
}

/// Preferential attachment starting from a clique on attach_degree vertices;
/// each of the remaining arrivals connects to attach_degree distinct existing
/// vertices sampled proportionally to degree (without replacement). The
/// result is connected and has attach_degree*(attach_degree-1)/2 +
/// (n-attach_degree)*attach_degree edges.
inline Graph gen_barabasi_albert(std::size_t n, std::size_t attach_degree, std::uint64_t seed) {
    if (attach_degree < 1 || attach_degree >= n)
        throw std::invalid_argument("gen_barabasi_albert: need 1 <= attach_degree < n");
    std::mt19937_64 rng(seed);
    std::vector<Graph::EdgeInput> edges;
    std::vector<node_t> endpoints; // each edge contributes both endpoints
    edges.reserve(attach_degree * (attach_degree - 1) / 2 + (n - attach_degree) * attach_degree);
    endpoints.reserve(2 * edges.capacity());
    auto add_edge = [&](node_t a, node_t b) {
        edges.push_back({a, b, 1.0});
        endpoints.push_back(a);
        endpoints.push_back(b);
    };
    for (node_t u = 0; u + 1 < attach_degree; ++u)
        for (node_t v = u + 1; v < attach_degree; ++v)
            add_edge(u, v);

    std::vector<std::uint8_t> picked(n, 0);
    std::vector<node_t> targets;
    targets.reserve(attach_degree);
    for (node_t t = static_cast<node_t>(attach_degree); t < n; ++t) {
        targets.clear();
        if (t == attach_degree) {
            for (node_t v = 0; v < t; ++v)
                targets.push_back(v);
        } else {
            std::size_t tries = 0;
            const std::size_t try_cap = 1000 + 200 * attach_degree;
            while (targets.size() < attach_degree && tries < try_cap) {
                ++tries;
                node_t cand;
                if (endpoints.empty())
                    cand = static_cast<node_t>(detail::bounded(rng, t));
                else
                    cand = endpoints[detail::bounded(rng, endpoints.size())];
                if (!picked[cand]) {
                    picked[cand] = 1;
                    targets.push_back(cand);
                }
            }
            for (node_t v = 0; targets.size() < attach_degree && v < t; ++v) {
                if (!picked[v]) {
                    picked[v] = 1;
                    targets.push_back(v);
                }
            }
        }
        for (node_t v : targets) {
            add_edge(t, v);
            picked[v] = 0;
        }
    }
    return Graph::build(n, std::move(edges), false);
}

enum class GeneratorModel { erdos_renyi, barabasi_albert };

/// Parsed form of a "model,n,param,seed" request. For Erdos-Renyi the
/// parameter is the edge probability p; for Barabasi-Albert it is the
/// attachment degree.
struct GeneratorSpec {
    GeneratorModel model = GeneratorModel::erdos_renyi;
    std::size_t n = 0;
    double param = 0.0;
    std::uint64_t seed = 0;
};

inline Graph generate(const GeneratorSpec &spec) {
    switch (spec.model) {
    case GeneratorModel::erdos_renyi:
        return gen_erdos_renyi(spec.n, spec.param, spec.seed);
    case GeneratorModel::barabasi_albert: {
        const double a = spec.param;
        if (!(a >= 1.0) || a != std::floor(a) || a >= static_cast<double>(spec.n))
            throw std::invalid_argument(
                "generate: barabasi-albert parameter must be an integer in [1, n)");
        return gen_barabasi_albert(spec.n, static_cast<std::size_t>(a), spec.seed);
    }
    }
    throw std::invalid_argument("generate: unknown model");
}

} // namespace gedwalk
