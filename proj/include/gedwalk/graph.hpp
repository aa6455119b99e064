#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "gedwalk/errors.hpp"

namespace gedwalk {

using node_t = std::uint32_t;

/// Immutable adjacency structure. Vertex ids are contiguous in [0, n).
/// Undirected edges are stored as two arcs; arcs are kept sorted by
/// (source, target), with no self-loops and no parallel arcs. Optional
/// per-arc weights lie in (0, 1]. Safe to share across threads once built.
class Graph {
public:
    struct EdgeInput {
        node_t u;
        node_t v;
        double w = 1.0;
    };

    Graph() = default;

    /// Builds a graph from an edge list. Self-loops are dropped and duplicate
    /// edges collapse to their first occurrence (undirected duplicates match
    /// regardless of orientation). Weighted graphs require every weight in
    /// (0, 1].
    static Graph build(std::size_t n, std::vector<EdgeInput> edges, bool directed,
                       bool weighted = false) {
        for (const auto &e : edges) {
            if (e.u >= n || e.v >= n)
                throw std::invalid_argument("Graph::build: vertex id out of range");
            if (weighted && !(e.w > 0.0 && e.w <= 1.0))
                throw DataError("edge weight outside (0,1]: " + std::to_string(e.w));
        }
        // Drop loops, canonicalize undirected orientation, dedup first-wins.
        std::erase_if(edges, [](const EdgeInput &e) { return e.u == e.v; });
        if (!directed) {
            for (auto &e : edges)
                if (e.u > e.v)
                    std::swap(e.u, e.v);
        }
        std::vector<std::size_t> order(edges.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            const auto &ea = edges[a];
            const auto &eb = edges[b];
            if (ea.u != eb.u)
                return ea.u < eb.u;
            if (ea.v != eb.v)
                return ea.v < eb.v;
            return a < b;
        });
        std::vector<EdgeInput> unique;
        unique.reserve(edges.size());
        for (std::size_t idx : order) {
            const auto &e = edges[idx];
            if (!unique.empty() && unique.back().u == e.u && unique.back().v == e.v)
                continue;
            unique.push_back(e);
        }

        Graph g;
        g.n_ = n;
        g.directed_ = directed;
        g.weighted_ = weighted;
        g.m_ = unique.size();
        g.build_csr(unique);
        g.compute_degree_stats();
        return g;
    }

    std::size_t num_vertices() const { return n_; }
    std::size_t num_edges() const { return m_; }
    bool is_directed() const { return directed_; }
    bool is_weighted() const { return weighted_; }

    std::span<const node_t> out_neighbors(node_t v) const {
        return {out_targets_.data() + out_offsets_[v],
                out_targets_.data() + out_offsets_[v + 1]};
    }
    std::span<const double> out_weights(node_t v) const {
        if (!weighted_)
            return {};
        return {out_weights_.data() + out_offsets_[v],
                out_weights_.data() + out_offsets_[v + 1]};
    }
    std::span<const node_t> in_neighbors(node_t v) const {
        if (!directed_)
            return out_neighbors(v);
        return {in_targets_.data() + in_offsets_[v],
                in_targets_.data() + in_offsets_[v + 1]};
    }
    std::span<const double> in_weights(node_t v) const {
        if (!weighted_)
            return {};
        if (!directed_)
            return out_weights(v);
        return {in_weights_.data() + in_offsets_[v],
                in_weights_.data() + in_offsets_[v + 1]};
    }

    std::size_t out_degree(node_t v) const { return out_offsets_[v + 1] - out_offsets_[v]; }
    std::size_t in_degree(node_t v) const {
        return directed_ ? in_offsets_[v + 1] - in_offsets_[v] : out_degree(v);
    }

    std::size_t max_out_degree() const { return max_out_degree_; }

    /// Maximum out-degree, or maximum out-weight sum on weighted graphs.
    /// This is the deg_max that drives the combinatorial tail bound.
    double max_out_strength() const { return max_out_strength_; }

    double out_strength(node_t v) const {
        if (!weighted_)
            return static_cast<double>(out_degree(v));
        const auto w = out_weights(v);
        double s = 0.0;
        for (double x : w)
            s += x;
        return s;
    }

    bool operator==(const Graph &other) const {
        return n_ == other.n_ && m_ == other.m_ && directed_ == other.directed_
               && weighted_ == other.weighted_ && out_offsets_ == other.out_offsets_
               && out_targets_ == other.out_targets_ && out_weights_ == other.out_weights_;
    }

private:
    void build_csr(const std::vector<EdgeInput> &edges) {
        std::vector<EdgeInput> arcs;
        arcs.reserve(directed_ ? edges.size() : 2 * edges.size());
        for (const auto &e : edges) {
            arcs.push_back(e);
            if (!directed_)
                arcs.push_back({e.v, e.u, e.w});
        }
        std::sort(arcs.begin(), arcs.end(), [](const EdgeInput &a, const EdgeInput &b) {
            return a.u != b.u ? a.u < b.u : a.v < b.v;
        });
        out_offsets_.assign(n_ + 1, 0);
        for (const auto &a : arcs)
            ++out_offsets_[a.u + 1];
        for (std::size_t v = 0; v < n_; ++v)
            out_offsets_[v + 1] += out_offsets_[v];
        out_targets_.resize(arcs.size());
        if (weighted_)
            out_weights_.resize(arcs.size());
        for (std::size_t i = 0; i < arcs.size(); ++i) {
            out_targets_[i] = arcs[i].v;
            if (weighted_)
                out_weights_[i] = arcs[i].w;
        }
        if (directed_) {
            // Reverse view, sorted by (target, source).
            std::sort(arcs.begin(), arcs.end(), [](const EdgeInput &a, const EdgeInput &b) {
                return a.v != b.v ? a.v < b.v : a.u < b.u;
            });
            in_offsets_.assign(n_ + 1, 0);
            for (const auto &a : arcs)
                ++in_offsets_[a.v + 1];
            for (std::size_t v = 0; v < n_; ++v)
                in_offsets_[v + 1] += in_offsets_[v];
            in_targets_.resize(arcs.size());
            if (weighted_)
                in_weights_.resize(arcs.size());
            for (std::size_t i = 0; i < arcs.size(); ++i) {
                in_targets_[i] = arcs[i].u;
                if (weighted_)
                    in_weights_[i] = arcs[i].w;
            }
        }
    }

    void compute_degree_stats() {
        max_out_degree_ = 0;
        max_out_strength_ = 0.0;
        for (node_t v = 0; v < n_; ++v) {
            max_out_degree_ = std::max(max_out_degree_, out_degree(v));
            max_out_strength_ = std::max(max_out_strength_, out_strength(v));
        }
    }

    std::size_t n_ = 0;
    std::size_t m_ = 0;
    bool directed_ = false;
    bool weighted_ = false;
    std::vector<std::size_t> out_offsets_{0};
    std::vector<node_t> out_targets_;
    std::vector<double> out_weights_;
    std::vector<std::size_t> in_offsets_;
    std::vector<node_t> in_targets_;
    std::vector<double> in_weights_;

    std::size_t max_out_degree_ = 0;
    double max_out_strength_ = 0.0;
};

/// Arc (u,v) in g becomes (v,u); weights carry over. Undirected graphs map
/// to an equal graph.
inline Graph reverse(const Graph &g) {
    const std::size_t n = g.num_vertices();
    std::vector<Graph::EdgeInput> edges;
    edges.reserve(g.num_edges());
    for (node_t u = 0; u < n; ++u) {
        const auto nbrs = g.out_neighbors(u);
        const auto ws = g.out_weights(u);
        for (std::size_t i = 0; i < nbrs.size(); ++i) {
            if (!g.is_directed() && nbrs[i] < u)
                continue; // each undirected edge once
            edges.push_back({nbrs[i], u, g.is_weighted() ? ws[i] : 1.0});
        }
    }
    return Graph::build(n, std::move(edges), g.is_directed(), g.is_weighted());
}

/// Induced subgraph on the largest connected component of the underlying
/// undirected graph, ids remapped contiguously in ascending order. Ties
/// between equal-sized components go to the one containing the smallest id.
inline Graph largest_connected_component(const Graph &g) {
    const std::size_t n = g.num_vertices();
    if (n == 0)
        return g;
    constexpr node_t unvisited = std::numeric_limits<node_t>::max();
    std::vector<node_t> component(n, unvisited);
    std::vector<node_t> queue;
    node_t num_components = 0;
    std::size_t best_size = 0;
    node_t best_component = 0;
    for (node_t s = 0; s < n; ++s) {
        if (component[s] != unvisited)
            continue;
        const node_t c = num_components++;
        std::size_t size = 0;
        queue.clear();
        queue.push_back(s);
        component[s] = c;
        while (!queue.empty()) {
            const node_t u = queue.back();
            queue.pop_back();
            ++size;
            auto visit = [&](node_t w) {
                if (component[w] == unvisited) {
                    component[w] = c;
                    queue.push_back(w);
                }
            };
            for (node_t w : g.out_neighbors(u))
                visit(w);
            if (g.is_directed())
                for (node_t w : g.in_neighbors(u))
                    visit(w);
        }
        // Components are discovered in ascending order of their smallest id,
        // so a strict comparison implements the tie-break.
        if (size > best_size) {
            best_size = size;
            best_component = c;
        }
    }

    std::vector<node_t> remap(n, unvisited);
    node_t next = 0;
    for (node_t v = 0; v < n; ++v)
        if (component[v] == best_component)
            remap[v] = next++;
    std::vector<Graph::EdgeInput> edges;
    for (node_t u = 0; u < n; ++u) {
        if (component[u] != best_component)
            continue;
        const auto nbrs = g.out_neighbors(u);
        const auto ws = g.out_weights(u);
        for (std::size_t i = 0; i < nbrs.size(); ++i) {
            if (!g.is_directed() && nbrs[i] < u)
                continue;
            edges.push_back({remap[u], remap[nbrs[i]], g.is_weighted() ? ws[i] : 1.0});
        }
    }
    return Graph::build(next, std::move(edges), g.is_directed(), g.is_weighted());
}

/// Reweights an undirected, unweighted graph with w(u,v) = 1/sqrt(deg(u)deg(v)).
/// All resulting weights lie in (0,1]; the arc structure is unchanged.
inline Graph normalize_symmetric(const Graph &g) {
    if (g.is_directed())
        throw DataError("normalize_symmetric requires an undirected graph");
    if (g.is_weighted())
        throw DataError("normalize_symmetric requires an unweighted graph");
    const std::size_t n = g.num_vertices();
    for (node_t v = 0; v < n; ++v)
        if (g.out_degree(v) == 0)
            throw DataError("normalize_symmetric: isolated vertex " + std::to_string(v));
    std::vector<Graph::EdgeInput> edges;
    edges.reserve(g.num_edges());
    for (node_t u = 0; u < n; ++u) {
        for (node_t v : g.out_neighbors(u)) {
            if (v < u)
                continue;
            const double w = 1.0
                             / std::sqrt(static_cast<double>(g.out_degree(u))
                                         * static_cast<double>(g.out_degree(v)));
            edges.push_back({u, v, w});
        }
    }
    return Graph::build(n, std::move(edges), false, true);
}

} // namespace gedwalk
