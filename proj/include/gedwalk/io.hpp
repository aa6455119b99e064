#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "gedwalk/errors.hpp"
#include "gedwalk/graph.hpp"

namespace gedwalk {

namespace detail {

inline bool parse_id(std::string_view tok, std::int64_t &out) {
    const char *first = tok.data();
    const char *last = tok.data() + tok.size();
    auto res = std::from_chars(first, last, out);
    return res.ec == std::errc{} && res.ptr == last;
}

inline bool parse_weight(const std::string &tok, double &out) {
    try {
        std::size_t pos = 0;
        out = std::stod(tok, &pos);
        return pos == tok.size();
    } catch (const std::exception &) {
        return false;
    }
}

} // namespace detail

/// Reads a whitespace-separated edge list: one "u v" or "u v w" per line,
/// '#' and '%' starting comment lines. Ids are remapped to 0..n-1 in order
/// of first appearance; duplicate edges collapse and self-loops are dropped.
/// Every line must have the same arity. With one_indexed, ids must be >= 1.
inline Graph load_edge_list(const std::string &path, bool directed, bool one_indexed = false) {
    std::ifstream in(path);
    if (!in)
        throw DataError("cannot open edge list: " + path);

    std::unordered_map<std::int64_t, node_t> id_map;
    std::vector<Graph::EdgeInput> edges;
    bool weighted = false;
    bool first_data_line = true;
    std::string line;
    std::size_t lineno = 0;

    auto intern = [&](std::int64_t raw) -> node_t {
        auto [it, inserted] = id_map.try_emplace(raw, static_cast<node_t>(id_map.size()));
        return it->second;
    };

    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        std::size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos)
            continue;
        if (line[start] == '#' || line[start] == '%')
            continue;
        std::istringstream ls(line);
        std::string tu, tv, tw, extra;
        ls >> tu >> tv;
        const bool has_w = static_cast<bool>(ls >> tw);
        if (ls >> extra)
            throw DataError(path + ":" + std::to_string(lineno) + ": too many columns");
        std::int64_t ru = 0, rv = 0;
        if (tu.empty() || tv.empty() || !detail::parse_id(tu, ru) || !detail::parse_id(tv, rv))
            throw DataError(path + ":" + std::to_string(lineno) + ": malformed vertex token");
        const std::int64_t lo = one_indexed ? 1 : 0;
        if (ru < lo || rv < lo)
            throw DataError(path + ":" + std::to_string(lineno) + ": vertex id below "
                            + std::to_string(lo));
        if (first_data_line) {
            weighted = has_w;
            first_data_line = false;
        } else if (has_w != weighted) {
            throw DataError(path + ":" + std::to_string(lineno)
                            + ": inconsistent number of columns");
        }
        double w = 1.0;
        if (has_w) {
            if (!detail::parse_weight(tw, w))
                throw DataError(path + ":" + std::to_string(lineno) + ": malformed weight");
            if (!(w > 0.0 && w <= 1.0))
                throw DataError(path + ":" + std::to_string(lineno)
                                + ": weight outside (0,1]: " + tw);
        }
        edges.push_back({intern(ru), intern(rv), w});
    }
    return Graph::build(id_map.size(), std::move(edges), directed, weighted);
}

/// Writes the graph back in the load_edge_list format, one line per stored
/// edge (undirected edges once, with u <= v). Weights round-trip exactly.
inline void write_edge_list(const Graph &g, std::ostream &out) {
    out.precision(17);
    for (node_t u = 0; u < g.num_vertices(); ++u) {
        const auto nbrs = g.out_neighbors(u);
        const auto ws = g.out_weights(u);
        for (std::size_t i = 0; i < nbrs.size(); ++i) {
            if (!g.is_directed() && nbrs[i] < u)
                continue;
            out << u << ' ' << nbrs[i];
            if (g.is_weighted())
                out << ' ' << ws[i];
            out << '\n';
        }
    }
}

} // namespace gedwalk
