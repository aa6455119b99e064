#pragma once

#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gedwalk/graph.hpp"

namespace gedwalk {

/// One structured result line, as emitted by the command-line tool. Every
/// parameter that influenced the run is recorded; serialization to JSON is
/// lossless (numbers round-trip bit-exactly).
struct RunRecord {
    std::string command; // score | maximize | features | generate | bench
    // input descriptor
    std::string source; // file path or "model,n,param,seed"
    bool directed = false;
    bool one_indexed = false;
    bool lcc = true;
    bool normalized = false;
    std::size_t n = 0;
    std::size_t m = 0;
    // parameters
    std::optional<std::size_t> k;
    std::optional<std::size_t> bins;
    double alpha = 0.0;
    std::optional<double> delta;
    double epsilon = 0.5;
    std::optional<double> eta;
    std::string bound = "comb"; // comb | spec
    std::optional<std::string> strategy;
    std::optional<std::uint64_t> seed;
    int threads = 1;
    // outputs
    std::optional<std::vector<node_t>> group;
    std::optional<double> score_lower;
    std::optional<double> score_upper;
    std::optional<int> ell;
    std::optional<std::uint64_t> bound_evaluations;
    std::optional<std::uint64_t> ell_doublings;
    std::optional<std::uint64_t> queue_pops;
    std::optional<bool> degenerated_to_lazy;
    std::optional<std::vector<double>> values; // feature vector
    double wall_ms = 0.0;

    bool operator==(const RunRecord &) const = default;
};

namespace detail {

template <typename T>
void put_opt(nlohmann::ordered_json &j, const char *key, const std::optional<T> &v) {
    if (v)
        j[key] = *v;
}

template <typename T>
void get_opt(const nlohmann::ordered_json &j, const char *key, std::optional<T> &v) {
    if (auto it = j.find(key); it != j.end())
        v = it->get<T>();
    else
        v.reset();
}

} // namespace detail

inline nlohmann::ordered_json to_json(const RunRecord &r) {
    nlohmann::ordered_json j;
    j["command"] = r.command;
    j["source"] = r.source;
    j["directed"] = r.directed;
    j["one_indexed"] = r.one_indexed;
    j["lcc"] = r.lcc;
    j["normalized"] = r.normalized;
    j["n"] = r.n;
    j["m"] = r.m;
    detail::put_opt(j, "k", r.k);
    detail::put_opt(j, "bins", r.bins);
    j["alpha"] = r.alpha;
    detail::put_opt(j, "delta", r.delta);
    j["epsilon"] = r.epsilon;
    detail::put_opt(j, "eta", r.eta);
    j["bound"] = r.bound;
    detail::put_opt(j, "strategy", r.strategy);
    detail::put_opt(j, "seed", r.seed);
    j["threads"] = r.threads;
    detail::put_opt(j, "group", r.group);
    detail::put_opt(j, "score_lower", r.score_lower);
    detail::put_opt(j, "score_upper", r.score_upper);
    detail::put_opt(j, "ell", r.ell);
    detail::put_opt(j, "bound_evaluations", r.bound_evaluations);
    detail::put_opt(j, "ell_doublings", r.ell_doublings);
    detail::put_opt(j, "queue_pops", r.queue_pops);
    detail::put_opt(j, "degenerated_to_lazy", r.degenerated_to_lazy);
    detail::put_opt(j, "values", r.values);
    j["wall_ms"] = r.wall_ms;
    return j;
}

inline RunRecord record_from_json(const nlohmann::ordered_json &j) {
    RunRecord r;
    r.command = j.at("command").get<std::string>();
    r.source = j.at("source").get<std::string>();
    r.directed = j.at("directed").get<bool>();
    r.one_indexed = j.at("one_indexed").get<bool>();
    r.lcc = j.at("lcc").get<bool>();
    r.normalized = j.at("normalized").get<bool>();
    r.n = j.at("n").get<std::size_t>();
    r.m = j.at("m").get<std::size_t>();
    detail::get_opt(j, "k", r.k);
    detail::get_opt(j, "bins", r.bins);
    r.alpha = j.at("alpha").get<double>();
    detail::get_opt(j, "delta", r.delta);
    r.epsilon = j.at("epsilon").get<double>();
    detail::get_opt(j, "eta", r.eta);
    r.bound = j.at("bound").get<std::string>();
    detail::get_opt(j, "strategy", r.strategy);
    detail::get_opt(j, "seed", r.seed);
    r.threads = j.at("threads").get<int>();
    detail::get_opt(j, "group", r.group);
    detail::get_opt(j, "score_lower", r.score_lower);
    detail::get_opt(j, "score_upper", r.score_upper);
    detail::get_opt(j, "ell", r.ell);
    detail::get_opt(j, "bound_evaluations", r.bound_evaluations);
    detail::get_opt(j, "ell_doublings", r.ell_doublings);
    detail::get_opt(j, "queue_pops", r.queue_pops);
    detail::get_opt(j, "degenerated_to_lazy", r.degenerated_to_lazy);
    detail::get_opt(j, "values", r.values);
    r.wall_ms = j.at("wall_ms").get<double>();
    return r;
}

namespace detail {

inline std::string csv_escape(const std::string &s) {
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    out += '"';
    return out;
}

template <typename T> std::string csv_num(const T &v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

template <typename T> std::string csv_join(const std::vector<T> &xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i)
            out += ';';
        out += csv_num(xs[i]);
    }
    return out;
}

} // namespace detail

inline std::string csv_header() {
    return "command,source,directed,one_indexed,lcc,normalized,n,m,k,bins,alpha,delta,epsilon,"
           "eta,bound,strategy,seed,threads,group,score_lower,score_upper,ell,"
           "bound_evaluations,ell_doublings,queue_pops,degenerated_to_lazy,values,wall_ms";
}

inline std::string to_csv_row(const RunRecord &r) {
    using detail::csv_escape;
    using detail::csv_join;
    using detail::csv_num;
    auto opt_num = [](const auto &o) { return o ? csv_num(*o) : std::string{}; };
    std::string row;
    row += csv_escape(r.command);
    row += ',' + csv_escape(r.source);
    row += ',' + std::string(r.directed ? "1" : "0");
    row += ',' + std::string(r.one_indexed ? "1" : "0");
    row += ',' + std::string(r.lcc ? "1" : "0");
    row += ',' + std::string(r.normalized ? "1" : "0");
    row += ',' + csv_num(r.n);
    row += ',' + csv_num(r.m);
    row += ',' + opt_num(r.k);
    row += ',' + opt_num(r.bins);
    row += ',' + csv_num(r.alpha);
    row += ',' + opt_num(r.delta);
    row += ',' + csv_num(r.epsilon);
    row += ',' + opt_num(r.eta);
    row += ',' + csv_escape(r.bound);
    row += ',' + (r.strategy ? csv_escape(*r.strategy) : std::string{});
    row += ',' + opt_num(r.seed);
    row += ',' + csv_num(r.threads);
    row += ',' + (r.group ? csv_join(*r.group) : std::string{});
    row += ',' + opt_num(r.score_lower);
    row += ',' + opt_num(r.score_upper);
    row += ',' + opt_num(r.ell);
    row += ',' + opt_num(r.bound_evaluations);
    row += ',' + opt_num(r.ell_doublings);
    row += ',' + opt_num(r.queue_pops);
    row += ',';
    if (r.degenerated_to_lazy)
        row += *r.degenerated_to_lazy ? "1" : "0";
    row += ',' + (r.values ? csv_join(*r.values) : std::string{});
    row += ',' + csv_num(r.wall_ms);
    return row;
}

} // namespace gedwalk
