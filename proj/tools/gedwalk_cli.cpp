// Command-line front end: load or generate a graph, then score a group,
// maximize GED-Walk, extract feature vectors, or sweep a benchmark grid,
// emitting one structured record per run.
//
// Exit codes: 0 success, 2 usage error, 3 data error, 4 numeric or
// convergence error.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "gedwalk/gedwalk.hpp"
#include "gedwalk/record.hpp"

namespace {

using namespace gedwalk;

struct CommonArgs {
    std::string input;
    std::string generate_spec;
    bool directed = false;
    bool one_indexed = false;
    bool lcc = true;
    bool normalize = false;
    std::string bound = "comb";
    std::optional<double> alpha;
    std::optional<double> delta;
    double epsilon = 0.5;
    std::uint64_t seed = 1;
    int threads = std::max(1u, std::thread::hardware_concurrency());
    std::string format = "json-lines";
    std::string out_path;
};

void add_common_options(CLI::App *cmd, CommonArgs &a) {
    auto *input = cmd->add_option("--input", a.input, "Edge-list file to load");
    auto *gen = cmd->add_option("--generate", a.generate_spec,
                                "Synthetic input: model,n,param,seed (model: er|ba)");
    input->excludes(gen);
    gen->excludes(input);
    cmd->add_flag("--directed", a.directed, "Treat the input as directed");
    cmd->add_flag("--one-indexed", a.one_indexed, "Vertex ids in the file start at 1");
    cmd->add_flag("--lcc,!--no-lcc", a.lcc,
                  "Restrict to the largest connected component (default on)");
    cmd->add_flag("--normalize", a.normalize,
                  "Reweight with the symmetric degree normalization");
    cmd->add_option("--bound", a.bound, "Tail bound: comb or spec")
        ->check(CLI::IsMember({"comb", "spec"}));
    auto *alpha = cmd->add_option("--alpha", a.alpha, "Walk decay (must keep the series finite)");
    auto *delta = cmd->add_option("--delta", a.delta,
                                  "Decay as a fraction of the convergence limit (default 0.5)");
    alpha->excludes(delta);
    delta->excludes(alpha);
    cmd->add_option("--epsilon", a.epsilon, "Additive score error (default 0.5)");
    cmd->add_option("--seed", a.seed, "Seed for sampling and spectral estimation");
    cmd->add_option("--threads", a.threads, "Worker threads");
    cmd->add_option("--format", a.format, "Output format")
        ->check(CLI::IsMember({"json-lines", "csv"}));
    cmd->add_option("--out", a.out_path, "Output file (default: standard output)");
}

GeneratorSpec parse_generator_spec(const std::string &spec) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ','))
        parts.push_back(item);
    if (parts.size() != 4)
        throw std::invalid_argument("--generate expects model,n,param,seed");
    GeneratorSpec out;
    if (parts[0] == "er" || parts[0] == "erdos-renyi")
        out.model = GeneratorModel::erdos_renyi;
    else if (parts[0] == "ba" || parts[0] == "barabasi-albert")
        out.model = GeneratorModel::barabasi_albert;
    else
        throw std::invalid_argument("unknown generator model: " + parts[0]);
    try {
        out.n = std::stoull(parts[1]);
        out.param = std::stod(parts[2]);
        out.seed = std::stoull(parts[3]);
    } catch (const std::exception &) {
        throw std::invalid_argument("malformed --generate spec: " + spec);
    }
    return out;
}

std::vector<node_t> parse_group(const std::string &s) {
    std::vector<node_t> group;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            const long long v = std::stoll(item);
            if (v < 0)
                throw std::invalid_argument("");
            group.push_back(static_cast<node_t>(v));
        } catch (const std::exception &) {
            throw std::invalid_argument("malformed --group entry: " + item);
        }
    }
    if (group.empty())
        throw std::invalid_argument("--group must name at least one vertex");
    return group;
}

struct PreparedRun {
    Graph graph;
    RunRecord base;
    double alpha = 0.0;
    TailBoundConfig cfg;
};

Graph load_input(const CommonArgs &a, std::string &source) {
    if (a.input.empty() == a.generate_spec.empty())
        throw std::invalid_argument("provide exactly one of --input or --generate");
    Graph g;
    if (!a.input.empty()) {
        source = a.input;
        g = load_edge_list(a.input, a.directed, a.one_indexed);
    } else {
        source = a.generate_spec;
        g = generate(parse_generator_spec(a.generate_spec));
        if (a.directed)
            throw std::invalid_argument("generators produce undirected graphs");
    }
    if (a.lcc)
        g = largest_connected_component(g);
    if (a.normalize)
        g = normalize_symmetric(g);
    return g;
}

PreparedRun prepare(const CommonArgs &a, const std::string &command) {
    par::set_max_threads(a.threads);
    PreparedRun run;
    std::string source;
    run.graph = load_input(a, source);

    const bool spectral = a.bound == "spec";
    double sigma_hat = 0.0;
    if (spectral)
        sigma_hat = estimate_sigma_max(run.graph, 1e-7, 1000, a.seed);
    if (a.alpha) {
        run.alpha = *a.alpha;
    } else {
        const double delta = a.delta.value_or(0.5);
        if (!(delta > 0.0 && delta < 1.0))
            throw std::invalid_argument("--delta must lie in (0,1)");
        const double denom = spectral ? sigma_hat : run.graph.max_out_strength();
        if (!(denom > 0.0))
            throw DataError("graph has no arcs; cannot derive alpha from --delta");
        run.alpha = delta / denom;
    }
    run.cfg = spectral ? TailBoundConfig::spectral(run.graph, run.alpha, sigma_hat)
                       : TailBoundConfig::combinatorial(run.graph, run.alpha);
    run.cfg.validate();

    run.base.command = command;
    run.base.source = source;
    run.base.directed = a.directed;
    run.base.one_indexed = a.one_indexed;
    run.base.lcc = a.lcc;
    run.base.normalized = a.normalize;
    run.base.n = run.graph.num_vertices();
    run.base.m = run.graph.num_edges();
    run.base.alpha = run.alpha;
    if (!a.alpha)
        run.base.delta = a.delta.value_or(0.5);
    run.base.epsilon = a.epsilon;
    run.base.bound = a.bound;
    run.base.seed = a.seed;
    run.base.threads = a.threads;
    return run;
}

void emit(const std::vector<RunRecord> &records, const CommonArgs &a) {
    std::ofstream file;
    std::ostream *os = &std::cout;
    if (!a.out_path.empty()) {
        file.open(a.out_path);
        if (!file)
            throw DataError("cannot open output file: " + a.out_path);
        os = &file;
    }
    if (a.format == "csv") {
        *os << csv_header() << '\n';
        for (const auto &r : records)
            *os << to_csv_row(r) << '\n';
    } else {
        for (const auto &r : records)
            *os << to_json(r).dump() << '\n';
    }
}

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

void fill_group_outputs(RunRecord &rec, const GroupResult &res) {
    rec.group = res.members;
    rec.score_lower = res.score_lower;
    rec.score_upper = res.score_lower + res.score_tail;
    rec.ell = res.ell;
    rec.bound_evaluations = res.bound_evaluations;
    rec.ell_doublings = res.ell_doublings;
    rec.queue_pops = res.queue_pops;
}

int run_score(const CommonArgs &a, const std::string &group_str) {
    PreparedRun run = prepare(a, "score");
    const auto group = parse_group(group_str);
    const auto t0 = std::chrono::steady_clock::now();
    const ScoreResult res = ged_score(run.graph, std::span<const node_t>(group), run.alpha,
                                      a.epsilon, run.cfg);
    RunRecord rec = run.base;
    rec.group = group;
    rec.score_lower = res.partial;
    rec.score_upper = res.partial + res.tail;
    rec.ell = res.ell;
    rec.wall_ms = elapsed_ms(t0);
    emit({rec}, a);
    return 0;
}

GroupResult run_one_maximize(const Graph &g, std::size_t k, double alpha, double eps,
                             const std::string &strategy, double eta, std::uint64_t seed,
                             const TailBoundConfig &cfg) {
    if (strategy == "stochastic")
        return maximize_stochastic(g, k, alpha, eps, eta, seed, cfg);
    return maximize_lazy(g, k, alpha, eps, cfg);
}

int run_maximize(const CommonArgs &a, std::size_t k, const std::string &strategy, double eta) {
    PreparedRun run = prepare(a, "maximize");
    const auto t0 = std::chrono::steady_clock::now();
    const GroupResult res =
        run_one_maximize(run.graph, k, run.alpha, a.epsilon, strategy, eta, a.seed, run.cfg);
    RunRecord rec = run.base;
    rec.k = k;
    rec.strategy = strategy;
    if (strategy == "stochastic") {
        rec.eta = eta;
        rec.degenerated_to_lazy = res.degenerated_to_lazy;
    }
    fill_group_outputs(rec, res);
    rec.wall_ms = elapsed_ms(t0);
    emit({rec}, a);
    return 0;
}

int run_features(const CommonArgs &a, std::size_t k, std::size_t bins) {
    PreparedRun run = prepare(a, "features");
    const auto t0 = std::chrono::steady_clock::now();
    const FeatureVector fv = ged_feature_vector(run.graph, k, bins, run.alpha, a.epsilon, run.cfg);
    RunRecord rec = run.base;
    rec.k = k;
    rec.bins = bins;
    rec.group = fv.group;
    rec.ell = fv.ell;
    rec.values = fv.values;
    rec.wall_ms = elapsed_ms(t0);
    emit({rec}, a);
    return 0;
}

int run_generate(const CommonArgs &a) {
    std::string source;
    par::set_max_threads(a.threads);
    const Graph g = load_input(a, source);
    std::ofstream file;
    std::ostream *os = &std::cout;
    if (!a.out_path.empty()) {
        file.open(a.out_path);
        if (!file)
            throw DataError("cannot open output file: " + a.out_path);
        os = &file;
    }
    write_edge_list(g, *os);
    return 0;
}

std::vector<std::string> split_list(const std::string &s) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty())
            parts.push_back(item);
    return parts;
}

int run_bench(const CommonArgs &a, const std::string &k_list, const std::string &strategy_list,
              double eta, std::size_t repeat) {
    PreparedRun run = prepare(a, "bench");
    std::vector<RunRecord> records;
    for (const std::string &kstr : split_list(k_list)) {
        const std::size_t k = std::stoull(kstr);
        for (const std::string &strategy : split_list(strategy_list)) {
            if (strategy != "lazy" && strategy != "stochastic")
                throw std::invalid_argument("unknown strategy: " + strategy);
            for (std::size_t rep = 0; rep < repeat; ++rep) {
                const std::uint64_t seed = a.seed + rep;
                const auto t0 = std::chrono::steady_clock::now();
                const GroupResult res = run_one_maximize(run.graph, k, run.alpha, a.epsilon,
                                                         strategy, eta, seed, run.cfg);
                RunRecord rec = run.base;
                rec.k = k;
                rec.strategy = strategy;
                rec.seed = seed;
                if (strategy == "stochastic") {
                    rec.eta = eta;
                    rec.degenerated_to_lazy = res.degenerated_to_lazy;
                }
                fill_group_outputs(rec, res);
                rec.wall_ms = elapsed_ms(t0);
                records.push_back(std::move(rec));
            }
        }
    }
    emit(records, a);
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"GED-Walk group centrality: scoring, maximization, and features"};
    app.require_subcommand(1);

    CommonArgs common;
    std::string group_str;
    std::size_t k = 10;
    std::size_t bins = 20;
    std::string strategy = "lazy";
    std::string k_list = "10";
    std::string strategy_list = "lazy";
    double eta = 0.1;
    std::size_t repeat = 1;

    auto *score = app.add_subcommand("score", "Score a given group with certified error");
    add_common_options(score, common);
    score->add_option("--group", group_str, "Comma-separated vertex ids (post-preprocessing)")
        ->required();

    auto *maximize = app.add_subcommand("maximize", "Find a high-scoring group of size k");
    add_common_options(maximize, common);
    maximize->add_option("--k", k, "Group size")->required();
    maximize->add_option("--strategy", strategy, "lazy or stochastic")
        ->check(CLI::IsMember({"lazy", "stochastic"}));
    maximize->add_option("--eta", eta, "Stochastic sampling failure rate (default 0.1)");

    auto *features = app.add_subcommand("features", "Group score + marginal-gain histogram");
    add_common_options(features, common);
    features->add_option("--k", k, "Group size")->required();
    features->add_option("--bins", bins, "Histogram bins (default 20)");

    auto *gen = app.add_subcommand("generate", "Write the (preprocessed) graph as an edge list");
    add_common_options(gen, common);

    auto *bench = app.add_subcommand("bench", "Run maximize over a parameter grid");
    add_common_options(bench, common);
    bench->add_option("--k", k_list, "Comma-separated group sizes");
    bench->add_option("--strategy", strategy_list, "Comma-separated strategies");
    bench->add_option("--eta", eta, "Stochastic sampling failure rate");
    bench->add_option("--repeat", repeat, "Repetitions per cell (seeds seed..seed+r-1)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (score->parsed())
            return run_score(common, group_str);
        if (maximize->parsed())
            return run_maximize(common, k, strategy, eta);
        if (features->parsed())
            return run_features(common, k, bins);
        if (gen->parsed())
            return run_generate(common);
        if (bench->parsed())
            return run_bench(common, k_list, strategy_list, eta, repeat);
    } catch (const gedwalk::NumericError &e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return 4;
    } catch (const gedwalk::DataError &e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 3;
    } catch (const std::invalid_argument &e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 2;
}
