// Command-line front end: simulate | compare | adversary | verify | gen.
// Exit codes: 0 success, 1 runtime failure or bound violation, 2 usage error.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bmatch/bmatch.hpp"

namespace {

using nlohmann::json;

void write_output(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text << "\n";
    } else {
        std::ofstream out(out_path);
        if (!out)
            throw bmatch::ConfigError("cannot write `" + out_path + "`");
        out << text << "\n";
    }
}

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ','))
        if (!item.empty())
            out.push_back(item);
    return out;
}

// ---- simulate --------------------------------------------------------------

struct SimulateArgs {
    bmatch::SimConfig cfg;
    std::string alg_name, trace_path, trace_inline, config_path;
    std::size_t trace_offset = 0, trace_limit = 0;
    std::string out_path, series_path, dump_matching_path;
    bool human = false;
    CLI::App* cmd = nullptr;
};

void add_simulate(CLI::App& app, SimulateArgs& a) {
    a.cmd = app.add_subcommand("simulate", "run one scenario and report its cost ledger");
    a.cmd->add_option("--config", a.config_path, "JSON config file (flags override it)");
    a.cmd->add_option("--topology", a.cfg.topology,
                      "complete:N[,LEN] | star:LEAVES | leaf-spine:LEAVES[,SPINES] | file:PATH");
    a.cmd->add_option("--workload", a.cfg.workload,
                      "zipf:N,SKEW,COUNT | iid:MATRIX,COUNT | trace:PATH[,OFF[,LIM]] | inline:...");
    a.cmd->add_option("--trace", a.trace_path, "trace file (shorthand for --workload trace:PATH)");
    a.cmd->add_option("--trace-inline", a.trace_inline, "semicolon-separated requests, e.g. \"0 1;2 3\"");
    a.cmd->add_option("--trace-offset", a.trace_offset, "skip this many requests of --trace");
    a.cmd->add_option("--trace-limit", a.trace_limit, "use at most this many requests of --trace");
    a.cmd->add_option("--alg", a.alg_name, "oblivious | static | static-exact | bma | bma-lru");
    a.cmd->add_option("--b", a.cfg.b, "per-node degree cap");
    a.cmd->add_option("--alpha", a.cfg.alpha, "reconfiguration cost per pair added/removed");
    a.cmd->add_option("--seed", a.cfg.seed, "workload seed; repetition r uses seed+r");
    a.cmd->add_option("--reps", a.cfg.repetitions, "repetitions");
    a.cmd->add_option("--window", a.cfg.window, "trailing hit-ratio window");
    a.cmd->add_option("--stride", a.cfg.series_stride, "record a series point every N steps");
    a.cmd->add_option("--hit-warmup", a.cfg.hit_warmup,
                      "steps excluded from the windowed hit-ratio mean");
    a.cmd->add_flag("--check", a.cfg.check, "verify state invariants after every request");
    a.cmd->add_flag("--include-setup", a.cfg.include_setup,
                    "charge alpha per pair for static matchings");
    a.cmd->add_option("--series", a.series_path, "write per-step series CSV here");
    a.cmd->add_option("--out", a.out_path, "write the JSON report here instead of stdout");
    a.cmd->add_option("--dump-matching", a.dump_matching_path,
                      "write the final matching snapshot here");
    a.cmd->add_flag("--human", a.human, "human-readable summary instead of JSON");
}

bmatch::SimConfig build_sim_config(SimulateArgs& a) {
    bmatch::SimConfig cfg;
    if (!a.config_path.empty()) {
        std::ifstream in(a.config_path);
        if (!in)
            throw bmatch::ConfigError("cannot open config `" + a.config_path + "`");
        try {
            json j;
            in >> j;
            cfg = bmatch::config_from_json(j);
        } catch (const json::exception& e) {
            throw bmatch::ConfigError("bad config file `" + a.config_path + "`: " + e.what());
        }
    }
    auto passed = [&](const std::string& flag) { return a.cmd->count(flag) > 0; };
    if (passed("--topology")) cfg.topology = a.cfg.topology;
    if (passed("--workload")) cfg.workload = a.cfg.workload;
    if (passed("--alg")) cfg.algorithm = bmatch::parse_algorithm(a.alg_name);
    if (passed("--b")) cfg.b = a.cfg.b;
    if (passed("--alpha")) cfg.alpha = a.cfg.alpha;
    if (passed("--seed")) cfg.seed = a.cfg.seed;
    if (passed("--reps")) cfg.repetitions = a.cfg.repetitions;
    if (passed("--window")) cfg.window = a.cfg.window;
    if (passed("--stride")) cfg.series_stride = a.cfg.series_stride;
    if (passed("--hit-warmup")) cfg.hit_warmup = a.cfg.hit_warmup;
    if (passed("--check")) cfg.check = a.cfg.check;
    if (passed("--include-setup")) cfg.include_setup = a.cfg.include_setup;

    if (passed("--trace")) {
        std::string spec = "trace:" + a.trace_path;
        if (passed("--trace-offset") || passed("--trace-limit")) {
            spec += "," + std::to_string(a.trace_offset);
            if (passed("--trace-limit"))
                spec += "," + std::to_string(a.trace_limit);
        }
        cfg.workload = spec;
    }
    if (passed("--trace-inline"))
        cfg.workload = "inline:" + a.trace_inline;
    if (!a.series_path.empty() && cfg.series_stride == 0)
        cfg.series_stride = 1;

    if (cfg.topology.empty())
        throw bmatch::ConfigError("--topology is required");
    if (cfg.workload.empty())
        throw bmatch::ConfigError("one of --workload/--trace/--trace-inline is required");
    using bmatch::Algorithm;
    if (bmatch::algorithm_uses_matching(cfg.algorithm) && !passed("--b") &&
        a.config_path.empty())
        throw bmatch::ConfigError("--b is required for algorithm `" +
                                  bmatch::algorithm_name(cfg.algorithm) + "`");
    if (bmatch::algorithm_is_online(cfg.algorithm) && !passed("--alpha") &&
        a.config_path.empty())
        throw bmatch::ConfigError("--alpha is required for algorithm `" +
                                  bmatch::algorithm_name(cfg.algorithm) + "`");
    if (cfg.b < 1)
        throw bmatch::ConfigError("--b must be at least 1");
    if (!(cfg.alpha > 0))
        throw bmatch::ConfigError("--alpha must be positive");
    return cfg;
}

int run_simulate(SimulateArgs& a) {
    bmatch::SimConfig cfg = build_sim_config(a);
    bmatch::RunReport report = bmatch::run(cfg);
    if (!a.series_path.empty()) {
        std::ofstream out(a.series_path);
        if (!out)
            throw bmatch::ConfigError("cannot write `" + a.series_path + "`");
        bmatch::write_series_csv(out, report.repetitions);
    }
    if (!a.dump_matching_path.empty()) {
        std::ofstream out(a.dump_matching_path);
        if (!out)
            throw bmatch::ConfigError("cannot write `" + a.dump_matching_path + "`");
        for (bmatch::Pair p : report.final_matching)
            out << p.lo << "," << p.hi << "\n";
    }
    if (a.human) {
        const auto& m = report.mean;
        std::ostringstream text;
        text << bmatch::algorithm_name(cfg.algorithm) << " on " << cfg.topology << " / "
             << cfg.workload << " (b=" << cfg.b << ", alpha=" << cfg.alpha
             << ", reps=" << cfg.repetitions << ")\n"
             << "  total cost     " << m.total() << "\n"
             << "  routing cost   " << m.routing_cost << "\n"
             << "  reconfig cost  " << m.reconfig_cost << " (" << m.reconfig_count
             << " events)\n"
             << "  hit ratio      " << m.hit_ratio << " (" << m.hits << " hits, "
             << m.misses << " misses)";
        write_output(a.out_path, text.str());
    } else {
        write_output(a.out_path, bmatch::report_to_json(report, true, a.series_path).dump(2));
    }
    return 0;
}

// ---- compare ---------------------------------------------------------------

struct CompareArgs {
    std::string topology, workload, algs = "oblivious,static,bma,bma-lru";
    std::string b_grid = "4,8,12";
    double alpha = 6.0;
    std::uint64_t seed = 1;
    int reps = 5;
    std::size_t window = 1000, hit_warmup = 0;
    bool check = false, include_setup = false;
    unsigned jobs = 0;
    std::string format = "csv", out_path;
    CLI::App* cmd = nullptr;
};

void add_compare(CLI::App& app, CompareArgs& a) {
    a.cmd = app.add_subcommand("compare", "run several scenarios over identical traces");
    a.cmd->add_option("--topology", a.topology, "topology spec")->required();
    a.cmd->add_option("--workload", a.workload, "workload spec")->required();
    a.cmd->add_option("--algs", a.algs, "comma-separated algorithms");
    a.cmd->add_option("--b-grid", a.b_grid, "comma-separated degree caps");
    a.cmd->add_option("--alpha", a.alpha, "reconfiguration cost");
    a.cmd->add_option("--seed", a.seed, "workload seed");
    a.cmd->add_option("--reps", a.reps, "repetitions");
    a.cmd->add_option("--window", a.window, "trailing hit-ratio window");
    a.cmd->add_option("--hit-warmup", a.hit_warmup, "windowed hit-ratio warm-up");
    a.cmd->add_flag("--check", a.check, "per-step invariant checking");
    a.cmd->add_flag("--include-setup", a.include_setup, "charge static setup");
    a.cmd->add_option("--jobs", a.jobs, "worker threads (default: hardware)");
    a.cmd->add_option("--format", a.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
    a.cmd->add_option("--out", a.out_path, "output file (default stdout)");
}

int run_compare(CompareArgs& a) {
    std::vector<bmatch::SimConfig> configs;
    std::vector<int> grid;
    for (const std::string& s : split_csv(a.b_grid))
        grid.push_back(std::stoi(s));
    if (grid.empty())
        throw bmatch::ConfigError("--b-grid must not be empty");
    for (const std::string& name : split_csv(a.algs)) {
        bmatch::Algorithm alg = bmatch::parse_algorithm(name);
        for (int b : grid) {
            bmatch::SimConfig cfg;
            cfg.topology = a.topology;
            cfg.workload = a.workload;
            cfg.algorithm = alg;
            cfg.b = b;
            cfg.alpha = a.alpha;
            cfg.seed = a.seed;
            cfg.repetitions = a.reps;
            cfg.window = a.window;
            cfg.hit_warmup = a.hit_warmup;
            cfg.check = a.check;
            cfg.include_setup = a.include_setup;
            configs.push_back(cfg);
        }
    }
    unsigned jobs = a.jobs ? a.jobs : std::max(1u, std::thread::hardware_concurrency());
    bmatch::ComparisonTable table = bmatch::compare(configs, jobs);
    std::ostringstream text;
    if (a.format == "json")
        text << bmatch::table_to_json(table).dump(2);
    else
        bmatch::write_table_csv(text, table);
    std::string s = text.str();
    while (!s.empty() && s.back() == '\n')
        s.pop_back();
    write_output(a.out_path, s);
    return 0;
}

// ---- adversary -------------------------------------------------------------

struct AdversaryArgs {
    int b = 0, alpha = 0;
    std::size_t k = 0, leaves = 0;
    std::string alg_name = "bma", out_path;
    CLI::App* cmd = nullptr;
};

void add_adversary(CLI::App& app, AdversaryArgs& a) {
    a.cmd = app.add_subcommand("adversary",
                               "adaptive star adversary vs an online algorithm");
    a.cmd->add_option("--b", a.b, "degree cap")->required();
    a.cmd->add_option("--alpha", a.alpha, "chunk length and reconfiguration cost")->required();
    a.cmd->add_option("--k", a.k, "number of chunks")->required();
    a.cmd->add_option("--leaves", a.leaves, "star leaves (default b+1)");
    a.cmd->add_option("--alg", a.alg_name, "bma | bma-lru");
    a.cmd->add_option("--out", a.out_path, "output file (default stdout)");
}

int run_adversary_cmd(AdversaryArgs& a) {
    bmatch::Algorithm alg = bmatch::parse_algorithm(a.alg_name);
    if (!bmatch::algorithm_is_online(alg))
        throw bmatch::ConfigError("adversary needs an online algorithm");
    if (a.b < 1 || a.alpha < 1)
        throw bmatch::ConfigError("--b and --alpha must be at least 1");
    bmatch::AdversaryConfig cfg{a.b, a.alpha, a.k, a.leaves};
    std::size_t leaves = a.leaves ? a.leaves : std::size_t(a.b) + 1;
    bmatch::Topology topo = bmatch::Topology::star(leaves);
    bmatch::BmaState state(topo, a.b, double(a.alpha),
                           alg == bmatch::Algorithm::BmaLru
                               ? bmatch::EvictionPolicy::LeastRecentlyUsed
                               : bmatch::EvictionPolicy::MinPairId);
    bmatch::AdversaryResult res = bmatch::run_adversary(cfg, state);
    json j = {
        {"k", a.k},
        {"b", a.b},
        {"alpha", a.alpha},
        {"alg", bmatch::algorithm_name(alg)},
        {"det_cost", res.det_cost},
        {"off_cost", res.off_cost},
        {"ratio", res.off_cost > 0 ? json(res.det_cost / res.off_cost) : json()},
    };
    write_output(a.out_path, j.dump(2));
    return 0;
}

// ---- verify ----------------------------------------------------------------

struct VerifyArgs {
    std::size_t instances = 200;
    std::uint64_t seed = 1;
    std::size_t max_nodes = 5, max_requests = 15;
    int b = 1;
    std::string alphas = "1,2,4";
    std::size_t state_cap = bmatch::kDefaultStateCap;
    bool no_check = false;
    std::string instance_file, out_path;
    CLI::App* cmd = nullptr;
};

void add_verify(CLI::App& app, VerifyArgs& a) {
    a.cmd = app.add_subcommand(
        "verify", "check the competitive bound against the exact optimum on random instances");
    a.cmd->add_option("--instances", a.instances, "number of random instances");
    a.cmd->add_option("--seed", a.seed, "instance seed");
    a.cmd->add_option("--max-nodes", a.max_nodes, "largest node count");
    a.cmd->add_option("--max-requests", a.max_requests, "longest trace");
    a.cmd->add_option("--b", a.b, "degree cap");
    a.cmd->add_option("--alphas", a.alphas, "comma-separated alpha values, cycled");
    a.cmd->add_option("--state-cap", a.state_cap, "offline-oracle state cap");
    a.cmd->add_flag("--no-check", a.no_check, "skip per-step invariant checking");
    a.cmd->add_option("--instance-file", a.instance_file, "verify one serialized instance");
    a.cmd->add_option("--out", a.out_path, "output file (default stdout)");
}

struct VerifyInstance {
    std::size_t n;
    std::vector<bmatch::EdgeSpec> edges;
    int b;
    double alpha;
    bmatch::Trace trace;
};

json instance_to_json(const VerifyInstance& inst) {
    json edges = json::array();
    for (const auto& e : inst.edges)
        edges.push_back({e.u, e.v, e.length});
    json trace = json::array();
    for (bmatch::Pair p : inst.trace)
        trace.push_back({p.lo, p.hi});
    return {{"n", inst.n}, {"edges", edges}, {"b", inst.b}, {"alpha", inst.alpha},
            {"trace", trace}};
}

VerifyInstance instance_from_json(const json& j) {
    VerifyInstance inst;
    inst.n = j.at("n").get<std::size_t>();
    for (const auto& e : j.at("edges"))
        inst.edges.push_back({e.at(0).get<bmatch::NodeId>(), e.at(1).get<bmatch::NodeId>(),
                              e.at(2).get<double>()});
    inst.b = j.at("b").get<int>();
    inst.alpha = j.at("alpha").get<double>();
    for (const auto& r : j.at("trace"))
        inst.trace.push_back(
            bmatch::Pair::of(r.at(0).get<bmatch::NodeId>(), r.at(1).get<bmatch::NodeId>()));
    return inst;
}

int run_verify(VerifyArgs& a) {
    std::vector<double> alphas;
    for (const std::string& s : split_csv(a.alphas))
        alphas.push_back(std::stod(s));
    if (alphas.empty())
        throw bmatch::ConfigError("--alphas must not be empty");
    if (a.max_nodes < 2)
        throw bmatch::ConfigError("--max-nodes must be at least 2");

    std::vector<VerifyInstance> instances;
    if (!a.instance_file.empty()) {
        std::ifstream in(a.instance_file);
        if (!in)
            throw bmatch::ConfigError("cannot open `" + a.instance_file + "`");
        try {
            json j;
            in >> j;
            instances.push_back(instance_from_json(j));
        } catch (const json::exception& e) {
            throw bmatch::ConfigError("bad instance file `" + a.instance_file + "`: " +
                                      e.what());
        }
    } else {
        bmatch::SplitMix64 rng(a.seed);
        for (std::size_t i = 0; i < a.instances; ++i) {
            std::size_t n = 2 + rng.next_below(a.max_nodes - 1);
            bmatch::Topology topo = bmatch::gen_random_connected(n, rng, 1);
            VerifyInstance inst;
            inst.n = n;
            for (const auto& [p, len] : topo.fixed_edges())
                inst.edges.push_back({p.lo, p.hi, len});
            inst.b = a.b;
            inst.alpha = alphas[i % alphas.size()];
            std::size_t len = rng.next_below(a.max_requests + 1);
            inst.trace = bmatch::gen_uniform_trace(n, len, rng);
            instances.push_back(std::move(inst));
        }
    }

    json results = json::array();
    bool any_violation = false;
    for (const VerifyInstance& inst : instances) {
        json entry;
        try {
            bmatch::Topology topo = bmatch::Topology::build(inst.n, inst.edges);
            bmatch::BmaState state(topo, inst.b, inst.alpha);
            double alg_cost = 0.0;
            for (bmatch::Pair p : inst.trace) {
                auto out = state.serve(p);
                alg_cost += out.routing_cost + inst.alpha * out.reconfig_events;
                if (!a.no_check) {
                    auto report = state.check();
                    if (!report.empty())
                        throw bmatch::InvariantViolation(report.front());
                }
            }
            bmatch::OracleComparison oc =
                bmatch::verify_bound(topo, inst.b, inst.alpha, inst.trace, alg_cost,
                                     a.state_cap);
            entry = {
                {"n", inst.n},
                {"b", inst.b},
                {"alpha", inst.alpha},
                {"requests", inst.trace.size()},
                {"alg_cost", oc.alg_cost},
                {"opt_cost", oc.opt_cost},
                {"additive_beta", oc.additive_beta},
                {"bound_factor", oc.bound_factor},
                {"bound_satisfied", oc.bound_satisfied},
                {"empirical_ratio",
                 oc.empirical_ratio ? json(*oc.empirical_ratio) : json()},
            };
            if (!oc.bound_satisfied) {
                any_violation = true;
                entry["instance"] = instance_to_json(inst);
                std::cerr << "bound violated; offending instance: "
                          << instance_to_json(inst).dump() << "\n";
            }
        } catch (const bmatch::StateSpaceTooLarge& e) {
            entry = {{"skipped", true}, {"reason", e.what()}};
            std::cerr << "warning: instance skipped: " << e.what() << "\n";
        }
        results.push_back(entry);
    }
    write_output(a.out_path, results.dump(2));
    return any_violation ? 1 : 0;
}

// ---- gen -------------------------------------------------------------------

struct GenArgs {
    // trace generators
    std::size_t n = 0, count = 0;
    double skew = 1.2;
    std::uint64_t seed = 1;
    std::string matrix_path;
    // topology generators
    std::size_t leaves = 0, spines = 0;
    double length = 1.0;
    std::string out_path;
    CLI::App *trace_zipf = nullptr, *trace_iid = nullptr;
    CLI::App *topo_star = nullptr, *topo_leaf_spine = nullptr, *topo_complete = nullptr;
};

void add_gen(CLI::App& app, GenArgs& a) {
    CLI::App* gen = app.add_subcommand("gen", "write a trace or topology file");
    gen->require_subcommand(1);

    CLI::App* trace = gen->add_subcommand("trace", "trace generators");
    trace->require_subcommand(1);
    a.trace_zipf = trace->add_subcommand("zipf", "skewed i.i.d. pair workload");
    a.trace_zipf->add_option("--n", a.n, "number of leaves")->required();
    a.trace_zipf->add_option("--s", a.skew, "skew exponent");
    a.trace_zipf->add_option("--count", a.count, "number of requests")->required();
    a.trace_zipf->add_option("--seed", a.seed, "seed")->required();
    a.trace_zipf->add_option("--out", a.out_path, "output file")->required();

    a.trace_iid = trace->add_subcommand("iid", "i.i.d. samples from a traffic matrix");
    a.trace_iid->add_option("--matrix", a.matrix_path, "matrix file (`u v weight` lines)")
        ->required();
    a.trace_iid->add_option("--count", a.count, "number of requests")->required();
    a.trace_iid->add_option("--seed", a.seed, "seed")->required();
    a.trace_iid->add_option("--out", a.out_path, "output file")->required();

    CLI::App* topo = gen->add_subcommand("topology", "topology generators");
    topo->require_subcommand(1);
    a.topo_star = topo->add_subcommand("star", "unit-length star, node 0 center");
    a.topo_star->add_option("--leaves", a.leaves, "leaf count")->required();
    a.topo_star->add_option("--out", a.out_path, "output file")->required();

    a.topo_leaf_spine = topo->add_subcommand("leaf-spine", "bipartite unit-length fabric");
    a.topo_leaf_spine->add_option("--leaves", a.leaves, "leaf count")->required();
    a.topo_leaf_spine->add_option("--spines", a.spines, "spine count (default ceil(leaves/10))");
    a.topo_leaf_spine->add_option("--out", a.out_path, "output file")->required();

    a.topo_complete = topo->add_subcommand("complete", "complete graph");
    a.topo_complete->add_option("--n", a.n, "node count")->required();
    a.topo_complete->add_option("--length", a.length, "edge length");
    a.topo_complete->add_option("--out", a.out_path, "output file")->required();
}

int run_gen(GenArgs& a) {
    auto write_file = [&](auto&& writer, const std::string& summary) {
        std::ofstream out(a.out_path);
        if (!out)
            throw bmatch::ConfigError("cannot write `" + a.out_path + "`");
        writer(out);
        std::cout << summary << "\n";
        return 0;
    };
    if (a.trace_zipf && a.trace_zipf->parsed()) {
        bmatch::Trace t = bmatch::gen_zipf(a.n, a.skew, a.count, a.seed);
        return write_file([&](std::ostream& o) { bmatch::write_trace(o, t); },
                          "wrote " + std::to_string(t.size()) + " requests to " + a.out_path +
                              " (zipf n=" + std::to_string(a.n) + " seed=" +
                              std::to_string(a.seed) + ")");
    }
    if (a.trace_iid && a.trace_iid->parsed()) {
        std::ifstream in(a.matrix_path);
        if (!in)
            throw bmatch::ConfigError("cannot open `" + a.matrix_path + "`");
        bmatch::TrafficMatrix m = bmatch::parse_matrix(in);
        bmatch::Trace t = bmatch::gen_iid(m, a.count, a.seed);
        return write_file([&](std::ostream& o) { bmatch::write_trace(o, t); },
                          "wrote " + std::to_string(t.size()) + " requests to " + a.out_path +
                              " (iid seed=" + std::to_string(a.seed) + ")");
    }
    auto summary = [&](const bmatch::Topology& t) {
        return "wrote topology with " + std::to_string(t.node_count()) + " nodes, " +
               std::to_string(t.fixed_edges().size()) + " edges to " + a.out_path;
    };
    if (a.topo_star && a.topo_star->parsed()) {
        bmatch::Topology t = bmatch::Topology::star(a.leaves);
        return write_file([&](std::ostream& o) { bmatch::write_topology(o, t); }, summary(t));
    }
    if (a.topo_leaf_spine && a.topo_leaf_spine->parsed()) {
        bmatch::Topology t = bmatch::Topology::leaf_spine(a.leaves, a.spines);
        return write_file([&](std::ostream& o) { bmatch::write_topology(o, t); }, summary(t));
    }
    if (a.topo_complete && a.topo_complete->parsed()) {
        bmatch::Topology t = bmatch::Topology::complete(a.n, a.length);
        return write_file([&](std::ostream& o) { bmatch::write_topology(o, t); }, summary(t));
    }
    throw bmatch::ConfigError("unknown generator");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"online dynamic b-matching simulator"};
    app.require_subcommand(1);

    SimulateArgs sim;
    CompareArgs cmp;
    AdversaryArgs adv;
    VerifyArgs ver;
    GenArgs gen;
    add_simulate(app, sim);
    add_compare(app, cmp);
    add_adversary(app, adv);
    add_verify(app, ver);
    add_gen(app, gen);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sim.cmd->parsed())
            return run_simulate(sim);
        if (cmp.cmd->parsed())
            return run_compare(cmp);
        if (adv.cmd->parsed())
            return run_adversary_cmd(adv);
        if (ver.cmd->parsed())
            return run_verify(ver);
        return run_gen(gen);
    } catch (const bmatch::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
