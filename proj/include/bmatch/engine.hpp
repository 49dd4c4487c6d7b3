#pragma once

// Scenario runner: drives one algorithm over one workload, accounts routing
// and reconfiguration cost per request, and assembles repeatable reports.
// Identical config and seed produce bitwise-identical reports (wall time
// aside); repetition r of a synthetic workload is generated with seed+r and
// every scenario of a comparison consumes the same realized traces.

#include <atomic>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <future>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "bmatch/baselines.hpp"
#include "bmatch/bma.hpp"
#include "bmatch/core.hpp"
#include "bmatch/offline_oracle.hpp"
#include "bmatch/topology.hpp"
#include "bmatch/workloads.hpp"

namespace bmatch {

enum class Algorithm { Oblivious, StaticGreedy, StaticExact, Bma, BmaLru };

inline std::string algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::Oblivious: return "oblivious";
        case Algorithm::StaticGreedy: return "static";
        case Algorithm::StaticExact: return "static-exact";
        case Algorithm::Bma: return "bma";
        case Algorithm::BmaLru: return "bma-lru";
    }
    throw Error("unknown algorithm");
}

inline Algorithm parse_algorithm(const std::string& name) {
    if (name == "oblivious") return Algorithm::Oblivious;
    if (name == "static" || name == "static-greedy") return Algorithm::StaticGreedy;
    if (name == "static-exact") return Algorithm::StaticExact;
    if (name == "bma") return Algorithm::Bma;
    if (name == "bma-lru" || name == "lru-bma") return Algorithm::BmaLru;
    throw ConfigError("unknown algorithm `" + name + "`");
}

inline bool algorithm_uses_matching(Algorithm a) { return a != Algorithm::Oblivious; }
inline bool algorithm_is_online(Algorithm a) {
    return a == Algorithm::Bma || a == Algorithm::BmaLru;
}

struct SeriesPoint {
    std::uint64_t step = 0;
    double cum_routing = 0.0;
    double cum_reconfig = 0.0;
    double window_hit_ratio = 0.0;
};

struct CostLedger {
    double routing_cost = 0.0;
    std::uint64_t reconfig_count = 0;
    double reconfig_cost = 0.0;  // alpha * reconfig_count
    std::uint64_t hits = 0;
    std::uint64_t misses = 0;
    // hits / (hits + misses); carried as a field so aggregate ledgers can
    // fold the per-repetition ratios instead of mixing counts across reps
    double hit_ratio = 0.0;
    // mean of the trailing-window hit ratio over steps after the warm-up
    double window_hit_ratio_mean = 0.0;
    std::vector<SeriesPoint> series;

    double total() const { return routing_cost + reconfig_cost; }
};

// Cumulative hit ratio; 0 when nothing was served.
inline double hit_ratio(const CostLedger& ledger) {
    std::uint64_t served = ledger.hits + ledger.misses;
    return served == 0 ? 0.0 : double(ledger.hits) / double(served);
}

// Trailing-window hit ratio at every step of a hit/miss stream.
inline std::vector<double> windowed_hit_ratio(const std::vector<char>& hit_stream,
                                              std::size_t window) {
    if (window < 1)
        throw Error("window must be at least 1");
    std::vector<double> out;
    out.reserve(hit_stream.size());
    std::size_t in_window = 0;
    for (std::size_t i = 0; i < hit_stream.size(); ++i) {
        in_window += hit_stream[i] ? 1 : 0;
        if (i >= window)
            in_window -= hit_stream[i - window] ? 1 : 0;
        out.push_back(double(in_window) / double(std::min(i + 1, window)));
    }
    return out;
}

struct LedgerOptions {
    std::size_t window = 1000;      // trailing hit-ratio window
    std::size_t series_stride = 0;  // 0 disables the per-step series
    std::size_t hit_warmup = 0;     // steps excluded from window_hit_ratio_mean
    bool check = false;             // per-step invariant checking (online algorithms)
    bool include_setup = false;     // charge alpha per pair for static matchings
};

struct RunResult {
    CostLedger ledger;
    std::vector<Pair> final_matching;
};

namespace detail {

class LedgerBuilder {
public:
    LedgerBuilder(const LedgerOptions& opt, double alpha) : opt_(opt), alpha_(alpha) {
        if (opt.window < 1)
            throw ConfigError("hit-ratio window must be at least 1");
        window_.assign(opt.window, 0);
    }

    // Reconfiguration that is not tied to a served request (static setup).
    void add_reconfig(std::uint64_t events) {
        ledger_.reconfig_count += events;
        ledger_.reconfig_cost += alpha_ * double(events);
    }

    void record(bool hit, double routing_cost, int reconfig_events) {
        ++step_;
        if (hit)
            ++ledger_.hits;
        else
            ++ledger_.misses;
        ledger_.routing_cost += routing_cost;
        ledger_.reconfig_count += std::uint64_t(reconfig_events);
        ledger_.reconfig_cost += alpha_ * reconfig_events;

        std::size_t slot = (step_ - 1) % opt_.window;
        if (step_ > opt_.window)
            hits_in_window_ -= window_[slot];
        window_[slot] = hit ? 1 : 0;
        hits_in_window_ += window_[slot];
        double wr = double(hits_in_window_) / double(std::min<std::uint64_t>(step_, opt_.window));
        if (step_ > opt_.hit_warmup) {
            post_warmup_sum_ += wr;
            ++post_warmup_steps_;
        }
        if (opt_.series_stride > 0 && step_ % opt_.series_stride == 0)
            ledger_.series.push_back({step_, ledger_.routing_cost, ledger_.reconfig_cost, wr});
    }

    CostLedger finish() {
        if (post_warmup_steps_ > 0)
            ledger_.window_hit_ratio_mean = post_warmup_sum_ / double(post_warmup_steps_);
        ledger_.hit_ratio = hit_ratio(ledger_);
        return std::move(ledger_);
    }

private:
    LedgerOptions opt_;
    double alpha_;
    CostLedger ledger_;
    std::vector<char> window_;
    std::uint64_t hits_in_window_ = 0;
    std::uint64_t step_ = 0;
    double post_warmup_sum_ = 0.0;
    std::uint64_t post_warmup_steps_ = 0;
};

}  // namespace detail

// Serve a whole trace with one algorithm and account every request.
inline RunResult run_trace(const Topology& topo, const Trace& trace, Algorithm alg, int b,
                           double alpha, const LedgerOptions& opt = {}) {
    detail::LedgerBuilder builder(opt, alpha);
    RunResult result;

    if (alg == Algorithm::Oblivious) {
        for (Pair p : trace)
            builder.record(false, topo.distance(p), 0);
        result.ledger = builder.finish();
        return result;
    }

    if (alg == Algorithm::StaticGreedy || alg == Algorithm::StaticExact) {
        PairFrequency freq = PairFrequency::from_trace(trace);
        BMatching m = alg == Algorithm::StaticGreedy
                          ? static_matching_greedy(topo, freq, b)
                          : exact_static(topo, freq, b).first;
        if (opt.include_setup)
            builder.add_reconfig(m.size());
        for (Pair p : trace) {
            bool hit = m.contains(p);
            builder.record(hit, hit ? 0.0 : topo.distance(p), 0);
        }
        result.ledger = builder.finish();
        result.final_matching = m.pairs();
        return result;
    }

    EvictionPolicy policy = alg == Algorithm::BmaLru ? EvictionPolicy::LeastRecentlyUsed
                                                     : EvictionPolicy::MinPairId;
    BmaState state(topo, b, alpha, policy);
    for (Pair p : trace) {
        StepOutcome out = state.serve(p);
        builder.record(out.hit, out.routing_cost, out.reconfig_events);
        if (opt.check) {
            auto report = state.check();
            if (!report.empty()) {
                std::string joined;
                for (const auto& r : report)
                    joined += (joined.empty() ? "" : "; ") + r;
                throw InvariantViolation(joined);
            }
        }
    }
    result.ledger = builder.finish();
    result.final_matching = state.matching().pairs();
    return result;
}

struct SimConfig {
    std::string topology;   // e.g. "complete:2", "star:5", "leaf-spine:100,10", "file:PATH"
    std::string workload;   // e.g. "zipf:100,1.2,100000", "trace:PATH", "inline:0 1;0 1"
    Algorithm algorithm = Algorithm::Bma;
    int b = 1;
    double alpha = 1.0;
    std::uint64_t seed = 1;
    int repetitions = 1;
    std::size_t window = 1000;
    std::size_t series_stride = 0;
    std::size_t hit_warmup = 0;
    bool check = false;
    bool include_setup = false;

    LedgerOptions ledger_options() const {
        return {window, series_stride, hit_warmup, check, include_setup};
    }
};

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep))
        out.push_back(item);
    return out;
}

inline std::ifstream open_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open file `" + path + "`");
    return in;
}

}  // namespace detail

// Topology specs: complete:N[,LEN] | star:LEAVES | leaf-spine:LEAVES[,SPINES] | file:PATH
inline Topology make_topology(const std::string& spec) {
    auto colon = spec.find(':');
    if (colon == std::string::npos)
        throw ConfigError("bad topology spec `" + spec + "`");
    std::string kind = spec.substr(0, colon);
    std::string rest = spec.substr(colon + 1);
    try {
        if (kind == "file") {
            auto in = detail::open_file(rest);
            return parse_topology(in);
        }
        auto args = detail::split(rest, ',');
        if (kind == "complete") {
            if (args.size() == 1)
                return Topology::complete(std::stoul(args[0]));
            if (args.size() == 2)
                return Topology::complete(std::stoul(args[0]), std::stod(args[1]));
        } else if (kind == "star") {
            if (args.size() == 1)
                return Topology::star(std::stoul(args[0]));
        } else if (kind == "leaf-spine") {
            if (args.size() == 1)
                return Topology::leaf_spine(std::stoul(args[0]));
            if (args.size() == 2)
                return Topology::leaf_spine(std::stoul(args[0]), std::stoul(args[1]));
        }
    } catch (const std::logic_error&) {
        throw ConfigError("bad topology spec `" + spec + "`");
    }
    throw ConfigError("bad topology spec `" + spec + "`");
}

// Workload specs: zipf:NLEAVES,SKEW,COUNT | iid:MATRIXPATH,COUNT |
// trace:PATH[,OFFSET[,LIMIT]] | inline:REQ;REQ;...
// Synthetic workloads draw repetition r with seed+r; fixed traces are
// identical across repetitions.
inline Trace make_workload(const std::string& spec, const Topology& topo,
                           std::uint64_t rep_seed) {
    auto colon = spec.find(':');
    if (colon == std::string::npos)
        throw ConfigError("bad workload spec `" + spec + "`");
    std::string kind = spec.substr(0, colon);
    std::string rest = spec.substr(colon + 1);
    try {
        if (kind == "inline") {
            std::string text = rest;
            for (char& c : text)
                if (c == ';')
                    c = '\n';
            std::istringstream in(text);
            return parse_trace(in, topo.node_count());
        }
        if (kind == "trace") {
            auto args = detail::split(rest, ',');
            if (args.empty() || args.size() > 3)
                throw ConfigError("bad workload spec `" + spec + "`");
            auto in = detail::open_file(args[0]);
            Trace full = parse_trace(in, topo.node_count());
            std::size_t offset = args.size() > 1 ? std::stoul(args[1]) : 0;
            std::size_t limit = args.size() > 2 ? std::stoul(args[2]) : full.size();
            if (offset > full.size())
                offset = full.size();
            std::size_t end = std::min(full.size(), offset + limit);
            return Trace(full.begin() + offset, full.begin() + end);
        }
        auto args = detail::split(rest, ',');
        if (kind == "zipf" && args.size() == 3)
            return gen_zipf(std::stoul(args[0]), std::stod(args[1]), std::stoul(args[2]),
                            rep_seed);
        if (kind == "iid" && args.size() == 2) {
            auto in = detail::open_file(args[0]);
            TrafficMatrix m = parse_matrix(in, topo.node_count());
            return gen_iid(m, std::stoul(args[1]), rep_seed);
        }
    } catch (const std::logic_error&) {
        throw ConfigError("bad workload spec `" + spec + "`");
    }
    throw ConfigError("bad workload spec `" + spec + "`");
}

struct RunReport {
    SimConfig config;
    std::vector<CostLedger> repetitions;
    CostLedger mean, min, max;  // field-wise aggregates, series left empty
    std::vector<Pair> final_matching;  // from the last repetition
    double wall_ms = 0.0;
};

namespace detail {

inline void aggregate_ledgers(const std::vector<CostLedger>& reps, CostLedger& mean,
                              CostLedger& mn, CostLedger& mx) {
    const double n = double(reps.size());
    auto fold = [&](auto get, auto set) {
        double sum = 0.0, lo = 0.0, hi = 0.0;
        for (std::size_t i = 0; i < reps.size(); ++i) {
            double v = get(reps[i]);
            sum += v;
            lo = i == 0 ? v : std::min(lo, v);
            hi = i == 0 ? v : std::max(hi, v);
        }
        set(mean, sum / n);
        set(mn, lo);
        set(mx, hi);
    };
    fold([](const CostLedger& l) { return l.routing_cost; },
         [](CostLedger& l, double v) { l.routing_cost = v; });
    fold([](const CostLedger& l) { return double(l.reconfig_count); },
         [](CostLedger& l, double v) { l.reconfig_count = std::uint64_t(v + 0.5); });
    fold([](const CostLedger& l) { return l.reconfig_cost; },
         [](CostLedger& l, double v) { l.reconfig_cost = v; });
    fold([](const CostLedger& l) { return double(l.hits); },
         [](CostLedger& l, double v) { l.hits = std::uint64_t(v + 0.5); });
    fold([](const CostLedger& l) { return double(l.misses); },
         [](CostLedger& l, double v) { l.misses = std::uint64_t(v + 0.5); });
    fold([](const CostLedger& l) { return l.hit_ratio; },
         [](CostLedger& l, double v) { l.hit_ratio = v; });
    fold([](const CostLedger& l) { return l.window_hit_ratio_mean; },
         [](CostLedger& l, double v) { l.window_hit_ratio_mean = v; });
}

}  // namespace detail

inline RunReport run(const SimConfig& cfg) {
    if (cfg.repetitions < 1)
        throw ConfigError("repetitions must be at least 1");
    auto start = std::chrono::steady_clock::now();
    Topology topo = make_topology(cfg.topology);
    RunReport report;
    report.config = cfg;
    for (int rep = 0; rep < cfg.repetitions; ++rep) {
        Trace trace = make_workload(cfg.workload, topo, cfg.seed + std::uint64_t(rep));
        RunResult res =
            run_trace(topo, trace, cfg.algorithm, cfg.b, cfg.alpha, cfg.ledger_options());
        report.repetitions.push_back(std::move(res.ledger));
        if (rep == cfg.repetitions - 1)
            report.final_matching = std::move(res.final_matching);
    }
    detail::aggregate_ledgers(report.repetitions, report.mean, report.min, report.max);
    report.wall_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    return report;
}

// ---- comparison across scenarios -----------------------------------------

struct ComparisonRow {
    std::string scenario;
    int b = 0;
    std::vector<CostLedger> repetitions;
    CostLedger mean, min, max;
};

struct ComparisonTable {
    std::vector<ComparisonRow> rows;
};

// Runs several configs that share topology, workload, seed and repetition
// count over the exact same realized traces. jobs > 1 distributes rows over
// that many worker threads.
inline ComparisonTable compare(const std::vector<SimConfig>& configs, unsigned jobs = 1) {
    if (configs.empty())
        throw ConfigError("compare needs at least one config");
    const SimConfig& head = configs.front();
    for (const SimConfig& c : configs) {
        if (c.topology != head.topology || c.workload != head.workload ||
            c.seed != head.seed || c.repetitions != head.repetitions)
            throw IncompatibleConfigs(
                "compare requires identical topology, workload, seed and repetitions");
    }

    Topology topo = make_topology(head.topology);
    std::vector<Trace> traces;
    for (int rep = 0; rep < head.repetitions; ++rep)
        traces.push_back(make_workload(head.workload, topo, head.seed + std::uint64_t(rep)));

    ComparisonTable table;
    table.rows.resize(configs.size());
    for (std::size_t i = 0; i < configs.size(); ++i) {
        table.rows[i].scenario = algorithm_name(configs[i].algorithm);
        table.rows[i].b = configs[i].b;
        table.rows[i].repetitions.resize(traces.size());
    }

    // one task per (scenario, repetition); results land at fixed indices so
    // the assembled table does not depend on scheduling
    const std::size_t tasks = configs.size() * traces.size();
    auto run_task = [&](std::size_t idx) {
        const std::size_t row = idx / traces.size();
        const std::size_t rep = idx % traces.size();
        const SimConfig& cfg = configs[row];
        table.rows[row].repetitions[rep] =
            run_trace(topo, traces[rep], cfg.algorithm, cfg.b, cfg.alpha,
                      cfg.ledger_options())
                .ledger;
    };

    if (jobs <= 1 || tasks <= 1) {
        for (std::size_t i = 0; i < tasks; ++i)
            run_task(i);
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= tasks)
                    return;
                run_task(i);
            }
        };
        std::vector<std::future<void>> futures;
        unsigned workers = std::min<unsigned>(jobs, unsigned(tasks));
        for (unsigned w = 0; w < workers; ++w)
            futures.push_back(std::async(std::launch::async, worker));
        for (auto& f : futures)
            f.get();
    }
    for (ComparisonRow& row : table.rows)
        detail::aggregate_ledgers(row.repetitions, row.mean, row.min, row.max);
    return table;
}

// ---- serialization --------------------------------------------------------

inline nlohmann::json ledger_to_json(const CostLedger& ledger) {
    return {
        {"routing_cost", ledger.routing_cost},
        {"reconfig_count", ledger.reconfig_count},
        {"reconfig_cost", ledger.reconfig_cost},
        {"total_cost", ledger.total()},
        {"hits", ledger.hits},
        {"misses", ledger.misses},
        {"hit_ratio", ledger.hit_ratio},
        {"window_hit_ratio_mean", ledger.window_hit_ratio_mean},
    };
}

inline nlohmann::json config_to_json(const SimConfig& cfg) {
    return {
        {"topology", cfg.topology},
        {"workload", cfg.workload},
        {"algorithm", algorithm_name(cfg.algorithm)},
        {"b", cfg.b},
        {"alpha", cfg.alpha},
        {"seed", cfg.seed},
        {"repetitions", cfg.repetitions},
        {"window", cfg.window},
        {"series_stride", cfg.series_stride},
        {"hit_warmup", cfg.hit_warmup},
        {"check", cfg.check},
        {"include_setup", cfg.include_setup},
    };
}

inline SimConfig config_from_json(const nlohmann::json& j) {
    SimConfig cfg;
    cfg.topology = j.value("topology", cfg.topology);
    cfg.workload = j.value("workload", cfg.workload);
    if (j.contains("algorithm"))
        cfg.algorithm = parse_algorithm(j.at("algorithm").get<std::string>());
    cfg.b = j.value("b", cfg.b);
    cfg.alpha = j.value("alpha", cfg.alpha);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.repetitions = j.value("repetitions", cfg.repetitions);
    cfg.window = j.value("window", cfg.window);
    cfg.series_stride = j.value("series_stride", cfg.series_stride);
    cfg.hit_warmup = j.value("hit_warmup", cfg.hit_warmup);
    cfg.check = j.value("check", cfg.check);
    cfg.include_setup = j.value("include_setup", cfg.include_setup);
    return cfg;
}

inline nlohmann::json report_to_json(const RunReport& report, bool include_timing = true,
                                     const std::string& series_file = "") {
    nlohmann::json reps = nlohmann::json::array();
    for (const CostLedger& l : report.repetitions)
        reps.push_back(ledger_to_json(l));
    nlohmann::json matching = nlohmann::json::array();
    for (Pair p : report.final_matching)
        matching.push_back(std::to_string(p.lo) + "," + std::to_string(p.hi));
    nlohmann::json j = {
        {"config", config_to_json(report.config)},
        {"totals", ledger_to_json(report.mean)},
        {"totals_min", ledger_to_json(report.min)},
        {"totals_max", ledger_to_json(report.max)},
        {"repetitions", reps},
        {"final_matching", matching},
        {"series_file", series_file.empty() ? nlohmann::json() : nlohmann::json(series_file)},
    };
    if (include_timing)
        j["wall_ms"] = report.wall_ms;
    return j;
}

// Per-step series averaged over repetitions, CSV with a fixed header.
inline void write_series_csv(std::ostream& out, const std::vector<CostLedger>& reps) {
    out << "step,cum_routing,cum_reconfig,window_hit_ratio\n";
    if (reps.empty())
        return;
    std::size_t rows = reps.front().series.size();
    for (const CostLedger& l : reps)
        rows = std::min(rows, l.series.size());
    for (std::size_t i = 0; i < rows; ++i) {
        double routing = 0.0, reconfig = 0.0, ratio = 0.0;
        for (const CostLedger& l : reps) {
            routing += l.series[i].cum_routing;
            reconfig += l.series[i].cum_reconfig;
            ratio += l.series[i].window_hit_ratio;
        }
        double n = double(reps.size());
        out << reps.front().series[i].step << "," << routing / n << "," << reconfig / n << ","
            << ratio / n << "\n";
    }
}

inline nlohmann::json table_to_json(const ComparisonTable& table) {
    nlohmann::json rows = nlohmann::json::array();
    for (const ComparisonRow& row : table.rows) {
        nlohmann::json reps = nlohmann::json::array();
        for (const CostLedger& l : row.repetitions)
            reps.push_back(ledger_to_json(l));
        rows.push_back({
            {"scenario", row.scenario},
            {"b", row.b},
            {"repetitions", reps},
            {"mean", ledger_to_json(row.mean)},
            {"min", ledger_to_json(row.min)},
            {"max", ledger_to_json(row.max)},
        });
    }
    return rows;
}

inline void write_table_csv(std::ostream& out, const ComparisonTable& table) {
    out << "scenario,b,rep,routing_cost,reconfig_count,reconfig_cost,total_cost,hits,misses,"
           "hit_ratio\n";
    auto emit = [&](const ComparisonRow& row, const std::string& rep, const CostLedger& l) {
        out << row.scenario << "," << row.b << "," << rep << "," << l.routing_cost << ","
            << l.reconfig_count << "," << l.reconfig_cost << "," << l.total() << "," << l.hits
            << "," << l.misses << "," << l.hit_ratio << "\n";
    };
    for (const ComparisonRow& row : table.rows) {
        for (std::size_t r = 0; r < row.repetitions.size(); ++r)
            emit(row, std::to_string(r), row.repetitions[r]);
        emit(row, "mean", row.mean);
        emit(row, "min", row.min);
        emit(row, "max", row.max);
    }
}

}  // namespace bmatch
