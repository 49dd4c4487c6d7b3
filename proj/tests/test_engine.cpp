#include <catch2/catch.hpp>

#include <fstream>
#include <sstream>

#include "bmatch/engine.hpp"
#include "test_util.hpp"

using namespace bmatch;

namespace {

SimConfig k2_config(Algorithm alg) {
    SimConfig cfg;
    cfg.topology = "complete:2";
    cfg.workload = "inline:0 1;0 1;0 1;0 1;0 1";
    cfg.algorithm = alg;
    cfg.b = 1;
    cfg.alpha = 2.0;
    return cfg;
}

}  // namespace

TEST_CASE("run_trace accounts the promoted-pair scenario exactly") {
    Topology k2 = Topology::complete(2);
    Trace trace(5, Pair::of(0, 1));

    RunResult bma = run_trace(k2, trace, Algorithm::Bma, 1, 2.0);
    CHECK(bma.ledger.routing_cost == 4.0);
    CHECK(bma.ledger.reconfig_count == 1);
    CHECK(bma.ledger.reconfig_cost == 2.0);
    CHECK(bma.ledger.hits == 1);
    CHECK(bma.ledger.misses == 4);
    CHECK(bma.ledger.total() == 6.0);
    CHECK(hit_ratio(bma.ledger) == Approx(0.2));
    CHECK(bma.final_matching == std::vector<Pair>{Pair{0, 1}});

    RunResult obl = run_trace(k2, trace, Algorithm::Oblivious, 1, 2.0);
    CHECK(obl.ledger.routing_cost == 5.0);
    CHECK(obl.ledger.reconfig_count == 0);
    CHECK(obl.ledger.hits == 0);

    RunResult stat = run_trace(k2, trace, Algorithm::StaticGreedy, 1, 2.0);
    CHECK(stat.ledger.routing_cost == 0.0);
    CHECK(stat.ledger.hits == 5);
    CHECK(hit_ratio(stat.ledger) == 1.0);

    LedgerOptions setup;
    setup.include_setup = true;
    RunResult paid = run_trace(k2, trace, Algorithm::StaticExact, 1, 2.0, setup);
    CHECK(paid.ledger.reconfig_cost == 2.0);
    CHECK(paid.ledger.hits == 5);
    CHECK(paid.ledger.misses == 0);
}

TEST_CASE("hit ratio handles the degenerate cases") {
    CostLedger empty;
    CHECK(hit_ratio(empty) == 0.0);

    std::vector<char> stream{1, 1, 0, 1};
    auto series = windowed_hit_ratio(stream, 2);
    REQUIRE(series.size() == 4);
    CHECK(series[0] == 1.0);
    CHECK(series[1] == 1.0);
    CHECK(series[2] == 0.5);
    CHECK(series[3] == 0.5);
    CHECK_THROWS_AS(windowed_hit_ratio(stream, 0), Error);
}

TEST_CASE("ledger totals equal an independent replay of the outcome stream") {
    SplitMix64 rng(61);
    Topology t = gen_random_connected(7, rng, 3);
    Trace trace = gen_uniform_trace(7, 400, rng);

    RunResult res = run_trace(t, trace, Algorithm::Bma, 2, 3.0);

    BmaState st(t, 2, 3.0);
    double routing = 0.0;
    std::uint64_t hits = 0, adds = 0, evicts = 0;
    for (Pair p : trace) {
        auto out = st.serve(p);
        routing += out.routing_cost;
        hits += out.hit ? 1 : 0;
        adds += out.added ? 1 : 0;
        evicts += out.evicted.size();
        REQUIRE(adds >= evicts);  // nothing can leave before it entered
    }
    CHECK(res.ledger.routing_cost == routing);
    CHECK(res.ledger.hits == hits);
    CHECK(res.ledger.reconfig_count == adds + evicts);
    CHECK(res.ledger.total() == routing + 3.0 * double(adds + evicts));
}

TEST_CASE("run is deterministic for a fixed config and seed") {
    SimConfig cfg;
    cfg.topology = "leaf-spine:10,2";
    cfg.workload = "zipf:10,1.2,2000";
    cfg.algorithm = Algorithm::Bma;
    cfg.b = 2;
    cfg.alpha = 6.0;
    cfg.seed = 9;
    cfg.repetitions = 3;
    cfg.series_stride = 500;

    RunReport a = run(cfg);
    RunReport b = run(cfg);
    CHECK(report_to_json(a, false) == report_to_json(b, false));
    CHECK(a.repetitions.size() == 3);

    cfg.seed = 10;
    RunReport c = run(cfg);
    CHECK(report_to_json(a, false) != report_to_json(c, false));
}

TEST_CASE("report json aggregates match the repetition ledgers") {
    SimConfig cfg;
    cfg.topology = "leaf-spine:8,2";
    cfg.workload = "zipf:8,1.0,500";
    cfg.algorithm = Algorithm::BmaLru;
    cfg.b = 2;
    cfg.alpha = 2.0;
    cfg.repetitions = 4;
    RunReport report = run(cfg);
    nlohmann::json j = report_to_json(report, false);

    double sum = 0.0, lo = 1e300, hi = -1e300;
    for (const auto& rep : j.at("repetitions")) {
        double v = rep.at("total_cost").get<double>();
        sum += v;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    CHECK(j.at("totals").at("total_cost").get<double>() ==
          Approx(sum / double(report.repetitions.size())));
    CHECK(j.at("totals_min").at("total_cost").get<double>() == Approx(lo));
    CHECK(j.at("totals_max").at("total_cost").get<double>() == Approx(hi));
}

TEST_CASE("compare shares traces and orders scenarios as configured") {
    SimConfig obl = k2_config(Algorithm::Oblivious);
    SimConfig stat = k2_config(Algorithm::StaticGreedy);
    ComparisonTable table = compare({obl, stat});
    REQUIRE(table.rows.size() == 2);
    CHECK(table.rows[0].scenario == "oblivious");
    CHECK(table.rows[1].scenario == "static");
    CHECK(table.rows[1].mean.total() <= table.rows[0].mean.total());

    ComparisonTable single = compare({k2_config(Algorithm::Bma)});
    REQUIRE(single.rows.size() == 1);
    CHECK(single.rows[0].mean.total() == 6.0);
}

TEST_CASE("compare rejects configs with different workloads") {
    SimConfig a = k2_config(Algorithm::Bma);
    SimConfig b = k2_config(Algorithm::BmaLru);
    b.workload = "inline:0 1";
    CHECK_THROWS_AS(compare({a, b}), IncompatibleConfigs);
    b = k2_config(Algorithm::BmaLru);
    b.seed = 99;
    CHECK_THROWS_AS(compare({a, b}), IncompatibleConfigs);
}

TEST_CASE("both eviction policies agree when choices are forced") {
    SimConfig a;
    a.topology = "star:2";
    a.workload = "inline:0 1;0 1;0 2;0 2;0 2;0 2;0 1;0 1;0 1;0 1";
    a.algorithm = Algorithm::Bma;
    a.b = 1;
    a.alpha = 1.0;
    SimConfig b = a;
    b.algorithm = Algorithm::BmaLru;
    ComparisonTable table = compare({a, b});
    CHECK(ledger_to_json(table.rows[0].mean) == ledger_to_json(table.rows[1].mean));
}

TEST_CASE("table csv lists one row per repetition plus aggregates") {
    ComparisonTable table =
        compare({k2_config(Algorithm::Oblivious), k2_config(Algorithm::Bma)});
    std::ostringstream out;
    write_table_csv(out, table);
    std::istringstream in(out.str());
    std::string line;
    std::vector<std::string> lines;
    while (std::getline(in, line))
        lines.push_back(line);
    REQUIRE(lines.size() == 1 + 2 * 4);  // header + (1 rep + mean/min/max) per row
    CHECK(lines[0] ==
          "scenario,b,rep,routing_cost,reconfig_count,reconfig_cost,total_cost,hits,misses,"
          "hit_ratio");
    CHECK(lines[1].rfind("oblivious,1,0,", 0) == 0);
}

TEST_CASE("topology and workload specs are validated") {
    CHECK(make_topology("complete:4").node_count() == 4);
    CHECK(make_topology("star:3").node_count() == 4);
    CHECK(make_topology("leaf-spine:4,2").node_count() == 6);
    CHECK(make_topology("complete:3,2.5").ell_max() == 2.5);
    CHECK_THROWS_AS(make_topology("complete"), ConfigError);
    CHECK_THROWS_AS(make_topology("ring:5"), ConfigError);
    CHECK_THROWS_AS(make_topology("complete:x"), ConfigError);

    Topology t = make_topology("complete:4");
    CHECK(make_workload("inline:0 1;2 3", t, 1) == Trace{Pair{0, 1}, Pair{2, 3}});
    CHECK(make_workload("zipf:4,1.0,100", t, 7) == make_workload("zipf:4,1.0,100", t, 7));
    CHECK_THROWS_AS(make_workload("nope:1", t, 1), ConfigError);
    CHECK_THROWS_AS(make_workload("trace:/does/not/exist", t, 1), ConfigError);
}

TEST_CASE("matrix workloads sample through the engine spec") {
    Topology t = make_topology("complete:4");
    std::string path = "engine_matrix.tmp";
    {
        std::ofstream out(path);
        out << "0 1 1.0\n2 3 3.0\n";
    }
    Trace trace = make_workload("iid:" + path + ",2000", t, 11);
    REQUIRE(trace.size() == 2000);
    std::size_t heavy = 0;
    for (Pair p : trace) {
        bool known = p == Pair::of(0, 1) || p == Pair::of(2, 3);
        REQUIRE(known);
        heavy += p == Pair::of(2, 3) ? 1 : 0;
    }
    CHECK(heavy > 1200);  // 3:1 weights
    CHECK(heavy < 1800);
    std::remove(path.c_str());
}

TEST_CASE("trace workloads support offset and limit slicing") {
    Topology t = make_topology("complete:4");
    std::string path = "slice_test_trace.tmp";
    {
        std::ofstream out(path);
        out << "0 1\n0 2\n0 3\n1 2\n1 3\n";
    }
    CHECK(make_workload("trace:" + path, t, 1).size() == 5);
    Trace sliced = make_workload("trace:" + path + ",1,2", t, 1);
    CHECK(sliced == Trace{Pair{0, 2}, Pair{0, 3}});
    CHECK(make_workload("trace:" + path + ",4,9", t, 1).size() == 1);
    std::remove(path.c_str());
}

TEST_CASE("run_trace propagates oracle and option errors") {
    Topology big = Topology::leaf_spine(20, 2);
    Trace trace(4, Pair::of(0, 1));
    CHECK_THROWS_AS(run_trace(big, trace, Algorithm::StaticExact, 2, 1.0),
                    StateSpaceTooLarge);

    LedgerOptions bad;
    bad.window = 0;
    CHECK_THROWS_AS(run_trace(Topology::complete(2), trace, Algorithm::Bma, 1, 1.0, bad),
                    ConfigError);
}

TEST_CASE("windowed hit ratio mean respects the warm-up") {
    Topology k2 = Topology::complete(2);
    Trace trace(10, Pair::of(0, 1));
    LedgerOptions opt;
    opt.window = 1;
    opt.hit_warmup = 4;  // under alpha=2 / threshold 4, steps 5..10 are hits
    RunResult res = run_trace(k2, trace, Algorithm::Bma, 1, 2.0, opt);
    CHECK(res.ledger.window_hit_ratio_mean == 1.0);
}
