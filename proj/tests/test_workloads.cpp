#include <catch2/catch.hpp>

#include <cmath>
#include <map>
#include <sstream>

#include "bmatch/bma.hpp"
#include "bmatch/workloads.hpp"

using namespace bmatch;

TEST_CASE("parse_trace canonicalizes pairs and skips extra columns") {
    std::istringstream in("0 1\n1 0\n");
    Trace t = parse_trace(in);
    REQUIRE(t.size() == 2);
    CHECK(t[0] == Pair::of(0, 1));
    CHECK(t[1] == Pair::of(0, 1));

    std::istringstream timestamped("0,1,1588000000\n");
    Trace t2 = parse_trace(timestamped);
    REQUIRE(t2.size() == 1);
    CHECK(t2[0] == Pair::of(0, 1));

    std::istringstream commented("# header\n\n2 3 99 extra\n");
    Trace t3 = parse_trace(commented);
    REQUIRE(t3.size() == 1);
    CHECK(t3[0] == Pair::of(2, 3));
}

TEST_CASE("parse_trace reports the offending line") {
    std::istringstream self("0 1\n3 3\n");
    try {
        parse_trace(self);
        FAIL("expected SelfPair");
    } catch (const SelfPair& e) {
        CHECK(e.line() == 2);
    }

    std::istringstream garbage("0 x\n");
    CHECK_THROWS_AS(parse_trace(garbage), ParseError);

    std::istringstream out_of_range("0 7\n");
    CHECK_THROWS_AS(parse_trace(out_of_range, 4), BadNodeId);
}

TEST_CASE("traces round-trip through the file format") {
    Trace t{Pair::of(0, 1), Pair::of(2, 5), Pair::of(0, 1)};
    std::ostringstream out;
    write_trace(out, t);
    std::istringstream in(out.str());
    CHECK(parse_trace(in) == t);
}

TEST_CASE("gen_iid follows the matrix") {
    TrafficMatrix single;
    single.set(Pair::of(0, 1), 3.0);
    Trace t = gen_iid(single, 50, 9);
    for (Pair p : t)
        CHECK(p == Pair::of(0, 1));

    TrafficMatrix two;
    two.set(Pair::of(0, 1), 1.0);
    two.set(Pair::of(2, 3), 1.0);
    CHECK(gen_iid(two, 100, 5) == gen_iid(two, 100, 5));
    CHECK(gen_iid(two, 100, 5) != gen_iid(two, 100, 6));

    TrafficMatrix zero;
    zero.set(Pair::of(0, 1), 0.0);
    CHECK_THROWS_AS(gen_iid(zero, 10, 1), DegenerateMatrix);
}

TEST_CASE("gen_iid is uniform when the matrix is uniform") {
    TrafficMatrix uniform;
    std::vector<Pair> pairs;
    for (NodeId i = 0; i < 5; ++i)
        for (NodeId j = i + 1; j < 5; ++j) {
            uniform.set(Pair{i, j}, 1.0);
            pairs.push_back(Pair{i, j});
        }
    const std::size_t n = 20000;
    Trace t = gen_iid(uniform, n, 1234);
    std::map<std::uint64_t, std::size_t> freq;
    for (Pair p : t)
        ++freq[p.key()];
    const double expected = double(n) / double(pairs.size());
    const double sigma = std::sqrt(double(n) * (1.0 / pairs.size()) *
                                   (1.0 - 1.0 / pairs.size()));
    for (Pair p : pairs)
        CHECK(std::abs(double(freq[p.key()]) - expected) <= 3.0 * sigma);
}

TEST_CASE("gen_zipf is deterministic and top-heavy") {
    Trace a = gen_zipf(10, 1.2, 20000, 77);
    Trace b = gen_zipf(10, 1.2, 20000, 77);
    CHECK(a == b);

    std::map<std::uint64_t, std::size_t> freq;
    for (Pair p : a)
        ++freq[p.key()];
    std::size_t best = 0, second = 0;
    for (const auto& [key, count] : freq) {
        if (count > best) {
            second = best;
            best = count;
        } else if (count > second) {
            second = count;
        }
    }
    CHECK(best > second);
    CHECK(double(best) / double(a.size()) > 0.15);  // rank-1 mass for s=1.2 over 45 pairs
}

TEST_CASE("gen_zipf with a vanishing skew approaches uniform") {
    const std::size_t n = 20000;
    Trace t = gen_zipf(10, 1e-6, n, 5);
    std::map<std::uint64_t, std::size_t> freq;
    for (Pair p : t)
        ++freq[p.key()];
    const double m = 45.0;
    const double expected = double(n) / m;
    const double sigma = std::sqrt(double(n) * (1.0 / m) * (1.0 - 1.0 / m));
    for (const auto& [key, count] : freq)
        CHECK(std::abs(double(count) - expected) <= 3.5 * sigma);
}

TEST_CASE("adversary without enough counter pressure leaves the algorithm idle") {
    Topology star = Topology::star(2);
    BmaState st(star, 1, 3.0);  // spoke threshold 6 > chunk length 3
    AdversaryConfig cfg{1, 3, 1};
    AdversaryResult res = run_adversary(cfg, st);
    CHECK(res.det_cost == 3.0);
    CHECK(res.realized == Trace(3, Pair::of(0, 1)));
    CHECK(res.off_cost == 4.0);  // one serve plus one installation
}

TEST_CASE("adversary with zero chunks does nothing") {
    Topology star = Topology::star(2);
    BmaState st(star, 1, 2.0);
    AdversaryConfig cfg{1, 2, 0};
    AdversaryResult res = run_adversary(cfg, st);
    CHECK(res.realized.empty());
    CHECK(res.det_cost == 0.0);
    CHECK(res.off_cost == 0.0);
}

TEST_CASE("adversary always targets an unmatched spoke and costs at least alpha per chunk") {
    for (int b : {1, 2}) {
        const int alpha = 6;
        const std::size_t k = 50;
        Topology star = Topology::star(std::size_t(b) + 1);
        BmaState st(star, b, double(alpha));
        AdversaryConfig cfg{b, alpha, k};
        AdversaryResult res = run_adversary(cfg, st);

        REQUIRE(res.realized.size() == k * std::size_t(alpha));
        for (Pair p : res.realized) {
            CHECK(p.lo == 0);
            CHECK(p.hi >= 1);
            CHECK(p.hi <= NodeId(b) + 1);
        }
        CHECK(res.det_cost >= double(k * std::size_t(alpha)));

        // replaying the realized trace reproduces the same cost and confirms
        // each chunk's spoke was unmatched when the chunk began
        BmaState replay(star, b, double(alpha));
        double replay_cost = 0.0;
        for (std::size_t i = 0; i < res.realized.size(); ++i) {
            if (i % std::size_t(alpha) == 0)
                CHECK_FALSE(replay.matching().contains(res.realized[i]));
            auto out = replay.serve(res.realized[i]);
            replay_cost += out.routing_cost + replay.alpha() * out.reconfig_events;
        }
        CHECK(replay_cost == res.det_cost);
    }
}

TEST_CASE("parse_matrix reads weights and validates lines") {
    std::istringstream in("# rack-to-rack weights\n0 1 2.5\n2,3,0.5\n");
    TrafficMatrix m = parse_matrix(in);
    CHECK(m.weights.at(Pair::of(0, 1).key()) == 2.5);
    CHECK(m.weights.at(Pair::of(2, 3).key()) == 0.5);
    CHECK(m.total() == 3.0);

    std::istringstream self("1 1 4\n");
    CHECK_THROWS_AS(parse_matrix(self), SelfPair);
    std::istringstream negative("0 1 -1\n");
    CHECK_THROWS_AS(parse_matrix(negative), ParseError);
    std::istringstream out_of_range("0 9 1\n");
    CHECK_THROWS_AS(parse_matrix(out_of_range, 4), BadNodeId);
}

TEST_CASE("adversary honours a larger configured star") {
    const int b = 1, alpha = 2;
    Topology star = Topology::star(4);
    BmaState st(star, b, double(alpha));
    AdversaryConfig cfg{b, alpha, 6, 4};
    AdversaryResult res = run_adversary(cfg, st);
    REQUIRE(res.realized.size() == 12);
    for (Pair p : res.realized)
        CHECK(p.hi <= 4);
    CHECK(res.det_cost >= 12.0);
    CHECK(run_adversary(cfg, st).det_cost >= 0.0);  // reusable on the same state
}

TEST_CASE("random connected generator is reproducible and valid") {
    SplitMix64 a(99), b(99);
    Topology ta = gen_random_connected(12, a, 4);
    Topology tb = gen_random_connected(12, b, 4);
    REQUIRE(ta.fixed_edges().size() == tb.fixed_edges().size());
    for (std::size_t i = 0; i < ta.fixed_edges().size(); ++i) {
        CHECK(ta.fixed_edges()[i].first == tb.fixed_edges()[i].first);
        CHECK(ta.fixed_edges()[i].second == tb.fixed_edges()[i].second);
        CHECK(ta.fixed_edges()[i].second >= 1.0);
        CHECK(ta.fixed_edges()[i].second <= 4.0);
    }
}
