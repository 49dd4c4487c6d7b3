#pragma once

// Trace ingestion, seeded synthetic generators, and the adaptive adversary
// that drives the lower-bound experiment.

#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "bmatch/core.hpp"
#include "bmatch/offline_oracle.hpp"
#include "bmatch/rng.hpp"
#include "bmatch/topology.hpp"

namespace bmatch {

// Trace file: one request per non-comment line, two distinct node ids
// separated by comma or whitespace; extra columns (timestamps, sizes) are
// ignored; `#` starts a comment. node_count > 0 validates ids against it.
inline Trace parse_trace(std::istream& in, std::size_t node_count = 0) {
    Trace trace;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        for (char& c : line)
            if (c == ',')
                c = ' ';
        std::istringstream ls(line);
        long long u = 0, v = 0;
        if (!(ls >> u))
            continue;  // blank or comment-only line
        if (!(ls >> v) || u < 0 || v < 0)
            throw ParseError(lineno, "expected two node ids");
        if (u == v)
            throw SelfPair(lineno, "request from node " + std::to_string(u) + " to itself");
        if (node_count > 0 && (std::size_t(u) >= node_count || std::size_t(v) >= node_count))
            throw BadNodeId("line " + std::to_string(lineno) + ": node id out of range");
        trace.push_back(Pair::of(NodeId(u), NodeId(v)));
    }
    return trace;
}

inline void write_trace(std::ostream& out, const Trace& trace) {
    for (Pair p : trace)
        out << p.lo << " " << p.hi << "\n";
}

// Non-negative pair weights; sampling requires a positive total.
struct TrafficMatrix {
    std::map<std::uint64_t, double> weights;

    void set(Pair p, double w) {
        if (w < 0)
            throw Error("traffic matrix weight must be non-negative");
        weights[p.key()] = w;
    }

    double total() const {
        double t = 0.0;
        for (const auto& [key, w] : weights)
            t += w;
        return t;
    }
};

// Matrix file: `u v weight` per non-comment line.
inline TrafficMatrix parse_matrix(std::istream& in, std::size_t node_count = 0) {
    TrafficMatrix m;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        for (char& c : line)
            if (c == ',')
                c = ' ';
        std::istringstream ls(line);
        long long u = 0, v = 0;
        double w = 0.0;
        if (!(ls >> u))
            continue;
        if (!(ls >> v >> w) || u < 0 || v < 0 || w < 0)
            throw ParseError(lineno, "expected `u v weight`");
        if (u == v)
            throw SelfPair(lineno, "weight on a self pair");
        if (node_count > 0 && (std::size_t(u) >= node_count || std::size_t(v) >= node_count))
            throw BadNodeId("line " + std::to_string(lineno) + ": node id out of range");
        m.set(Pair::of(NodeId(u), NodeId(v)), w);
    }
    return m;
}

namespace detail {

inline Trace sample_iid(const TrafficMatrix& matrix, std::size_t count, SplitMix64& rng) {
    std::vector<Pair> pairs;
    std::vector<double> cumulative;
    double total = 0.0;
    for (const auto& [key, w] : matrix.weights) {
        if (w <= 0)
            continue;
        total += w;
        pairs.push_back(Pair::from_key(key));
        cumulative.push_back(total);
    }
    if (total <= 0)
        throw DegenerateMatrix("traffic matrix has no positive weight");
    Trace trace;
    trace.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        double x = rng.next_double() * total;
        auto it = std::upper_bound(cumulative.begin(), cumulative.end(), x);
        if (it == cumulative.end())
            --it;
        trace.push_back(pairs[std::size_t(it - cumulative.begin())]);
    }
    return trace;
}

}  // namespace detail

// i.i.d. samples proportional to the matrix weights; identical traces for
// identical (matrix, count, seed).
inline Trace gen_iid(const TrafficMatrix& matrix, std::size_t count, std::uint64_t seed) {
    SplitMix64 rng(seed);
    return detail::sample_iid(matrix, count, rng);
}

// Skewed synthetic workload: all pairs among nodes 0..n_leaves-1 are ranked
// in a seed-determined pseudo-random order (Fisher-Yates over SplitMix64),
// rank r gets weight r^-skew, and requests are sampled i.i.d.
inline Trace gen_zipf(std::size_t n_leaves, double skew, std::size_t count,
                      std::uint64_t seed) {
    if (n_leaves < 2)
        throw Error("gen_zipf requires at least 2 leaves");
    if (!(skew > 0))
        throw Error("gen_zipf requires skew > 0");
    std::vector<Pair> pairs;
    for (NodeId i = 0; i < n_leaves; ++i)
        for (NodeId j = i + 1; j < n_leaves; ++j)
            pairs.push_back(Pair{i, j});
    SplitMix64 rng(seed);
    for (std::size_t i = pairs.size(); i > 1; --i)
        std::swap(pairs[i - 1], pairs[rng.next_below(i)]);
    TrafficMatrix m;
    for (std::size_t r = 0; r < pairs.size(); ++r)
        m.set(pairs[r], std::pow(double(r + 1), -skew));
    return detail::sample_iid(m, count, rng);
}

// Random connected topology: a random spanning tree plus extra edges (each
// remaining pair kept with probability 3/10), integer lengths drawn uniformly
// from 1..max_length.
inline Topology gen_random_connected(std::size_t n, SplitMix64& rng, int max_length = 4) {
    if (n < 2 || max_length < 1)
        throw Error("gen_random_connected requires n >= 2 and max_length >= 1");
    std::vector<EdgeSpec> edges;
    std::vector<std::vector<bool>> present(n, std::vector<bool>(n, false));
    auto draw_length = [&] { return double(1 + rng.next_below(std::uint64_t(max_length))); };
    for (std::size_t v = 1; v < n; ++v) {
        NodeId parent = NodeId(rng.next_below(v));
        edges.push_back({parent, NodeId(v), draw_length()});
        present[parent][v] = true;
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (!present[i][j] && rng.next_below(10) < 3)
                edges.push_back({NodeId(i), NodeId(j), draw_length()});
    return Topology::build(n, edges);
}

// Uniformly random requests over all pairs of 0..n-1.
inline Trace gen_uniform_trace(std::size_t n, std::size_t count, SplitMix64& rng) {
    if (n < 2)
        throw Error("gen_uniform_trace requires n >= 2");
    Trace trace;
    trace.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        NodeId u = NodeId(rng.next_below(n));
        NodeId v = NodeId(rng.next_below(n - 1));
        if (v >= u)
            ++v;
        trace.push_back(Pair::of(u, v));
    }
    return trace;
}

struct AdversaryConfig {
    int b = 1;
    int alpha = 1;        // requests per chunk and reconfiguration cost
    std::size_t k = 0;    // chunk count
    std::size_t leaves = 0;  // 0 picks b+1, the smallest star that always
                             // leaves one spoke unmatched
};

struct AdversaryResult {
    Trace realized;
    double det_cost = 0.0;
    double off_cost = 0.0;
};

// Adaptive lower-bound adversary on a star: before each chunk it inspects the
// algorithm's matching, picks the lowest-indexed spoke not matched to the
// center, and issues alpha requests to it. The algorithm under test must run
// on a star topology with center 0 and expose serve(), matching() and
// alpha(). Afterwards the foresighted offline cost on the realized trace is
// measured.
template <typename Algo>
AdversaryResult run_adversary(const AdversaryConfig& cfg, Algo& algo) {
    if (cfg.b < 1 || cfg.alpha < 1)
        throw Error("adversary requires b >= 1 and alpha >= 1");
    std::size_t leaves = cfg.leaves == 0 ? std::size_t(cfg.b) + 1 : cfg.leaves;
    if (leaves < std::size_t(cfg.b) + 1)
        throw Error("adversary requires at least b+1 leaves");

    AdversaryResult result;
    result.realized.reserve(cfg.k * std::size_t(cfg.alpha));
    for (std::size_t chunk = 0; chunk < cfg.k; ++chunk) {
        NodeId spoke = 0;
        for (NodeId leaf = 1; leaf <= leaves; ++leaf) {
            if (!algo.matching().contains(Pair::of(0, leaf))) {
                spoke = leaf;
                break;
            }
        }
        if (spoke == 0)
            throw InvariantViolation("no unmatched spoke at chunk start");
        Pair request = Pair::of(0, spoke);
        for (int i = 0; i < cfg.alpha; ++i) {
            auto outcome = algo.serve(request);
            result.det_cost += outcome.routing_cost + algo.alpha() * outcome.reconfig_events;
            result.realized.push_back(request);
        }
    }
    result.off_cost = belady_off_cost(cfg.b, cfg.alpha, result.realized);
    return result;
}

}  // namespace bmatch
