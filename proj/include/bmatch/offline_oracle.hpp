#pragma once

// Brute-force ground truth at desk scale: the exact dynamic offline optimum
// by dynamic programming over all b-matchings, the exact static optimum by
// enumeration, and the foresighted offline strategy for star chunk traces.
// State-space blowups are a hard error, never a silent approximation.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <vector>

#include "bmatch/baselines.hpp"
#include "bmatch/core.hpp"
#include "bmatch/matching.hpp"
#include "bmatch/topology.hpp"

namespace bmatch {

constexpr std::size_t kDefaultStateCap = 100000;

// A b-matching encoded as a sorted vector of pair keys.
using MatchingSet = std::vector<std::uint64_t>;

// Every subset of node pairs satisfying the degree cap, each exactly once.
// Enumeration order is deterministic: pairs are considered in canonical
// order, excluded before included, so the empty matching comes first.
inline std::vector<MatchingSet> enumerate_b_matchings(std::size_t n, int b,
                                                      std::size_t state_cap = kDefaultStateCap) {
    if (n < 1 || b < 1)
        throw Error("enumerate_b_matchings requires n >= 1 and b >= 1");
    std::vector<Pair> pairs;
    for (NodeId i = 0; i < n; ++i)
        for (NodeId j = i + 1; j < n; ++j)
            pairs.push_back(Pair{i, j});

    std::vector<MatchingSet> out;
    std::vector<int> degree(n, 0);
    MatchingSet current;
    auto visit = [&](auto&& self, std::size_t idx) -> void {
        if (idx == pairs.size()) {
            if (out.size() >= state_cap)
                throw StateSpaceTooLarge("more than " + std::to_string(state_cap) +
                                         " b-matchings on " + std::to_string(n) + " nodes");
            out.push_back(current);
            return;
        }
        self(self, idx + 1);
        Pair p = pairs[idx];
        if (degree[p.lo] < b && degree[p.hi] < b) {
            ++degree[p.lo];
            ++degree[p.hi];
            current.push_back(p.key());
            self(self, idx + 1);
            current.pop_back();
            --degree[p.lo];
            --degree[p.hi];
        }
    };
    visit(visit, 0);
    // keys were pushed in increasing canonical order, so each set is sorted
    return out;
}

namespace detail {

inline bool set_contains(const MatchingSet& m, std::uint64_t key) {
    return std::binary_search(m.begin(), m.end(), key);
}

inline std::size_t symmetric_difference_size(const MatchingSet& a, const MatchingSet& b) {
    std::size_t i = 0, j = 0, d = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) {
            ++i;
            ++j;
        } else if (a[i] < b[j]) {
            ++i;
            ++d;
        } else {
            ++j;
            ++d;
        }
    }
    return d + (a.size() - i) + (b.size() - j);
}

}  // namespace detail

// Exact offline optimum: minimum over all matching schedules of serving costs
// plus alpha per pair added or removed. The order within a step is
// serve-then-reconfigure and the initial matching is empty, so the very first
// request is always served on the fixed network.
inline double dp_opt(const Topology& topo, int b, double alpha, const Trace& trace,
                     std::size_t state_cap = kDefaultStateCap) {
    if (trace.empty())
        return 0.0;
    const auto states = enumerate_b_matchings(topo.node_count(), b, state_cap);
    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> cost(states.size(), kInf);
    cost[0] = 0.0;  // states[0] is the empty matching
    std::vector<double> served(states.size());
    std::vector<double> next(states.size());
    for (Pair req : trace) {
        const std::uint64_t key = req.key();
        const double ell = topo.distance(req);
        for (std::size_t i = 0; i < states.size(); ++i)
            served[i] = cost[i] == kInf
                            ? kInf
                            : cost[i] + (detail::set_contains(states[i], key) ? 0.0 : ell);
        for (std::size_t j = 0; j < states.size(); ++j) {
            double best = kInf;
            for (std::size_t i = 0; i < states.size(); ++i) {
                if (served[i] == kInf)
                    continue;
                double c = served[i] +
                           alpha * double(detail::symmetric_difference_size(states[i], states[j]));
                best = std::min(best, c);
            }
            next[j] = best;
        }
        cost.swap(next);
    }
    return *std::min_element(cost.begin(), cost.end());
}

// Exact static optimum: the b-matching maximizing the saved weight
// sum of count(e) * distance(e) over matched pairs. Ties break toward the
// earlier matching in enumeration order.
inline std::pair<BMatching, double> exact_static(const Topology& topo,
                                                 const PairFrequency& freq, int b,
                                                 std::size_t state_cap = kDefaultStateCap) {
    const auto states = enumerate_b_matchings(topo.node_count(), b, state_cap);
    double best_weight = -1.0;
    const MatchingSet* best = nullptr;
    for (const MatchingSet& m : states) {
        double w = 0.0;
        for (std::uint64_t key : m) {
            Pair p = Pair::from_key(key);
            w += double(freq.get(p)) * topo.distance(p);
        }
        if (w > best_weight) {
            best_weight = w;
            best = &m;
        }
    }
    BMatching result(topo.node_count(), b);
    for (std::uint64_t key : *best)
        result.add(Pair::from_key(key));
    return {std::move(result), best_weight};
}

// Cheapest cost achievable by any single matching chosen with hindsight and
// evaluated in the dynamic cost model: the first request is served on the
// fixed network, then the matching is installed once (alpha per pair) and
// never changed. The empty matching is included, so the result never exceeds
// the oblivious cost, and every candidate is a feasible schedule, so the
// result never undercuts dp_opt.
inline double best_static_schedule_cost(const Topology& topo, const Trace& trace, int b,
                                        double alpha,
                                        std::size_t state_cap = kDefaultStateCap) {
    if (trace.empty())
        return 0.0;
    const auto states = enumerate_b_matchings(topo.node_count(), b, state_cap);
    double best = std::numeric_limits<double>::infinity();
    for (const MatchingSet& m : states) {
        double c = topo.distance(trace.front()) + alpha * double(m.size());
        for (std::size_t t = 1; t < trace.size(); ++t)
            if (!detail::set_contains(m, trace[t].key()))
                c += topo.distance(trace[t]);
        best = std::min(best, c);
    }
    return best;
}

// Foresighted offline strategy for star chunk traces (center node 0, unit
// spokes). Maintains up to b matched spokes; a request to an unmatched spoke
// is served on the fixed network (cost 1) and the spoke is then installed,
// evicting — once the matching is full — the matched spoke whose next
// request lies farthest in the future. Reconfiguration costs alpha per spoke
// added or removed. Returns the measured total.
inline double belady_off_cost(int b, int alpha, const Trace& trace) {
    if (b < 1 || alpha < 1)
        throw Error("belady_off_cost requires b >= 1 and alpha >= 1");
    if (trace.size() % std::size_t(alpha) != 0)
        throw MalformedChunkTrace("trace length " + std::to_string(trace.size()) +
                                  " is not a multiple of the chunk size " +
                                  std::to_string(alpha));
    std::map<NodeId, std::vector<std::size_t>> positions;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        if (trace[i].lo != 0)
            throw MalformedChunkTrace("request " + to_string(trace[i]) + " at position " +
                                      std::to_string(i) + " is not a center-spoke pair");
        positions[trace[i].hi].push_back(i);
    }

    constexpr std::size_t kNever = std::numeric_limits<std::size_t>::max();
    auto next_request_after = [&](NodeId spoke, std::size_t i) -> std::size_t {
        const auto& pos = positions[spoke];
        auto it = std::upper_bound(pos.begin(), pos.end(), i);
        return it == pos.end() ? kNever : *it;
    };

    std::vector<NodeId> matched;
    double total = 0.0;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        NodeId spoke = trace[i].hi;
        if (std::find(matched.begin(), matched.end(), spoke) != matched.end())
            continue;  // served by the matching edge, cost 0
        total += 1.0;  // unit spoke on the fixed network
        if (matched.size() < std::size_t(b)) {
            matched.push_back(spoke);
            total += alpha;
        } else {
            std::size_t victim = 0;
            std::size_t victim_next = 0;
            for (std::size_t j = 0; j < matched.size(); ++j) {
                std::size_t nxt = next_request_after(matched[j], i);
                if (j == 0 || nxt > victim_next ||
                    (nxt == victim_next && matched[j] < matched[victim])) {
                    victim = j;
                    victim_next = nxt;
                }
            }
            matched[victim] = spoke;
            total += 2.0 * alpha;
        }
    }
    return total;
}

// Comparison of a measured online run against the exact offline optimum and
// the proven guarantee cost(on) <= factor * opt + beta with
// factor = 12 * (b+1) * (1 + ell_max/alpha) and
// beta = 4 * |pairs| * (alpha + ell_max).
struct OracleComparison {
    double alg_cost = 0.0;
    double opt_cost = 0.0;
    double additive_beta = 0.0;
    double bound_factor = 0.0;
    bool bound_satisfied = false;
    std::optional<double> empirical_ratio;  // unset when opt_cost == 0
};

inline OracleComparison verify_bound(const Topology& topo, int b, double alpha,
                                     const Trace& trace, double alg_cost,
                                     std::size_t state_cap = kDefaultStateCap) {
    OracleComparison oc;
    oc.alg_cost = alg_cost;
    oc.opt_cost = dp_opt(topo, b, alpha, trace, state_cap);
    oc.additive_beta = 4.0 * double(topo.pair_count()) * (alpha + topo.ell_max());
    oc.bound_factor = 12.0 * double(b + 1) * (1.0 + topo.ell_max() / alpha);
    oc.bound_satisfied =
        alg_cost <= oc.bound_factor * oc.opt_cost + oc.additive_beta + 1e-9;
    if (oc.opt_cost > 0)
        oc.empirical_ratio = std::max(0.0, alg_cost - oc.additive_beta) / oc.opt_cost;
    return oc;
}

}  // namespace bmatch
