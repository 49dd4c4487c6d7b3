#pragma once

// The online b-matching algorithm. Each node pair carries a counter that is
// bumped on every paid (unmatched) request; a pair whose counter reaches
// threshold(pair) = 2 * ceil(alpha / distance(pair)) is "saturated" and gets
// promoted into the matching, unless promoting it would leave an endpoint
// with more than `b` saturated incident pairs — in that case all counters at
// that endpoint are reset instead (a desaturation event).
//
// The state maintains four invariants between requests:
//   - counter:            0 <= counter(e) <= threshold(e)
//   - saturation:         counter(e) == threshold(e)  implies  e in M
//   - matching:           e in M  implies  counter(e) in {0, threshold(e)}
//   - saturation degree:  every node has at most b saturated incident pairs
//
// Eviction only ever removes a matched pair whose counter is exactly 0; a
// candidate always exists when an eviction is required.

#include <cmath>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "bmatch/core.hpp"
#include "bmatch/matching.hpp"
#include "bmatch/topology.hpp"

namespace bmatch {

// 2 * ceil(alpha / ell); always even and at least 2. The tiny slack keeps
// exact integer ratios from rounding up through float noise.
inline int threshold(double alpha, double ell) {
    if (!(alpha > 0) || !(ell > 0))
        throw Error("threshold requires alpha > 0 and ell > 0");
    long long c = (long long)std::ceil(alpha / ell - 1e-9);
    if (c < 1)
        c = 1;
    return int(2 * c);
}

// Per-pair request counters; absent entries are 0.
class CounterTable {
public:
    explicit CounterTable(double alpha) : alpha_(alpha) {
        if (!(alpha > 0))
            throw Error("alpha must be positive");
    }

    double alpha() const { return alpha_; }

    int get(Pair p) const {
        auto it = cnt_.find(p.key());
        return it == cnt_.end() ? 0 : it->second;
    }

    void set(Pair p, int value) {
        if (value < 0)
            throw Error("counter value must be non-negative");
        if (value == 0)
            cnt_.erase(p.key());
        else
            cnt_[p.key()] = value;
    }

    const std::unordered_map<std::uint64_t, int>& nonzero() const { return cnt_; }

private:
    double alpha_;
    std::unordered_map<std::uint64_t, int> cnt_;
};

enum class EvictionPolicy {
    MinPairId,          // smallest canonical pair among eligible
    LeastRecentlyUsed,  // least recent request among eligible
};

// Record of everything one request did to the state.
struct StepOutcome {
    bool hit = false;
    double routing_cost = 0.0;           // distance of the pair if missed, 0 on hit
    std::vector<NodeId> desaturated_at;  // endpoints where counters were reset (0-2)
    std::vector<Pair> evicted;           // pairs removed from the matching (0-2)
    std::optional<Pair> added;           // pair promoted into the matching
    int reconfig_events = 0;             // |evicted| + (added ? 1 : 0)
};

// Reports violations of the four state invariants (empty means healthy).
// Free-standing so tests can probe hand-built states.
inline std::vector<std::string> check_invariants(const Topology& topo,
                                                 const BMatching& matching,
                                                 const CounterTable& counters, int b) {
    std::vector<std::string> report;
    std::vector<int> saturated_at(topo.node_count(), 0);
    for (const auto& [key, c] : counters.nonzero()) {
        Pair p = Pair::from_key(key);
        int th = threshold(counters.alpha(), topo.distance(p));
        if (c < 0 || c > th)
            report.push_back("counter invariant: pair " + to_string(p) + " has counter " +
                             std::to_string(c) + " outside [0," + std::to_string(th) + "]");
        if (c == th) {
            ++saturated_at[p.lo];
            ++saturated_at[p.hi];
            if (!matching.contains(p))
                report.push_back("saturation invariant: pair " + to_string(p) +
                                 " saturated but not matched");
        }
    }
    for (Pair p : matching.pairs()) {
        int c = counters.get(p);
        int th = threshold(counters.alpha(), topo.distance(p));
        if (c != 0 && c != th)
            report.push_back("matching invariant: pair " + to_string(p) +
                             " matched with counter " + std::to_string(c) +
                             " (expected 0 or " + std::to_string(th) + ")");
    }
    for (NodeId w = 0; w < topo.node_count(); ++w) {
        if (saturated_at[w] > b)
            report.push_back("saturation degree invariant: node " + std::to_string(w) +
                             " has " + std::to_string(saturated_at[w]) +
                             " saturated pairs, cap " + std::to_string(b));
        if (matching.degree(w) > b)
            report.push_back("degree cap: node " + std::to_string(w) + " has degree " +
                             std::to_string(matching.degree(w)) + " > " + std::to_string(b));
    }
    return report;
}

class BmaState {
public:
    BmaState(const Topology& topo, int b, double alpha,
             EvictionPolicy policy = EvictionPolicy::MinPairId)
        : topo_(&topo),
          matching_(topo.node_count(), b),
          counters_(alpha),
          b_(b),
          policy_(policy),
          saturated_count_(topo.node_count(), 0),
          touched_(topo.node_count()) {}

    const Topology& topology() const { return *topo_; }
    const BMatching& matching() const { return matching_; }
    const CounterTable& counters() const { return counters_; }
    int b() const { return b_; }
    double alpha() const { return counters_.alpha(); }
    EvictionPolicy policy() const { return policy_; }

    int counter(Pair p) const { return counters_.get(p); }
    int threshold_of(Pair p) const { return threshold(counters_.alpha(), topo_->distance(p)); }
    bool saturated(Pair p) const { return counters_.get(p) == threshold_of(p); }

    std::vector<Pair> saturated_pairs() const {
        std::vector<Pair> out;
        for (const auto& [key, c] : counters_.nonzero()) {
            Pair p = Pair::from_key(key);
            if (c == threshold_of(p))
                out.push_back(p);
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    std::vector<std::string> check() const {
        auto report = check_invariants(*topo_, matching_, counters_, b_);
        // internal bookkeeping consistency
        std::vector<int> sat(topo_->node_count(), 0);
        std::vector<std::size_t> touched(topo_->node_count(), 0);
        for (const auto& [key, c] : counters_.nonzero()) {
            Pair p = Pair::from_key(key);
            ++touched[p.lo];
            ++touched[p.hi];
            if (c == threshold_of(p)) {
                ++sat[p.lo];
                ++sat[p.hi];
            }
        }
        for (NodeId w = 0; w < topo_->node_count(); ++w) {
            if (sat[w] != saturated_count_[w])
                report.push_back("internal: saturated count at node " + std::to_string(w) +
                                 " is " + std::to_string(saturated_count_[w]) + ", recount " +
                                 std::to_string(sat[w]));
            if (touched[w] != touched_[w].size())
                report.push_back("internal: touched set at node " + std::to_string(w) +
                                 " has " + std::to_string(touched_[w].size()) +
                                 " entries, recount " + std::to_string(touched[w]));
        }
        return report;
    }

    StepOutcome serve(Pair request) {
        if (request.hi >= topo_->node_count())
            throw BadNodeId("request " + to_string(request) + " out of range");
        if (policy_ == EvictionPolicy::LeastRecentlyUsed)
            recency_[request.key()] = ++clock_;

        StepOutcome out;
        if (matching_.contains(request)) {
            out.hit = true;
            return out;
        }

        out.routing_cost = topo_->distance(request);
        const int th = threshold_of(request);
        set_counter(request, counters_.get(request) + 1, th);

        if (counters_.get(request) == th) {
            fix_saturation(request.lo, request, out);
            fix_saturation(request.hi, request, out);
            if (counters_.get(request) == th) {
                if (auto victim = fix_matching(request.lo))
                    out.evicted.push_back(*victim);
                if (auto victim = fix_matching(request.hi))
                    out.evicted.push_back(*victim);
                matching_.add(request);
                out.added = request;
            }
        }
        out.reconfig_events = int(out.evicted.size()) + (out.added ? 1 : 0);
        return out;
    }

private:
    // Desaturation check at endpoint w of the just-saturated request: if at
    // least b *other* incident pairs are saturated, every counter at w
    // (the request's included) is reset to zero.
    void fix_saturation(NodeId w, Pair request, StepOutcome& out) {
        int others = saturated_count_[w] - (saturated(request) ? 1 : 0);
        if (others >= b_) {
            reset_node_counters(w);
            out.desaturated_at.push_back(w);
        }
    }

    // Makes room at w before the new pair joins the matching: when w already
    // has b matched pairs, one non-saturated matched pair is removed. Its
    // counter must be exactly 0 by the matching invariant.
    std::optional<Pair> fix_matching(NodeId w) {
        if (matching_.degree(w) != b_)
            return std::nullopt;
        std::optional<Pair> victim;
        std::uint64_t victim_stamp = 0;
        for (Pair p : matching_.incident(w)) {
            int c = counters_.get(p);
            if (c == threshold_of(p))
                continue;
            if (c != 0)
                throw InvariantViolation("eviction candidate " + to_string(p) +
                                         " has counter " + std::to_string(c));
            if (policy_ == EvictionPolicy::MinPairId) {
                if (!victim)
                    victim = p;  // incident() is sorted, first hit is smallest
            } else {
                auto it = recency_.find(p.key());
                std::uint64_t stamp = it == recency_.end() ? 0 : it->second;
                if (!victim || stamp < victim_stamp) {
                    victim = p;
                    victim_stamp = stamp;
                }
            }
        }
        if (!victim)
            throw InvariantViolation("no unsaturated matching edge to evict at node " +
                                     std::to_string(w));
        matching_.remove(*victim);
        return victim;
    }

    void reset_node_counters(NodeId w) {
        std::vector<std::uint64_t> keys(touched_[w].begin(), touched_[w].end());
        for (std::uint64_t key : keys) {
            Pair p = Pair::from_key(key);
            set_counter(p, 0, threshold_of(p));
        }
    }

    // Single write path for counters; keeps the per-node saturated counts and
    // nonzero-counter sets in step.
    void set_counter(Pair p, int value, int th) {
        int old = counters_.get(p);
        if (old == value)
            return;
        counters_.set(p, value);
        if (old == 0 && value != 0) {
            touched_[p.lo].insert(p.key());
            touched_[p.hi].insert(p.key());
        } else if (old != 0 && value == 0) {
            touched_[p.lo].erase(p.key());
            touched_[p.hi].erase(p.key());
        }
        bool was = old == th, is = value == th;
        if (was != is) {
            int d = is ? 1 : -1;
            saturated_count_[p.lo] += d;
            saturated_count_[p.hi] += d;
        }
    }

    const Topology* topo_;
    BMatching matching_;
    CounterTable counters_;
    int b_;
    EvictionPolicy policy_;
    std::vector<int> saturated_count_;                      // per node
    std::vector<std::unordered_set<std::uint64_t>> touched_;  // nonzero counters per node
    std::unordered_map<std::uint64_t, std::uint64_t> recency_;  // LRU only
    std::uint64_t clock_ = 0;
};

}  // namespace bmatch
