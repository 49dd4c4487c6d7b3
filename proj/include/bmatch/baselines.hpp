#pragma once

// Comparison baselines: demand-oblivious routing over the fixed network, and
// a static b-matching chosen with full knowledge of the workload.

#include <algorithm>
#include <map>
#include <vector>

#include "bmatch/core.hpp"
#include "bmatch/matching.hpp"
#include "bmatch/topology.hpp"

namespace bmatch {

// Request counts per pair over a trace.
class PairFrequency {
public:
    static PairFrequency from_trace(const Trace& trace) {
        PairFrequency f;
        for (Pair p : trace)
            f.add(p);
        return f;
    }

    void add(Pair p, std::uint64_t count = 1) {
        counts_[p.key()] += count;
        total_ += count;
    }

    std::uint64_t get(Pair p) const {
        auto it = counts_.find(p.key());
        return it == counts_.end() ? 0 : it->second;
    }

    std::uint64_t total() const { return total_; }

    // Canonical pair order (sorted by key).
    const std::map<std::uint64_t, std::uint64_t>& counts() const { return counts_; }

private:
    std::map<std::uint64_t, std::uint64_t> counts_;
    std::uint64_t total_ = 0;
};

// Route every request over the fixed network; no matching, no reconfiguration.
inline double oblivious_cost(const Topology& topo, const Trace& trace) {
    double total = 0.0;
    for (Pair p : trace)
        total += topo.distance(p);
    return total;
}

// Greedy static matching: pairs are added in decreasing order of saved weight
// count(e) * distance(e), skipping pairs that would break the degree cap.
// Ties break toward the smaller canonical pair. Zero-weight pairs are never
// added.
inline BMatching static_matching_greedy(const Topology& topo, const PairFrequency& freq,
                                        int b) {
    struct Entry {
        double weight;
        Pair pair;
    };
    std::vector<Entry> entries;
    for (const auto& [key, count] : freq.counts()) {
        Pair p = Pair::from_key(key);
        double w = double(count) * topo.distance(p);
        if (w > 0)
            entries.push_back({w, p});
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        if (a.weight != b.weight)
            return a.weight > b.weight;
        return a.pair < b.pair;
    });
    BMatching m(topo.node_count(), b);
    for (const Entry& e : entries)
        if (m.degree(e.pair.lo) < b && m.degree(e.pair.hi) < b)
            m.add(e.pair);
    return m;
}

// Cost of serving a trace with a fixed matching: misses pay their shortest
// path; optionally the one-time installation of the matching is charged at
// alpha per pair.
inline double static_cost(const Topology& topo, const Trace& trace, const BMatching& m,
                          bool include_setup = false, double alpha = 0.0) {
    double total = include_setup ? alpha * double(m.size()) : 0.0;
    for (Pair p : trace)
        if (!m.contains(p))
            total += topo.distance(p);
    return total;
}

// Saved weight of a matching under a frequency table: sum of
// count(e) * distance(e) over matched pairs.
inline double saved_weight(const Topology& topo, const PairFrequency& freq,
                           const BMatching& m) {
    double total = 0.0;
    for (Pair p : m.pairs())
        total += double(freq.get(p)) * topo.distance(p);
    return total;
}

}  // namespace bmatch
