#pragma once

// The fixed network: an immutable weighted connected graph with eagerly
// computed all-pairs shortest-path distances. The simulator queries a
// distance on every request, so lookups must be O(1); distances are filled
// at construction by one Dijkstra run per source node.

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <queue>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "bmatch/core.hpp"

namespace bmatch {

struct EdgeSpec {
    NodeId u = 0;
    NodeId v = 0;
    double length = 1.0;
};

class Topology {
public:
    // Node counts above the cap are refused: the distance table is dense.
    static constexpr std::size_t kDefaultNodeCap = 2000;

    static Topology build(std::size_t n, const std::vector<EdgeSpec>& edges,
                          std::size_t node_cap = kDefaultNodeCap) {
        if (n < 2)
            throw Error("topology needs at least 2 nodes");
        if (n > node_cap)
            throw TopologyTooLarge("node count " + std::to_string(n) +
                                   " exceeds cap " + std::to_string(node_cap));

        Topology t;
        t.n_ = n;
        std::set<std::uint64_t> seen;
        for (const EdgeSpec& e : edges) {
            if (e.u >= n || e.v >= n)
                throw BadNodeId("edge endpoint out of range: " + std::to_string(e.u) +
                                "," + std::to_string(e.v));
            if (e.u == e.v)
                throw SelfLoop("self loop at node " + std::to_string(e.u));
            if (!(e.length > 0))
                throw NonPositiveLength("edge (" + std::to_string(e.u) + "," +
                                        std::to_string(e.v) + ") has non-positive length");
            Pair p = Pair::of(e.u, e.v);
            if (!seen.insert(p.key()).second)
                throw DuplicateEdge("duplicate edge " + to_string(p));
            t.edges_.emplace_back(p, e.length);
        }
        t.compute_distances();
        return t;
    }

    // Node 0 is the center; spokes have length 1.
    static Topology star(std::size_t leaves) {
        if (leaves < 1)
            throw Error("star needs at least 1 leaf");
        std::vector<EdgeSpec> edges;
        for (std::size_t i = 1; i <= leaves; ++i)
            edges.push_back({0, NodeId(i), 1.0});
        return build(leaves + 1, edges);
    }

    // Nodes 0..leaves-1 are leaves, the rest spines; bipartite unit-length
    // links, so any two leaves sit at distance 2. spines == 0 picks the
    // default of ceil(leaves / 10).
    static Topology leaf_spine(std::size_t leaves, std::size_t spines = 0) {
        if (leaves < 2)
            throw Error("leaf-spine needs at least 2 leaves");
        if (spines == 0)
            spines = (leaves + 9) / 10;
        std::vector<EdgeSpec> edges;
        for (std::size_t l = 0; l < leaves; ++l)
            for (std::size_t s = 0; s < spines; ++s)
                edges.push_back({NodeId(l), NodeId(leaves + s), 1.0});
        return build(leaves + spines, edges);
    }

    static Topology complete(std::size_t n, double length = 1.0) {
        if (n < 2)
            throw Error("complete graph needs at least 2 nodes");
        std::vector<EdgeSpec> edges;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                edges.push_back({NodeId(i), NodeId(j), length});
        return build(n, edges);
    }

    std::size_t node_count() const { return n_; }

    // Number of unordered node pairs.
    std::size_t pair_count() const { return n_ * (n_ - 1) / 2; }

    const std::vector<std::pair<Pair, double>>& fixed_edges() const { return edges_; }

    double distance(Pair p) const {
        if (p.hi >= n_)
            throw BadNodeId("pair " + to_string(p) + " out of range");
        return dist_[std::size_t(p.lo) * n_ + p.hi];
    }
    double distance(NodeId u, NodeId v) const { return distance(Pair::of(u, v)); }

    // Largest shortest-path distance over all node pairs.
    double ell_max() const { return ell_max_; }

private:
    Topology() = default;

    void compute_distances() {
        constexpr double kInf = std::numeric_limits<double>::infinity();
        std::vector<std::vector<std::pair<NodeId, double>>> adj(n_);
        for (const auto& [p, len] : edges_) {
            adj[p.lo].emplace_back(p.hi, len);
            adj[p.hi].emplace_back(p.lo, len);
        }
        dist_.assign(n_ * n_, kInf);
        using Item = std::pair<double, NodeId>;
        for (std::size_t src = 0; src < n_; ++src) {
            double* d = dist_.data() + src * n_;
            std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
            d[src] = 0.0;
            heap.emplace(0.0, NodeId(src));
            while (!heap.empty()) {
                auto [du, u] = heap.top();
                heap.pop();
                if (du > d[u])
                    continue;
                for (auto [v, len] : adj[u]) {
                    double cand = du + len;
                    if (cand < d[v]) {
                        d[v] = cand;
                        heap.emplace(cand, v);
                    }
                }
            }
        }
        ell_max_ = 0.0;
        for (std::size_t u = 0; u < n_; ++u)
            for (std::size_t v = u + 1; v < n_; ++v) {
                double d = dist_[u * n_ + v];
                if (d == kInf)
                    throw Disconnected("no path between nodes " + std::to_string(u) +
                                       " and " + std::to_string(v));
                ell_max_ = std::max(ell_max_, d);
            }
    }

    std::size_t n_ = 0;
    std::vector<std::pair<Pair, double>> edges_;
    std::vector<double> dist_;  // n*n, symmetric
    double ell_max_ = 0.0;
};

// Line-oriented topology file: `n <count>` first, then `e <u> <v> <length>`
// per edge; `#` starts a comment.
inline Topology parse_topology(std::istream& in,
                               std::size_t node_cap = Topology::kDefaultNodeCap) {
    std::string line;
    std::size_t lineno = 0;
    std::size_t n = 0;
    bool have_n = false;
    std::vector<EdgeSpec> edges;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag))
            continue;
        if (!have_n) {
            long long count = 0;
            if (tag != "n" || !(ls >> count) || count < 0)
                throw ParseError(lineno, "expected `n <count>`");
            n = std::size_t(count);
            have_n = true;
        } else if (tag == "e") {
            long long u = 0, v = 0;
            double len = 0;
            if (!(ls >> u >> v >> len) || u < 0 || v < 0)
                throw ParseError(lineno, "expected `e <u> <v> <length>`");
            edges.push_back({NodeId(u), NodeId(v), len});
        } else {
            throw ParseError(lineno, "unknown record `" + tag + "`");
        }
    }
    if (!have_n)
        throw ParseError(lineno, "missing `n <count>` header");
    return Topology::build(n, edges, node_cap);
}

inline void write_topology(std::ostream& out, const Topology& t) {
    out << "n " << t.node_count() << "\n";
    for (const auto& [p, len] : t.fixed_edges())
        out << "e " << p.lo << " " << p.hi << " " << len << "\n";
}

}  // namespace bmatch
