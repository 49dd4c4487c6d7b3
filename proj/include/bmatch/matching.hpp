#pragma once

// The dynamic b-matching: a set of canonical node pairs where every node has
// at most `cap` incident pairs. Degrees are maintained incrementally; the
// recount oracle lives in the tests.

#include <algorithm>
#include <ostream>
#include <string>
#include <vector>

#include "bmatch/core.hpp"

namespace bmatch {

class BMatching {
public:
    BMatching(std::size_t node_count, int cap) : adj_(node_count), cap_(cap) {
        if (cap < 1)
            throw Error("degree cap must be at least 1");
    }

    int cap() const { return cap_; }
    std::size_t node_count() const { return adj_.size(); }
    std::size_t size() const { return size_; }

    void add(Pair p) {
        check_node(p.hi);
        if (contains(p))
            throw AlreadyMatched("pair " + to_string(p) + " already matched");
        if (degree(p.lo) >= cap_ || degree(p.hi) >= cap_)
            throw DegreeCapViolation("adding " + to_string(p) + " exceeds degree cap " +
                                     std::to_string(cap_));
        adj_[p.lo].push_back(p.hi);
        adj_[p.hi].push_back(p.lo);
        ++size_;
    }

    void remove(Pair p) {
        check_node(p.hi);
        if (!contains(p))
            throw NotMatched("pair " + to_string(p) + " not matched");
        erase_one(adj_[p.lo], p.hi);
        erase_one(adj_[p.hi], p.lo);
        --size_;
    }

    bool contains(Pair p) const {
        check_node(p.hi);
        const auto& v = adj_[p.lo];
        return std::find(v.begin(), v.end(), p.hi) != v.end();
    }

    int degree(NodeId w) const {
        check_node(w);
        return int(adj_[w].size());
    }

    // All matched pairs containing w, in canonical pair order.
    std::vector<Pair> incident(NodeId w) const {
        check_node(w);
        std::vector<Pair> out;
        out.reserve(adj_[w].size());
        for (NodeId x : adj_[w])
            out.push_back(Pair::of(w, x));
        std::sort(out.begin(), out.end());
        return out;
    }

    // Sorted snapshot of the whole matching.
    std::vector<Pair> pairs() const {
        std::vector<Pair> out;
        out.reserve(size_);
        for (NodeId w = 0; w < adj_.size(); ++w)
            for (NodeId x : adj_[w])
                if (w < x)
                    out.push_back(Pair{w, x});
        std::sort(out.begin(), out.end());
        return out;
    }

    // One `u,v` line per matched pair, sorted.
    void write_snapshot(std::ostream& out) const {
        for (Pair p : pairs())
            out << p.lo << "," << p.hi << "\n";
    }

private:
    void check_node(NodeId w) const {
        if (w >= adj_.size())
            throw BadNodeId("node " + std::to_string(w) + " out of range");
    }

    static void erase_one(std::vector<NodeId>& v, NodeId x) {
        v.erase(std::find(v.begin(), v.end(), x));
    }

    std::vector<std::vector<NodeId>> adj_;
    int cap_;
    std::size_t size_ = 0;
};

}  // namespace bmatch
