#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>

namespace tcam {

using Edge = std::pair<std::size_t, std::size_t>;
using EdgeSet = std::set<Edge>;

// Directed acyclic graph over variable indices 0..p-1.
//
// Every node keeps the set of nodes reachable from it (its descendants), so
// the acyclicity check for a candidate edge is a single bit test. The closure
// is updated incrementally on each insertion; edges are never removed.
class Dag {
public:
    explicit Dag(std::size_t node_count = 0);

    std::size_t size() const { return parents_.size(); }
    std::size_t edge_count() const { return edge_count_; }

    bool has_edge(std::size_t from, std::size_t to) const;
    // True if a directed path of length >= 1 leads from `from` to `to`.
    bool reaches(std::size_t from, std::size_t to) const;
    // Edge absent, not a self-loop, and its insertion keeps the graph acyclic.
    bool can_add(std::size_t from, std::size_t to) const;

    // Throws CycleError or DuplicateEdgeError; the graph is unchanged on error.
    void add_edge(std::size_t from, std::size_t to);

    std::vector<std::size_t> parents(std::size_t node) const;
    std::vector<std::size_t> children(std::size_t node) const;
    const boost::dynamic_bitset<>& descendants(std::size_t node) const { return descendants_[node]; }

    // Sorted lexicographically by (source, target).
    std::vector<Edge> edges() const;
    EdgeSet edge_set() const;

    static Dag from_edges(std::size_t node_count, const std::vector<Edge>& edges);

private:
    void check_node(std::size_t node) const;

    std::vector<boost::dynamic_bitset<>> parents_;
    std::vector<boost::dynamic_bitset<>> descendants_;
    std::size_t edge_count_ = 0;
};

bool operator==(const Dag& a, const Dag& b);

// Dense p x p boolean matrix, row = source, column = target.
class BoolMatrix {
public:
    BoolMatrix() = default;
    BoolMatrix(std::size_t n, bool value) : n_(n), data_(n * n, value ? 1 : 0) {}

    std::size_t size() const { return n_; }
    bool operator()(std::size_t r, std::size_t c) const { return data_[r * n_ + c] != 0; }
    void set(std::size_t r, std::size_t c, bool value) { data_[r * n_ + c] = value ? 1 : 0; }

    friend bool operator==(const BoolMatrix&, const BoolMatrix&) = default;

private:
    std::size_t n_ = 0;
    std::vector<unsigned char> data_;
};

// Background knowledge: station tiers, known-absent edges and root nodes.
//
// Tiers are 1-based. After normalize() the forbidden matrix alone encodes
// every constraint: self-loops, edges into roots and edges pointing back to an
// earlier tier are all marked forbidden.
struct PriorKnowledge {
    std::vector<int> tiers;
    BoolMatrix forbidden;
    std::vector<std::size_t> roots;

    // No constraints: a single tier, nothing forbidden beyond self-loops.
    static PriorKnowledge trivial(std::size_t p);

    std::size_t size() const { return tiers.size(); }
    int tier_count() const;
    bool is_root(std::size_t node) const;
    // More than one tier, any forbidden off-diagonal entry, or any root.
    bool is_informative() const;

    void normalize();
    bool is_normalized() const;

    // Restrict to a subset of variables (in the given order).
    PriorKnowledge select(const std::vector<std::size_t>& keep) const;
};

// Load prior knowledge from JSON:
//   {"tiers": {name: int}, "forbidden": [[source, target], ...], "roots": [name, ...]}
// Every key is optional. If "tiers" is present it must name every column.
// Unknown column names throw InputError. The result is normalized.
PriorKnowledge load_prior_json(const std::string& text, const std::vector<std::string>& columns);
PriorKnowledge load_prior_file(const std::string& path, const std::vector<std::string>& columns);

// A node ordering. sequence[i] is the node placed at position i.
class Ordering {
public:
    Ordering() = default;
    explicit Ordering(std::vector<std::size_t> sequence);

    static Ordering identity(std::size_t p);

    std::size_t size() const { return sequence_.size(); }
    const std::vector<std::size_t>& sequence() const { return sequence_; }
    std::size_t position(std::size_t node) const { return position_[node]; }
    bool precedes(std::size_t a, std::size_t b) const { return position_[a] < position_[b]; }

    friend bool operator==(const Ordering&, const Ordering&) = default;

private:
    std::vector<std::size_t> sequence_;
    std::vector<std::size_t> position_;
};

// Pairs (k, l) whose addition keeps the graph acyclic and that the prior
// does not forbid. The prior must be normalized.
EdgeSet addable_edges(const Dag& dag, const PriorKnowledge& prior);

// Kahn's algorithm, always releasing the smallest ready index first.
Ordering topological_order(const Dag& dag);

}  // namespace tcam
