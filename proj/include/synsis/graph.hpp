#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace synsis {

/// Simple undirected network: no self-loops, no duplicate edges, dense
/// 0-based node indices. Immutable after construction; safe to share
/// across threads.
class Graph {
public:
    /// Builds a graph over `num_nodes` nodes from unordered index pairs.
    /// Self-loops and out-of-range endpoints are rejected; duplicate
    /// edges collapse to one. Default labels are "0".."N-1".
    Graph(std::size_t num_nodes, const std::vector<std::pair<int, int>>& edge_pairs);

    Graph(std::size_t num_nodes, const std::vector<std::pair<int, int>>& edge_pairs,
          std::vector<std::string> labels);

    std::size_t num_nodes() const { return neighbors_.size(); }
    std::size_t num_edges() const { return edges_.size(); }

    /// Sorted list of nodes adjacent to `i`.
    const std::vector<int>& neighbors(int i) const;

    /// Number of neighbors of node `i`.
    int degree(int i) const;

    bool has_edge(int i, int j) const;

    /// Canonical edge set as (min, max) pairs in lexicographic order.
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }

    const std::string& label(int i) const;
    const std::vector<std::string>& labels() const { return labels_; }

private:
    void check_node(int i) const;

    std::vector<std::vector<int>> neighbors_;
    std::vector<std::pair<int, int>> edges_;
    std::vector<std::string> labels_;
};

/// Reads a whitespace-delimited edge list. Each non-comment line names
/// either an edge ("LABEL LABEL") or a single isolated node ("LABEL").
/// Lines starting with '#' and blank lines are skipped. Labels are mapped
/// to indices 0..N-1 in first-appearance order. Throws std::runtime_error
/// with the offending line number on malformed input or self-loops, and
/// on input that declares no nodes at all.
Graph parse_edge_list(std::istream& in);

/// Convenience overload for a file on disk.
Graph load_edge_list(const std::string& path);

} // namespace synsis
