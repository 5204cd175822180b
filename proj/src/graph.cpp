#include "synsis/graph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace synsis {

Graph::Graph(std::size_t num_nodes, const std::vector<std::pair<int, int>>& edge_pairs)
    : Graph(num_nodes, edge_pairs, {}) {}

Graph::Graph(std::size_t num_nodes, const std::vector<std::pair<int, int>>& edge_pairs,
             std::vector<std::string> labels)
    : neighbors_(num_nodes), labels_(std::move(labels)) {
    if (labels_.empty()) {
        labels_.reserve(num_nodes);
        for (std::size_t i = 0; i < num_nodes; ++i)
            labels_.push_back(std::to_string(i));
    }
    if (labels_.size() != num_nodes)
        throw std::invalid_argument("graph: label count does not match node count");

    std::set<std::pair<int, int>> canonical;
    for (auto [a, b] : edge_pairs) {
        if (a < 0 || b < 0 || a >= static_cast<int>(num_nodes) || b >= static_cast<int>(num_nodes))
            throw std::invalid_argument("graph: edge endpoint out of range");
        if (a == b)
            throw std::invalid_argument("graph: self-loop on node " + labels_[a]);
        canonical.emplace(std::min(a, b), std::max(a, b));
    }
    edges_.assign(canonical.begin(), canonical.end());
    for (auto [a, b] : edges_) {
        neighbors_[a].push_back(b);
        neighbors_[b].push_back(a);
    }
    for (auto& nb : neighbors_)
        std::sort(nb.begin(), nb.end());
}

void Graph::check_node(int i) const {
    if (i < 0 || static_cast<std::size_t>(i) >= neighbors_.size())
        throw std::out_of_range("graph: node index " + std::to_string(i) + " out of range");
}

const std::vector<int>& Graph::neighbors(int i) const {
    check_node(i);
    return neighbors_[i];
}

int Graph::degree(int i) const {
    check_node(i);
    return static_cast<int>(neighbors_[i].size());
}

const std::string& Graph::label(int i) const {
    check_node(i);
    return labels_[static_cast<std::size_t>(i)];
}

bool Graph::has_edge(int i, int j) const {
    check_node(i);
    check_node(j);
    const auto& nb = neighbors_[i];
    return std::binary_search(nb.begin(), nb.end(), j);
}

Graph parse_edge_list(std::istream& in) {
    std::unordered_map<std::string, int> index_of;
    std::vector<std::string> labels;
    std::vector<std::pair<int, int>> edges;

    auto intern = [&](const std::string& label) {
        auto [it, inserted] = index_of.emplace(label, static_cast<int>(labels.size()));
        if (inserted)
            labels.push_back(label);
        return it->second;
    };

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();

        std::istringstream fields(line);
        std::string a, b, extra;
        if (!(fields >> a) || a[0] == '#')
            continue;
        if (!(fields >> b)) {
            intern(a); // isolated node declaration
            continue;
        }
        if (fields >> extra)
            throw std::runtime_error("edge list line " + std::to_string(line_no) +
                                     ": expected at most two labels");
        if (a == b)
            throw std::runtime_error("edge list line " + std::to_string(line_no) +
                                     ": self-loop on '" + a + "'");
        const int ia = intern(a);
        const int ib = intern(b);
        edges.emplace_back(ia, ib);
    }
    if (labels.empty())
        throw std::runtime_error("edge list: no nodes declared");
    const std::size_t n = labels.size();
    return Graph(n, edges, std::move(labels));
}

Graph load_edge_list(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open edge list file: " + path);
    return parse_edge_list(in);
}

} // namespace synsis
