#include "tokdis/graph.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace tokdis {

Graph::Graph(std::size_t n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)), adjacency_(n) {
  for (const Edge& e : edges_) {
    if (e.u == e.v) throw std::invalid_argument("self-loop at node " + std::to_string(e.u));
    if (e.v >= n_) throw std::out_of_range("edge endpoint " + std::to_string(e.v) + " >= n");
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  for (const Edge& e : edges_) {
    adjacency_[e.u].push_back(e.v);
    adjacency_[e.v].push_back(e.u);
  }
  for (auto& list : adjacency_) std::sort(list.begin(), list.end());
}

Graph Graph::complete(std::size_t n) {
  std::vector<Edge> edges;
  edges.reserve(n * (n - (n > 0)) / 2);
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v) edges.emplace_back(u, v);
  return Graph(n, std::move(edges));
}

bool Graph::has_edge(NodeId a, NodeId b) const {
  if (a >= n_ || b >= n_ || a == b) return false;
  const auto& list = adjacency_[a];
  return std::binary_search(list.begin(), list.end(), b);
}

DynamicTrace::DynamicTrace(std::size_t n, std::vector<Graph> rounds) : n_(n) {
  for (auto& g : rounds) push_back(std::move(g));
}

void DynamicTrace::push_back(Graph g) {
  if (g.n() != n_) throw std::invalid_argument("trace graph has a different node count");
  rounds_.push_back(std::move(g));
}

Components components(std::size_t n, std::span<const Edge> edges) {
  DisjointSets sets(n);
  for (const Edge& e : edges) sets.unite(e.u, e.v);
  Components out;
  out.label.assign(n, 0);
  std::vector<std::int64_t> root_to_label(n, -1);
  for (NodeId u = 0; u < n; ++u) {
    const auto root = sets.find(u);
    if (root_to_label[root] < 0) {
      root_to_label[root] = static_cast<std::int64_t>(out.members.size());
      out.members.emplace_back();
    }
    const auto label = static_cast<std::uint32_t>(root_to_label[root]);
    out.label[u] = label;
    out.members[label].push_back(u);
  }
  return out;
}

Components components(const Graph& g) { return components(g.n(), g.edges()); }

AdjacencyMatrix::AdjacencyMatrix(const Graph& g) : AdjacencyMatrix(g.n()) {
  for (const Edge& e : g.edges()) set(e.u, e.v);
}

}  // namespace tokdis
