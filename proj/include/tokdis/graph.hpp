#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "tokdis/types.hpp"

namespace tokdis {

// Undirected edge, stored with u < v.
struct Edge {
  NodeId u = 0;
  NodeId v = 0;

  Edge() = default;
  Edge(NodeId a, NodeId b) : u(a < b ? a : b), v(a < b ? b : a) {}

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Simple undirected graph on node ids 0..n-1. Immutable once built; the
// constructor sorts and deduplicates the edge list and rejects self-loops and
// out-of-range endpoints.
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t n) : n_(n), adjacency_(n) {}
  Graph(std::size_t n, std::vector<Edge> edges);

  static Graph complete(std::size_t n);

  std::size_t n() const noexcept { return n_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  // Sorted neighbour list.
  std::span<const NodeId> neighbors(NodeId u) const { return adjacency_[u]; }
  std::size_t degree(NodeId u) const { return adjacency_[u].size(); }
  bool has_edge(NodeId a, NodeId b) const;

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_;
  }

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<NodeId>> adjacency_;
};

// Sequence of round graphs over a fixed node set; rounds()[0] is round 1.
class DynamicTrace {
 public:
  explicit DynamicTrace(std::size_t n) : n_(n) {}
  DynamicTrace(std::size_t n, std::vector<Graph> rounds);

  void push_back(Graph g);
  std::size_t n() const noexcept { return n_; }
  std::size_t size() const noexcept { return rounds_.size(); }
  const std::vector<Graph>& rounds() const noexcept { return rounds_; }

 private:
  std::size_t n_;
  std::vector<Graph> rounds_;
};

// Union-find with path halving and union by size.
class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), size_(n, 1), count_(n) {
    std::iota(parent_.begin(), parent_.end(), 0U);
  }

  std::uint32_t find(std::uint32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  // Returns false if a and b were already joined.
  bool unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    --count_;
    return true;
  }

  std::size_t count() const noexcept { return count_; }

 private:
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint32_t> size_;
  std::size_t count_;
};

// Partition of the node set into connected components. Components are
// numbered in order of their lowest node id, and each lists its nodes in
// ascending order.
struct Components {
  std::vector<std::uint32_t> label;            // node -> component index
  std::vector<std::vector<NodeId>> members;    // component -> sorted nodes

  std::size_t count() const noexcept { return members.size(); }
};

Components components(const Graph& g);
Components components(std::size_t n, std::span<const Edge> edges);

// Row-per-node bit matrix; used by the flow-based connectivity oracle and
// anywhere a dense adjacency test is cheaper than list lookups.
class AdjacencyMatrix {
 public:
  explicit AdjacencyMatrix(const Graph& g);
  AdjacencyMatrix(std::size_t n) : n_(n), words_((n + 63) / 64), bits_(n * words_, 0) {}

  std::size_t n() const noexcept { return n_; }
  std::size_t words() const noexcept { return words_; }
  bool test(NodeId a, NodeId b) const { return (row(a)[b >> 6] >> (b & 63)) & 1U; }
  void set(NodeId a, NodeId b) {
    bits_[a * words_ + (b >> 6)] |= std::uint64_t{1} << (b & 63);
    bits_[b * words_ + (a >> 6)] |= std::uint64_t{1} << (a & 63);
  }
  const std::uint64_t* row(NodeId a) const { return bits_.data() + a * words_; }

 private:
  std::size_t n_;
  std::size_t words_;
  std::vector<std::uint64_t> bits_;
};

}  // namespace tokdis
