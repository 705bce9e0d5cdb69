#pragma once

// Helpers shared by the adversary translation units.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "tokdis/graph.hpp"
#include "tokdis/knowledge.hpp"

namespace tokdis::detail {

// miss(u, v) = |I_v \ (K_u ∪ K'_u)|, so w(u,v) = miss(u,v) + miss(v,u).
class WeightTable {
 public:
  WeightTable(const TokenAssignment& a, const KnowledgeState& s) : n_(s.n()), miss_(n_ * n_, 0) {
    for (NodeId u = 0; u < n_; ++u) {
      const TokenSet counted = s.known(u) | s.gifted(u);
      for (NodeId v = 0; v < n_; ++v) {
        if (u == v) continue;
        std::uint32_t m = 0;
        for (TokenId t : a.of(v))
          if (!counted.test(t)) ++m;
        miss_[u * n_ + v] = m;
      }
    }
  }

  std::uint32_t miss(NodeId u, NodeId v) const { return miss_[u * n_ + v]; }
  std::uint32_t weight(NodeId u, NodeId v) const { return miss(u, v) + miss(v, u); }
  bool free(NodeId u, NodeId v) const { return weight(u, v) == 0; }

  std::vector<Edge> free_edges() const {
    std::vector<Edge> out;
    for (NodeId u = 0; u < n_; ++u)
      for (NodeId v = u + 1; v < n_; ++v)
        if (free(u, v)) out.emplace_back(u, v);
    return out;
  }

 private:
  std::size_t n_;
  std::vector<std::uint32_t> miss_;
};

inline std::size_t count_nonfree(const std::vector<Edge>& edges, const WeightTable& w) {
  std::size_t count = 0;
  for (const Edge& e : edges)
    if (!w.free(e.u, e.v)) ++count;
  return count;
}

inline std::vector<Edge> merge_edges(std::vector<Edge> a, const std::vector<Edge>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

}  // namespace tokdis::detail
