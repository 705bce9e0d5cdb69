#pragma once

// Independent reference implementations and generators for the tests. Kept
// deliberately naive: they share no code with the library beyond the value
// types.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <set>
#include <vector>

#include "tokdis/graph.hpp"
#include "tokdis/knowledge.hpp"
#include "tokdis/rng.hpp"

namespace testsupport {

using namespace tokdis;

inline Graph random_graph(std::size_t n, double p, Rng& rng) {
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v)
      if (bernoulli(rng, p)) edges.emplace_back(u, v);
  return Graph(n, std::move(edges));
}

// Depth-first reachability on the nodes not in `removed`.
inline bool connected_without(const Graph& g, const std::vector<char>& removed) {
  const std::size_t n = g.n();
  std::vector<char> seen(n, 0);
  NodeId start = 0;
  while (start < n && removed[start]) ++start;
  if (start == n) return true;
  std::vector<NodeId> stack{start};
  seen[start] = 1;
  while (!stack.empty()) {
    const NodeId x = stack.back();
    stack.pop_back();
    for (NodeId y : g.neighbors(x))
      if (!removed[y] && !seen[y]) {
        seen[y] = 1;
        stack.push_back(y);
      }
  }
  for (NodeId u = 0; u < n; ++u)
    if (!removed[u] && !seen[u]) return false;
  return true;
}

// Smallest number of vertices whose removal disconnects g, by exhaustive
// search over subsets; n - 1 for complete graphs.
inline std::size_t brute_connectivity(const Graph& g) {
  const std::size_t n = g.n();
  for (std::size_t size = 0; size + 2 <= n; ++size) {
    std::vector<char> pick(n, 0);
    std::fill(pick.end() - static_cast<std::ptrdiff_t>(size), pick.end(), 1);
    do {
      if (!connected_without(g, pick)) return size;
    } while (std::next_permutation(pick.begin(), pick.end()));
  }
  return n - 1;
}

// Σ_u |K_u ∪ K'_u| using std::set.
inline std::int64_t naive_potential(const KnowledgeState& s) {
  std::int64_t total = 0;
  for (NodeId u = 0; u < s.n(); ++u) {
    std::set<std::size_t> all;
    for (std::size_t t = 0; t < s.k(); ++t) {
      if (s.known(u).test(t)) all.insert(t);
      if (s.gifted(u).test(t)) all.insert(t);
    }
    total += static_cast<std::int64_t>(all.size());
  }
  return total;
}

// Weight straight from its definition.
inline std::size_t naive_weight(NodeId u, NodeId v, const TokenAssignment& a, const KnowledgeState& s) {
  std::size_t w = 0;
  for (TokenId t : a.of(v))
    if (!s.known(u).test(t) && !s.gifted(u).test(t)) ++w;
  for (TokenId t : a.of(u))
    if (!s.known(v).test(t) && !s.gifted(v).test(t)) ++w;
  return w;
}

// Gain of one delivery round computed per receiver with std::set.
inline std::int64_t naive_gain(const Graph& g, const TokenAssignment& a, const KnowledgeState& s) {
  std::int64_t gain = 0;
  for (NodeId u = 0; u < g.n(); ++u) {
    std::set<TokenId> fresh;
    for (NodeId v : g.neighbors(u))
      for (TokenId t : a.of(v))
        if (!s.known(u).test(t) && !s.gifted(u).test(t)) fresh.insert(t);
    gain += static_cast<std::int64_t>(fresh.size());
  }
  return gain;
}

// Calls f on every connected spanning subgraph edge set of K_n (n <= 5).
inline void for_each_connected_graph(std::size_t n, const std::function<void(const Graph&)>& f) {
  std::vector<Edge> all;
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v) all.emplace_back(u, v);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << all.size()); ++mask) {
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < all.size(); ++i)
      if (mask >> i & 1U) edges.push_back(all[i]);
    Graph g(n, std::move(edges));
    if (connected_without(g, std::vector<char>(n, 0))) f(g);
  }
}

}  // namespace testsupport
