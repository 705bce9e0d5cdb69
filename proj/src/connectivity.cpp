#include "tokdis/connectivity.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <limits>
#include <queue>
#include <stdexcept>

namespace tokdis {
namespace {

constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

// Unit vertex-capacity max flow on the split graph (x_in -> x_out with
// capacity 1, u_out -> v_in unbounded), searched with bit-parallel BFS over
// the adjacency rows. Since every internal vertex carries at most one unit,
// the flow is stored as one predecessor/successor per vertex.
class VertexFlow {
 public:
  explicit VertexFlow(const AdjacencyMatrix& adj)
      : adj_(adj),
        n_(adj.n()),
        words_(adj.words()),
        in_from_(n_, kNone),
        out_to_(n_, kNone),
        parent_(2 * n_, kNone),
        seen_in_(words_, 0),
        seen_out_(n_, 0) {}

  // Flow value between non-adjacent s and t, capped at `limit`. When the
  // value is below the limit and `cut` is given, the min separator and its
  // two sides are written there.
  std::size_t run(NodeId s, NodeId t, std::size_t limit, VertexCut* cut) {
    std::fill(in_from_.begin(), in_from_.end(), kNone);
    std::fill(out_to_.begin(), out_to_.end(), kNone);
    std::size_t flow = 0;

    // Common neighbours give length-two paths directly.
    const auto* rs = adj_.row(s);
    const auto* rt = adj_.row(t);
    for (std::size_t w = 0; w < words_ && flow < limit; ++w) {
      for (std::uint64_t bits = rs[w] & rt[w]; bits != 0 && flow < limit; bits &= bits - 1) {
        const auto x = static_cast<NodeId>(w * 64 + std::countr_zero(bits));
        in_from_[x] = s;
        out_to_[x] = t;
        ++flow;
      }
    }
    while (flow < limit && augment(s, t)) ++flow;
    if (flow < limit && cut != nullptr) extract_cut(s, t, *cut);
    return flow;
  }

 private:
  static std::uint32_t in_state(NodeId x) { return 2 * x; }
  static std::uint32_t out_state(NodeId x) { return 2 * x + 1; }

  bool seen_in(NodeId x) const { return (seen_in_[x >> 6] >> (x & 63)) & 1U; }
  void mark_in(NodeId x) { seen_in_[x >> 6] |= std::uint64_t{1} << (x & 63); }

  bool augment(NodeId s, NodeId t) {
    std::fill(seen_in_.begin(), seen_in_.end(), 0);
    std::fill(seen_out_.begin(), seen_out_.end(), 0);
    queue_.clear();
    seen_out_[s] = 1;
    mark_in(s);
    queue_.push_back(out_state(s));

    for (std::size_t head = 0; head < queue_.size(); ++head) {
      const auto state = queue_[head];
      const NodeId x = state / 2;
      if (state & 1U) {
        const auto* row = adj_.row(x);
        for (std::size_t w = 0; w < words_; ++w) {
          std::uint64_t fresh = row[w] & ~seen_in_[w];
          seen_in_[w] |= fresh;
          for (; fresh != 0; fresh &= fresh - 1) {
            const auto v = static_cast<NodeId>(w * 64 + std::countr_zero(fresh));
            parent_[in_state(v)] = state;
            if (v == t) {
              apply_path(s, t);
              return true;
            }
            queue_.push_back(in_state(v));
          }
        }
        // Undo the unit through x.
        if (x != s && in_from_[x] != kNone && !seen_in(x)) {
          mark_in(x);
          parent_[in_state(x)] = state;
          queue_.push_back(in_state(x));
        }
      } else {
        if (in_from_[x] == kNone) {
          if (!seen_out_[x]) {
            seen_out_[x] = 1;
            parent_[out_state(x)] = state;
            queue_.push_back(out_state(x));
          }
        } else {
          // Cancel the flow arriving at x.
          const NodeId p = in_from_[x];
          if (p != s && !seen_out_[p]) {
            seen_out_[p] = 1;
            parent_[out_state(p)] = state;
            queue_.push_back(out_state(p));
          }
        }
      }
    }
    return false;
  }

  void apply_path(NodeId s, NodeId t) {
    removals_.clear();
    additions_.clear();
    for (auto cur = in_state(t); cur != out_state(s);) {
      const auto prev = parent_[cur];
      const NodeId a = prev / 2;
      const NodeId b = cur / 2;
      const bool prev_out = prev & 1U;
      const bool cur_out = cur & 1U;
      if (prev_out && !cur_out && a != b) additions_.emplace_back(a, b);
      if (!prev_out && cur_out && a != b) removals_.emplace_back(b, a);  // flow b -> a cancelled
      cur = prev;
    }
    for (const auto& [p, x] : removals_) {
      if (x != t) in_from_[x] = kNone;
      if (p != s) out_to_[p] = kNone;
    }
    for (const auto& [u, v] : additions_) {
      if (u != s) out_to_[u] = v;
      if (v != t) in_from_[v] = u;
    }
  }

  void extract_cut(NodeId s, NodeId t, VertexCut& cut) const {
    cut = {};
    for (NodeId x = 0; x < n_; ++x) {
      if (seen_out_[x]) {
        cut.side_a.push_back(x);
      } else if (seen_in(x) && x != s && x != t) {
        cut.separator.push_back(x);
      } else {
        cut.side_b.push_back(x);
      }
    }
  }

  const AdjacencyMatrix& adj_;
  std::size_t n_;
  std::size_t words_;
  std::vector<NodeId> in_from_;
  std::vector<NodeId> out_to_;
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint64_t> seen_in_;
  std::vector<char> seen_out_;
  std::vector<std::uint32_t> queue_;
  std::vector<std::pair<NodeId, NodeId>> removals_;
  std::vector<std::pair<NodeId, NodeId>> additions_;
};

std::size_t min_degree(const Graph& g) {
  std::size_t best = std::numeric_limits<std::size_t>::max();
  for (NodeId u = 0; u < g.n(); ++u) best = std::min(best, g.degree(u));
  return best;
}

}  // namespace

bool is_connected(const Graph& g) { return g.n() <= 1 || components(g).count() == 1; }

std::size_t vertex_connectivity(const Graph& g) {
  const std::size_t n = g.n();
  if (n < 2) throw std::domain_error("vertex_connectivity needs n >= 2");
  if (!is_connected(g)) return 0;
  std::size_t best = min_degree(g);
  if (best == n - 1) return best;

  const AdjacencyMatrix adj(g);
  VertexFlow flow(adj);
  // Some vertex among the first best+1 lies outside any minimum separator,
  // and the far side of that separator then holds a higher-numbered vertex.
  for (NodeId i = 0; i <= best && i < n; ++i) {
    for (NodeId j = i + 1; j < n; ++j) {
      if (adj.test(i, j)) continue;
      best = std::min(best, flow.run(i, j, best, nullptr));
    }
  }
  return best;
}

std::optional<VertexCut> find_small_cut(const Graph& g, std::size_t c) {
  const std::size_t n = g.n();
  if (c == 0) return std::nullopt;
  if (n <= c) {
    VertexCut cut;
    for (NodeId u = 0; u < n; ++u) cut.separator.push_back(u);
    return cut;
  }

  const Components comps = components(g);
  if (comps.count() > 1) {
    VertexCut cut;
    for (NodeId u = 0; u < n; ++u) (comps.label[u] == 0 ? cut.side_a : cut.side_b).push_back(u);
    return cut;
  }

  for (NodeId v = 0; v < n; ++v) {
    if (g.degree(v) >= c) continue;
    VertexCut cut;
    const auto nb = g.neighbors(v);
    cut.separator.assign(nb.begin(), nb.end());
    cut.side_a.push_back(v);
    for (NodeId u = 0; u < n; ++u)
      if (u != v && !std::binary_search(nb.begin(), nb.end(), u)) cut.side_b.push_back(u);
    return cut;
  }

  const AdjacencyMatrix adj(g);
  VertexFlow flow(adj);
  VertexCut cut;
  for (NodeId i = 0; i < c; ++i) {
    for (NodeId j = i + 1; j < n; ++j) {
      if (adj.test(i, j)) continue;
      if (flow.run(i, j, c, &cut) < c) return cut;
    }
  }
  return std::nullopt;
}

std::size_t local_connectivity(const Graph& g, NodeId s, NodeId t, std::size_t limit) {
  if (s == t) throw std::domain_error("local_connectivity needs distinct endpoints");
  if (!g.has_edge(s, t)) {
    const AdjacencyMatrix adj(g);
    return VertexFlow(adj).run(s, t, limit, nullptr);
  }
  if (limit == 0) return 0;
  std::vector<Edge> rest;
  rest.reserve(g.edge_count());
  for (const Edge& e : g.edges())
    if (e != Edge(s, t)) rest.push_back(e);
  const AdjacencyMatrix adj(Graph(g.n(), std::move(rest)));
  return 1 + VertexFlow(adj).run(s, t, limit - 1, nullptr);
}

Graph intersect(std::span<const Graph> graphs) {
  if (graphs.empty()) return Graph();
  std::vector<Edge> common = graphs.front().edges();
  std::vector<Edge> next;
  for (const Graph& g : graphs.subspan(1)) {
    next.clear();
    std::set_intersection(common.begin(), common.end(), g.edges().begin(), g.edges().end(),
                          std::back_inserter(next));
    common.swap(next);
  }
  return Graph(graphs.front().n(), std::move(common));
}

bool interval_connectivity_ok(const DynamicTrace& trace, std::size_t T) {
  if (T < 1) throw std::domain_error("interval connectivity needs T >= 1");
  const auto& rounds = trace.rounds();
  if (rounds.size() < T) return true;
  for (std::size_t r = 0; r + T <= rounds.size(); ++r) {
    if (!is_connected(intersect(std::span(rounds).subspan(r, T)))) return false;
  }
  return true;
}

std::vector<Edge> harary_overlay(std::span<const NodeId> nodes, std::size_t c) {
  const std::size_t s = nodes.size();
  if (s <= c) throw std::domain_error("harary_overlay needs more than c nodes");
  std::vector<Edge> edges;
  if (c == 1) {
    for (std::size_t i = 0; i + 1 < s; ++i) edges.emplace_back(nodes[i], nodes[i + 1]);
  } else {
    const std::size_t half = c / 2;
    edges.reserve(s * (half + 1));
    for (std::size_t i = 0; i < s; ++i)
      for (std::size_t d = 1; d <= half; ++d) edges.emplace_back(nodes[i], nodes[(i + d) % s]);
    if (c % 2 == 1) {
      for (std::size_t i = 0; i < s; ++i) edges.emplace_back(nodes[i], nodes[(i + s / 2) % s]);
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

PeelResult peel_high_degree(const Graph& g, std::size_t c, std::size_t keep_at_least) {
  const std::size_t n = g.n();
  std::vector<std::size_t> degree(n);
  std::vector<char> removed(n, 0);
  std::priority_queue<NodeId, std::vector<NodeId>, std::greater<>> eligible;
  for (NodeId u = 0; u < n; ++u) {
    degree[u] = g.degree(u);
    if (degree[u] >= c) eligible.push(u);
  }

  PeelResult out;
  std::size_t remaining = n;
  // Degrees only fall, so no vertex becomes eligible later.
  while (remaining > keep_at_least && !eligible.empty()) {
    const NodeId v = eligible.top();
    eligible.pop();
    if (removed[v] || degree[v] < c) continue;
    removed[v] = 1;
    --remaining;
    out.order.push_back(v);
    for (NodeId w : g.neighbors(v))
      if (!removed[w]) --degree[w];
  }
  for (NodeId u = 0; u < n; ++u)
    if (!removed[u]) out.residual.push_back(u);
  return out;
}

}  // namespace tokdis
