#include "tokdis/adversaries.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "adversary_common.hpp"
#include "tokdis/connectivity.hpp"
#include "tokdis/errors.hpp"

namespace tokdis {

using detail::WeightTable;

double clamped_log(double x) { return std::max(1.0, std::log(x)); }

FreeGraph free_edge_graph(const TokenAssignment& a, const KnowledgeState& s) {
  const WeightTable w(a, s);
  Graph g(s.n(), w.free_edges());
  Components comps = components(g);
  return {std::move(g), std::move(comps)};
}

std::vector<Edge> kprime_free_edges(std::span<const TokenSet> sent, std::span<const TokenSet> gifts) {
  const std::size_t n = sent.size();
  // accepts[u * n + v]: I_v ⊆ K'_u
  std::vector<char> accepts(n * n, 0);
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = 0; v < n; ++v)
      if (u != v) accepts[u * n + v] = sent[v].is_subset_of(gifts[u]);
  std::vector<Edge> out;
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v)
      if (accepts[u * n + v] && accepts[v * n + u]) out.emplace_back(u, v);
  return out;
}

AdversaryOutput greedy_connected(const AdversaryContext& ctx, std::size_t b) {
  const WeightTable w(ctx.assignment, ctx.state);
  std::vector<Edge> edges = w.free_edges();
  const Components comps = components(ctx.state.n(), edges);
  for (std::size_t i = 1; i < comps.count(); ++i) edges.emplace_back(comps.members[i - 1][0], comps.members[i][0]);

  AdversaryOutput out;
  out.graph = Graph(ctx.state.n(), std::move(edges));
  out.free_components = comps.count();
  out.nonfree_edges = comps.count() == 0 ? 0 : comps.count() - 1;
  out.delivery_bound = static_cast<std::int64_t>(2 * b * out.nonfree_edges);
  return out;
}

AdversaryOutput mst_adversary(const AdversaryContext& ctx, std::size_t b) {
  const std::size_t n = ctx.state.n();
  const WeightTable w(ctx.assignment, ctx.state);
  // Weights are at most 2b, so bucket the lexicographic pair order by weight.
  std::vector<std::vector<Edge>> buckets(2 * b + 1);
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v) buckets[std::min<std::size_t>(w.weight(u, v), 2 * b)].emplace_back(u, v);

  AdversaryOutput out;
  DisjointSets dsu(n);
  std::vector<Edge> tree;
  std::int64_t total = 0;
  for (std::size_t weight = 0; weight < buckets.size(); ++weight) {
    for (const Edge& e : buckets[weight]) {
      if (weight > 0 && dsu.count() == 1) break;
      if (!dsu.unite(e.u, e.v)) continue;
      tree.push_back(e);
      total += static_cast<std::int64_t>(weight);
      if (weight > 0) ++out.nonfree_edges;
    }
    if (weight == 0) out.free_components = dsu.count();
  }
  out.graph = Graph(n, std::move(tree));
  out.delivery_bound = total;
  return out;
}

AdversaryOutput vertex_conn_basic(const AdversaryContext& ctx, std::size_t c, std::size_t b) {
  const std::size_t n = ctx.state.n();
  if (c == 0 || c >= n) throw std::domain_error("vertex_conn_basic needs 1 <= c <= n-1");
  const WeightTable w(ctx.assignment, ctx.state);
  std::vector<Edge> free = w.free_edges();
  const Graph f(n, free);
  const PeelResult peel = peel_high_degree(f, c);

  std::vector<Edge> overlay;
  if (peel.residual.size() >= c + 1) {
    overlay = harary_overlay(peel.residual, c);
  } else {
    std::vector<NodeId> base = peel.residual;
    const std::size_t extra = c + 1 - base.size();
    base.insert(base.end(), peel.order.end() - static_cast<std::ptrdiff_t>(extra), peel.order.end());
    for (std::size_t i = 0; i < base.size(); ++i)
      for (std::size_t j = i + 1; j < base.size(); ++j) overlay.emplace_back(base[i], base[j]);
  }

  AdversaryOutput out;
  out.free_components = components(f).count();
  out.nonfree_edges = detail::count_nonfree(overlay, w);
  out.graph = Graph(n, detail::merge_edges(std::move(free), overlay));
  out.delivery_bound = static_cast<std::int64_t>(2 * b * out.nonfree_edges);
  return out;
}

namespace {

// Tree for a Prüfer sequence over n >= 2 labels.
std::vector<Edge> prufer_tree(const std::vector<NodeId>& seq, std::size_t n) {
  std::vector<std::size_t> degree(n, 1);
  for (NodeId x : seq) ++degree[x];
  std::vector<Edge> edges;
  edges.reserve(n - 1);
  for (NodeId x : seq) {
    NodeId leaf = 0;
    while (degree[leaf] != 1) ++leaf;
    edges.emplace_back(leaf, x);
    --degree[leaf];
    --degree[x];
  }
  NodeId a = 0;
  while (degree[a] != 1) ++a;
  NodeId bnode = a + 1;
  while (degree[bnode] != 1) ++bnode;
  edges.emplace_back(a, bnode);
  return edges;
}

}  // namespace

AdversaryOutput optimal_oracle(const AdversaryContext& ctx, std::size_t /*b*/) {
  const std::size_t n = ctx.state.n();
  if (n > 7) throw SizeError("optimal adversary oracle supports n <= 7, got " + std::to_string(n));
  const WeightTable w(ctx.assignment, ctx.state);
  AdversaryOutput out;
  out.free_components = components(n, w.free_edges()).count();
  if (n < 2) {
    out.graph = Graph(n);
    return out;
  }

  std::vector<NodeId> seq(n - 2, 0);
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  std::vector<Edge> best_tree;
  while (true) {
    Graph tree(n, prufer_tree(seq, n));
    const std::int64_t gain = potential_gain(tree, ctx.assignment, ctx.state);
    if (gain < best) {
      best = gain;
      best_tree = tree.edges();
      if (best == 0) break;
    }
    std::size_t i = 0;
    while (i < seq.size() && ++seq[i] == n) seq[i++] = 0;
    if (i == seq.size()) break;
  }
  out.nonfree_edges = detail::count_nonfree(best_tree, w);
  out.graph = Graph(n, std::move(best_tree));
  out.delivery_bound = best;
  return out;
}

AdversaryOutput static_path(const AdversaryContext& ctx, std::size_t /*b*/) {
  const std::size_t n = ctx.state.n();
  const WeightTable w(ctx.assignment, ctx.state);
  std::vector<Edge> path;
  std::int64_t total = 0;
  for (NodeId u = 0; u + 1 < n; ++u) {
    path.emplace_back(u, u + 1);
    total += w.weight(u, u + 1);
  }
  AdversaryOutput out;
  out.free_components = components(n, w.free_edges()).count();
  out.nonfree_edges = detail::count_nonfree(path, w);
  out.graph = Graph(n, std::move(path));
  out.delivery_bound = total;
  return out;
}

namespace {

template <typename F>
class FunctionAdversary final : public Adversary {
 public:
  FunctionAdversary(F fn, Promise promise) : fn_(std::move(fn)), promise_(promise) {}
  AdversaryOutput choose(const AdversaryContext& ctx) override { return fn_(ctx); }
  Promise promise() const override { return promise_; }

 private:
  F fn_;
  Promise promise_;
};

template <typename F>
std::unique_ptr<Adversary> wrap(F fn, Promise promise = {}) {
  return std::make_unique<FunctionAdversary<F>>(std::move(fn), promise);
}

}  // namespace

AdversaryKind parse_adversary(const std::string& key) {
  if (key == "greedy") return AdversaryKind::greedy;
  if (key == "mst") return AdversaryKind::mst;
  if (key == "partial") return AdversaryKind::partial;
  if (key == "interval") return AdversaryKind::interval;
  if (key == "vconn-basic") return AdversaryKind::vconn_basic;
  if (key == "vconn-refined") return AdversaryKind::vconn_refined;
  if (key == "oracle") return AdversaryKind::oracle;
  if (key == "static-path") return AdversaryKind::static_path;
  throw ConfigError("adversary", "unknown adversary '" + key + "'");
}

std::string to_string(AdversaryKind kind) {
  switch (kind) {
    case AdversaryKind::greedy: return "greedy";
    case AdversaryKind::mst: return "mst";
    case AdversaryKind::partial: return "partial";
    case AdversaryKind::interval: return "interval";
    case AdversaryKind::vconn_basic: return "vconn-basic";
    case AdversaryKind::vconn_refined: return "vconn-refined";
    case AdversaryKind::oracle: return "oracle";
    case AdversaryKind::static_path: return "static-path";
  }
  return "?";
}

double default_kprime_probability(AdversaryKind kind, const AdversaryParams& p) {
  switch (kind) {
    case AdversaryKind::greedy:
    case AdversaryKind::oracle:
      return 0.25;
    case AdversaryKind::partial:
      return p.delta / 4.0;
    case AdversaryKind::mst:
      return std::clamp(1.0 - p.epsilon / (4.0 * std::numbers::e * static_cast<double>(p.b)), 0.0, 1.0);
    case AdversaryKind::interval:
      return std::clamp(1.0 - p.epsilon / static_cast<double>(p.T), 0.0, 1.0);
    case AdversaryKind::vconn_basic:
    case AdversaryKind::vconn_refined:
      return 0.5;
    case AdversaryKind::static_path:
      return 0.0;
  }
  return 0.0;
}

std::unique_ptr<Adversary> make_adversary(AdversaryKind kind, const AdversaryParams& p) {
  const std::size_t b = p.b;
  switch (kind) {
    case AdversaryKind::greedy:
    case AdversaryKind::partial:
      return wrap([b](const AdversaryContext& ctx) { return greedy_connected(ctx, b); });
    case AdversaryKind::mst:
      return wrap([b](const AdversaryContext& ctx) { return mst_adversary(ctx, b); });
    case AdversaryKind::interval:
      return std::make_unique<IntervalAdversary>(p.n, p.k, p.T, b);
    case AdversaryKind::vconn_basic: {
      const std::size_t c = p.c;
      return wrap([c, b](const AdversaryContext& ctx) { return vertex_conn_basic(ctx, c, b); },
                  {PromiseKind::c_connected, c});
    }
    case AdversaryKind::vconn_refined: {
      const RefinedParams rp{p.c, b, p.alpha};
      return wrap([rp](const AdversaryContext& ctx) { return vertex_conn_refined(ctx, rp); },
                  {PromiseKind::c_connected, rp.c});
    }
    case AdversaryKind::oracle:
      if (p.n > 7) throw SizeError("optimal adversary oracle supports n <= 7, got " + std::to_string(p.n));
      return wrap([b](const AdversaryContext& ctx) { return optimal_oracle(ctx, b); });
    case AdversaryKind::static_path:
      return wrap([b](const AdversaryContext& ctx) { return static_path(ctx, b); });
  }
  throw std::logic_error("unhandled adversary kind");
}

}  // namespace tokdis
