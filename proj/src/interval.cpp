#include <stdexcept>
#include <string>

#include "adversary_common.hpp"
#include "tokdis/adversaries.hpp"
#include "tokdis/errors.hpp"

namespace tokdis {

// Horizons of 2T rounds start every T rounds, so each round belongs to the
// first half of the current horizon and the second half of the previous one.
// A window of T rounds starting at index i of a horizon ends at index
// i+T-1 <= 2T-1 of the same horizon, so index 2T is never needed.

IntervalAdversary::IntervalAdversary(std::size_t n, std::size_t k, std::size_t T, std::size_t b)
    : n_(n), k_(k), T_(T), b_(b) {
  if (T < 1) throw std::domain_error("interval adversary needs T >= 1");
}

void IntervalAdversary::advance(Horizon& h, const AdversaryContext& ctx, const Graph& weight_free) {
  const std::size_t index = ctx.round - h.start;  // 1-based within the horizon
  if (index != h.index + 1)
    throw ConstructionError("interval horizon skipped from index " + std::to_string(h.index) + " to " +
                            std::to_string(index));
  for (NodeId u = 0; u < n_; ++u)
    for (TokenId t : ctx.assignment.of(u)) h.sent[u].set(t);

  std::vector<Edge> kfree = kprime_free_edges(h.sent, ctx.initial_gifts);
  const std::size_t parts = components(n_, kfree).count();

  DisjointSets dsu(n_);
  for (const Edge& e : kfree) dsu.unite(e.u, e.v);
  std::vector<Edge> added;
  if (index == 1) {
    // This round's weight-0 edges are free now, so prefer them as connectors.
    for (const Edge& e : weight_free.edges())
      if (dsu.unite(e.u, e.v)) added.push_back(e);
    std::vector<Edge> joined = detail::merge_edges(kfree, added);
    const Components comps = components(n_, joined);
    for (std::size_t i = 1; i < comps.count(); ++i) added.emplace_back(comps.members[i - 1][0], comps.members[i][0]);
  } else {
    for (const Edge& e : h.stable) dsu.unite(e.u, e.v);
    for (const Edge& e : h.last_free)
      if (dsu.count() > 1 && dsu.unite(e.u, e.v)) added.push_back(e);
    if (dsu.count() != 1)
      throw ConstructionError("interval horizon at round " + std::to_string(ctx.round) + " index " +
                              std::to_string(index) + ": previous free edges cannot reconnect " +
                              std::to_string(dsu.count()) + " parts");
  }
  const std::size_t expected = index == 1 ? parts - 1 : parts - h.last_parts;
  if (added.size() != expected)
    throw ConstructionError("interval horizon at round " + std::to_string(ctx.round) + " index " +
                            std::to_string(index) + ": added " + std::to_string(added.size()) +
                            " stable edges, partition growth is " + std::to_string(expected));

  h.stable = detail::merge_edges(std::move(h.stable), added);
  h.last_free = std::move(kfree);
  h.last_parts = parts;
  h.index = index;
}

AdversaryOutput IntervalAdversary::choose(const AdversaryContext& ctx) {
  if (ctx.round < 1) throw std::domain_error("rounds start at 1");
  const std::size_t start = ((ctx.round - 1) / T_) * T_;  // the round before the horizon's first
  if (!current_ || current_->start != start) {
    previous_ = std::move(current_);
    current_ = Horizon{start, std::vector<TokenSet>(n_, TokenSet(k_)), {}, {}, 0, 0};
  }
  if (previous_ && ctx.round - previous_->start >= 2 * T_) previous_.reset();

  const detail::WeightTable w(ctx.assignment, ctx.state);
  const Graph weight_free(n_, w.free_edges());
  advance(*current_, ctx, weight_free);
  if (previous_) advance(*previous_, ctx, weight_free);

  std::vector<Edge> edges = detail::merge_edges(weight_free.edges(), current_->stable);
  if (previous_) edges = detail::merge_edges(std::move(edges), previous_->stable);

  AdversaryOutput out;
  out.free_components = components(weight_free).count();
  out.nonfree_edges = detail::count_nonfree(edges, w);
  out.graph = Graph(n_, std::move(edges));
  out.delivery_bound = static_cast<std::int64_t>(2 * b_ * out.nonfree_edges);
  return out;
}

}  // namespace tokdis
