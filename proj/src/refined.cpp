#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

#include "adversary_common.hpp"
#include "tokdis/adversaries.hpp"
#include "tokdis/connectivity.hpp"
#include "tokdis/errors.hpp"

namespace tokdis {
namespace {

struct SendClass {
  std::vector<TokenId> key;
  std::vector<NodeId> members;
};

// Residual nodes grouped by what they send; the silent class (if any) comes
// first, then classes in lexicographic key order.
std::vector<SendClass> group_by_key(const std::vector<NodeId>& nodes, const TokenAssignment& a) {
  std::map<std::vector<TokenId>, std::vector<NodeId>> groups;
  for (NodeId u : nodes) {
    const auto sent = a.of(u);
    groups[std::vector<TokenId>(sent.begin(), sent.end())].push_back(u);
  }
  std::vector<SendClass> out;
  out.reserve(groups.size());
  for (auto& [key, members] : groups) out.push_back({key, std::move(members)});
  return out;
}

class Gifter {
 public:
  Gifter(const AdversaryContext& ctx, const std::vector<SendClass>& all, std::size_t c, std::size_t s)
      : a_(ctx.assignment), state_(ctx.state), all_(all), c_(c), s_(s), n_(ctx.state.n()) {}

  // Lifts every node of `from` whose free degree inside S is below 2c. The
  // tokens those nodes send are first made well held on `to`; then each of
  // them is gifted tokens sent on `to`, greedily by new free neighbours.
  void raise(const std::vector<SendClass>& from, const std::vector<SendClass>& to) {
    std::vector<NodeId> short_nodes;
    for (const auto& cls : from)
      for (NodeId v : cls.members)
        if (free_degree(v) < 2 * c_) short_nodes.push_back(v);
    if (short_nodes.empty()) return;

    std::vector<NodeId> to_nodes;
    for (const auto& cls : to) to_nodes.insert(to_nodes.end(), cls.members.begin(), cls.members.end());
    std::sort(to_nodes.begin(), to_nodes.end());

    const auto wanted = static_cast<std::size_t>(
        std::ceil(static_cast<double>(s_) / std::sqrt(clamped_log(static_cast<double>(n_))) - 1e-9));
    const std::size_t holders_needed = std::min(to_nodes.size(), wanted);
    std::vector<TokenId> tokens;
    for (NodeId v : short_nodes) tokens.insert(tokens.end(), a_.of(v).begin(), a_.of(v).end());
    std::sort(tokens.begin(), tokens.end());
    tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
    for (TokenId t : tokens) {
      std::size_t holders = 0;
      for (NodeId u : to_nodes)
        if (state_.counted(u, t)) ++holders;
      for (auto it = to_nodes.begin(); holders < holders_needed && it != to_nodes.end(); ++it) {
        if (state_.counted(*it, t)) continue;
        give(*it, t);
        ++holders;
      }
    }

    for (NodeId v : short_nodes) raise_degree(v, to);
  }

  KnowledgeState& state() { return state_; }
  std::vector<std::pair<NodeId, TokenId>>& gifts() { return gifts_; }

 private:
  void give(NodeId u, TokenId t) {
    state_.add_gift(u, t);
    gifts_.emplace_back(u, t);
  }

  bool accepts(NodeId u, std::span<const TokenId> sent) const {
    return std::all_of(sent.begin(), sent.end(), [&](TokenId t) { return state_.counted(u, t); });
  }

  std::size_t free_degree(NodeId v) const {
    const auto mine = a_.of(v);
    std::size_t degree = 0;
    for (const auto& cls : all_)
      if (accepts(v, cls.key))
        for (NodeId u : cls.members)
          if (u != v && accepts(u, mine)) ++degree;
    return degree;
  }

  void raise_degree(NodeId v, const std::vector<SendClass>& to) {
    const auto mine = a_.of(v);
    std::size_t degree = free_degree(v);

    while (degree < 2 * c_) {
      std::size_t best_gain = 0;
      const SendClass* best = nullptr;
      for (const auto& cls : to) {
        if (accepts(v, cls.key)) continue;
        std::size_t gain = 0;
        for (NodeId u : cls.members)
          if (accepts(u, mine)) ++gain;
        if (gain > best_gain) {
          best_gain = gain;
          best = &cls;
        }
      }
      if (best == nullptr) return;
      for (TokenId t : best->key)
        if (!state_.counted(v, t)) give(v, t);
      degree += best_gain;
    }
  }

  const TokenAssignment& a_;
  KnowledgeState state_;
  const std::vector<SendClass>& all_;
  std::size_t c_;
  std::size_t s_;
  std::size_t n_;
  std::vector<std::pair<NodeId, TokenId>> gifts_;
};

}  // namespace

AdversaryOutput vertex_conn_refined(const AdversaryContext& ctx, const RefinedParams& p) {
  const std::size_t n = ctx.state.n();
  const std::size_t c = p.c;
  if (c == 0 || c >= n) throw std::domain_error("vertex_conn_refined needs 1 <= c <= n-1");

  const auto target = static_cast<std::size_t>(
      std::ceil(p.alpha * static_cast<double>(c) * clamped_log(static_cast<double>(n)) - 1e-9));
  const detail::WeightTable before(ctx.assignment, ctx.state);
  const Graph f0(n, before.free_edges());
  const PeelResult peel = peel_high_degree(f0, c, std::max(target, c + 1));
  const std::vector<NodeId>& S = peel.residual;
  const std::size_t s = S.size();

  // Left/right split of the residual set.
  const std::vector<SendClass> classes = group_by_key(S, ctx.assignment);
  std::vector<SendClass> left;
  std::vector<SendClass> right;
  const double third = static_cast<double>(s) / 3.0;
  const auto big = std::find_if(classes.begin(), classes.end(),
                                [&](const SendClass& cls) { return static_cast<double>(cls.members.size()) > third; });
  const bool has_big = big != classes.end();
  if (has_big) {
    for (auto it = classes.begin(); it != classes.end(); ++it) (it == big ? right : left).push_back(*it);
  } else {
    std::size_t acc = 0;
    for (const auto& cls : classes) {
      if (static_cast<double>(acc) < third) {
        acc += cls.members.size();
        left.push_back(cls);
      } else {
        right.push_back(cls);
      }
    }
  }

  Gifter gifter(ctx, classes, c, s);
  if (!right.empty() && !left.empty()) {
    gifter.raise(left, right);
    if (!has_big) gifter.raise(right, left);
  }

  // Close S to c-connectivity by repairing small cuts one edge at a time.
  const detail::WeightTable after(ctx.assignment, gifter.state());
  std::vector<Edge> free = after.free_edges();
  std::vector<NodeId> local_of(n, static_cast<NodeId>(n));
  for (std::size_t i = 0; i < s; ++i) local_of[S[i]] = static_cast<NodeId>(i);
  std::vector<Edge> local_edges;
  for (const Edge& e : free)
    if (local_of[e.u] < s && local_of[e.v] < s) local_edges.emplace_back(local_of[e.u], local_of[e.v]);

  std::vector<Edge> added;
  const std::size_t cap = c * s;
  for (std::size_t iteration = 0;; ++iteration) {
    const auto cut = find_small_cut(Graph(s, local_edges), c);
    if (!cut) break;
    if (iteration >= cap)
      throw ConstructionError("cut augmentation exceeded " + std::to_string(cap) + " iterations with |S| = " +
                              std::to_string(s) + ", c = " + std::to_string(c));
    if (cut->side_a.empty() || cut->side_b.empty())
      throw ConstructionError("residual set of size " + std::to_string(s) + " cannot be " + std::to_string(c) +
                              "-connected");
    const Edge local(cut->side_a.front(), cut->side_b.front());
    local_edges.push_back(local);
    added.emplace_back(S[local.u], S[local.v]);
  }

  AdversaryOutput out;
  out.free_components = components(f0).count();
  out.nonfree_edges = detail::count_nonfree(added, after);
  out.graph = Graph(n, detail::merge_edges(std::move(free), added));
  out.gifts = std::move(gifter.gifts());
  out.delivery_bound = static_cast<std::int64_t>(2 * p.b * out.nonfree_edges);
  return out;
}

}  // namespace tokdis
