#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "tokdis/graph.hpp"
#include "tokdis/rng.hpp"
#include "tokdis/types.hpp"

namespace tokdis {

// The tokens each node broadcasts in one round (sorted, duplicate-free).
class TokenAssignment {
 public:
  TokenAssignment() = default;
  explicit TokenAssignment(std::size_t n) : sets_(n) {}
  explicit TokenAssignment(std::vector<std::vector<TokenId>> sets);

  std::size_t n() const noexcept { return sets_.size(); }
  std::span<const TokenId> of(NodeId u) const { return sets_[u]; }
  void set(NodeId u, std::vector<TokenId> tokens);
  void set(NodeId u, TokenId token) { sets_[u].assign(1, token); }

  // Largest |I_u|.
  std::size_t width() const;
  bool silent() const;

  const std::vector<std::vector<TokenId>>& sets() const noexcept { return sets_; }
  friend bool operator==(const TokenAssignment&, const TokenAssignment&) = default;

 private:
  std::vector<std::vector<TokenId>> sets_;
};

// Per-node known sets K_u and adversary-gifted sets K'_u over k tokens. The
// potential counts |K_u ∪ K'_u| summed over nodes.
class KnowledgeState {
 public:
  KnowledgeState() = default;
  KnowledgeState(std::size_t n, std::size_t k);

  std::size_t n() const noexcept { return known_.size(); }
  std::size_t k() const noexcept { return k_; }

  const TokenSet& known(NodeId u) const { return known_[u]; }
  const TokenSet& gifted(NodeId u) const { return gifted_[u]; }

  // t ∈ K_u ∪ K'_u
  bool counted(NodeId u, TokenId t) const { return known_[u].test(t) || gifted_[u].test(t); }
  std::size_t counted_size(NodeId u) const { return (known_[u] | gifted_[u]).count(); }

  void learn(NodeId u, TokenId t) { known_[u].set(t); }
  void add_gift(NodeId u, TokenId t) { gifted_[u].set(t); }
  void set_known(NodeId u, TokenSet tokens);
  void set_gifted(NodeId u, TokenSet tokens);

  friend bool operator==(const KnowledgeState&, const KnowledgeState&) = default;

 private:
  std::size_t k_ = 0;
  std::vector<TokenSet> known_;
  std::vector<TokenSet> gifted_;
};

std::int64_t potential(const KnowledgeState& s);

// |I_v \ (K_u ∪ K'_u)| + |I_u \ (K_v ∪ K'_v)|: what the edge adds to the
// potential if it is present. Throws std::domain_error for u == v.
std::size_t edge_weight(NodeId u, NodeId v, const TokenAssignment& a, const KnowledgeState& s);

inline bool is_free(NodeId u, NodeId v, const TokenAssignment& a, const KnowledgeState& s) {
  return edge_weight(u, v, a, s) == 0;
}

// Conservative test against the initial gifted sets only:
// I_u ⊆ K'_v(0) and I_v ⊆ K'_u(0). Implies is_free for as long as K' only
// grows. Throws std::domain_error for u == v.
bool is_kprime_free(NodeId u, NodeId v, const TokenAssignment& a, std::span<const TokenSet> initial_gifts);

// Each (node, token) pair independently with probability p.
std::vector<TokenSet> sample_kprime(std::size_t n, std::size_t k, double p, Rng& rng);
std::vector<TokenSet> sample_kprime(std::size_t n, std::size_t k, double p, std::uint64_t seed);

struct PotentialDelta {
  struct Learned {
    Edge edge;
    std::vector<std::pair<NodeId, TokenId>> tokens;  // (receiver, token) newly counted
  };

  std::int64_t before = 0;
  std::int64_t after = 0;
  std::vector<Learned> learned_edges;  // only edges that added something

  std::int64_t gain() const noexcept { return after - before; }
};

struct Delivery {
  KnowledgeState state;
  PotentialDelta delta;
};

// Throws ContractViolation unless every I_u ⊆ K_u, |I_u| <= b, and all
// token ids are < k.
void check_assignment(const TokenAssignment& a, const KnowledgeState& s, std::size_t b);

// One round of local broadcast: across every edge {u,v}, u learns I_v and v
// learns I_u. Each newly counted (node, token) is attributed to the first
// edge (in edge order) that delivers it, so the learned lists sum to the
// potential change exactly. K' is unchanged.
Delivery deliver(const Graph& g, const TokenAssignment& a, const KnowledgeState& s);

// Potential change deliver() would produce, without building the new state.
std::int64_t potential_gain(const Graph& g, const TokenAssignment& a, const KnowledgeState& s);

// Adds `tokens` to K'_node.
KnowledgeState gift(const KnowledgeState& s, NodeId node, std::span<const TokenId> tokens);

}  // namespace tokdis
