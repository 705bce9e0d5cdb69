#include "tokdis/knowledge.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

#include "tokdis/errors.hpp"

namespace tokdis {

TokenAssignment::TokenAssignment(std::vector<std::vector<TokenId>> sets) : sets_(std::move(sets)) {
  for (auto& s : sets_) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
  }
}

void TokenAssignment::set(NodeId u, std::vector<TokenId> tokens) {
  std::sort(tokens.begin(), tokens.end());
  tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
  sets_[u] = std::move(tokens);
}

std::size_t TokenAssignment::width() const {
  std::size_t w = 0;
  for (const auto& s : sets_) w = std::max(w, s.size());
  return w;
}

bool TokenAssignment::silent() const {
  return std::all_of(sets_.begin(), sets_.end(), [](const auto& s) { return s.empty(); });
}

KnowledgeState::KnowledgeState(std::size_t n, std::size_t k)
    : k_(k), known_(n, TokenSet(k)), gifted_(n, TokenSet(k)) {}

void KnowledgeState::set_known(NodeId u, TokenSet tokens) {
  if (tokens.size() != k_) throw std::invalid_argument("token set size differs from k");
  known_[u] = std::move(tokens);
}

void KnowledgeState::set_gifted(NodeId u, TokenSet tokens) {
  if (tokens.size() != k_) throw std::invalid_argument("token set size differs from k");
  gifted_[u] = std::move(tokens);
}

std::int64_t potential(const KnowledgeState& s) {
  std::int64_t total = 0;
  for (NodeId u = 0; u < s.n(); ++u) total += static_cast<std::int64_t>(s.counted_size(u));
  return total;
}

namespace {

std::size_t missing(std::span<const TokenId> sent, NodeId receiver, const KnowledgeState& s) {
  std::size_t count = 0;
  for (TokenId t : sent)
    if (!s.counted(receiver, t)) ++count;
  return count;
}

}  // namespace

std::size_t edge_weight(NodeId u, NodeId v, const TokenAssignment& a, const KnowledgeState& s) {
  if (u == v) throw std::domain_error("edge_weight needs u != v");
  return missing(a.of(v), u, s) + missing(a.of(u), v, s);
}

bool is_kprime_free(NodeId u, NodeId v, const TokenAssignment& a, std::span<const TokenSet> initial_gifts) {
  if (u == v) throw std::domain_error("is_kprime_free needs u != v");
  const auto held = [&](std::span<const TokenId> sent, NodeId receiver) {
    return std::all_of(sent.begin(), sent.end(), [&](TokenId t) { return initial_gifts[receiver].test(t); });
  };
  return held(a.of(u), v) && held(a.of(v), u);
}

std::vector<TokenSet> sample_kprime(std::size_t n, std::size_t k, double p, Rng& rng) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("K' probability must lie in [0, 1]");
  std::vector<TokenSet> sets(n, TokenSet(k));
  for (auto& set : sets)
    for (std::size_t t = 0; t < k; ++t)
      if (bernoulli(rng, p)) set.set(t);
  return sets;
}

std::vector<TokenSet> sample_kprime(std::size_t n, std::size_t k, double p, std::uint64_t seed) {
  Rng rng = make_stream(seed, Stream::kprime);
  return sample_kprime(n, k, p, rng);
}

void check_assignment(const TokenAssignment& a, const KnowledgeState& s, std::size_t b) {
  if (a.n() != s.n()) throw ContractViolation("assignment covers " + std::to_string(a.n()) + " nodes, state has " +
                                              std::to_string(s.n()));
  for (NodeId u = 0; u < a.n(); ++u) {
    const auto sent = a.of(u);
    if (sent.size() > b)
      throw ContractViolation("node " + std::to_string(u) + " broadcasts " + std::to_string(sent.size()) +
                              " tokens, limit is " + std::to_string(b));
    for (TokenId t : sent) {
      if (t >= s.k()) throw ContractViolation("node " + std::to_string(u) + " broadcasts unknown token id " + std::to_string(t));
      if (!s.known(u).test(t))
        throw ContractViolation("node " + std::to_string(u) + " broadcasts token " + std::to_string(t) +
                                " it does not know");
    }
  }
}

Delivery deliver(const Graph& g, const TokenAssignment& a, const KnowledgeState& s) {
  check_assignment(a, s, std::numeric_limits<std::size_t>::max());
  Delivery out{s, {}};
  out.delta.before = potential(s);
  std::int64_t gained = 0;
  for (const Edge& e : g.edges()) {
    PotentialDelta::Learned learned{e, {}};
    const auto receive = [&](NodeId receiver, NodeId sender) {
      for (TokenId t : a.of(sender)) {
        if (!out.state.counted(receiver, t)) learned.tokens.emplace_back(receiver, t);
        out.state.learn(receiver, t);
      }
    };
    receive(e.u, e.v);
    receive(e.v, e.u);
    if (!learned.tokens.empty()) {
      gained += static_cast<std::int64_t>(learned.tokens.size());
      out.delta.learned_edges.push_back(std::move(learned));
    }
  }
  out.delta.after = out.delta.before + gained;
  return out;
}

std::int64_t potential_gain(const Graph& g, const TokenAssignment& a, const KnowledgeState& s) {
  std::vector<std::uint32_t> stamp(s.k(), 0);
  std::uint32_t epoch = 0;
  std::int64_t total = 0;
  for (NodeId u = 0; u < g.n(); ++u) {
    ++epoch;
    for (NodeId v : g.neighbors(u)) {
      for (TokenId t : a.of(v)) {
        if (stamp[t] == epoch || s.counted(u, t)) continue;
        stamp[t] = epoch;
        ++total;
      }
    }
  }
  return total;
}

KnowledgeState gift(const KnowledgeState& s, NodeId node, std::span<const TokenId> tokens) {
  KnowledgeState out = s;
  for (TokenId t : tokens) {
    if (t >= s.k()) throw std::out_of_range("gifted token id " + std::to_string(t) + " >= k");
    out.add_gift(node, t);
  }
  return out;
}

}  // namespace tokdis
