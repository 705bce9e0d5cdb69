#include "tokdis/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "tokdis/errors.hpp"

namespace tokdis {
namespace {

std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

}  // namespace

std::size_t partial_target(double delta, std::size_t k) {
  return static_cast<std::size_t>(std::ceil(delta * static_cast<double>(k) - 1e-9));
}

ProtocolDecision phase_flood(std::size_t round, const KnowledgeState& s, std::size_t phase_length,
                             std::size_t token_count) {
  ProtocolDecision out{TokenAssignment(s.n()), false};
  if (phase_length == 0 || round == 0) {
    out.done = phase_length == 0;
    return out;
  }
  const std::size_t phase = (round - 1) / phase_length;
  if (phase >= token_count) {
    out.done = true;
    return out;
  }
  const auto token = static_cast<TokenId>(phase);
  for (NodeId u = 0; u < s.n(); ++u)
    if (s.known(u).test(token)) out.assignment.set(u, token);
  return out;
}

ProtocolDecision sequential_flood(std::size_t round, const KnowledgeState& s) {
  return phase_flood(round, s, s.n() - 1, s.k());
}

ProtocolDecision greedy_per_token_c(std::size_t round, const KnowledgeState& s, std::size_t c) {
  if (c == 0) throw std::domain_error("greedy_per_token_c needs c >= 1");
  return phase_flood(round, s, ceil_div(s.n() - 1, c), s.k());
}

ProtocolDecision block_flood(std::size_t round, const KnowledgeState& s, std::size_t b) {
  if (b == 0) throw std::domain_error("block_flood needs b >= 1");
  const std::size_t phase_length = s.n() - 1;
  ProtocolDecision out{TokenAssignment(s.n()), false};
  if (phase_length == 0) {
    out.done = true;
    return out;
  }
  const std::size_t block = (round - 1) / phase_length;
  if (block >= ceil_div(s.k(), b)) {
    out.done = true;
    return out;
  }
  const std::size_t first = block * b;
  const std::size_t last = std::min(s.k(), first + b);
  for (NodeId u = 0; u < s.n(); ++u) {
    std::vector<TokenId> sent;
    for (std::size_t t = first; t < last; ++t)
      if (s.known(u).test(t)) sent.push_back(static_cast<TokenId>(t));
    out.assignment.set(u, std::move(sent));
  }
  return out;
}

ProtocolDecision random_useful(std::size_t /*round*/, const KnowledgeState& s, std::size_t b, Rng& rng,
                               bool local_view) {
  ProtocolDecision out{TokenAssignment(s.n()), false};
  TokenSet everywhere(s.k());
  everywhere.set();
  for (NodeId u = 0; u < s.n(); ++u) everywhere &= s.known(u);
  TokenSet useful = ~everywhere;
  if (useful.none()) {
    out.done = true;
    return out;
  }

  std::vector<TokenId> pool;
  for (NodeId u = 0; u < s.n(); ++u) {
    pool.clear();
    const TokenSet candidates = local_view ? s.known(u) : (s.known(u) & useful);
    for (auto t = candidates.find_first(); t != TokenSet::npos; t = candidates.find_next(t))
      pool.push_back(static_cast<TokenId>(t));
    const std::size_t take = std::min(b, pool.size());
    for (std::size_t i = 0; i < take; ++i) {
      const auto j = i + uniform_below(rng, pool.size() - i);
      std::swap(pool[i], pool[j]);
    }
    out.assignment.set(u, std::vector<TokenId>(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(take)));
  }
  return out;
}

ProtocolDecision fec_source(std::size_t round, const KnowledgeState& s, NodeId source, std::size_t k,
                            bool local_view) {
  ProtocolDecision out{TokenAssignment(s.n()), false};
  bool all_decoded = true;
  for (NodeId u = 0; u < s.n(); ++u)
    if (s.known(u).count() < k) all_decoded = false;
  if (all_decoded) {
    out.done = true;
    return out;
  }

  const std::size_t packets = s.k();
  if (round >= 1 && round - 1 < packets) out.assignment.set(source, static_cast<TokenId>(round - 1));

  std::vector<std::size_t> holders(packets, 0);
  if (!local_view) {
    for (NodeId u = 0; u < s.n(); ++u)
      for (auto t = s.known(u).find_first(); t != TokenSet::npos; t = s.known(u).find_next(t)) ++holders[t];
  }
  for (NodeId u = 0; u < s.n(); ++u) {
    if (u == source || s.known(u).none()) continue;
    std::size_t best = TokenSet::npos;
    for (auto t = s.known(u).find_first(); t != TokenSet::npos; t = s.known(u).find_next(t)) {
      if (best == TokenSet::npos || local_view || holders[t] <= holders[best]) best = t;
    }
    out.assignment.set(u, static_cast<TokenId>(best));
  }
  return out;
}

namespace {

class FunctionProtocol final : public Protocol {
 public:
  FunctionProtocol(ProtocolKind kind, ProtocolParams params)
      : kind_(kind), params_(params), rng_(make_stream(params.seed, Stream::protocol)) {}

  ProtocolDecision decide(std::size_t round, const KnowledgeState& s) override {
    switch (kind_) {
      case ProtocolKind::seq:
        return sequential_flood(round, s);
      case ProtocolKind::block:
        return block_flood(round, s, params_.b);
      case ProtocolKind::greedy_c:
        return greedy_per_token_c(round, s, params_.c);
      case ProtocolKind::random:
        return random_useful(round, s, params_.b, rng_, params_.local_view);
      case ProtocolKind::fec:
        return fec_source(round, s, params_.fec_source, params_.fec_k, params_.local_view);
      case ProtocolKind::partial_seq:
        return phase_flood(round, s, s.n() - 1, std::min(s.k(), partial_target(params_.delta, s.k())));
    }
    throw std::logic_error("unhandled protocol kind");
  }

 private:
  ProtocolKind kind_;
  ProtocolParams params_;
  Rng rng_;
};

}  // namespace

ProtocolKind parse_protocol(const std::string& key) {
  if (key == "seq") return ProtocolKind::seq;
  if (key == "block") return ProtocolKind::block;
  if (key == "greedy-c") return ProtocolKind::greedy_c;
  if (key == "random") return ProtocolKind::random;
  if (key == "fec") return ProtocolKind::fec;
  if (key == "partial-seq") return ProtocolKind::partial_seq;
  throw ConfigError("protocol", "unknown protocol '" + key + "'");
}

std::string to_string(ProtocolKind kind) {
  switch (kind) {
    case ProtocolKind::seq: return "seq";
    case ProtocolKind::block: return "block";
    case ProtocolKind::greedy_c: return "greedy-c";
    case ProtocolKind::random: return "random";
    case ProtocolKind::fec: return "fec";
    case ProtocolKind::partial_seq: return "partial-seq";
  }
  return "?";
}

std::unique_ptr<Protocol> make_protocol(ProtocolKind kind, const ProtocolParams& params) {
  return std::make_unique<FunctionProtocol>(kind, params);
}

}  // namespace tokdis
