#pragma once

#include <cstddef>
#include <memory>
#include <string>

#include "tokdis/knowledge.hpp"
#include "tokdis/rng.hpp"

namespace tokdis {

struct ProtocolDecision {
  TokenAssignment assignment;
  bool done = false;  // the protocol's own claim that its schedule is over
};

// One-token-at-a-time flooding: during rounds (j-1)L+1 .. jL every node that
// knows token j-1 broadcasts it. Done once `token_count` phases have passed.
ProtocolDecision phase_flood(std::size_t round, const KnowledgeState& s, std::size_t phase_length,
                             std::size_t token_count);

// Phase length n-1 over all k tokens.
ProtocolDecision sequential_flood(std::size_t round, const KnowledgeState& s);

// Tokens in ceil(k/b) consecutive blocks of b, each flooded for n-1 rounds;
// a node broadcasts every token of the current block it knows.
ProtocolDecision block_flood(std::size_t round, const KnowledgeState& s, std::size_t b);

// Sequential flooding with phases of ceil((n-1)/c) rounds, for always
// c-connected networks.
ProtocolDecision greedy_per_token_c(std::size_t round, const KnowledgeState& s, std::size_t c);

// Each node broadcasts up to b tokens drawn uniformly from the tokens it
// knows that some node still lacks. With `local_view`, a node cannot see
// what others lack and draws from everything it knows.
ProtocolDecision random_useful(std::size_t round, const KnowledgeState& s, std::size_t b, Rng& rng,
                               bool local_view = false);

// Forward-error-correction dissemination over abstract coded packets. The
// state's token universe is the packet-id space; `source` initially holds all
// of it and mints packet r-1 in round r. Every other node forwards one held
// packet: the least widely held one (ties to the newest), or with
// `local_view` simply its newest. Done when every node holds >= k packets.
ProtocolDecision fec_source(std::size_t round, const KnowledgeState& s, NodeId source, std::size_t k,
                            bool local_view = false);

class Protocol {
 public:
  virtual ~Protocol() = default;
  virtual ProtocolDecision decide(std::size_t round, const KnowledgeState& s) = 0;
};

enum class ProtocolKind { seq, block, greedy_c, random, fec, partial_seq };

ProtocolKind parse_protocol(const std::string& key);
std::string to_string(ProtocolKind kind);

struct ProtocolParams {
  std::size_t b = 1;
  std::size_t c = 1;
  double delta = 1.0;
  bool local_view = false;
  NodeId fec_source = 0;
  std::size_t fec_k = 0;
  std::uint64_t seed = 0;
};

std::unique_ptr<Protocol> make_protocol(ProtocolKind kind, const ProtocolParams& params);

// ceil(delta * k) with a small tolerance for binary fractions like 0.1.
std::size_t partial_target(double delta, std::size_t k);

}  // namespace tokdis
