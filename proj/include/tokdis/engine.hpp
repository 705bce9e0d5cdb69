#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tokdis/adversaries.hpp"
#include "tokdis/knowledge.hpp"
#include "tokdis/protocols.hpp"

namespace tokdis {

enum class Termination { full, partial, fec };

enum class InitialKind { bernoulli, single_source, explicit_sets };

struct InitialDistribution {
  InitialKind kind = InitialKind::bernoulli;
  double q = 0.5;
  std::vector<std::vector<TokenId>> sets;  // explicit_sets only
};

struct RunConfig {
  std::size_t n = 8;
  std::size_t k = 4;
  std::size_t b = 1;
  std::size_t c = 1;
  std::size_t T = 1;
  double delta = 1.0;
  std::optional<double> p_kprime;  // unset: the adversary's own default
  double epsilon = 0.5;
  double alpha = 4.0;
  InitialDistribution initial;
  std::string protocol = "seq";
  std::string adversary = "greedy";
  std::uint64_t seed = 1;
  std::size_t max_rounds = 0;  // 0: 4nk (at least 1)
  Termination termination = Termination::full;
  bool local_view = false;
  bool emit_trace = false;
};

// Throws ConfigError naming the offending key.
void validate(const RunConfig& config);

std::size_t effective_max_rounds(const RunConfig& config);
double effective_kprime(const RunConfig& config);

struct RoundReport {
  std::size_t round = 0;
  std::int64_t phi_before = 0;  // before gifts
  std::int64_t phi_after = 0;
  std::int64_t delta_phi = 0;   // gifts included
  std::int64_t delivery_delta = 0;
  std::int64_t delivery_bound = 0;
  std::size_t free_components = 0;
  std::size_t nonfree_edges = 0;
  std::size_t gifted_tokens = 0;
  double done_fraction = 0.0;  // min_u |K_u| / k, capped at 1
};

struct TraceRound {
  std::size_t round = 0;
  std::vector<Edge> edges;
  std::vector<std::vector<TokenId>> assignment;
  std::vector<std::pair<NodeId, TokenId>> gifts;
  RoundReport report;
};

struct RunTrace {
  std::size_t universe = 0;  // token (or packet) id space
  std::vector<TokenSet> initial_known;
  std::vector<TokenSet> initial_gifts;
  std::vector<TraceRound> rounds;
};

enum class RunStatus { terminated, max_rounds, protocol_exhausted };

std::string to_string(RunStatus status);

struct RunReport {
  std::size_t run_id = 0;
  RunConfig config;
  RunStatus status = RunStatus::max_rounds;
  std::size_t rounds = 0;  // rounds executed
  std::int64_t phi0 = 0;
  std::int64_t max_delta_phi = 0;
  std::int64_t target_phi = 0;
  bool identity_ok = true;  // rounds * max ΔΦ >= target - Φ(0) when terminated
  std::size_t violations = 0;  // rounds whose delivery gain exceeded the adversary's bound
  double initial_average = 0.0;  // mean |K_u(0)|
  std::vector<RoundReport> reports;  // reports[0] is the round-0 snapshot
  KnowledgeState final_state;
  std::optional<RunTrace> trace;
};

// Every node's K_u(0) for the configured distribution (universe = token or
// packet id space).
std::vector<TokenSet> initial_knowledge(const RunConfig& config, std::size_t universe);

// The termination predicate for `config` on `s`.
bool terminated(const RunConfig& config, const KnowledgeState& s);

RunReport run(const RunConfig& config);

// Same loop with a caller-supplied adversary in place of config.adversary
// (which still selects the K' probability default).
RunReport run(const RunConfig& config, Adversary& adversary);

// Runs every point `reps` times with seeds seed, seed+1, ...; the result is
// ordered point-major with run_id equal to its index. `jobs` > 1 runs in
// parallel.
std::vector<RunReport> sweep(std::span<const RunConfig> points, std::size_t reps, std::size_t jobs = 1);

}  // namespace tokdis
