#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tokdis/adversaries.hpp"
#include "tokdis/engine.hpp"

namespace tokdis {

// JSON Lines: line 1 is round 0 with the config echo and the initial K and K'
// sets; every further line is one round with its edges, assignment, gifts and
// diagnostics. Requires report.trace.
void write_trace(std::ostream& out, const RunReport& report);

struct ParsedTrace {
  nlohmann::json config;
  std::size_t n = 0;
  std::size_t universe = 0;
  std::vector<TokenSet> known;
  std::vector<TokenSet> gifted;
  std::vector<TraceRound> rounds;
};

// Throws ParseError with the 1-based line number.
ParsedTrace read_trace(std::istream& in);

// The promise the recorded adversary made.
Promise scenario_from_config(const nlohmann::json& config);

struct VerifyResult {
  bool ok = true;
  std::size_t rounds_checked = 0;
  std::optional<std::size_t> failed_round;
  std::string reason;
};

// Replays the trace from its initial sets and re-checks, round by round, the
// assignment contract, the connectivity promise, that the delivery gain
// stays within 2b per non-free edge, and that the recorded ΔΦ matches.
VerifyResult verify_trace(const ParsedTrace& trace, const Promise& scenario);

}  // namespace tokdis
