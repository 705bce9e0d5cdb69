#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include "tokdis/engine.hpp"

namespace tokdis {

// run_id,seed,n,k,b,c,T,delta,protocol,adversary,round,phi,delta_phi,
// free_components,nonfree_edges,gifted_tokens,done_fraction
std::string csv_header();

// Shortest round-trip decimal form.
std::string format_double(double x);

// One row per round report (round 0 included), header first.
void write_csv(std::ostream& out, std::span<const RunReport> reports);

}  // namespace tokdis
