#include "tokdis/report.hpp"

#include <charconv>
#include <ostream>

namespace tokdis {

std::string csv_header() {
  return "run_id,seed,n,k,b,c,T,delta,protocol,adversary,round,phi,delta_phi,free_components,nonfree_edges,"
         "gifted_tokens,done_fraction";
}

std::string format_double(double x) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

void write_csv(std::ostream& out, std::span<const RunReport> reports) {
  out << csv_header() << '\n';
  for (const RunReport& r : reports) {
    const RunConfig& c = r.config;
    const std::string prefix = std::to_string(r.run_id) + ',' + std::to_string(c.seed) + ',' + std::to_string(c.n) +
                               ',' + std::to_string(c.k) + ',' + std::to_string(c.b) + ',' + std::to_string(c.c) +
                               ',' + std::to_string(c.T) + ',' + format_double(c.delta) + ',' + c.protocol + ',' +
                               c.adversary + ',';
    for (const RoundReport& rr : r.reports) {
      out << prefix << rr.round << ',' << rr.phi_after << ',' << rr.delta_phi << ',' << rr.free_components << ','
          << rr.nonfree_edges << ',' << rr.gifted_tokens << ',' << format_double(rr.done_fraction) << '\n';
    }
  }
}

}  // namespace tokdis
