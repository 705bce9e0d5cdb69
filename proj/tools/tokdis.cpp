// tokdis: run token-dissemination simulations, verify recorded traces, and
// compare the greedy adversary against the exhaustive oracle.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "tokdis/adversaries.hpp"
#include "tokdis/config.hpp"
#include "tokdis/engine.hpp"
#include "tokdis/errors.hpp"
#include "tokdis/instances.hpp"
#include "tokdis/report.hpp"
#include "tokdis/trace.hpp"

namespace {

using nlohmann::json;
using namespace tokdis;

enum Exit { ok = 0, usage = 1, failed = 2, internal = 3 };

// A flag value: JSON text as is, otherwise a comma-separated list where each
// item is a JSON scalar or a bare string. Several items form a sweep axis.
json flag_value(const std::string& text) {
  try {
    json whole = json::parse(text);
    if (!whole.is_string()) return whole;
  } catch (const json::parse_error&) {
  }
  json items = json::array();
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    try {
      json v = json::parse(item);
      items.push_back(v.is_object() || v.is_array() ? json(item) : v);
    } catch (const json::parse_error&) {
      items.push_back(item);
    }
  }
  return items.size() == 1 ? items[0] : items;
}

std::string trace_path(const std::string& base, std::size_t run_id, std::size_t total) {
  if (total == 1) return base;
  const auto dot = base.rfind('.');
  const std::string stem = dot == std::string::npos ? base : base.substr(0, dot);
  const std::string ext = dot == std::string::npos ? "" : base.substr(dot);
  return stem + "." + std::to_string(run_id) + ext;
}

int cmd_run(const std::string& config_path, const std::map<std::string, std::string>& flags,
            const std::string& trace_out, const std::string& output, std::size_t jobs, bool summary) {
  ConfigDocument doc;
  if (!config_path.empty()) doc = load_config_file(config_path);
  json overrides = json::object();
  for (const auto& [key, text] : flags) overrides[key] = flag_value(text);
  if (!trace_out.empty()) overrides["emit_trace"] = true;
  merge_config(doc, overrides);

  const std::vector<RunConfig> points = expand(doc);
  const std::vector<RunReport> reports = sweep(points, doc.reps, jobs);

  if (output.empty() || output == "-") {
    write_csv(std::cout, reports);
  } else {
    std::ofstream out(output, std::ios::binary);
    if (!out) throw ConfigError("output", "cannot write " + output);
    write_csv(out, reports);
  }
  if (!trace_out.empty()) {
    for (const RunReport& r : reports) {
      std::ofstream out(trace_path(trace_out, r.run_id, reports.size()), std::ios::binary);
      if (!out) throw ConfigError("emit_trace", "cannot write " + trace_out);
      write_trace(out, r);
    }
  }
  bool all_ok = true;
  for (const RunReport& r : reports) {
    if (summary)
      std::cerr << "run " << r.run_id << ": " << to_string(r.status) << " after " << r.rounds
                << " rounds, phi0=" << r.phi0 << ", max_delta_phi=" << r.max_delta_phi
                << ", violations=" << r.violations << ", identity=" << (r.identity_ok ? "ok" : "FAILED") << '\n';
    all_ok = all_ok && r.identity_ok;
  }
  return all_ok ? ok : failed;
}

int cmd_verify(const std::string& path, bool connected, std::size_t c, std::size_t T) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "cannot open " << path << '\n';
    return usage;
  }
  ParsedTrace trace;
  try {
    trace = read_trace(in);
  } catch (const ParseError& e) {
    std::cerr << path << ": " << e.what() << '\n';
    return failed;
  }
  Promise scenario;
  if (connected) scenario = {PromiseKind::connected, 1};
  else if (c > 0) scenario = {PromiseKind::c_connected, c};
  else if (T > 0) scenario = {PromiseKind::interval, T};
  else scenario = scenario_from_config(trace.config);

  const VerifyResult r = verify_trace(trace, scenario);
  if (!r.ok) {
    std::cout << "FAIL at round " << *r.failed_round << ": " << r.reason << '\n';
    return failed;
  }
  std::cout << "OK " << r.rounds_checked << " rounds\n";
  return ok;
}

int cmd_oracle_compare(std::size_t n, std::size_t k, std::size_t trials, std::uint64_t seed, double p, double q) {
  if (n < 1 || n > 6) throw SizeError("oracle-compare supports 1 <= n <= 6");
  if (k > 3) throw SizeError("oracle-compare supports k <= 3");
  Rng rng = make_stream(seed, Stream::trials);
  std::cout << "trial,oracle,greedy,bound\n";
  std::size_t bad = 0;
  double worst_ratio = 0.0;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    const KnowledgeState s = random_state(n, k, q, p, rng);
    const TokenAssignment a = random_assignment(s, 1, rng);
    const AdversaryContext ctx{trial + 1, s, a, {}};
    const auto oracle = optimal_oracle(ctx, 1);
    const auto greedy = greedy_connected(ctx, 1);
    const std::int64_t o = potential_gain(oracle.graph, a, s);
    const std::int64_t g = potential_gain(greedy.graph, a, s);
    const auto bound = static_cast<std::int64_t>(2 * (greedy.free_components - 1));
    std::cout << trial << ',' << o << ',' << g << ',' << bound << '\n';
    if (!(o <= g && g <= bound)) ++bad;
    if (o > 0) worst_ratio = std::max(worst_ratio, static_cast<double>(g) / static_cast<double>(o));
  }
  std::cerr << trials << " trials, " << bad << " out of order, max greedy/oracle ratio " << format_double(worst_ratio)
            << '\n';
  return bad == 0 ? ok : failed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Token dissemination in adversarial dynamic networks"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run a configuration or sweep; CSV on standard output");
  std::string config_path, trace_out, output;
  std::size_t jobs = 1;
  bool summary = false;
  std::map<std::string, std::string> flags;
  run->add_option("--config", config_path, "JSON config file (also searched in $TOKDIS_CONFIG_DIR)");
  for (const std::string& key : config_keys()) {
    if (key == "emit_trace") continue;
    run->add_option_function<std::string>(
        "--" + key, [&flags, key](const std::string& v) { flags[key] = v; },
        "Overrides the config file; a comma-separated list sweeps");
  }
  run->add_option("--emit-trace", trace_out, "Write the JSONL trace here (one file per run for sweeps)");
  run->add_option("-o,--output", output, "CSV destination (default: standard output)");
  run->add_option("--jobs", jobs, "Parallel runs in a sweep")->check(CLI::PositiveNumber);
  run->add_flag("--summary", summary, "Per-run summary on standard error");

  auto* verify = app.add_subcommand("verify", "Re-check a JSONL trace offline");
  std::string trace_path_in;
  bool connected = false;
  std::size_t vc = 0, vT = 0;
  verify->add_option("trace", trace_path_in, "Trace file")->required();
  auto* g_connected = verify->add_flag("--connected", connected, "Check plain connectivity");
  auto* g_c = verify->add_option("--c", vc, "Check c-vertex connectivity")->check(CLI::PositiveNumber);
  auto* g_T = verify->add_option("--T", vT, "Check T-interval connectivity")->check(CLI::PositiveNumber);
  g_connected->excludes(g_c)->excludes(g_T);
  g_c->excludes(g_T);

  auto* compare = app.add_subcommand("oracle-compare", "Greedy adversary against the exhaustive optimum");
  std::size_t on = 4, ok_tokens = 2, trials = 100;
  std::uint64_t oseed = 1;
  double op = 0.25, oq = 0.5;
  compare->add_option("--n", on, "Nodes (<= 6)");
  compare->add_option("--k", ok_tokens, "Tokens (<= 3)");
  compare->add_option("--trials", trials, "Random (state, assignment) pairs");
  compare->add_option("--seed", oseed, "Seed");
  compare->add_option("--p", op, "K' inclusion probability");
  compare->add_option("--q", oq, "K inclusion probability");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? ok : usage;
  }

  try {
    if (*run) return cmd_run(config_path, flags, trace_out, output, jobs, summary);
    if (*verify) return cmd_verify(trace_path_in, connected, vc, vT);
    if (*compare) return cmd_oracle_compare(on, ok_tokens, trials, oseed, op, oq);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return usage;
  } catch (const SizeError& e) {
    std::cerr << "size error: " << e.what() << '\n';
    return usage;
  } catch (const PromiseViolation& e) {
    std::cerr << "promise violation: " << e.what() << '\n';
    return failed;
  } catch (const ContractViolation& e) {
    std::cerr << "contract violation: " << e.what() << '\n';
    return failed;
  } catch (const ConstructionError& e) {
    std::cerr << "construction error: " << e.what() << '\n';
    return internal;
  }
  return usage;
}
