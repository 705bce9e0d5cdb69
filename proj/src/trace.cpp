#include "tokdis/trace.hpp"

#include <deque>
#include <istream>
#include <ostream>
#include <string>

#include "tokdis/config.hpp"
#include "tokdis/connectivity.hpp"
#include "tokdis/errors.hpp"

namespace tokdis {

using nlohmann::json;

namespace {

json set_list(const std::vector<TokenSet>& sets) {
  json out = json::array();
  for (const TokenSet& s : sets) {
    json ids = json::array();
    for (auto t = s.find_first(); t != TokenSet::npos; t = s.find_next(t)) ids.push_back(t);
    out.push_back(std::move(ids));
  }
  return out;
}

json diagnostics(const RoundReport& r) {
  return {{"phi_before", r.phi_before},         {"phi_after", r.phi_after},
          {"delta_phi", r.delta_phi},           {"delivery_delta", r.delivery_delta},
          {"delivery_bound", r.delivery_bound}, {"free_components", r.free_components},
          {"nonfree_edges", r.nonfree_edges},   {"gifted_tokens", r.gifted_tokens},
          {"done_fraction", r.done_fraction}};
}

}  // namespace

void write_trace(std::ostream& out, const RunReport& report) {
  if (!report.trace) throw std::invalid_argument("run was not recorded with a trace");
  const RunTrace& t = *report.trace;
  json head = {{"round", 0},
               {"config", to_json(report.config)},
               {"universe", t.universe},
               {"known", set_list(t.initial_known)},
               {"gifted", set_list(t.initial_gifts)}};
  out << head.dump() << '\n';
  for (const TraceRound& r : t.rounds) {
    json edges = json::array();
    for (const Edge& e : r.edges) edges.push_back({e.u, e.v});
    json gifts = json::array();
    for (const auto& [u, tok] : r.gifts) gifts.push_back({u, tok});
    json line = {{"round", r.round},
                 {"edges", std::move(edges)},
                 {"assignment", r.assignment},
                 {"gifts", std::move(gifts)},
                 {"diagnostics", diagnostics(r.report)}};
    out << line.dump() << '\n';
  }
}

namespace {

template <typename T>
T field(const json& obj, const char* key, std::size_t line) {
  if (!obj.contains(key)) throw ParseError(line, std::string("missing field '") + key + "'");
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(line, std::string("field '") + key + "': " + e.what());
  }
}

std::vector<TokenSet> read_sets(const json& obj, const char* key, std::size_t universe, std::size_t line) {
  const auto lists = field<std::vector<std::vector<std::size_t>>>(obj, key, line);
  std::vector<TokenSet> out;
  for (const auto& ids : lists) {
    TokenSet s(universe);
    for (std::size_t t : ids) {
      if (t >= universe) throw ParseError(line, std::string(key) + ": token id " + std::to_string(t) + " out of range");
      s.set(t);
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

ParsedTrace read_trace(std::istream& in) {
  ParsedTrace trace;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.empty()) continue;
    json obj;
    try {
      obj = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ParseError(line, e.what());
    }
    if (!obj.is_object()) throw ParseError(line, "expected a JSON object");
    const auto round = field<std::size_t>(obj, "round", line);
    if (line == 1) {
      if (round != 0) throw ParseError(line, "first line must be round 0");
      trace.config = field<json>(obj, "config", line);
      trace.universe = field<std::size_t>(obj, "universe", line);
      trace.known = read_sets(obj, "known", trace.universe, line);
      trace.gifted = read_sets(obj, "gifted", trace.universe, line);
      trace.n = trace.known.size();
      if (trace.gifted.size() != trace.n) throw ParseError(line, "known and gifted list different node counts");
      continue;
    }
    if (round != trace.rounds.size() + 1)
      throw ParseError(line, "expected round " + std::to_string(trace.rounds.size() + 1) + ", got " +
                                 std::to_string(round));
    TraceRound r;
    r.round = round;
    for (const auto& pair : field<std::vector<std::vector<std::size_t>>>(obj, "edges", line)) {
      if (pair.size() != 2 || pair[0] == pair[1] || pair[0] >= trace.n || pair[1] >= trace.n)
        throw ParseError(line, "malformed edge");
      r.edges.emplace_back(static_cast<NodeId>(pair[0]), static_cast<NodeId>(pair[1]));
    }
    r.assignment = field<std::vector<std::vector<TokenId>>>(obj, "assignment", line);
    if (r.assignment.size() != trace.n) throw ParseError(line, "assignment does not list every node");
    for (const auto& pair : field<std::vector<std::vector<std::size_t>>>(obj, "gifts", line)) {
      if (pair.size() != 2 || pair[0] >= trace.n || pair[1] >= trace.universe) throw ParseError(line, "malformed gift");
      r.gifts.emplace_back(static_cast<NodeId>(pair[0]), static_cast<TokenId>(pair[1]));
    }
    const json diag = field<json>(obj, "diagnostics", line);
    r.report.round = round;
    r.report.delta_phi = field<std::int64_t>(diag, "delta_phi", line);
    r.report.nonfree_edges = field<std::size_t>(diag, "nonfree_edges", line);
    r.report.free_components = field<std::size_t>(diag, "free_components", line);
    trace.rounds.push_back(std::move(r));
  }
  if (line == 0) throw ParseError(1, "empty trace");
  return trace;
}

Promise scenario_from_config(const json& config) {
  const auto kind = parse_adversary(config.at("adversary").get<std::string>());
  switch (kind) {
    case AdversaryKind::vconn_basic:
    case AdversaryKind::vconn_refined:
      return {PromiseKind::c_connected, config.at("c").get<std::size_t>()};
    case AdversaryKind::interval:
      return {PromiseKind::interval, config.at("T").get<std::size_t>()};
    default:
      return {PromiseKind::connected, 1};
  }
}

VerifyResult verify_trace(const ParsedTrace& trace, const Promise& scenario) {
  VerifyResult result;
  const std::size_t b = trace.config.value("b", std::size_t{1});
  KnowledgeState state(trace.n, trace.universe);
  for (NodeId u = 0; u < trace.n; ++u) {
    state.set_known(u, trace.known[u]);
    state.set_gifted(u, trace.gifted[u]);
  }
  const auto fail = [&](std::size_t round, std::string why) {
    result.ok = false;
    result.failed_round = round;
    result.reason = std::move(why);
    return result;
  };

  std::deque<Graph> window;
  for (const TraceRound& r : trace.rounds) {
    const Graph g(trace.n, r.edges);
    const TokenAssignment a(r.assignment);
    try {
      check_assignment(a, state, b);
    } catch (const ContractViolation& e) {
      return fail(r.round, e.what());
    }

    switch (scenario.kind) {
      case PromiseKind::connected:
        if (!is_connected(g)) return fail(r.round, "graph is disconnected");
        break;
      case PromiseKind::c_connected:
        if (trace.n >= 2 && !is_c_connected(g, scenario.value))
          return fail(r.round, "graph is not " + std::to_string(scenario.value) + "-vertex connected");
        break;
      case PromiseKind::interval:
        window.push_back(g);
        if (window.size() > scenario.value) window.pop_front();
        if (window.size() == scenario.value &&
            !is_connected(intersect(std::vector<Graph>(window.begin(), window.end()))))
          return fail(r.round, "window of " + std::to_string(scenario.value) + " rounds ending here is not connected");
        break;
    }

    const std::int64_t phi_before = potential(state);
    for (const auto& [u, t] : r.gifts) state.add_gift(u, t);
    std::size_t nonfree = 0;
    for (const Edge& e : g.edges())
      if (edge_weight(e.u, e.v, a, state) > 0) ++nonfree;
    Delivery d = deliver(g, a, state);
    if (d.delta.gain() > static_cast<std::int64_t>(2 * b * nonfree))
      return fail(r.round, "delivery gained " + std::to_string(d.delta.gain()) + " over " + std::to_string(nonfree) +
                               " non-free edges");
    state = std::move(d.state);
    const std::int64_t delta = d.delta.after - phi_before;
    if (delta != r.report.delta_phi)
      return fail(r.round, "recorded delta_phi " + std::to_string(r.report.delta_phi) + " but replay gives " +
                               std::to_string(delta));
    ++result.rounds_checked;
  }
  return result;
}

}  // namespace tokdis
