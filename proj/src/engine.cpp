#include "tokdis/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <exception>
#include <mutex>
#include <thread>

#include "tokdis/connectivity.hpp"
#include "tokdis/errors.hpp"

namespace tokdis {

std::string to_string(RunStatus status) {
  switch (status) {
    case RunStatus::terminated: return "terminated";
    case RunStatus::max_rounds: return "max_rounds";
    case RunStatus::protocol_exhausted: return "protocol_exhausted";
  }
  return "?";
}

std::size_t effective_max_rounds(const RunConfig& config) {
  return config.max_rounds != 0 ? config.max_rounds : std::max<std::size_t>(1, 4 * config.n * config.k);
}

namespace {

AdversaryParams adversary_params(const RunConfig& config) {
  return {config.n, config.k, config.b, config.c, config.T, config.delta, config.epsilon, config.alpha};
}

std::size_t universe_of(const RunConfig& config) {
  return config.termination == Termination::fec ? effective_max_rounds(config) : config.k;
}

std::size_t required_tokens(const RunConfig& config) {
  switch (config.termination) {
    case Termination::full:
    case Termination::fec:
      return config.k;
    case Termination::partial:
      return partial_target(config.delta, config.k);
  }
  return config.k;
}

}  // namespace

double effective_kprime(const RunConfig& config) {
  if (config.p_kprime) return *config.p_kprime;
  return default_kprime_probability(parse_adversary(config.adversary), adversary_params(config));
}

void validate(const RunConfig& c) {
  if (c.n < 1) throw ConfigError("n", "must be >= 1");
  if (c.b < 1) throw ConfigError("b", "must be >= 1");
  if (c.c < 1 || (c.n >= 2 && c.c > c.n - 1)) throw ConfigError("c", "must lie in [1, n-1]");
  if (c.T < 1) throw ConfigError("T", "must be >= 1");
  if (!(c.delta > 0.0 && c.delta <= 1.0)) throw ConfigError("delta", "must lie in (0, 1]");
  if (c.p_kprime && !(*c.p_kprime >= 0.0 && *c.p_kprime <= 1.0)) throw ConfigError("p_kprime", "must lie in [0, 1]");
  if (!(c.epsilon > 0.0)) throw ConfigError("epsilon", "must be > 0");
  if (!(c.alpha > 0.0)) throw ConfigError("alpha", "must be > 0");
  if (c.initial.kind == InitialKind::bernoulli && !(c.initial.q >= 0.0 && c.initial.q <= 1.0))
    throw ConfigError("q_initial", "must lie in [0, 1]");
  if (c.initial.kind == InitialKind::explicit_sets) {
    if (c.initial.sets.size() != c.n) throw ConfigError("initial", "explicit sets must list every node");
    for (const auto& set : c.initial.sets)
      for (TokenId t : set)
        if (t >= c.k) throw ConfigError("initial", "token id " + std::to_string(t) + " >= k");
  }
  const ProtocolKind protocol = parse_protocol(c.protocol);
  const AdversaryKind adversary = parse_adversary(c.adversary);
  if ((protocol == ProtocolKind::fec) != (c.termination == Termination::fec))
    throw ConfigError("termination", "fec termination goes with the fec protocol and only with it");
  if (protocol == ProtocolKind::fec && c.initial.kind == InitialKind::bernoulli)
    throw ConfigError("initial", "the fec protocol needs exactly one initial source");
  if (adversary == AdversaryKind::oracle && c.n > 7) throw ConfigError("n", "the oracle adversary supports n <= 7");
}

std::vector<TokenSet> initial_knowledge(const RunConfig& config, std::size_t universe) {
  const std::size_t n = config.n;
  std::vector<TokenSet> sets(n, TokenSet(universe));
  switch (config.initial.kind) {
    case InitialKind::bernoulli: {
      Rng rng = make_stream(config.seed, Stream::initial);
      for (auto& set : sets)
        for (std::size_t t = 0; t < universe; ++t)
          if (bernoulli(rng, config.initial.q)) set.set(t);
      // A token nobody holds could never spread; hand it to a random node.
      for (std::size_t t = 0; t < universe; ++t) {
        const bool held = std::any_of(sets.begin(), sets.end(), [&](const TokenSet& s) { return s.test(t); });
        if (!held) sets[uniform_below(rng, n)].set(t);
      }
      break;
    }
    case InitialKind::single_source:
      sets[0].set();
      break;
    case InitialKind::explicit_sets:
      for (std::size_t u = 0; u < n; ++u)
        for (TokenId t : config.initial.sets[u]) sets[u].set(t);
      break;
  }
  return sets;
}

bool terminated(const RunConfig& config, const KnowledgeState& s) {
  const std::size_t need = required_tokens(config);
  for (NodeId u = 0; u < s.n(); ++u)
    if (s.known(u).count() < need) return false;
  return true;
}

namespace {

double done_fraction(const KnowledgeState& s, std::size_t k) {
  if (k == 0) return 1.0;
  std::size_t least = k;
  for (NodeId u = 0; u < s.n(); ++u) least = std::min(least, s.known(u).count());
  return std::min(1.0, static_cast<double>(least) / static_cast<double>(k));
}

void check_promise(const Promise& promise, const Graph& g, std::size_t round, std::deque<Graph>& window) {
  switch (promise.kind) {
    case PromiseKind::connected:
      if (!is_connected(g)) throw PromiseViolation(round, "graph is disconnected");
      return;
    case PromiseKind::c_connected:
      if (g.n() >= 2 && !is_c_connected(g, promise.value))
        throw PromiseViolation(round, "graph is not " + std::to_string(promise.value) + "-vertex connected");
      return;
    case PromiseKind::interval: {
      window.push_back(g);
      if (window.size() > promise.value) window.pop_front();
      if (window.size() == promise.value) {
        const std::vector<Graph> span(window.begin(), window.end());
        if (!is_connected(intersect(span)))
          throw PromiseViolation(round, "rounds " + std::to_string(round + 1 - promise.value) + ".." +
                                            std::to_string(round) + " share no connected subgraph");
      }
      return;
    }
  }
}

}  // namespace

RunReport run(const RunConfig& config) {
  validate(config);
  const auto adversary = make_adversary(parse_adversary(config.adversary), adversary_params(config));
  return run(config, *adversary);
}

RunReport run(const RunConfig& config, Adversary& adversary) {
  validate(config);
  const std::size_t n = config.n;
  const std::size_t universe = universe_of(config);
  const std::size_t max_rounds = effective_max_rounds(config);
  const ProtocolKind protocol_kind = parse_protocol(config.protocol);

  RunReport report;
  report.config = config;

  KnowledgeState state(n, universe);
  std::vector<TokenSet> known0 = initial_knowledge(config, universe);
  const std::vector<TokenSet> gifts0 = sample_kprime(n, universe, effective_kprime(config), config.seed);

  ProtocolParams pp;
  pp.b = config.b;
  pp.c = config.c;
  pp.delta = config.delta;
  pp.local_view = config.local_view;
  pp.fec_k = config.k;
  pp.seed = config.seed;
  if (protocol_kind == ProtocolKind::fec) {
    std::size_t sources = 0;
    for (NodeId u = 0; u < n; ++u) {
      if (known0[u].none()) continue;
      ++sources;
      pp.fec_source = u;
    }
    if (sources != 1) throw ConfigError("initial", "the fec protocol needs exactly one initial source");
    known0[pp.fec_source].set();  // the source can mint every packet id
  }
  for (NodeId u = 0; u < n; ++u) {
    state.set_known(u, known0[u]);
    state.set_gifted(u, gifts0[u]);
  }
  auto protocol = make_protocol(protocol_kind, pp);
  const Promise promise = adversary.promise();

  report.phi0 = potential(state);
  std::size_t initial_total = 0;
  for (const auto& set : known0) initial_total += set.count();
  report.initial_average = static_cast<double>(initial_total) / static_cast<double>(n);
  report.target_phi = static_cast<std::int64_t>(n * required_tokens(config));

  RoundReport zero;
  zero.phi_before = zero.phi_after = report.phi0;
  zero.done_fraction = done_fraction(state, config.k);
  report.reports.push_back(zero);

  if (config.emit_trace) report.trace = RunTrace{universe, known0, gifts0, {}};

  std::deque<Graph> window;
  std::vector<Graph> past_graphs;
  std::vector<TokenAssignment> past_assignments;
  const bool keep_history = adversary.wants_history();

  std::size_t round = 1;
  for (;; ++round) {
    if (terminated(config, state)) {
      report.status = RunStatus::terminated;
      break;
    }
    if (round > max_rounds) {
      report.status = RunStatus::max_rounds;
      break;
    }
    ProtocolDecision decision = protocol->decide(round, state);
    if (decision.done) {
      report.status = RunStatus::protocol_exhausted;
      break;
    }
    check_assignment(decision.assignment, state, config.b);

    const AdversaryContext ctx{round, state, decision.assignment, gifts0, past_graphs, past_assignments};
    AdversaryOutput out = adversary.choose(ctx);
    if (out.graph.n() != n)
      throw PromiseViolation(round, "graph has " + std::to_string(out.graph.n()) + " nodes, expected " +
                                        std::to_string(n));
    check_promise(promise, out.graph, round, window);

    RoundReport rr;
    rr.round = round;
    rr.phi_before = potential(state);
    for (const auto& [u, t] : out.gifts) {
      if (u >= n || t >= universe) throw ConstructionError("gift outside the node or token range");
      state.add_gift(u, t);
    }
    const std::int64_t phi_gifted = potential(state);
    Delivery delivery = deliver(out.graph, decision.assignment, state);
    state = std::move(delivery.state);
    rr.phi_after = delivery.delta.after;
    rr.delta_phi = rr.phi_after - rr.phi_before;
    rr.delivery_delta = rr.phi_after - phi_gifted;
    rr.delivery_bound = out.delivery_bound;
    rr.free_components = out.free_components;
    rr.nonfree_edges = out.nonfree_edges;
    rr.gifted_tokens = static_cast<std::size_t>(phi_gifted - rr.phi_before);
    rr.done_fraction = done_fraction(state, config.k);
    if (rr.delivery_delta > rr.delivery_bound) ++report.violations;
    report.max_delta_phi = std::max(report.max_delta_phi, rr.delta_phi);
    report.reports.push_back(rr);

    if (report.trace)
      report.trace->rounds.push_back({round, out.graph.edges(), decision.assignment.sets(), out.gifts, rr});
    if (keep_history) {
      past_graphs.push_back(std::move(out.graph));
      past_assignments.push_back(std::move(decision.assignment));
    }
  }
  report.rounds = round - 1;
  if (report.status == RunStatus::terminated) {
    const std::int64_t needed = report.target_phi - report.phi0;
    report.identity_ok = static_cast<std::int64_t>(report.rounds) * report.max_delta_phi >= needed;
  }
  report.final_state = std::move(state);
  return report;
}

std::vector<RunReport> sweep(std::span<const RunConfig> points, std::size_t reps, std::size_t jobs) {
  std::vector<RunConfig> runs;
  runs.reserve(points.size() * reps);
  for (const RunConfig& point : points)
    for (std::size_t rep = 0; rep < reps; ++rep) {
      RunConfig c = point;
      c.seed = point.seed + rep;
      runs.push_back(std::move(c));
    }

  std::vector<RunReport> out(runs.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::size_t failed_at = runs.size();
  std::mutex failure_mutex;
  const auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < runs.size();) {
      try {
        out[i] = run(runs[i]);
        out[i].run_id = i;
      } catch (...) {
        // Report the failure a sequential sweep would have hit first.
        const std::lock_guard lock(failure_mutex);
        if (i < failed_at) {
          failed_at = i;
          failure = std::current_exception();
        }
      }
    }
  };
  const std::size_t threads = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(1, runs.size()));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace tokdis
