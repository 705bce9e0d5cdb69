#include <doctest.h>

#include <cmath>
#include <limits>

#include "support.hpp"
#include "tokdis/adversaries.hpp"
#include "tokdis/connectivity.hpp"
#include "tokdis/errors.hpp"
#include "tokdis/instances.hpp"

using namespace tokdis;
using testsupport::naive_gain;
using testsupport::naive_weight;

namespace {

struct Instance {
  KnowledgeState state;
  TokenAssignment assignment;
  std::vector<TokenSet> gifts0;
};

Instance random_instance(Rng& rng, std::size_t n, std::size_t k, std::size_t b, double q = 0.5, double p = 0.25) {
  Instance in;
  in.state = random_state(n, k, q, p, rng);
  for (NodeId u = 0; u < n; ++u) in.gifts0.push_back(in.state.gifted(u));
  in.assignment = random_assignment(in.state, b, rng);
  return in;
}

AdversaryContext context(const Instance& in, std::size_t round = 1) {
  return AdversaryContext{round, in.state, in.assignment, in.gifts0};
}

// Prim's algorithm on the complete weighted graph.
std::int64_t prim_weight(const Instance& in) {
  const std::size_t n = in.state.n();
  std::vector<std::int64_t> best(n, std::numeric_limits<std::int64_t>::max());
  std::vector<char> in_tree(n, 0);
  best[0] = 0;
  std::int64_t total = 0;
  for (std::size_t step = 0; step < n; ++step) {
    NodeId pick = 0;
    std::int64_t lowest = std::numeric_limits<std::int64_t>::max();
    for (NodeId v = 0; v < n; ++v)
      if (!in_tree[v] && best[v] < lowest) {
        lowest = best[v];
        pick = v;
      }
    in_tree[pick] = 1;
    total += lowest;
    for (NodeId v = 0; v < n; ++v)
      if (!in_tree[v])
        best[v] = std::min(best[v], static_cast<std::int64_t>(naive_weight(pick, v, in.assignment, in.state)));
  }
  return total;
}

std::size_t count_free_components(const Instance& in) {
  const std::size_t n = in.state.n();
  DisjointSets ds(n);
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v)
      if (naive_weight(u, v, in.assignment, in.state) == 0) ds.unite(u, v);
  return ds.count();
}

}  // namespace

TEST_CASE("free edge graph examples") {
  SUBCASE("everyone sends the same token") {
    KnowledgeState s(5, 2);
    TokenAssignment a(5);
    for (NodeId u = 0; u < 5; ++u) {
      s.learn(u, 1);
      a.set(u, TokenId{1});
    }
    CHECK(free_edge_graph(a, s).components.count() == 1);
  }
  SUBCASE("full potential") {
    KnowledgeState s(4, 3);
    TokenAssignment a(4);
    for (NodeId u = 0; u < 4; ++u) {
      s.set_known(u, TokenSet(3).set());
      a.set(u, TokenId{u % 3});
    }
    const FreeGraph f = free_edge_graph(a, s);
    CHECK(f.components.count() == 1);
    CHECK(f.graph == Graph::complete(4));
  }
  SUBCASE("distinct tokens, empty K'") {
    KnowledgeState s(6, 6);
    TokenAssignment a(6);
    for (NodeId u = 0; u < 6; ++u) {
      s.learn(u, u);
      a.set(u, TokenId{u});
    }
    CHECK(free_edge_graph(a, s).components.count() == 6);
  }
}

TEST_CASE("k'-free edge list matches the pairwise predicate") {
  Rng rng(41);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + uniform_below(rng, 8);
    const std::size_t k = 1 + uniform_below(rng, 5);
    const Instance in = random_instance(rng, n, k, 2, 0.5, 0.5);
    std::vector<TokenSet> sent(n, TokenSet(k));
    for (NodeId u = 0; u < n; ++u)
      for (TokenId t : in.assignment.of(u)) sent[u].set(t);
    const auto edges = kprime_free_edges(sent, in.gifts0);
    std::vector<Edge> expected;
    for (NodeId u = 0; u < n; ++u)
      for (NodeId v = u + 1; v < n; ++v)
        if (is_kprime_free(u, v, in.assignment, in.gifts0)) expected.emplace_back(u, v);
    CHECK(edges == expected);
  }
}

TEST_CASE("greedy adversary examples") {
  SUBCASE("free graph already connected") {
    KnowledgeState s(4, 1);
    TokenAssignment a(4);
    for (NodeId u = 0; u < 4; ++u) s.learn(u, 0);
    a.set(0, TokenId{0});
    const AdversaryOutput out = greedy_connected({1, s, a, {}}, 1);
    CHECK(out.nonfree_edges == 0);
    CHECK(out.free_components == 1);
    CHECK(potential_gain(out.graph, a, s) == 0);
  }
  SUBCASE("two components") {
    KnowledgeState s(4, 2);
    TokenAssignment a(4);
    for (NodeId u = 0; u < 4; ++u) {
      s.learn(u, u < 2 ? 0 : 1);
      a.set(u, TokenId{u < 2 ? 0U : 1U});
    }
    const AdversaryOutput out = greedy_connected({1, s, a, {}}, 1);
    CHECK(out.free_components == 2);
    CHECK(out.nonfree_edges == 1);
    CHECK(is_connected(out.graph));
    CHECK(out.graph.has_edge(0, 2));
    CHECK(potential_gain(out.graph, a, s) == 2);
  }
}

TEST_CASE("greedy adversary accounting on random instances") {
  Rng rng(42);
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t n = 2 + uniform_below(rng, 20);
    const std::size_t k = 1 + uniform_below(rng, 20);
    const std::size_t b = 1 + uniform_below(rng, 3);
    const Instance in = random_instance(rng, n, k, b);
    const AdversaryOutput out = greedy_connected(context(in), b);
    const std::size_t comps = count_free_components(in);
    CHECK(is_connected(out.graph));
    CHECK(out.free_components == comps);
    CHECK(out.nonfree_edges == comps - 1);
    CHECK(naive_gain(out.graph, in.assignment, in.state) <= static_cast<std::int64_t>(2 * b * (comps - 1)));
    CHECK(out.delivery_bound == static_cast<std::int64_t>(2 * b * (comps - 1)));
    CHECK(out.gifts.empty());
  }
}

TEST_CASE("oracle is the minimum over every connected graph") {
  Rng rng(43);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 2 + uniform_below(rng, 3);  // up to 4 nodes: 64 edge subsets
    const std::size_t k = 1 + uniform_below(rng, 3);
    const Instance in = random_instance(rng, n, k, 1);
    std::int64_t best = std::numeric_limits<std::int64_t>::max();
    testsupport::for_each_connected_graph(
        n, [&](const Graph& g) { best = std::min(best, naive_gain(g, in.assignment, in.state)); });
    const AdversaryOutput out = optimal_oracle(context(in), 1);
    CHECK(is_connected(out.graph));
    CHECK(naive_gain(out.graph, in.assignment, in.state) == best);
    CHECK(out.delivery_bound == best);
  }
}

TEST_CASE("oracle <= greedy <= 2(components - 1) for n = 5, k = 3") {
  Rng rng(44);
  for (int trial = 0; trial < 300; ++trial) {
    const Instance in = random_instance(rng, 5, 3, 1);
    const AdversaryContext ctx = context(in);
    const std::int64_t o = potential_gain(optimal_oracle(ctx, 1).graph, in.assignment, in.state);
    const AdversaryOutput g = greedy_connected(ctx, 1);
    const std::int64_t gg = potential_gain(g.graph, in.assignment, in.state);
    CHECK(o <= gg);
    CHECK(gg <= static_cast<std::int64_t>(2 * (g.free_components - 1)));
  }
}

TEST_CASE("oracle examples and limits") {
  KnowledgeState s(2, 2);
  s.learn(0, 0);
  s.learn(1, 1);
  TokenAssignment a(2);
  a.set(0, TokenId{0});
  a.set(1, TokenId{1});
  const AdversaryOutput two = optimal_oracle({1, s, a, {}}, 1);
  CHECK(two.graph.edge_count() == 1);
  CHECK(potential_gain(two.graph, a, s) == 2);

  KnowledgeState all(6, 2);
  for (NodeId u = 0; u < 6; ++u) all.set_known(u, TokenSet(2).set());
  TokenAssignment b(6);
  for (NodeId u = 0; u < 6; ++u) b.set(u, TokenId{u % 2});
  CHECK(potential_gain(optimal_oracle({1, all, b, {}}, 1).graph, b, all) == 0);

  const KnowledgeState big(8, 1);
  const TokenAssignment silent(8);
  CHECK_THROWS_AS(optimal_oracle({1, big, silent, {}}, 1), SizeError);
}

TEST_CASE("MST adversary weight equals an independent Prim") {
  Rng rng(45);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + uniform_below(rng, 25);
    const std::size_t k = 1 + uniform_below(rng, 12);
    const std::size_t b = 1 + uniform_below(rng, 4);
    const Instance in = random_instance(rng, n, k, b, 0.5, uniform01(rng));
    const AdversaryOutput out = mst_adversary(context(in), b);
    const std::int64_t weight = prim_weight(in);
    CHECK(out.graph.edge_count() == n - 1);
    CHECK(is_connected(out.graph));
    std::int64_t sum = 0;
    for (const Edge& e : out.graph.edges()) sum += static_cast<std::int64_t>(naive_weight(e.u, e.v, in.assignment, in.state));
    CHECK(sum == weight);
    CHECK(out.delivery_bound == weight);
    CHECK(naive_gain(out.graph, in.assignment, in.state) <= weight);
    if (b == 1) CHECK(weight >= static_cast<std::int64_t>(count_free_components(in) - 1));
    CHECK(out.free_components == count_free_components(in));
  }
}

TEST_CASE("MST with all weights zero gains nothing") {
  KnowledgeState s(5, 2);
  TokenAssignment a(5);
  const AdversaryOutput out = mst_adversary({1, s, a, {}}, 1);
  CHECK(is_connected(out.graph));
  CHECK(out.delivery_bound == 0);
  CHECK(potential_gain(out.graph, a, s) == 0);
}

TEST_CASE("basic c-adversary is c-connected") {
  Rng rng(46);
  for (int trial = 0; trial < 120; ++trial) {
    const std::size_t n = 3 + uniform_below(rng, 30);
    const std::size_t c = 1 + uniform_below(rng, std::min<std::size_t>(n - 1, 6));
    const std::size_t k = 1 + uniform_below(rng, 10);
    const Instance in = random_instance(rng, n, k, 1, 0.5, 0.5);
    const AdversaryOutput out = vertex_conn_basic(context(in), c, 1);
    INFO("n=" << n << " c=" << c);
    CHECK(vertex_connectivity(out.graph) >= c);
    CHECK(out.gifts.empty());
    CHECK(naive_gain(out.graph, in.assignment, in.state) <= out.delivery_bound);
    // Every free edge is kept.
    for (NodeId u = 0; u < n; ++u)
      for (NodeId v = u + 1; v < n; ++v)
        if (naive_weight(u, v, in.assignment, in.state) == 0) CHECK(out.graph.has_edge(u, v));
  }
}

TEST_CASE("c-adversaries on a full state emit the complete graph") {
  KnowledgeState s(7, 3);
  TokenAssignment a(7);
  for (NodeId u = 0; u < 7; ++u) {
    s.set_known(u, TokenSet(3).set());
    a.set(u, TokenId{u % 3});
  }
  const AdversaryOutput basic = vertex_conn_basic({1, s, a, {}}, 3, 1);
  CHECK(basic.graph == Graph::complete(7));
  CHECK(basic.nonfree_edges == 0);
  const AdversaryOutput refined = vertex_conn_refined({1, s, a, {}}, {3, 1, 4.0});
  CHECK(refined.graph == Graph::complete(7));
  CHECK(refined.gifts.empty());
  CHECK(refined.nonfree_edges == 0);
}

TEST_CASE("basic c-adversary with c = 1 is connected") {
  Rng rng(47);
  for (int trial = 0; trial < 100; ++trial) {
    const Instance in = random_instance(rng, 2 + uniform_below(rng, 20), 1 + uniform_below(rng, 8), 1);
    CHECK(is_connected(vertex_conn_basic(context(in), 1, 1).graph));
  }
}

TEST_CASE("refined c-adversary is c-connected and only adds gifts") {
  Rng rng(48);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 4 + uniform_below(rng, 40);
    const std::size_t c = 1 + uniform_below(rng, std::min<std::size_t>(n - 1, 5));
    const std::size_t k = 1 + uniform_below(rng, 16);
    const Instance in = random_instance(rng, n, k, 1, 0.5, 0.5);
    const AdversaryOutput out = vertex_conn_refined(context(in), {c, 1, 1.0 + 3.0 * uniform01(rng)});
    INFO("n=" << n << " c=" << c);
    CHECK(vertex_connectivity(out.graph) >= c);
    KnowledgeState after = in.state;
    for (const auto& [u, t] : out.gifts) {
      CHECK_FALSE(in.state.counted(u, t));
      after.add_gift(u, t);
    }
    CHECK(naive_gain(out.graph, in.assignment, after) <= out.delivery_bound);
  }
}

TEST_CASE("refined adversary gifts nothing when every residual node has 2c free neighbours") {
  // Everyone sends token 0 and knows it, so the free graph is complete.
  KnowledgeState s(12, 3);
  TokenAssignment a(12);
  for (NodeId u = 0; u < 12; ++u) {
    s.learn(u, 0);
    if (u % 2 == 0) s.learn(u, 1);
    a.set(u, TokenId{0});
  }
  const AdversaryOutput out = vertex_conn_refined({1, s, a, {}}, {2, 1, 4.0});
  CHECK(out.gifts.empty());
  CHECK(out.nonfree_edges == 0);
  CHECK(vertex_connectivity(out.graph) >= 2);
}

TEST_CASE("interval adversary with T = 1 is the greedy adversary") {
  Rng rng(49);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + uniform_below(rng, 15);
    const std::size_t k = 1 + uniform_below(rng, 10);
    IntervalAdversary interval(n, k, 1, 1);
    Instance in = random_instance(rng, n, k, 1);
    for (std::size_t round = 1; round <= 8; ++round) {
      in.assignment = random_assignment(in.state, 1, rng);
      const AdversaryContext ctx = context(in, round);
      const AdversaryOutput a = interval.choose(ctx);
      const AdversaryOutput g = greedy_connected(ctx, 1);
      CHECK(a.graph == g.graph);
      CHECK(a.nonfree_edges == g.nonfree_edges);
      in.state = deliver(a.graph, in.assignment, in.state).state;
    }
  }
}

TEST_CASE("interval adversary keeps one graph under a constant assignment") {
  Rng rng(50);
  for (std::size_t T : {2, 3, 4}) {
    const Instance in = random_instance(rng, 12, 6, 1);
    IntervalAdversary interval(12, 6, T, 1);
    const Graph first = interval.choose(context(in, 1)).graph;
    for (std::size_t round = 2; round <= 4 * T; ++round) CHECK(interval.choose(context(in, round)).graph == first);
  }
}

TEST_CASE("interval adversary windows stay connected") {
  Rng rng(51);
  for (std::size_t T : {2, 3, 5}) {
    const std::size_t n = 16, k = 16;
    IntervalAdversary interval(n, k, T, 1);
    Instance in = random_instance(rng, n, k, 1, 0.3, 1.0 - 0.5 / static_cast<double>(T));
    DynamicTrace trace(n);
    for (std::size_t round = 1; round <= 6 * T; ++round) {
      in.assignment = random_assignment(in.state, 1, rng);
      const AdversaryOutput out = interval.choose(context(in, round));
      trace.push_back(out.graph);
      in.state = deliver(out.graph, in.assignment, in.state).state;
    }
    INFO("T=" << T);
    CHECK(interval_connectivity_ok(trace, T));
  }
}

TEST_CASE("static path ignores the assignment") {
  KnowledgeState s(5, 1);
  TokenAssignment a(5);
  const AdversaryOutput out = static_path({1, s, a, {}}, 1);
  CHECK(out.graph == Graph(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}}));
}

TEST_CASE("adversary keys and default K' probabilities") {
  for (const char* key : {"greedy", "mst", "partial", "interval", "vconn-basic", "vconn-refined", "oracle", "static-path"})
    CHECK(to_string(parse_adversary(key)) == key);
  CHECK_THROWS_AS(parse_adversary("random"), ConfigError);

  AdversaryParams p;
  p.n = 64;
  p.k = 64;
  p.b = 2;
  p.T = 4;
  p.delta = 0.5;
  CHECK(default_kprime_probability(AdversaryKind::greedy, p) == doctest::Approx(0.25));
  CHECK(default_kprime_probability(AdversaryKind::partial, p) == doctest::Approx(0.125));
  CHECK(default_kprime_probability(AdversaryKind::mst, p) == doctest::Approx(1.0 - 0.5 / (4.0 * std::exp(1.0) * 2.0)));
  CHECK(default_kprime_probability(AdversaryKind::interval, p) == doctest::Approx(1.0 - 0.5 / 4.0));
  CHECK(default_kprime_probability(AdversaryKind::static_path, p) == 0.0);
  CHECK(clamped_log(1.0) == 1.0);
  CHECK(clamped_log(std::exp(3.0)) == doctest::Approx(3.0));
}
