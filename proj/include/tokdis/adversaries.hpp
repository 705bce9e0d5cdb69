#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tokdis/graph.hpp"
#include "tokdis/knowledge.hpp"

namespace tokdis {

// What the adversary may see when fixing round r's graph: the state before
// delivery, this round's broadcasts, and (if it asked for it) every earlier
// graph and assignment.
struct AdversaryContext {
  std::size_t round = 0;
  const KnowledgeState& state;
  const TokenAssignment& assignment;
  std::span<const TokenSet> initial_gifts;  // K'(0)
  std::span<const Graph> past_graphs = {};
  std::span<const TokenAssignment> past_assignments = {};
};

struct AdversaryOutput {
  Graph graph;
  std::vector<std::pair<NodeId, TokenId>> gifts;
  std::size_t free_components = 0;  // of the weight-0 graph, before gifts
  std::size_t nonfree_edges = 0;    // emitted edges of positive weight, after gifts
  // Upper bound on the potential gained through delivery that the
  // construction promises for this round.
  std::int64_t delivery_bound = 0;
};

enum class PromiseKind { connected, c_connected, interval };

struct Promise {
  PromiseKind kind = PromiseKind::connected;
  std::size_t value = 1;  // c or T
};

class Adversary {
 public:
  virtual ~Adversary() = default;
  virtual AdversaryOutput choose(const AdversaryContext& ctx) = 0;
  virtual Promise promise() const { return {}; }
  virtual bool wants_history() const { return false; }
};

struct FreeGraph {
  Graph graph;
  Components components;
};

// All weight-0 edges and their components.
FreeGraph free_edge_graph(const TokenAssignment& a, const KnowledgeState& s);

// Edges {u,v} with sent_u ⊆ gifts_v and sent_v ⊆ gifts_u.
std::vector<Edge> kprime_free_edges(std::span<const TokenSet> sent, std::span<const TokenSet> gifts);

// Free edges plus a chain over the lowest-id node of each free component.
AdversaryOutput greedy_connected(const AdversaryContext& ctx, std::size_t b);

// Minimum spanning tree of K_n under edge weights, Kruskal with ties by (u,v).
AdversaryOutput mst_adversary(const AdversaryContext& ctx, std::size_t b);

// Free graph F, peeled at threshold c; the residual S gets a Harary overlay
// (or, when |S| <= c, a clique on S plus the last peeled vertices).
AdversaryOutput vertex_conn_basic(const AdversaryContext& ctx, std::size_t c, std::size_t b);

struct RefinedParams {
  std::size_t c = 1;
  std::size_t b = 1;
  double alpha = 4.0;
};

// Gifting variant: see the README for the step-by-step description.
AdversaryOutput vertex_conn_refined(const AdversaryContext& ctx, const RefinedParams& params);

// Exhaustive minimum over spanning trees (Prüfer enumeration). n <= 7,
// otherwise SizeError.
AdversaryOutput optimal_oracle(const AdversaryContext& ctx, std::size_t b);

// The path 0-1-...-(n-1) every round, whatever is sent.
AdversaryOutput static_path(const AdversaryContext& ctx, std::size_t b);

// Stable edge sets over overlapping 2T-round horizons so that every window
// of T rounds shares a connected subgraph.
class IntervalAdversary final : public Adversary {
 public:
  IntervalAdversary(std::size_t n, std::size_t k, std::size_t T, std::size_t b);

  AdversaryOutput choose(const AdversaryContext& ctx) override;
  Promise promise() const override { return {PromiseKind::interval, T_}; }

 private:
  struct Horizon {
    std::size_t start = 0;              // the round just before its first round
    std::vector<TokenSet> sent;         // cumulative I_{i,j}
    std::vector<Edge> stable;           // E_1 ∪ ... ∪ E_i so far
    std::vector<Edge> last_free;        // k'-free edges for the previous index
    std::size_t last_parts = 0;         // |S_{T_{i-1}}|
    std::size_t index = 0;              // last index processed
  };

  void advance(Horizon& h, const AdversaryContext& ctx, const Graph& weight_free);

  std::size_t n_;
  std::size_t k_;
  std::size_t T_;
  std::size_t b_;
  std::optional<Horizon> current_;
  std::optional<Horizon> previous_;
};

enum class AdversaryKind { greedy, mst, partial, interval, vconn_basic, vconn_refined, oracle, static_path };

AdversaryKind parse_adversary(const std::string& key);
std::string to_string(AdversaryKind kind);

struct AdversaryParams {
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t b = 1;
  std::size_t c = 1;
  std::size_t T = 1;
  double delta = 1.0;
  double epsilon = 0.5;
  double alpha = 4.0;
};

// The K'(0) inclusion probability each construction is analysed with.
double default_kprime_probability(AdversaryKind kind, const AdversaryParams& params);

std::unique_ptr<Adversary> make_adversary(AdversaryKind kind, const AdversaryParams& params);

// max(1, ln x)
double clamped_log(double x);

}  // namespace tokdis
