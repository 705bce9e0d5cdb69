#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "tokdis/graph.hpp"

namespace tokdis {

bool is_connected(const Graph& g);

// Largest c such that g is c-vertex connected (K_n counts as (n-1)-connected,
// a disconnected graph as 0). Exact: minimum over non-adjacent pairs of the
// number of internally vertex-disjoint paths, each found by unit
// vertex-capacity max flow. Throws std::domain_error for n < 2.
std::size_t vertex_connectivity(const Graph& g);

// A vertex separator: removing `separator` disconnects `side_a` from
// `side_b`. Both sides are non-empty and the three sets partition V, except
// when the graph is too small to be c-connected at all (n <= c), in which
// case both sides are empty.
struct VertexCut {
  std::vector<NodeId> separator;
  std::vector<NodeId> side_a;
  std::vector<NodeId> side_b;
};

// nullopt iff g is c-vertex connected; otherwise some cut with fewer than c
// vertices. c >= 1.
std::optional<VertexCut> find_small_cut(const Graph& g, std::size_t c);

inline bool is_c_connected(const Graph& g, std::size_t c) { return !find_small_cut(g, c).has_value(); }

// Number of internally vertex-disjoint s-t paths, capped at `limit`.
std::size_t local_connectivity(const Graph& g, NodeId s, NodeId t, std::size_t limit);

// True iff every window of T consecutive rounds has a connected intersection
// graph. Windows that would run past the end of the trace are not checked.
// Throws std::domain_error for T < 1.
bool interval_connectivity_ok(const DynamicTrace& trace, std::size_t T);

// Edge intersection of a run of round graphs (all on the same n).
Graph intersect(std::span<const Graph> graphs);

// Circulant Harary-style overlay on `nodes` (taken in the given cyclic
// order): each node is joined to its floor(c/2) successors, and for odd c
// also to its diametric partner; c = 1 degenerates to a path. The result is
// c-vertex connected on `nodes`. Throws std::domain_error when
// |nodes| <= c.
std::vector<Edge> harary_overlay(std::span<const NodeId> nodes, std::size_t c);

struct PeelResult {
  std::vector<NodeId> order;     // removal order
  std::vector<NodeId> residual;  // ascending
};

// Repeatedly removes the smallest-id vertex that still has >= c neighbours
// among the vertices not yet removed. Stops when no such vertex exists or,
// if given, once only `keep_at_least` vertices remain.
PeelResult peel_high_degree(const Graph& g, std::size_t c, std::size_t keep_at_least = 0);

}  // namespace tokdis
