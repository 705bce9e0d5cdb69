#pragma once

#include <cstddef>

#include "tokdis/knowledge.hpp"
#include "tokdis/rng.hpp"

namespace tokdis {

// K_u ~ Bernoulli(q) and K'_u ~ Bernoulli(p) per (node, token).
KnowledgeState random_state(std::size_t n, std::size_t k, double q, double p, Rng& rng);

// Every node with a non-empty K_u broadcasts min(b, |K_u|) of its tokens,
// drawn uniformly without replacement; the others stay silent.
TokenAssignment random_assignment(const KnowledgeState& s, std::size_t b, Rng& rng);

}  // namespace tokdis
