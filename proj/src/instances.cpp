#include "tokdis/instances.hpp"

#include <algorithm>
#include <vector>

namespace tokdis {

KnowledgeState random_state(std::size_t n, std::size_t k, double q, double p, Rng& rng) {
  KnowledgeState s(n, k);
  for (NodeId u = 0; u < n; ++u)
    for (TokenId t = 0; t < k; ++t) {
      if (bernoulli(rng, q)) s.learn(u, t);
      if (bernoulli(rng, p)) s.add_gift(u, t);
    }
  return s;
}

TokenAssignment random_assignment(const KnowledgeState& s, std::size_t b, Rng& rng) {
  TokenAssignment a(s.n());
  std::vector<TokenId> pool;
  for (NodeId u = 0; u < s.n(); ++u) {
    pool.clear();
    for (auto t = s.known(u).find_first(); t != TokenSet::npos; t = s.known(u).find_next(t))
      pool.push_back(static_cast<TokenId>(t));
    const std::size_t take = std::min(b, pool.size());
    for (std::size_t i = 0; i < take; ++i) std::swap(pool[i], pool[i + uniform_below(rng, pool.size() - i)]);
    a.set(u, std::vector<TokenId>(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(take)));
  }
  return a;
}

}  // namespace tokdis
