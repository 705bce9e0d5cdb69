#pragma once

#include <cstdint>
#include <boost/dynamic_bitset.hpp>

namespace tokdis {

using NodeId = std::uint32_t;
using TokenId = std::uint32_t;

// Dense per-node token set, indexed by token id.
using TokenSet = boost::dynamic_bitset<std::uint64_t>;

}  // namespace tokdis
