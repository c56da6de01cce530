#pragma once

#include <vector>

#include "raes/graph.hpp"
#include "raes/protocol.hpp"

namespace fixtures {

// K_4, d=1, c=1, T=4. Rows are indices into each node's sorted neighbor list.
inline raes::RaesParams hand_params() { return {1, raes::Rational::make(1, 1), 4}; }

inline raes::RandomTape hand_tape() {
  return raes::RandomTape(4, 3, 1, 4,
                          {0, 0, 0, 0,    // node 0 -> 1
                           0, 1, 0, 0,    // node 1 -> 0, 2
                           0, 1, 2, 0,    // node 2 -> 0, 1, 3
                           0, 1, 2, 0});  // node 3 -> 0, 1, 2, 0
}

inline std::vector<raes::NodeId> iota(std::uint32_t n) {
  std::vector<raes::NodeId> v(n);
  for (std::uint32_t i = 0; i < n; ++i) v[i] = i;
  return v;
}

}  // namespace fixtures
