#pragma once

#include <cstdint>
#include <vector>

#include "raes/analysis.hpp"
#include "raes/graph.hpp"
#include "raes/protocol.hpp"

namespace raes::codec::detail {

/// All requests of one node in tape order.
struct NodeRequests {
  std::vector<std::uint32_t> round;  // 1-based
  std::vector<NodeId> dest;
  std::vector<bool> accepted;
};

inline NodeRequests requests_of(const ExecutionTrace& trace, NodeId v) {
  NodeRequests out;
  for (std::uint32_t t = 1; t <= trace.rounds_recorded(); ++t) {
    for (const auto& r : trace.rounds[t - 1].from(v)) {
      out.round.push_back(t);
      out.dest.push_back(r.to);
      out.accepted.push_back(r.accepted);
    }
  }
  return out;
}

/// v's neighbors inside S, in global order: the local numbering used for
/// accepted destinations that stay inside S.
inline std::vector<NodeId> neighbors_in(const Graph& g, NodeId v, const std::vector<char>& in_s) {
  std::vector<NodeId> out;
  for (NodeId w : g.neighbors(v)) {
    if (in_s[w]) out.push_back(w);
  }
  return out;
}

}  // namespace raes::codec::detail
