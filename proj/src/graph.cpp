#include "raes/graph.hpp"

#include <algorithm>
#include <queue>
#include <string>

#include "raes/error.hpp"

namespace raes {

Graph Graph::from_adjacency(std::vector<std::vector<NodeId>> adjacency) {
  const auto n = static_cast<std::uint32_t>(adjacency.size());
  if (n < 2) throw InvalidParameter("graph needs at least 2 nodes");
  const auto delta = static_cast<std::uint32_t>(adjacency[0].size());
  if (delta == 0) throw InvalidParameter("graph must have positive degree");

  std::vector<NodeId> flat;
  flat.reserve(static_cast<std::size_t>(n) * delta);
  for (NodeId v = 0; v < n; ++v) {
    auto& row = adjacency[v];
    if (row.size() != delta) {
      throw InvalidParameter("graph is not regular: node " + std::to_string(v) +
                             " has degree " + std::to_string(row.size()) +
                             ", expected " + std::to_string(delta));
    }
    std::sort(row.begin(), row.end());
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (row[i] >= n) throw InvalidParameter("neighbor id out of range at node " + std::to_string(v));
      if (row[i] == v) throw InvalidParameter("self-loop at node " + std::to_string(v));
      if (i > 0 && row[i] == row[i - 1]) {
        throw InvalidParameter("duplicate edge " + std::to_string(v) + "-" + std::to_string(row[i]));
      }
    }
    flat.insert(flat.end(), row.begin(), row.end());
  }
  Graph g(n, delta, std::move(flat));
  for (NodeId v = 0; v < n; ++v) {
    for (NodeId w : g.neighbors(v)) {
      if (!g.has_edge(w, v)) {
        throw InvalidParameter("adjacency not symmetric: " + std::to_string(v) + "->" +
                               std::to_string(w));
      }
    }
  }
  return g;
}

Graph Graph::from_edges(std::uint32_t n, std::span<const Edge> edges) {
  std::vector<std::vector<NodeId>> adjacency(n);
  for (auto [u, v] : edges) {
    if (u >= n || v >= n) throw InvalidParameter("edge endpoint out of range");
    adjacency[u].push_back(v);
    adjacency[v].push_back(u);
  }
  return from_adjacency(std::move(adjacency));
}

std::int64_t Graph::local_index(NodeId v, NodeId w) const {
  auto row = neighbors(v);
  auto it = std::lower_bound(row.begin(), row.end(), w);
  if (it == row.end() || *it != w) return -1;
  return it - row.begin();
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count());
  for (NodeId u = 0; u < n_; ++u) {
    for (NodeId v : neighbors(u)) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

bool Graph::connected() const {
  std::vector<char> seen(n_, 0);
  std::queue<NodeId> frontier;
  frontier.push(0);
  seen[0] = 1;
  std::uint32_t count = 1;
  while (!frontier.empty()) {
    NodeId v = frontier.front();
    frontier.pop();
    for (NodeId w : neighbors(v)) {
      if (!seen[w]) {
        seen[w] = 1;
        ++count;
        frontier.push(w);
      }
    }
  }
  return count == n_;
}

std::vector<char> node_mask(std::uint32_t n, std::span<const NodeId> set) {
  std::vector<char> mask(n, 0);
  for (NodeId v : set) {
    if (v >= n) throw InvalidParameter("node id " + std::to_string(v) + " out of range");
    mask[v] = 1;
  }
  return mask;
}

CutCount edge_count(const Graph& g, std::span<const NodeId> u_set,
                    std::span<const NodeId> w_set) {
  const auto in_u = node_mask(g.n(), u_set);
  const auto in_w = node_mask(g.n(), w_set);
  CutCount out;
  for (NodeId x = 0; x < g.n(); ++x) {
    if (!in_u[x] && !in_w[x]) continue;
    for (NodeId y : g.neighbors(x)) {
      if (y <= x) continue;
      if ((in_u[x] && in_w[y]) || (in_u[y] && in_w[x])) ++out.e_uw;
    }
  }
  return out;
}

double mixing_bound(const Graph& g, std::span<const NodeId> s_set, double lambda2_plus) {
  if (s_set.empty()) throw InvalidParameter("mixing bound needs a nonempty set");
  const auto mask = node_mask(g.n(), s_set);
  const double s = static_cast<double>(std::count(mask.begin(), mask.end(), 1));
  const double lam = std::max(lambda2_plus, 0.0);
  return 0.5 * (static_cast<double>(g.delta()) * s * s / g.n() + lam * s);
}

}  // namespace raes
