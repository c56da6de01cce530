#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace raes {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

/// Simple undirected Delta-regular graph with a fixed global node order.
///
/// Adjacency is stored flat (row v occupies [v*delta, (v+1)*delta)) and every
/// row is strictly increasing. That sorted order is the local neighbor
/// numbering: a random draw i taken by v means "v's i-th neighbor".
class Graph {
 public:
  /// Builds from an edge list; validates simplicity and regularity.
  static Graph from_edges(std::uint32_t n, std::span<const Edge> edges);

  /// Builds from per-node neighbor lists (sorted internally); validates all
  /// invariants including symmetry.
  static Graph from_adjacency(std::vector<std::vector<NodeId>> adjacency);

  std::uint32_t n() const noexcept { return n_; }
  std::uint32_t delta() const noexcept { return delta_; }
  double alpha() const noexcept { return static_cast<double>(delta_) / n_; }
  std::uint64_t edge_count() const noexcept {
    return static_cast<std::uint64_t>(n_) * delta_ / 2;
  }

  std::span<const NodeId> neighbors(NodeId v) const {
    return {adjacency_.data() + static_cast<std::size_t>(v) * delta_, delta_};
  }

  /// Position of w in v's sorted neighbor list, or -1 if not adjacent.
  std::int64_t local_index(NodeId v, NodeId w) const;
  bool has_edge(NodeId v, NodeId w) const { return local_index(v, w) >= 0; }

  /// Edges {u, v} with u < v in lexicographic order.
  std::vector<Edge> edges() const;

  bool connected() const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  Graph(std::uint32_t n, std::uint32_t delta, std::vector<NodeId> adjacency)
      : n_(n), delta_(delta), adjacency_(std::move(adjacency)) {}

  std::uint32_t n_ = 0;
  std::uint32_t delta_ = 0;
  std::vector<NodeId> adjacency_;
};

// Generators. All throw InvalidParameter on bad arguments.

/// K_n, n >= 2.
Graph gen_complete(std::uint32_t n);

/// K_{m,m}: left side {0..m-1}, right side {m..2m-1}.
Graph gen_complete_bipartite(std::uint32_t m);

/// Random simple delta-regular graph, deterministic in `seed`. Pairs stubs
/// uniformly and rejects self-loops / parallel edges; restarts when stuck.
/// Dense requests (delta > (n-1)/2) are built as the complement of a sparse
/// one. Throws GenerationFailure when the restart budget runs out.
Graph gen_random_regular(std::uint32_t n, std::uint32_t delta, std::uint64_t seed);

/// Circulant graph: i ~ i+o (mod n) for each o in `offsets`. The offsets must
/// be distinct, in [1, n-1] and closed under o -> n-o.
Graph gen_circulant(std::uint32_t n, std::span<const std::uint32_t> offsets);

/// Closes an offset list under o -> n-o and sorts it (CLI convenience).
std::vector<std::uint32_t> close_offsets(std::uint32_t n,
                                         std::span<const std::uint32_t> offsets);

/// Membership mask of a node set; throws InvalidParameter on ids >= n.
std::vector<char> node_mask(std::uint32_t n, std::span<const NodeId> set);

/// e(U, W): edges with one endpoint in U and the other in W, each edge
/// counted once. e(S, S) is the number of edges inside S.
struct CutCount {
  std::uint64_t e_uw = 0;
};

CutCount edge_count(const Graph& g, std::span<const NodeId> u_set,
                    std::span<const NodeId> w_set);

/// One-sided mixing bound 1/2 (Delta s^2 / n + lambda_plus s).
double mixing_bound(const Graph& g, std::span<const NodeId> s_set, double lambda2_plus);

}  // namespace raes
