#include <algorithm>
#include <random>
#include <string>

#include "raes/error.hpp"
#include "raes/graph.hpp"

namespace raes {

Graph gen_complete(std::uint32_t n) {
  if (n < 2) throw InvalidParameter("complete graph needs n >= 2");
  std::vector<std::vector<NodeId>> adjacency(n);
  for (NodeId v = 0; v < n; ++v) {
    adjacency[v].reserve(n - 1);
    for (NodeId w = 0; w < n; ++w) {
      if (w != v) adjacency[v].push_back(w);
    }
  }
  return Graph::from_adjacency(std::move(adjacency));
}

Graph gen_complete_bipartite(std::uint32_t m) {
  if (m < 1) throw InvalidParameter("complete bipartite graph needs m >= 1");
  std::vector<std::vector<NodeId>> adjacency(2 * m);
  for (NodeId v = 0; v < m; ++v) {
    for (NodeId w = m; w < 2 * m; ++w) {
      adjacency[v].push_back(w);
      adjacency[w].push_back(v);
    }
  }
  return Graph::from_adjacency(std::move(adjacency));
}

namespace {

constexpr int kMaxRestarts = 1000;

// Sparse case (2*delta <= n-1). Returns per-node neighbor lists.
std::vector<std::vector<NodeId>> pair_stubs(std::uint32_t n, std::uint32_t delta,
                                            std::mt19937_64& rng) {
  for (int attempt = 0; attempt < kMaxRestarts; ++attempt) {
    std::vector<NodeId> stubs;
    stubs.reserve(static_cast<std::size_t>(n) * delta);
    for (NodeId v = 0; v < n; ++v) stubs.insert(stubs.end(), delta, v);
    std::vector<std::vector<NodeId>> adjacency(n);
    for (auto& row : adjacency) row.reserve(delta);

    std::size_t failures = 0;
    bool stuck = false;
    while (!stubs.empty()) {
      std::uniform_int_distribution<std::size_t> pick(0, stubs.size() - 1);
      std::size_t i = pick(rng);
      std::size_t j = pick(rng);
      NodeId u = stubs[i];
      NodeId v = stubs[j];
      bool ok = i != j && u != v &&
                std::find(adjacency[u].begin(), adjacency[u].end(), v) == adjacency[u].end();
      if (!ok) {
        if (++failures > 64 * stubs.size() + 256) {
          stuck = true;
          break;
        }
        continue;
      }
      failures = 0;
      adjacency[u].push_back(v);
      adjacency[v].push_back(u);
      if (i < j) std::swap(i, j);
      stubs[i] = stubs.back();
      stubs.pop_back();
      stubs[j] = stubs.back();
      stubs.pop_back();
    }
    if (!stuck) return adjacency;
  }
  throw GenerationFailure("random regular generation exhausted its restart budget (n=" +
                          std::to_string(n) + ", delta=" + std::to_string(delta) +
                          "); try another seed");
}

}  // namespace

Graph gen_random_regular(std::uint32_t n, std::uint32_t delta, std::uint64_t seed) {
  if (n < 2) throw InvalidParameter("random regular graph needs n >= 2");
  if (delta == 0 || delta >= n) throw InvalidParameter("random regular graph needs 0 < delta < n");
  if ((static_cast<std::uint64_t>(n) * delta) % 2 != 0) {
    throw InvalidParameter("nΔ must be even (n=" + std::to_string(n) +
                           ", delta=" + std::to_string(delta) + ")");
  }
  std::mt19937_64 rng(seed);
  const bool dense = 2 * delta > n - 1;
  const std::uint32_t build_degree = dense ? n - 1 - delta : delta;
  std::vector<std::vector<NodeId>> sparse =
      build_degree == 0 ? std::vector<std::vector<NodeId>>(n) : pair_stubs(n, build_degree, rng);
  if (!dense) return Graph::from_adjacency(std::move(sparse));

  std::vector<std::vector<NodeId>> adjacency(n);
  std::vector<char> row(n);
  for (NodeId v = 0; v < n; ++v) {
    std::fill(row.begin(), row.end(), 0);
    row[v] = 1;
    for (NodeId w : sparse[v]) row[w] = 1;
    adjacency[v].reserve(delta);
    for (NodeId w = 0; w < n; ++w) {
      if (!row[w]) adjacency[v].push_back(w);
    }
  }
  return Graph::from_adjacency(std::move(adjacency));
}

Graph gen_circulant(std::uint32_t n, std::span<const std::uint32_t> offsets) {
  if (n < 2) throw InvalidParameter("circulant graph needs n >= 2");
  if (offsets.empty()) throw InvalidParameter("circulant graph needs at least one offset");
  std::vector<char> present(n, 0);
  for (auto o : offsets) {
    if (o == 0 || o >= n) {
      throw InvalidParameter("circulant offset " + std::to_string(o) + " not in [1, n-1]");
    }
    if (present[o]) throw InvalidParameter("duplicate circulant offset " + std::to_string(o));
    present[o] = 1;
  }
  for (auto o : offsets) {
    if (!present[n - o]) {
      throw InvalidParameter("circulant offsets not closed under negation: missing " +
                             std::to_string(n - o));
    }
  }
  std::vector<std::vector<NodeId>> adjacency(n);
  for (NodeId v = 0; v < n; ++v) {
    for (auto o : offsets) adjacency[v].push_back((v + o) % n);
  }
  return Graph::from_adjacency(std::move(adjacency));
}

std::vector<std::uint32_t> close_offsets(std::uint32_t n,
                                         std::span<const std::uint32_t> offsets) {
  std::vector<std::uint32_t> out;
  for (auto o : offsets) {
    if (o == 0 || o >= n) {
      throw InvalidParameter("circulant offset " + std::to_string(o) + " not in [1, n-1]");
    }
    out.push_back(o);
    out.push_back(n - o);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace raes
