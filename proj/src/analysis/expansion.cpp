#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <queue>
#include <random>
#include <string>

#include "raes/analysis.hpp"
#include "raes/error.hpp"
#include "raes/spectral.hpp"

namespace raes::analysis {

std::string to_string(ExpansionMethod method) {
  switch (method) {
    case ExpansionMethod::Exact: return "exact";
    case ExpansionMethod::Sampled: return "sampled";
    case ExpansionMethod::SpectralLowerBound: return "spectral";
  }
  return "unknown";
}

bool is_connected(const MultiAdjacency& adj) {
  if (adj.empty()) return true;
  std::vector<char> seen(adj.size(), 0);
  std::queue<NodeId> frontier;
  frontier.push(0);
  seen[0] = 1;
  std::size_t count = 1;
  while (!frontier.empty()) {
    const NodeId v = frontier.front();
    frontier.pop();
    for (NodeId w : adj[v]) {
      if (!seen[w]) {
        seen[w] = 1;
        ++count;
        frontier.push(w);
      }
    }
  }
  return count == adj.size();
}

namespace {

// Candidate (cut, vol, members) compared by cut/vol, then by the
// lexicographic order of the sorted member lists.
struct Candidate {
  std::uint64_t cut = 0;
  std::uint64_t vol = 0;
  std::vector<NodeId> members;
  bool valid = false;
};

bool lex_less(const std::vector<NodeId>& a, const std::vector<NodeId>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// For masks: a < b lexicographically as sorted member lists.
bool mask_lex_less(std::uint64_t a, std::uint64_t b) {
  if (a == b) return false;
  const std::uint64_t diff = a ^ b;
  const int p = std::countr_zero(diff);
  const std::uint64_t above = p == 63 ? 0 : ~((std::uint64_t{2} << p) - 1);
  if (a >> p & 1) return (b & above) != 0;
  return (a & above) == 0;
}

// -1 if (c1, v1) < (c2, v2) as ratios, 0 if equal, 1 if greater.
int compare_ratio(std::uint64_t c1, std::uint64_t v1, std::uint64_t c2, std::uint64_t v2) {
  const auto lhs = static_cast<unsigned __int128>(c1) * v2;
  const auto rhs = static_cast<unsigned __int128>(c2) * v1;
  return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
}

void offer(Candidate& best, std::uint64_t cut, std::uint64_t vol, std::vector<NodeId> members) {
  if (vol == 0) return;
  if (!best.valid) {
    best = {cut, vol, std::move(members), true};
    return;
  }
  const int cmp = compare_ratio(cut, vol, best.cut, best.vol);
  if (cmp < 0 || (cmp == 0 && lex_less(members, best.members))) {
    best = {cut, vol, std::move(members), true};
  }
}

ExpansionReport finish(const Candidate& best, ExpansionMethod method, bool disconnected) {
  ExpansionReport r;
  r.method = method;
  r.disconnected = disconnected;
  r.quantity = "edge expansion e(U,V-U)/vol(U)";
  if (best.valid) {
    r.cut = best.cut;
    r.volume = best.vol;
    r.witness = best.members;
    r.epsilon_star = static_cast<double>(best.cut) / static_cast<double>(best.vol);
  }
  if (disconnected) r.epsilon_star = 0.0;
  return r;
}

std::pair<std::uint64_t, std::uint64_t> cut_and_volume(const MultiAdjacency& adj,
                                                       const std::vector<char>& in_u) {
  std::uint64_t cut = 0, vol = 0;
  for (NodeId v = 0; v < adj.size(); ++v) {
    if (!in_u[v]) continue;
    vol += adj[v].size();
    for (NodeId w : adj[v]) cut += in_u[w] ? 0 : 1;
  }
  return {cut, vol};
}

MultiAdjacency simplify(MultiAdjacency adj) {
  for (auto& row : adj) {
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
  }
  return adj;
}

}  // namespace

ExpansionReport exact_expansion(const MultiAdjacency& input, const ExpansionOptions& options) {
  const auto n = static_cast<std::uint32_t>(input.size());
  const std::uint32_t limit = std::min<std::uint32_t>(options.exhaustive_limit, 62);
  if (n > limit) {
    throw SizeLimitError("exact expansion is limited to n <= " + std::to_string(limit) +
                         " (got n=" + std::to_string(n) +
                         "); use the sampled or spectral mode instead");
  }
  if (n < 2) throw InvalidParameter("expansion needs at least 2 nodes");
  const MultiAdjacency adj = options.simple ? simplify(input) : input;
  const std::uint32_t half = n / 2;

  std::vector<char> in_u(n, 0);
  std::uint64_t mask = 0, cut = 0, vol = 0;
  std::uint32_t size = 0;
  std::uint64_t best_cut = 0, best_vol = 0, best_mask = 0;
  bool have_best = false;

  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t i = 1; i < total; ++i) {
    const int x = std::countr_zero(i);
    std::uint64_t inside = 0;
    for (NodeId w : adj[x]) inside += in_u[w];
    const std::uint64_t deg = adj[x].size();
    if (!in_u[x]) {
      in_u[x] = 1;
      cut += deg - 2 * inside;
      vol += deg;
      ++size;
    } else {
      in_u[x] = 0;
      cut -= deg - 2 * inside;
      vol -= deg;
      --size;
    }
    mask ^= std::uint64_t{1} << x;
    if (size == 0 || size > half || vol == 0) continue;
    if (!have_best) {
      best_cut = cut, best_vol = vol, best_mask = mask, have_best = true;
      continue;
    }
    const int cmp = compare_ratio(cut, vol, best_cut, best_vol);
    if (cmp < 0 || (cmp == 0 && mask_lex_less(mask, best_mask))) {
      best_cut = cut, best_vol = vol, best_mask = mask;
    }
  }

  Candidate best;
  if (have_best) {
    best.valid = true;
    best.cut = best_cut;
    best.vol = best_vol;
    for (NodeId v = 0; v < n; ++v) {
      if (best_mask >> v & 1) best.members.push_back(v);
    }
  }
  return finish(best, ExpansionMethod::Exact, !is_connected(adj));
}

ExpansionReport exact_expansion(const SubgraphH& h, const ExpansionOptions& options) {
  return exact_expansion(h.adjacency(options.simple), options);
}

ExpansionReport sampled_expansion(const MultiAdjacency& adj, std::uint64_t trials,
                                  std::uint64_t seed) {
  const auto n = static_cast<std::uint32_t>(adj.size());
  if (trials < 1) throw InvalidParameter("sampled expansion needs trials >= 1");
  if (n < 2) throw InvalidParameter("expansion needs at least 2 nodes");
  Candidate best;
  std::vector<char> in_u(n, 0);
  for (NodeId v = 0; v < n; ++v) {
    in_u[v] = 1;
    auto [cut, vol] = cut_and_volume(adj, in_u);
    in_u[v] = 0;
    offer(best, cut, vol, {v});
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint32_t> pick_size(1, n / 2);
  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (std::uint64_t trial = 0; trial < trials; ++trial) {
    const std::uint32_t k = pick_size(rng);
    for (std::uint32_t i = 0; i < k; ++i) {
      std::uniform_int_distribution<std::uint32_t> pick(i, n - 1);
      std::swap(order[i], order[pick(rng)]);
    }
    std::vector<NodeId> members(order.begin(), order.begin() + k);
    std::sort(members.begin(), members.end());
    for (NodeId v : members) in_u[v] = 1;
    auto [cut, vol] = cut_and_volume(adj, in_u);
    for (NodeId v : members) in_u[v] = 0;
    offer(best, cut, vol, std::move(members));
  }
  auto report = finish(best, ExpansionMethod::Sampled, false);
  report.upper_bound = true;
  report.quantity = "upper bound on edge expansion (sampled)";
  // A disconnected graph is only flagged, never forced to 0: the value is
  // what the sampler actually found.
  report.disconnected = !is_connected(adj);
  return report;
}

ExpansionReport sampled_expansion(const SubgraphH& h, std::uint64_t trials, std::uint64_t seed,
                                  bool simple) {
  return sampled_expansion(h.adjacency(simple), trials, seed);
}

ExpansionReport spectral_expansion_lower_bound(const MultiAdjacency& adj) {
  const auto n = static_cast<std::uint32_t>(adj.size());
  ExpansionReport r;
  r.method = ExpansionMethod::SpectralLowerBound;
  r.quantity = "conductance lower bound lambda2(normalized Laplacian)/2";
  const bool isolated = std::any_of(adj.begin(), adj.end(), [](const auto& row) { return row.empty(); });
  if (n < 2 || isolated || !is_connected(adj)) {
    r.disconnected = true;
    return r;
  }
  std::vector<double> inv_sqrt(n), unit(n);
  double vol = 0.0;
  for (NodeId v = 0; v < n; ++v) vol += static_cast<double>(adj[v].size());
  for (NodeId v = 0; v < n; ++v) {
    const double deg = static_cast<double>(adj[v].size());
    inv_sqrt[v] = 1.0 / std::sqrt(deg);
    unit[v] = std::sqrt(deg / vol);
  }
  // I + D^{-1/2} A D^{-1/2}: eigenvalues in [0, 2], top 2 on D^{1/2} 1.
  LinearOperator apply = [&](std::span<const double> x, std::span<double> y) {
    for (NodeId v = 0; v < n; ++v) {
      double acc = 0.0;
      for (NodeId w : adj[v]) acc += inv_sqrt[w] * x[w];
      y[v] = x[v] + inv_sqrt[v] * acc;
    }
  };
  const auto est = deflated_top_eigenvalue(n, apply, unit, PowerIterationOptions{});
  r.lambda2 = std::max(0.0, 2.0 - est.value);
  r.epsilon_star = r.lambda2 / 2.0;
  return r;
}

ExpansionReport spectral_expansion_lower_bound(const SubgraphH& h, bool simple) {
  return spectral_expansion_lower_bound(h.adjacency(simple));
}

}  // namespace raes::analysis
