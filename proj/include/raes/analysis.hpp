#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "raes/graph.hpp"
#include "raes/protocol.hpp"

namespace raes::analysis {

/// Per-node cut fractions of a set S:
///   delta_v * Delta = e_G(v, V-S)
///   eps_v * d       = number of v's own accepted requests landing in V-S
/// Integer numerators are kept next to the fractions.
struct CutFractions {
  std::vector<NodeId> s_set;            // sorted
  std::uint32_t delta = 0;              // Delta of G
  std::uint32_t d = 0;
  std::vector<std::uint32_t> g_out;     // delta_v * Delta, aligned with s_set
  std::vector<std::uint32_t> h_out;     // eps_v * d
  std::vector<double> delta_v;
  std::vector<double> eps_v;
  double delta_mean = 0.0;
  double eps_mean = 0.0;
};

/// Requires a nonempty proper subset and a terminated H (every node
/// contributed the same out-degree d).
CutFractions cut_fractions(const Graph& g, const SubgraphH& h, std::span<const NodeId> s_set);

enum class ExpansionMethod { Exact, Sampled, SpectralLowerBound };
std::string to_string(ExpansionMethod method);

/// epsilon* = min over 1 <= |U| <= n/2 of e(U, V-U) / vol(U).
struct ExpansionReport {
  double epsilon_star = 0.0;
  std::uint64_t cut = 0;     // witness cut (exact / sampled)
  std::uint64_t volume = 0;  // witness volume (exact / sampled)
  std::vector<NodeId> witness;
  ExpansionMethod method = ExpansionMethod::Exact;
  bool disconnected = false;
  bool upper_bound = false;  // sampled: value is only an upper bound on epsilon*
  std::string quantity;      // what epsilon_star measures
  double lambda2 = 0.0;      // spectral: normalized-Laplacian lambda2
};

struct ExpansionOptions {
  std::uint32_t exhaustive_limit = 24;
  bool simple = false;  // collapse parallel edges before measuring
};

using MultiAdjacency = std::vector<std::vector<NodeId>>;

/// Exhaustive minimum over all subsets in Gray-code order with incremental cut
/// updates. Ties go to the lexicographically smallest witness. Throws
/// SizeLimitError above the configured limit.
ExpansionReport exact_expansion(const MultiAdjacency& adj, const ExpansionOptions& options = {});
ExpansionReport exact_expansion(const SubgraphH& h, const ExpansionOptions& options = {});

/// Minimum over every singleton plus `trials` random subsets (size uniform in
/// [1, n/2], members uniform). An upper bound on epsilon*.
ExpansionReport sampled_expansion(const MultiAdjacency& adj, std::uint64_t trials,
                                  std::uint64_t seed);
ExpansionReport sampled_expansion(const SubgraphH& h, std::uint64_t trials, std::uint64_t seed,
                                  bool simple = false);

/// Cheeger lower bound lambda2(normalized Laplacian) / 2 on the conductance.
/// Disconnected input yields 0 with the disconnected flag set.
ExpansionReport spectral_expansion_lower_bound(const MultiAdjacency& adj);
ExpansionReport spectral_expansion_lower_bound(const SubgraphH& h, bool simple = false);

bool is_connected(const MultiAdjacency& adj);

/// Semi-saturated and critical sets of one round, both sorted.
struct RoundClassification {
  std::vector<NodeId> semi_saturated;
  std::vector<NodeId> critical;
};

/// Classification of the rejected requests of S, round by round.
///
/// SS_t: accepted incoming through t-1 plus round-t requests from V-S >= cd/2.
/// C_t:  not in SS_t, and accepted incoming through t-1 plus all round-t
///       requests > cd.
/// Every request from S rejected at round t lands in SS_t or C_t.
struct NodeClassification {
  std::vector<NodeId> s_set;                      // sorted
  std::vector<RoundClassification> rounds;        // index t-1
  std::vector<std::vector<std::uint32_t>> rc;     // rc[t-1][i] for s_set[i]
  std::vector<std::uint32_t> rss;                 // per s_set[i], whole run
  std::vector<std::vector<bool>> critical_flags;  // per s_set[i], one per rejection in tape order

  std::uint32_t c_t(std::uint32_t t) const {
    return t == 0 || t > rounds.size() ? 0u
                                       : static_cast<std::uint32_t>(rounds[t - 1].critical.size());
  }
};

NodeClassification classify_nodes(const Graph& g, const ExecutionTrace& trace,
                                  std::span<const NodeId> s_set);

/// |SS_t| <= 2n/c and |C_t| <= n/c for every recorded round.
bool saturation_bounds_hold(const NodeClassification& cls, std::uint32_t n, const Rational& c);

/// Sorted, deduplicated copy; throws InvalidParameter unless the set is a
/// nonempty proper subset of [0, n).
std::vector<NodeId> normalize_proper_subset(std::uint32_t n, std::span<const NodeId> s_set);

}  // namespace raes::analysis
