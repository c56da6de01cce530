#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "raes/graph.hpp"
#include "raes/protocol.hpp"

namespace raes::analysis {

enum class Family { Complete, Bipartite, RandomRegular, Circulant };
std::string to_string(Family family);
Family parse_family(const std::string& name);

enum class ExpansionMode { None, Exact, Sampled, Spectral };
std::string to_string(ExpansionMode mode);
ExpansionMode parse_expansion_mode(const std::string& name);

/// Graph family plus generator arguments. For Bipartite, n is the total node
/// count (2m); for RandomRegular the graph is regenerated per seed.
struct GraphSpec {
  Family family = Family::Complete;
  std::uint32_t n = 0;
  std::uint32_t delta = 0;                // RandomRegular
  std::vector<std::uint32_t> offsets;     // Circulant, closed under negation
};

Graph make_graph(const GraphSpec& spec, std::uint64_t seed);

struct ExperimentConfig {
  Family family = Family::Complete;
  std::vector<std::uint32_t> sizes;
  std::uint32_t delta = 0;
  std::vector<std::uint32_t> offsets;
  std::uint32_t d = 1;
  Rational c;
  std::uint32_t max_rounds = 64;
  std::uint32_t trials = 1;
  std::uint64_t seed0 = 0;
  ExpansionMode expansion = ExpansionMode::None;
  std::uint64_t sampled_trials = 2000;
  unsigned threads = 1;
};

/// One trial. `expansion` is empty when not measured (or not terminated).
struct TrialRow {
  std::string family;
  std::uint32_t n = 0;
  std::uint32_t delta = 0;
  std::uint32_t d = 0;
  std::string c;
  std::uint64_t seed = 0;
  std::uint32_t rounds = 0;
  std::uint64_t total_requests = 0;
  std::uint32_t min_deg = 0;
  std::uint32_t max_deg = 0;
  std::optional<double> expansion;
  std::string expansion_method;
  bool terminated = false;
  bool degree_ok = true;  // out-degree d and total degree in [d, (c+1)d]
  std::string error;      // generation/run error, recorded not fatal
};

struct ConfigSummary {
  std::string family;
  std::uint32_t n = 0;
  std::uint32_t delta = 0;
  std::uint32_t d = 0;
  std::string c;
  std::uint32_t trials = 0;
  std::uint32_t terminated = 0;
  std::uint32_t errors = 0;
  std::uint32_t max_rounds = 0;
  double mean_rounds = 0.0;
  double round_bound = 0.0;  // 3 log n / log(alpha c)
  double mean_requests = 0.0;
  std::uint64_t max_requests = 0;
  double request_bound = 0.0;  // alpha c / (alpha c - 1) * n d
  std::uint32_t degree_violations = 0;
};

struct StatsTable {
  std::vector<TrialRow> rows;          // sorted by (n, seed)
  std::vector<ConfigSummary> summaries;

  /// family,n,delta,d,c,seed,rounds,total_requests,min_deg,max_deg,expansion,expansion_method
  std::string to_csv() const;
  std::string summary_csv() const;
  std::string to_json() const;
};

/// beta * log(n) / log(alpha c); infinite when alpha c <= 1.
double termination_round_bound(std::uint32_t n, double alpha, double c, double beta = 3.0);
/// alpha c / (alpha c - 1) * n * d; infinite when alpha c <= 1.
double expected_request_bound(std::uint32_t n, std::uint32_t d, double alpha, double c);

/// Runs every (size, seed) trial; independent trials may run on
/// `config.threads` threads, output order does not depend on scheduling.
StatsTable run_experiment(const ExperimentConfig& config);

}  // namespace raes::analysis
