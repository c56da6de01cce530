#include "raes/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>
#include <thread>
#include <tuple>

#include <json.hpp>

#include "raes/analysis.hpp"
#include "raes/error.hpp"

namespace raes::analysis {

std::string to_string(Family family) {
  switch (family) {
    case Family::Complete: return "complete";
    case Family::Bipartite: return "bipartite";
    case Family::RandomRegular: return "regular";
    case Family::Circulant: return "circulant";
  }
  return "unknown";
}

Family parse_family(const std::string& name) {
  if (name == "complete") return Family::Complete;
  if (name == "bipartite") return Family::Bipartite;
  if (name == "regular" || name == "random-regular") return Family::RandomRegular;
  if (name == "circulant") return Family::Circulant;
  throw InvalidParameter("unknown graph family '" + name + "'");
}

std::string to_string(ExpansionMode mode) {
  switch (mode) {
    case ExpansionMode::None: return "none";
    case ExpansionMode::Exact: return "exact";
    case ExpansionMode::Sampled: return "sampled";
    case ExpansionMode::Spectral: return "spectral";
  }
  return "unknown";
}

ExpansionMode parse_expansion_mode(const std::string& name) {
  if (name == "none") return ExpansionMode::None;
  if (name == "exact") return ExpansionMode::Exact;
  if (name == "sampled") return ExpansionMode::Sampled;
  if (name == "spectral") return ExpansionMode::Spectral;
  throw InvalidParameter("unknown expansion mode '" + name + "'");
}

Graph make_graph(const GraphSpec& spec, std::uint64_t seed) {
  switch (spec.family) {
    case Family::Complete: return gen_complete(spec.n);
    case Family::Bipartite:
      if (spec.n % 2 != 0) throw InvalidParameter("bipartite family needs an even n");
      return gen_complete_bipartite(spec.n / 2);
    case Family::RandomRegular: return gen_random_regular(spec.n, spec.delta, seed);
    case Family::Circulant: return gen_circulant(spec.n, spec.offsets);
  }
  throw InvalidParameter("unknown graph family");
}

double termination_round_bound(std::uint32_t n, double alpha, double c, double beta) {
  const double ac = alpha * c;
  if (ac <= 1.0) return std::numeric_limits<double>::infinity();
  return beta * std::log(static_cast<double>(n)) / std::log(ac);
}

double expected_request_bound(std::uint32_t n, std::uint32_t d, double alpha, double c) {
  const double ac = alpha * c;
  if (ac <= 1.0) return std::numeric_limits<double>::infinity();
  return ac / (ac - 1.0) * static_cast<double>(n) * d;
}

namespace {

constexpr std::uint64_t kGraphSeedSalt = 0x9e3779b97f4a7c15ULL;

TrialRow run_trial(const ExperimentConfig& config, std::uint32_t n, std::uint64_t seed,
                   const Graph* shared_graph) {
  TrialRow row;
  row.family = to_string(config.family);
  row.n = n;
  row.d = config.d;
  row.c = config.c.str();
  row.seed = seed;
  row.expansion_method = "none";
  try {
    std::optional<Graph> own;
    if (!shared_graph) {
      own = make_graph({config.family, n, config.delta, config.offsets}, seed ^ kGraphSeedSalt);
      shared_graph = &*own;
    }
    const Graph& g = *shared_graph;
    row.delta = g.delta();
    RaesParams params{config.d, config.c, config.max_rounds};
    auto outcome = run_raes(g, params, fresh_tape(g, params, seed));
    row.terminated = outcome.terminated();
    row.rounds = outcome.stats.rounds_used;
    row.total_requests = outcome.stats.total_requests;
    row.min_deg = std::numeric_limits<std::uint32_t>::max();
    const std::uint64_t cap = params.capacity();
    for (NodeId v = 0; v < n; ++v) {
      const auto deg = outcome.h.degree(v);
      row.min_deg = std::min(row.min_deg, deg);
      row.max_deg = std::max(row.max_deg, deg);
      if (row.terminated &&
          (outcome.h.out_degree(v) != config.d || deg < config.d || deg > cap + config.d)) {
        row.degree_ok = false;
      }
    }
    if (!row.terminated) {
      row.expansion_method = "not-terminated";
      return row;
    }
    switch (config.expansion) {
      case ExpansionMode::None: break;
      case ExpansionMode::Exact:
        row.expansion = exact_expansion(outcome.h).epsilon_star;
        row.expansion_method = "exact";
        break;
      case ExpansionMode::Sampled:
        row.expansion = sampled_expansion(outcome.h, config.sampled_trials, seed).epsilon_star;
        row.expansion_method = "sampled";
        break;
      case ExpansionMode::Spectral:
        row.expansion = spectral_expansion_lower_bound(outcome.h).epsilon_star;
        row.expansion_method = "spectral";
        break;
    }
  } catch (const std::exception& e) {
    row.error = e.what();
    row.expansion_method = "error";
  }
  return row;
}

std::string format_double(double x) {
  std::ostringstream os;
  os << std::setprecision(10) << x;
  return os.str();
}

}  // namespace

StatsTable run_experiment(const ExperimentConfig& config) {
  RaesParams{config.d, config.c, config.max_rounds}.validate();
  if (config.sizes.empty()) throw InvalidParameter("experiment needs at least one size");
  if (config.trials < 1) throw InvalidParameter("experiment needs trials >= 1");

  StatsTable table;
  for (const auto n : config.sizes) {
    std::optional<Graph> shared;
    if (config.family != Family::RandomRegular) {
      shared = make_graph({config.family, n, config.delta, config.offsets}, 0);
    }
    std::vector<TrialRow> rows(config.trials);
    std::atomic<std::uint32_t> next{0};
    auto worker = [&] {
      for (std::uint32_t i = next++; i < config.trials; i = next++) {
        rows[i] = run_trial(config, n, config.seed0 + i, shared ? &*shared : nullptr);
      }
    };
    const unsigned threads = std::max(1u, std::min(config.threads, config.trials));
    std::vector<std::thread> pool;
    for (unsigned k = 1; k < threads; ++k) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    ConfigSummary summary;
    summary.family = to_string(config.family);
    summary.n = n;
    summary.d = config.d;
    summary.c = config.c.str();
    summary.trials = config.trials;
    double alpha = 0.0;
    if (shared) {
      summary.delta = shared->delta();
      alpha = shared->alpha();
    } else {
      summary.delta = config.delta;
      alpha = static_cast<double>(config.delta) / n;
    }
    summary.round_bound = termination_round_bound(n, alpha, config.c.value());
    summary.request_bound = expected_request_bound(n, config.d, alpha, config.c.value());
    std::uint32_t ok = 0;
    for (const auto& row : rows) {
      if (!row.error.empty()) {
        ++summary.errors;
        continue;
      }
      ++ok;
      if (row.terminated) ++summary.terminated;
      if (!row.degree_ok) ++summary.degree_violations;
      summary.max_rounds = std::max(summary.max_rounds, row.rounds);
      summary.mean_rounds += row.rounds;
      summary.mean_requests += static_cast<double>(row.total_requests);
      summary.max_requests = std::max(summary.max_requests, row.total_requests);
    }
    if (ok > 0) {
      summary.mean_rounds /= ok;
      summary.mean_requests /= ok;
    }
    table.summaries.push_back(summary);
    table.rows.insert(table.rows.end(), rows.begin(), rows.end());
  }
  std::stable_sort(table.rows.begin(), table.rows.end(), [](const TrialRow& a, const TrialRow& b) {
    return std::tie(a.n, a.seed) < std::tie(b.n, b.seed);
  });
  return table;
}

std::string StatsTable::to_csv() const {
  std::ostringstream os;
  os << "family,n,delta,d,c,seed,rounds,total_requests,min_deg,max_deg,expansion,expansion_method\n";
  for (const auto& r : rows) {
    os << r.family << ',' << r.n << ',' << r.delta << ',' << r.d << ',' << r.c << ',' << r.seed
       << ',' << r.rounds << ',' << r.total_requests << ',' << r.min_deg << ',' << r.max_deg << ','
       << (r.expansion ? format_double(*r.expansion) : "") << ',' << r.expansion_method << '\n';
  }
  return os.str();
}

std::string StatsTable::summary_csv() const {
  std::ostringstream os;
  os << "family,n,delta,d,c,trials,terminated,errors,max_rounds,mean_rounds,round_bound,"
        "mean_requests,max_requests,request_bound,degree_violations\n";
  for (const auto& s : summaries) {
    os << s.family << ',' << s.n << ',' << s.delta << ',' << s.d << ',' << s.c << ',' << s.trials
       << ',' << s.terminated << ',' << s.errors << ',' << s.max_rounds << ','
       << format_double(s.mean_rounds) << ',' << format_double(s.round_bound) << ','
       << format_double(s.mean_requests) << ',' << s.max_requests << ','
       << format_double(s.request_bound) << ',' << s.degree_violations << '\n';
  }
  return os.str();
}

std::string StatsTable::to_json() const {
  nlohmann::json rows_json = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json row = {{"family", r.family},
                          {"n", r.n},
                          {"delta", r.delta},
                          {"d", r.d},
                          {"c", r.c},
                          {"seed", r.seed},
                          {"rounds", r.rounds},
                          {"total_requests", r.total_requests},
                          {"min_deg", r.min_deg},
                          {"max_deg", r.max_deg},
                          {"expansion", r.expansion ? nlohmann::json(*r.expansion) : nlohmann::json()},
                          {"expansion_method", r.expansion_method}};
    if (!r.error.empty()) row["error"] = r.error;
    rows_json.push_back(std::move(row));
  }
  nlohmann::json summaries_json = nlohmann::json::array();
  for (const auto& s : summaries) {
    summaries_json.push_back({{"family", s.family},
                              {"n", s.n},
                              {"delta", s.delta},
                              {"d", s.d},
                              {"c", s.c},
                              {"trials", s.trials},
                              {"terminated", s.terminated},
                              {"errors", s.errors},
                              {"max_rounds", s.max_rounds},
                              {"mean_rounds", s.mean_rounds},
                              {"round_bound", s.round_bound},
                              {"mean_requests", s.mean_requests},
                              {"max_requests", s.max_requests},
                              {"request_bound", s.request_bound},
                              {"degree_violations", s.degree_violations}});
  }
  return nlohmann::json{{"rows", rows_json}, {"summaries", summaries_json}}.dump(2);
}

}  // namespace raes::analysis
