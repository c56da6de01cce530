// Acceptance suite: one PASS/FAIL line per criterion. Reference values come
// from oracles in test code (Jacobi eigenvalues, brute-force cuts, direct
// formula evaluation), never from the library routine under test.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "../oracles/enumeration.hpp"
#include "../oracles/jacobi.hpp"
#include "../unit/fixtures.hpp"
#include "raes/analysis.hpp"
#include "raes/codec/encoding.hpp"
#include "raes/codec/witness.hpp"
#include "raes/error.hpp"
#include "raes/graph.hpp"
#include "raes/protocol.hpp"
#include "raes/spectral.hpp"

using namespace raes;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

// Degree audit over every terminated run of the whole suite.
struct DegreeAudit {
  std::uint64_t runs = 0;
  std::uint64_t terminated = 0;
  std::uint64_t violations = 0;

  void check(const RunOutcome& out, const RaesParams& p) {
    ++runs;
    if (!out.terminated()) return;
    ++terminated;
    // degrees recounted from the link list, not from SubgraphH's counters
    std::vector<std::uint32_t> out_deg(out.h.n(), 0), deg(out.h.n(), 0);
    for (const auto& l : out.h.links()) {
      ++out_deg[l.from];
      ++deg[l.from];
      ++deg[l.to];
    }
    const double c = p.c.value();
    for (NodeId v = 0; v < out.h.n(); ++v) {
      if (out_deg[v] != p.d || deg[v] < p.d || deg[v] > (c + 1.0) * p.d + 1e-9) ++violations;
    }
  }
};

DegreeAudit g_degrees;

RunOutcome audited_run(const Graph& g, const RaesParams& p, const RandomTape& tape) {
  auto out = run_raes(g, p, tape);
  g_degrees.check(out, p);
  return out;
}

std::string fixed(double x, int digits = 3) {
  std::ostringstream os;
  os.precision(digits);
  os << std::fixed << x;
  return os.str();
}

// ---------------------------------------------------------------- 1 and 2

struct GridResult {
  std::uint32_t n = 0;
  std::uint32_t max_rounds = 0;
  double round_bound = 0.0;
  double mean_requests = 0.0;
  std::uint64_t max_requests = 0;
  double request_factor = 0.0;  // alpha c / (alpha c - 1)
  std::uint32_t not_terminated = 0;
};

std::vector<GridResult> g_grid;
double g_grid_seconds = 0.0;

void run_grid() {
  const auto start = Clock::now();
  const std::uint32_t d = 4;
  const double c = 4.0;
  for (std::uint32_t n : {64u, 256u, 1024u}) {
    const auto g = gen_complete(n);
    const RaesParams p{d, Rational::make(4, 1), 64};
    const double alpha = static_cast<double>(n - 1) / n;
    GridResult r;
    r.n = n;
    r.round_bound = 3.0 * std::log(static_cast<double>(n)) / std::log(alpha * c);
    r.request_factor = alpha * c / (alpha * c - 1.0);
    std::uint64_t sum = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const auto out = audited_run(g, p, fresh_tape(g, p, seed));
      if (!out.terminated()) ++r.not_terminated;
      r.max_rounds = std::max(r.max_rounds, out.stats.rounds_used);
      std::uint64_t requests = 0;
      for (const auto& round : out.trace.rounds) requests += round.requests.size();
      sum += requests;
      r.max_requests = std::max(r.max_requests, requests);
    }
    r.mean_requests = static_cast<double>(sum) / 100.0;
    g_grid.push_back(r);
  }
  g_grid_seconds = seconds_since(start);
}

Outcome criterion_termination() {
  if (g_grid.empty()) run_grid();
  bool ok = g_grid_seconds < 30.0;
  std::ostringstream os;
  for (const auto& r : g_grid) {
    ok = ok && r.not_terminated == 0 && r.max_rounds <= r.round_bound;
    os << "n=" << r.n << " max_rounds=" << r.max_rounds << " bound=" << fixed(r.round_bound)
       << " unterminated=" << r.not_terminated << "; ";
  }
  os << fixed(g_grid_seconds, 2) << "s";
  return {ok, os.str()};
}

Outcome criterion_work() {
  if (g_grid.empty()) run_grid();
  bool ok = g_grid_seconds < 30.0;
  std::ostringstream os;
  for (const auto& r : g_grid) {
    const double nd = static_cast<double>(r.n) * 4.0;
    const double hi_mean = 1.25 * r.request_factor * nd;
    const double hi_max = 2.0 * r.request_factor * nd;
    ok = ok && r.mean_requests >= nd && r.mean_requests <= hi_mean && r.max_requests <= hi_max;
    os << "n=" << r.n << " mean=" << fixed(r.mean_requests, 1) << " in [" << nd << ","
       << fixed(hi_mean, 1) << "] max=" << r.max_requests << "<=" << fixed(hi_max, 1) << "; ";
  }
  os << fixed(g_grid_seconds, 2) << "s";
  return {ok, os.str()};
}

// ---------------------------------------------------------------------- 4

Outcome criterion_mixing() {
  const auto start = Clock::now();
  std::vector<Graph> graphs;
  for (std::uint32_t n = 2; n <= 14; ++n) graphs.push_back(gen_complete(n));
  for (std::uint32_t m = 1; m <= 7; ++m) graphs.push_back(gen_complete_bipartite(m));
  for (std::uint32_t n = 6; n <= 14; ++n) {
    for (std::uint32_t delta = 3; delta < n - 1; ++delta) {
      if (n * delta % 2 != 0) continue;
      for (std::uint64_t seed = 0; seed < 2; ++seed) graphs.push_back(gen_random_regular(n, delta, seed));
    }
  }
  std::uint64_t subsets = 0, mixing_violations = 0, sbig_violations = 0;
  for (const auto& g : graphs) {
    const std::uint32_t n = g.n();
    const double delta = g.delta();
    const auto ev = oracle::jacobi_eigenvalues(oracle::adjacency_matrix(g));
    const double lp = std::max(0.0, ev[1]);
    std::vector<std::uint32_t> nbr(n, 0);
    for (NodeId v = 0; v < n; ++v)
      for (auto w : g.neighbors(v)) nbr[v] |= 1u << w;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
      ++subsets;
      // sum over v in S of |N(v) & S| counts every inside edge twice
      std::uint64_t twice_inside = 0;
      for (NodeId v = 0; v < n; ++v)
        if (mask >> v & 1) twice_inside += __builtin_popcount(nbr[v] & mask);
      const double s = __builtin_popcount(mask);
      const double e_ss = static_cast<double>(twice_inside) / 2.0;
      const double bound = 0.5 * (delta * s * s / n + lp * s);
      if (e_ss > bound * (1.0 + 1e-12) + 1e-9) ++mixing_violations;
      const double one_minus_delta = static_cast<double>(twice_inside) / (s * delta);
      if (one_minus_delta > s / n + lp / delta + 1e-9) ++sbig_violations;
    }
  }
  const double secs = seconds_since(start);
  return {mixing_violations == 0 && sbig_violations == 0 && secs < 10.0,
          std::to_string(graphs.size()) + " graphs, " + std::to_string(subsets) +
              " subsets, mixing violations=" + std::to_string(mixing_violations) +
              ", s-big violations=" + std::to_string(sbig_violations) + ", " + fixed(secs, 2) + "s"};
}

// ---------------------------------------------------------------------- 5

struct ClassOracle {
  std::vector<NodeId> ss;
  std::vector<NodeId> crit;
};

// Direct recount of SS_t and C_t from the raw requests of round t.
ClassOracle classify_round(const ExecutionTrace& tr, std::uint32_t t, const std::vector<char>& in_s) {
  const std::uint32_t n = tr.n;
  const std::uint64_t cd = tr.params.capacity();
  std::vector<std::uint64_t> from_out(n, 0), all(n, 0);
  for (const auto& r : tr.rounds[t - 1].requests) {
    ++all[r.to];
    if (!in_s[r.from]) ++from_out[r.to];
  }
  ClassOracle o;
  for (NodeId w = 0; w < n; ++w) {
    const std::uint64_t before = tr.d_in(w, t - 1);
    if (2 * (before + from_out[w]) >= cd) {
      o.ss.push_back(w);
    } else if (before + all[w] > cd) {
      o.crit.push_back(w);
    }
  }
  return o;
}

Outcome criterion_classification() {
  std::mt19937_64 rng(515);
  std::uint64_t node_rounds = 0, rounds_checked = 0, rejected = 0, unclassified = 0;
  std::uint64_t ss_violations = 0, c_violations = 0, disagreements = 0, runs = 0;
  std::uint64_t seed = 0;
  while (node_rounds < 20000 || runs < 200) {
    const int family = static_cast<int>(seed % 4);
    const std::uint32_t n = 12 + static_cast<std::uint32_t>(rng() % 40);
    const Graph g = family == 0   ? gen_complete(n)
                  : family == 1   ? gen_complete_bipartite(n / 2)
                  : family == 2   ? gen_random_regular(n + n % 2, 6, seed)
                                  : gen_circulant(n, close_offsets(n, std::vector<std::uint32_t>{1, 2, 5}));
    const std::uint32_t d = 1 + static_cast<std::uint32_t>(rng() % 4);
    // contended capacities: c in {1/d, ..., 2}, so cd in [1, 2d]
    const std::int64_t cd = 1 + static_cast<std::int64_t>(rng() % (2 * d));
    const RaesParams p{d, Rational::make(cd, d), 64};
    const auto out = audited_run(g, p, fresh_tape(g, p, seed));
    ++seed;
    ++runs;
    node_rounds += static_cast<std::uint64_t>(g.n()) * out.trace.rounds_recorded();
    for (int rep = 0; rep < 2; ++rep) {
      std::vector<NodeId> all = fixtures::iota(g.n());
      std::shuffle(all.begin(), all.end(), rng);
      std::vector<NodeId> s(all.begin(), all.begin() + 1 + rng() % (g.n() - 1));
      std::sort(s.begin(), s.end());
      const auto in_s = node_mask(g.n(), s);
      analysis::NodeClassification cls;
      try {
        cls = analysis::classify_nodes(g, out.trace, s);
      } catch (const ClassificationViolation&) {
        ++unclassified;
        continue;
      }
      const double c = p.c.value();
      for (std::uint32_t t = 1; t <= out.trace.rounds_recorded(); ++t) {
        ++rounds_checked;
        const auto o = classify_round(out.trace, t, in_s);
        if (o.ss != cls.rounds[t - 1].semi_saturated || o.crit != cls.rounds[t - 1].critical) ++disagreements;
        if (static_cast<double>(o.ss.size()) > 2.0 * g.n() / c + 1e-9) ++ss_violations;
        if (static_cast<double>(o.crit.size()) > g.n() / c + 1e-9) ++c_violations;
        for (const auto& r : out.trace.rounds[t - 1].requests) {
          if (r.accepted || !in_s[r.from]) continue;
          ++rejected;
          const bool found = std::binary_search(o.ss.begin(), o.ss.end(), r.to) ||
                             std::binary_search(o.crit.begin(), o.crit.end(), r.to);
          if (!found) ++unclassified;
        }
      }
    }
  }
  const bool ok = node_rounds >= 10000 && ss_violations == 0 && c_violations == 0 &&
                  unclassified == 0 && disagreements == 0 && rejected > 0;
  return {ok, std::to_string(runs) + " runs, " + std::to_string(node_rounds) + " node-rounds, " +
                  std::to_string(rounds_checked) + " (round, S) pairs, " + std::to_string(rejected) +
                  " rejected S-requests, |SS_t|>2n/c: " + std::to_string(ss_violations) +
                  ", |C_t|>n/c: " + std::to_string(c_violations) + ", unclassified: " +
                  std::to_string(unclassified) + ", oracle disagreements: " + std::to_string(disagreements)};
}

// ------------------------------------------------------------------ 6 and 7

struct CodecCase {
  Graph g;
  RaesParams params;
  RandomTape tape;
  RunOutcome run;
  std::vector<NodeId> s;
};

CodecCase random_codec_case(std::mt19937_64& rng, std::uint64_t seed) {
  for (;;) {
    const std::uint32_t n = 8 + static_cast<std::uint32_t>(rng() % 57);
    const int family = static_cast<int>(rng() % 4);
    Graph g = family == 0   ? gen_complete(n)
            : family == 1   ? gen_complete_bipartite(std::max<std::uint32_t>(4, n / 2))
            : family == 2   ? gen_random_regular(n + n % 2, 3 + static_cast<std::uint32_t>(rng() % 6), seed)
                            : gen_circulant(n, close_offsets(n, std::vector<std::uint32_t>{1, 2, 3}));
    const std::uint32_t d = 1 + static_cast<std::uint32_t>(rng() % 4);
    const std::int64_t cd = 1 + static_cast<std::int64_t>(rng() % (4 * d));
    RaesParams p{d, Rational::make(cd, d), 48};
    auto tape = fresh_tape(g, p, seed);
    auto run = audited_run(g, p, tape);
    if (!run.terminated()) continue;
    std::vector<NodeId> all = fixtures::iota(g.n());
    std::shuffle(all.begin(), all.end(), rng);
    std::vector<NodeId> s(all.begin(), all.begin() + 1 + rng() % (g.n() - 1));
    return {std::move(g), p, std::move(tape), std::move(run), std::move(s)};
  }
}

struct AuditTally {
  std::uint64_t encodings = 0;
  std::uint64_t over_budget = 0;
  std::uint64_t sum_mismatch = 0;
  std::uint64_t savings_mismatch = 0;
  std::uint64_t savings_positive = 0;
  double savings_min = 0.0;
  double savings_max = 0.0;
  double compressed_ratio = 0.0;  // sum over cases of stream / raw
};

AuditTally g_audit;
bool g_codec_ran = false;
std::uint64_t g_codec_cases = 0, g_codec_ok = 0;
bool g_hand_ok = false;
std::string g_hand_detail;
double g_codec_seconds = 0.0;

// Closed-form savings from the wrap-up of the compression argument, written
// out here independently of the library.
double savings_oracle(double n, double s, double d, double eps) {
  const double l = std::log2(n / s);
  const double e_term = eps > 0.0 ? 13.0 * eps * std::log2(1.0 / eps) : 0.0;
  return -3.0 * s * l + (1.0 - e_term) / 2.0 * d * s * l - (0.25 + 2.0 * eps) * d * s;
}

void audit(const codec::CompressedEncoding& enc, const codec::CostReport& rep) {
  ++g_audit.encodings;
  // every logical section within fractional + slack
  for (const auto& sec : rep.sections)
    if (!sec.within_budget()) ++g_audit.over_budget;
  std::uint64_t logical = 0, physical = 0;
  for (const auto& sec : rep.sections) logical += sec.actual_bits;
  for (const auto& sec : enc.sections) physical += sec.length;
  if (logical != enc.bits.bit_length || physical != enc.bits.bit_length) ++g_audit.sum_mismatch;
  const double oracle = savings_oracle(rep.n, rep.s, rep.d, rep.eps);
  const double tol = 1e-9 * std::max(1.0, std::abs(oracle));
  if (std::abs(rep.savings - oracle) > tol || std::abs(rep.savings_by_components - oracle) > tol)
    ++g_audit.savings_mismatch;
  if (rep.savings > 0.0) ++g_audit.savings_positive;
  if (g_audit.encodings == 1) g_audit.savings_min = g_audit.savings_max = rep.savings;
  g_audit.savings_min = std::min(g_audit.savings_min, rep.savings);
  g_audit.savings_max = std::max(g_audit.savings_max, rep.savings);
  g_audit.compressed_ratio += static_cast<double>(enc.bits.bit_length) / rep.raw_total;
}

void check_hand_vector() {
  const auto g = gen_complete(4);
  const auto p = fixtures::hand_params();
  const auto tape = fixtures::hand_tape();
  const auto run = audited_run(g, p, tape);
  const std::vector<NodeId> s{1, 2, 3};
  const auto [enc, rep] = codec::encode_execution(g, p, tape, run.trace, s);
  audit(enc, rep);
  const std::string bits = enc.bits.to_string();
  std::vector<std::string> failures;
  if (!(enc.header == codec::Header{4, 2, 1, 1, 4, 3})) failures.push_back("header");
  // Table 1: gamma(3) = 011, rank of {1,2,3} among 3-subsets of 4 = 3 in 2 bits
  if (bits.substr(0, 5) != "01111") failures.push_back("table1");
  // Table 2 upper: node 0's four raw draws, all 0, 2 bits each
  if (bits.substr(5, 8) != "00000000") failures.push_back("table2_upper");
  // node 3: gamma(4), rank 3 of {3} in 2 bits, gamma(1+1), raw draw 0 to node 0,
  // category bits critical / semi-saturated / semi-saturated
  if (bits.find("00100" "11" "010" "00" "100") == std::string::npos) failures.push_back("node 3 row");
  const auto ranks = std::find_if(enc.sections.begin(), enc.sections.end(),
                                  [](const codec::Section& x) { return x.name == "field4_ranks"; });
  // only the round-3 rejection 3 -> 2 needs a rank: 2 is second in SS_3 = {1, 2}
  if (ranks == enc.sections.end() || bits.substr(ranks->begin, ranks->length) != "1")
    failures.push_back("field4 ranks");
  const double table1 = 2.0 * std::log2(3.0) + std::log2(4.0);
  if (std::abs(rep.section("table1").fractional - table1) > 1e-9) failures.push_back("table1 cost");
  const auto dec = codec::decode_execution(g, codec::from_bytes(codec::to_bytes(enc)));
  if (!(dec.tape == tape) || !(dec.trace == run.trace)) failures.push_back("roundtrip");
  g_hand_ok = failures.empty();
  g_hand_detail = g_hand_ok ? "hand vector fields exact (table1 cost " + fixed(table1) + ")"
                            : "hand vector mismatch:";
  for (const auto& f : failures) g_hand_detail += " " + f;
}

void run_codec_cases() {
  g_codec_ran = true;
  const auto start = Clock::now();
  check_hand_vector();
  std::mt19937_64 rng(60);
  for (std::uint64_t i = 0; i < 500; ++i) {
    const auto c = random_codec_case(rng, 1000 + i);
    ++g_codec_cases;
    const double lambda = second_eigenvalue(c.g).lambda2_plus;
    const auto [enc, rep] = codec::encode_execution(c.g, c.params, c.tape, c.run.trace, c.s, lambda);
    audit(enc, rep);
    const auto dec = codec::decode_execution(c.g, codec::from_bytes(codec::to_bytes(enc)));
    if (dec.tape == c.tape && dec.trace == c.run.trace) ++g_codec_ok;
  }
  g_codec_seconds = seconds_since(start);
}

Outcome criterion_codec() {
  if (!g_codec_ran) run_codec_cases();
  const bool ok = g_codec_ok == g_codec_cases && g_codec_cases == 500 && g_hand_ok &&
                  g_codec_seconds < 60.0;
  return {ok, std::to_string(g_codec_ok) + "/" + std::to_string(g_codec_cases) +
                  " bit-exact roundtrips, " + g_hand_detail + ", " + fixed(g_codec_seconds, 2) + "s"};
}

Outcome criterion_cost() {
  if (!g_codec_ran) run_codec_cases();
  const auto& a = g_audit;
  const bool ok = a.encodings == 501 && a.over_budget == 0 && a.sum_mismatch == 0 && a.savings_mismatch == 0;
  return {ok, std::to_string(a.encodings) + " encodings, sections over budget=" +
                  std::to_string(a.over_budget) + ", length mismatches=" + std::to_string(a.sum_mismatch) +
                  ", savings disagreements=" + std::to_string(a.savings_mismatch) + "; savings in [" +
                  fixed(a.savings_min, 1) + ", " + fixed(a.savings_max, 1) + "], positive in " +
                  std::to_string(a.savings_positive) + ", mean stream/raw " +
                  fixed(a.compressed_ratio / static_cast<double>(a.encodings))};
}

// ---------------------------------------------------------------------- 8

Outcome criterion_witness() {
  std::mt19937_64 rng(808);
  std::uint64_t done = 0, ok = 0, tried = 0;
  for (std::uint64_t seed = 0; done < 200 && seed < 20000; ++seed) {
    ++tried;
    const std::uint32_t n = 6 + static_cast<std::uint32_t>(rng() % 40);
    const Graph g = seed % 3 == 0   ? gen_complete(n)
                  : seed % 3 == 1   ? gen_random_regular(n + n % 2, 4, seed)
                                    : gen_complete_bipartite(n / 2 + 2);
    const std::uint32_t d = 1 + static_cast<std::uint32_t>(rng() % 3);
    // small capacity so many nodes are still deficient after a few rounds
    const RaesParams p{d, Rational::make(1 + static_cast<std::int64_t>(rng() % d), d), 8};
    const auto tape = fresh_tape(g, p, seed);
    const auto run = audited_run(g, p, tape);
    const std::uint32_t t = 1 + static_cast<std::uint32_t>(rng() % run.trace.rounds_recorded());
    std::vector<NodeId> deficient;
    for (NodeId v = 0; v < g.n(); ++v)
      if (run.trace.d_out(v, t) < d) deficient.push_back(v);
    if (deficient.empty()) continue;
    const NodeId v = deficient[rng() % deficient.size()];
    ++done;
    const auto bits = codec::encode_termination_witness(g, p, tape, v, t);
    if (codec::decode_termination_witness(g, bits) == tape) ++ok;
  }
  return {done == 200 && ok == done,
          std::to_string(ok) + "/" + std::to_string(done) + " contended instances round-trip (" +
              std::to_string(tried) + " drawn)"};
}

// ---------------------------------------------------------------------- 9

Outcome criterion_spectral() {
  const double k64 = second_eigenvalue(gen_complete(64)).lambda2;
  const double k3232 = second_eigenvalue(gen_complete_bipartite(32)).lambda2;
  double worst = 0.0;
  std::uint32_t graphs = 0;
  for (std::uint32_t n = 3; n <= 64; ++n) {
    std::vector<Graph> gs{gen_complete(n)};
    if (n % 2 == 0) gs.push_back(gen_complete_bipartite(n / 2));
    if (n >= 6) gs.push_back(gen_random_regular(n, n % 2 == 0 ? 3 : 4, n));
    if (n >= 7) gs.push_back(gen_circulant(n, close_offsets(n, std::vector<std::uint32_t>{1, 3})));
    for (const auto& g : gs) {
      const auto ev = oracle::jacobi_eigenvalues(oracle::adjacency_matrix(g));
      worst = std::max(worst, std::abs(second_eigenvalue(g).lambda2 - ev[1]));
      ++graphs;
    }
  }
  const bool ok = std::abs(k64 + 1.0) <= 1e-8 && std::abs(k3232) <= 1e-8 && worst <= 1e-6;
  std::ostringstream os;
  os.precision(3);
  os << "lambda2(K_64)+1=" << std::scientific << k64 + 1.0 << ", lambda2(K_32,32)=" << k3232
     << ", max |power - Jacobi| over " << graphs << " graphs (n<=64)=" << worst;
  return {ok, os.str()};
}

// --------------------------------------------------------------------- 10

std::string g_csv_path = "expansion_distribution.csv";

Outcome criterion_expansion() {
  const auto g = gen_complete(16);
  const RaesParams p{3, Rational::make(4, 1), 64};
  std::ofstream csv(g_csv_path);
  csv << "seed,terminated,rounds,connected,epsilon_star,cut,volume,oracle_epsilon_star\n";
  std::uint32_t good = 0, mismatches = 0;
  const std::uint32_t seeds = 50;
  for (std::uint64_t seed = 0; seed < seeds; ++seed) {
    const auto out = audited_run(g, p, fresh_tape(g, p, seed));
    if (!out.terminated()) {
      csv << seed << ",0," << out.stats.rounds_used << ",,,,,\n";
      continue;
    }
    const auto rep = analysis::exact_expansion(out.h);
    const auto naive = oracle::naive_expansion(16, out.h.edges());
    // compare as exact fractions
    if (rep.cut * naive.volume != naive.cut * rep.volume) ++mismatches;
    const bool connected = naive.cut > 0;
    if (connected && rep.epsilon_star > 0.0 && !rep.disconnected) ++good;
    csv << seed << ",1," << out.stats.rounds_used << ',' << (connected ? 1 : 0) << ','
        << rep.epsilon_star << ',' << rep.cut << ',' << rep.volume << ',' << naive.value() << '\n';
  }
  const double frac = static_cast<double>(good) / seeds;
  return {frac >= 0.9 && mismatches == 0,
          std::to_string(good) + "/" + std::to_string(seeds) +
              " seeds connected with eps*>0 (threshold 90%), oracle mismatches=" +
              std::to_string(mismatches) + ", distribution in " + g_csv_path};
}

// ---------------------------------------------------------------------- 3

Outcome criterion_degrees() {
  return {g_degrees.violations == 0 && g_degrees.terminated > 0,
          std::to_string(g_degrees.terminated) + " terminated runs of " + std::to_string(g_degrees.runs) +
              ", degree violations=" + std::to_string(g_degrees.violations)};
}

}  // namespace

int main(int argc, char** argv) {
  for (int i = 1; i + 1 < argc; ++i)
    if (std::strcmp(argv[i], "--csv") == 0) g_csv_path = argv[i + 1];

  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  // Criterion 3 audits every run made by the others, so it goes last.
  const std::vector<Criterion> order{
      {1, "termination bound", criterion_termination},
      {2, "work bound", criterion_work},
      {4, "mixing lemma", criterion_mixing},
      {5, "classification bounds", criterion_classification},
      {6, "codec losslessness", criterion_codec},
      {7, "cost ledger audit", criterion_cost},
      {8, "termination witness codec", criterion_witness},
      {9, "spectral correctness", criterion_spectral},
      {10, "expansion of outputs", criterion_expansion},
      {3, "degree guarantee", criterion_degrees},
  };
  std::map<int, std::pair<std::string, Outcome>> results;
  for (const auto& c : order) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    results[c.id] = {c.name, o};
  }
  int failed = 0;
  for (const auto& [id, r] : results) {
    std::cout << (r.second.pass ? "PASS" : "FAIL") << " [" << id << "] " << r.first << ": "
              << r.second.detail << '\n';
    if (!r.second.pass) ++failed;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << '\n';
  return failed == 0 ? 0 : 1;
}
