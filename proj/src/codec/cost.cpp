#include <algorithm>
#include <cmath>
#include <string>

#include "raes/analysis.hpp"
#include "raes/codec/encoding.hpp"
#include "raes/codec/subset_rank.hpp"
#include "raes/error.hpp"
#include "requests.hpp"

namespace raes::codec {

namespace {

// log2 of a count, floored at 0 for counts below 1.
double lg(double x) { return x < 1.0 ? 0.0 : std::log2(x); }

}  // namespace

std::uint64_t CostReport::actual_sum() const {
  std::uint64_t sum = 0;
  for (const auto& s : sections) sum += s.actual_bits;
  return sum;
}

bool CostReport::all_within_budget() const {
  for (const auto& s : sections) {
    if (!s.within_budget()) return false;
  }
  return true;
}

const SectionAudit& CostReport::section(const std::string& name) const {
  for (const auto& s : sections) {
    if (s.name == name) return s;
  }
  throw InvalidParameter("no section named '" + name + "'");
}

double savings_formula(std::uint32_t n, std::uint32_t s, std::uint32_t d, double eps) {
  const double log_ns = std::log2(static_cast<double>(n) / s);
  const double e_log = eps > 0.0 ? eps * std::log2(1.0 / eps) : 0.0;
  const double ds = static_cast<double>(d) * s;
  return -3.0 * s * log_ns + (1.0 - 13.0 * e_log) / 2.0 * ds * log_ns - (0.25 + 2.0 * eps) * ds;
}

double savings_by_components(std::uint32_t n, std::uint32_t s, std::uint32_t d, std::uint32_t delta,
                             std::uint32_t max_rounds, double eps) {
  const double log_ns = std::log2(static_cast<double>(n) / s);
  const double log_delta = std::log2(static_cast<double>(delta));
  const double e_log = eps > 0.0 ? eps * std::log2(1.0 / eps) : 0.0;
  const double ds = static_cast<double>(d) * s;
  const double raw_s = ds * max_rounds * log_delta;
  const double encoded_s = 3.0 * s * log_ns + ds * log_delta -
                           (1.0 - 13.0 * e_log) / 2.0 * ds * log_ns + 2.0 * eps * ds +
                           log_delta * s * (static_cast<double>(d) * max_rounds - d) + ds / 4.0;
  return raw_s - encoded_s;
}

CostReport cost_report(const Graph& g, const ExecutionTrace& trace, std::span<const NodeId> s_set,
                       double lambda2_plus) {
  if (!trace.terminated_at) {
    throw PreconditionError("cost report needs an execution that terminated within T rounds");
  }
  const auto cls = analysis::classify_nodes(g, trace, s_set);
  const auto& S = cls.s_set;
  const auto in_s = node_mask(g.n(), S);
  const std::uint32_t n = g.n();
  const std::uint32_t d = trace.params.d;
  const std::uint32_t T = trace.params.max_rounds;
  const std::uint32_t delta = g.delta();
  const std::uint32_t dT = d * T;
  const unsigned w = index_width(delta);
  const double log_delta = std::log2(static_cast<double>(delta));
  const auto s = static_cast<std::uint32_t>(S.size());

  CostReport rep;
  rep.n = n;
  rep.delta = delta;
  rep.d = d;
  rep.capacity = trace.params.capacity();
  rep.max_rounds = T;
  rep.s = s;

  SectionAudit table1{"table1", gamma_length(s) + rank_width(n, s), 0.0, 2.0};
  rep.cost_S = 2.0 * lg(s) + log2_binomial(n, s);
  table1.fractional = rep.cost_S;

  SectionAudit upper{"table2_upper", 0, 0.0, 0.0};
  upper.actual_bits = static_cast<std::uint64_t>(n - s) * dT * w;
  rep.cost_upper = static_cast<double>(n - s) * dT * log_delta;
  upper.fractional = rep.cost_upper;
  upper.slack = static_cast<double>(n - s) * dT;

  SectionAudit f1{"field1"}, f2{"field2"}, f3{"field3"}, f4{"field4"}, f5{"field5"};
  const double log_2n_c = std::max(0.0, std::log2(2.0 * n / trace.params.c.value()));
  for (std::uint32_t i = 0; i < s; ++i) {
    const NodeId v = S[i];
    const auto reqs = detail::requests_of(trace, v);
    const std::uint32_t l = trace.consumed[v];
    std::uint32_t k = 0;  // eps_v * d
    for (std::size_t p = 0; p < reqs.dest.size(); ++p) {
      if (reqs.accepted[p] && !in_s[reqs.dest[p]]) ++k;
    }
    const auto deg_s = static_cast<std::uint32_t>(detail::neighbors_in(g, v, in_s).size());

    rep.cost_A += 2.0 * lg(l) + log2_binomial(l, d);
    f1.actual_bits += gamma_length(l) + rank_width(l, d);
    f1.slack += 2.0;

    rep.cost_cut += 2.0 * lg(k) + log2_binomial(d, k);
    f2.actual_bits += gamma_length(k + 1) + rank_width(d, k);
    f2.slack += 4.0;

    rep.cost_dest_acc += (d - k) * lg(deg_s) + k * log_delta;
    f3.actual_bits += static_cast<std::uint64_t>(k) * w + static_cast<std::uint64_t>(d - k) * index_width(deg_s);
    f3.slack += d;

    double rej = static_cast<double>(l - d) + cls.rss[i] * log_2n_c;
    f4.actual_bits += l - d;
    for (std::size_t p = 0; p < reqs.dest.size(); ++p) {
      if (reqs.accepted[p]) continue;
      const auto& round = cls.rounds[reqs.round[p] - 1];
      const bool critical = std::binary_search(round.critical.begin(), round.critical.end(), reqs.dest[p]);
      f4.actual_bits += index_width(critical ? round.critical.size() : round.semi_saturated.size());
      f4.slack += 1.0;
    }
    for (std::uint32_t t = 1; t <= cls.rounds.size(); ++t) {
      rej += cls.rc[t - 1][i] * lg(cls.c_t(t));
    }
    rep.cost_dest_rej += rej;

    rep.unused += static_cast<double>(dT - l) * log_delta;
    f5.actual_bits += static_cast<std::uint64_t>(dT - l) * w;
    f5.slack += dT - l;
  }
  f1.fractional = rep.cost_A;
  f2.fractional = rep.cost_cut;
  f3.fractional = rep.cost_dest_acc;
  f4.fractional = rep.cost_dest_rej;
  f5.fractional = rep.unused;

  SectionAudit table3{"table3"};
  for (std::uint32_t t = 1; t <= T; ++t) {
    const std::uint32_t c_t = cls.c_t(t);
    rep.cost_C += 2.0 * lg(c_t) + log2_binomial(n, c_t);
    table3.actual_bits += gamma_length(c_t + 1) + rank_width(n, c_t);
    table3.slack += 4.0;
  }
  table3.fractional = rep.cost_C;

  rep.raw_total = static_cast<double>(n) * dT * log_delta;
  rep.sections = {table1, upper, f1, f2, f3, f4, f5, table3};
  rep.stream_bits = rep.actual_sum();
  rep.fractional_total = rep.cost_S + rep.cost_upper + rep.cost_A + rep.cost_cut +
                         rep.cost_dest_acc + rep.cost_dest_rej + rep.unused + rep.cost_C;

  const auto fractions = analysis::cut_fractions(g, subgraph_of(trace), S);
  rep.eps = fractions.eps_mean;
  rep.delta_mean = fractions.delta_mean;
  rep.savings = savings_formula(n, s, d, rep.eps);
  rep.savings_by_components = savings_by_components(n, s, d, delta, T, rep.eps);

  rep.lambda2_plus = lambda2_plus;
  rep.degree_hypothesis = trace.params.degree_hypothesis();
  rep.capacity_hypothesis = trace.params.capacity_hypothesis(g.alpha());
  rep.spectral_hypothesis = lambda2_plus <= rep.eps * g.alpha() * g.alpha() * delta;
  return rep;
}

}  // namespace raes::codec
