#include <string>

#include "raes/analysis.hpp"
#include "raes/error.hpp"

namespace raes::analysis {

NodeClassification classify_nodes(const Graph& g, const ExecutionTrace& trace,
                                  std::span<const NodeId> s_set) {
  if (trace.n != g.n()) throw InvalidParameter("trace and graph have different node counts");
  const std::uint32_t n = g.n();
  const std::uint64_t cd = trace.params.capacity();

  NodeClassification out;
  out.s_set = normalize_proper_subset(n, s_set);
  const auto in_s = node_mask(n, out.s_set);
  std::vector<std::uint32_t> index_in_s(n, 0);
  for (std::uint32_t i = 0; i < out.s_set.size(); ++i) index_in_s[out.s_set[i]] = i;

  out.rss.assign(out.s_set.size(), 0);
  out.critical_flags.assign(out.s_set.size(), {});

  std::vector<std::uint64_t> from_outside(n), total(n);
  std::vector<char> is_ss(n), is_crit(n);
  for (std::uint32_t t = 1; t <= trace.rounds_recorded(); ++t) {
    const Round& round = trace.rounds[t - 1];
    std::fill(from_outside.begin(), from_outside.end(), 0);
    std::fill(total.begin(), total.end(), 0);
    for (const auto& r : round.requests) {
      ++total[r.to];
      if (!in_s[r.from]) ++from_outside[r.to];
    }
    RoundClassification rc_sets;
    for (NodeId w = 0; w < n; ++w) {
      const std::uint64_t accepted_before = trace.d_in(w, t - 1);
      is_ss[w] = 2 * (accepted_before + from_outside[w]) >= cd;
      is_crit[w] = !is_ss[w] && accepted_before + total[w] > cd;
      if (is_ss[w]) rc_sets.semi_saturated.push_back(w);
      if (is_crit[w]) rc_sets.critical.push_back(w);
    }
    std::vector<std::uint32_t> rc_round(out.s_set.size(), 0);
    for (const auto& r : round.requests) {
      if (!in_s[r.from] || r.accepted) continue;
      const auto i = index_in_s[r.from];
      if (is_ss[r.to]) {
        ++out.rss[i];
        out.critical_flags[i].push_back(false);
      } else if (is_crit[r.to]) {
        ++rc_round[i];
        out.critical_flags[i].push_back(true);
      } else {
        throw ClassificationViolation("rejected request " + std::to_string(r.from) + "->" +
                                      std::to_string(r.to) + " in round " + std::to_string(t) +
                                      " is neither semi-saturated nor critical");
      }
    }
    out.rounds.push_back(std::move(rc_sets));
    out.rc.push_back(std::move(rc_round));
  }
  return out;
}

bool saturation_bounds_hold(const NodeClassification& cls, std::uint32_t n, const Rational& c) {
  // |SS| <= 2n/c  <=>  |SS| * num <= 2n * den
  for (const auto& round : cls.rounds) {
    const auto ss = static_cast<std::int64_t>(round.semi_saturated.size());
    const auto crit = static_cast<std::int64_t>(round.critical.size());
    if (ss * c.num > 2 * static_cast<std::int64_t>(n) * c.den) return false;
    if (crit * c.num > static_cast<std::int64_t>(n) * c.den) return false;
  }
  return true;
}

}  // namespace raes::analysis
