#include <algorithm>
#include <string>

#include "raes/analysis.hpp"
#include "raes/error.hpp"

namespace raes::analysis {

std::vector<NodeId> normalize_proper_subset(std::uint32_t n, std::span<const NodeId> s_set) {
  std::vector<NodeId> s(s_set.begin(), s_set.end());
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  if (s.empty()) throw InvalidParameter("S must be nonempty");
  if (s.back() >= n) throw InvalidParameter("node id " + std::to_string(s.back()) + " out of range");
  if (s.size() == n) throw InvalidParameter("S must be a proper subset of V");
  return s;
}

CutFractions cut_fractions(const Graph& g, const SubgraphH& h, std::span<const NodeId> s_set) {
  if (h.n() != g.n()) throw InvalidParameter("H and G have different node counts");
  CutFractions out;
  out.s_set = normalize_proper_subset(g.n(), s_set);
  out.delta = g.delta();
  out.d = h.out_degree(0);
  for (NodeId v = 0; v < h.n(); ++v) {
    if (h.out_degree(v) != out.d || out.d == 0) {
      throw PreconditionError("cut fractions need a terminated H (equal positive out-degrees)");
    }
  }
  const auto in_s = node_mask(g.n(), out.s_set);
  std::vector<std::uint32_t> own_out(g.n(), 0);
  for (const auto& link : h.links()) {
    if (!in_s[link.to]) ++own_out[link.from];
  }
  for (NodeId v : out.s_set) {
    std::uint32_t leaving = 0;
    for (NodeId w : g.neighbors(v)) leaving += in_s[w] ? 0 : 1;
    out.g_out.push_back(leaving);
    out.h_out.push_back(own_out[v]);
    out.delta_v.push_back(static_cast<double>(leaving) / g.delta());
    out.eps_v.push_back(static_cast<double>(own_out[v]) / out.d);
  }
  const double s = static_cast<double>(out.s_set.size());
  for (std::size_t i = 0; i < out.s_set.size(); ++i) {
    out.delta_mean += out.delta_v[i] / s;
    out.eps_mean += out.eps_v[i] / s;
  }
  return out;
}

}  // namespace raes::analysis
