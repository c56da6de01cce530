#include <algorithm>
#include <map>
#include <string>

#include "raes/analysis.hpp"
#include "raes/codec/encoding.hpp"
#include "raes/codec/subset_rank.hpp"
#include "raes/error.hpp"
#include "requests.hpp"

namespace raes::codec {

namespace {

// Counts bits per logical section while writing, so the encoder can check
// itself against the cost report.
class SectionWriter {
 public:
  BitWriter& out() { return out_; }

  void begin(const char* name) {
    flush();
    current_ = name;
    mark_ = out_.size();
  }
  void flush() {
    if (current_) logical_[current_] += out_.size() - mark_;
    current_ = nullptr;
  }
  std::uint64_t bits(const std::string& name) const {
    auto it = logical_.find(name);
    return it == logical_.end() ? 0 : it->second;
  }

 private:
  BitWriter out_;
  const char* current_ = nullptr;
  std::size_t mark_ = 0;
  std::map<std::string, std::uint64_t> logical_;
};

std::vector<std::uint32_t> to_u32(std::span<const NodeId> v) { return {v.begin(), v.end()}; }

}  // namespace

std::pair<CompressedEncoding, CostReport> encode_execution(const Graph& g, const RaesParams& params,
                                                           const RandomTape& tape,
                                                           const ExecutionTrace& trace,
                                                           std::span<const NodeId> s_set,
                                                           double lambda2_plus) {
  params.validate();
  tape.check_fits(g, params);
  if (!trace.terminated_at) {
    throw PreconditionError("only executions that terminated within T rounds can be encoded");
  }
  if (!(trace.params == params) || run_raes(g, params, tape).trace != trace) {
    throw InvalidParameter("trace does not replay from the given tape");
  }

  const auto report = cost_report(g, trace, s_set, lambda2_plus);
  const auto cls = analysis::classify_nodes(g, trace, s_set);
  const auto& S = cls.s_set;
  const auto in_s = node_mask(g.n(), S);
  const std::uint32_t n = g.n();
  const std::uint32_t d = params.d;
  const std::uint32_t T = params.max_rounds;
  const std::uint32_t dT = tape.per_node();
  const unsigned w = index_width(g.delta());

  CompressedEncoding enc;
  enc.header = {n, w, d, params.capacity(), T, static_cast<std::uint32_t>(S.size())};

  SectionWriter sw;
  auto& out = sw.out();
  auto physical = [&](const char* name, std::size_t begin) {
    enc.sections.push_back({name, begin, out.size() - begin});
  };

  std::size_t begin = out.size();
  sw.begin("table1");
  out.write_gamma(S.size());
  out.write_big(subset_rank(n, to_u32(S)), rank_width(n, S.size()));
  physical("table1", begin);

  begin = out.size();
  sw.begin("table2_upper");
  for (NodeId v = 0; v < n; ++v) {
    if (in_s[v]) continue;
    for (auto x : tape.row(v)) out.write(x, w);
  }
  physical("table2_upper", begin);

  begin = out.size();
  for (const NodeId v : S) {
    const auto reqs = detail::requests_of(trace, v);
    const std::uint32_t l = trace.consumed[v];
    std::vector<std::uint32_t> acc_pos;
    for (std::uint32_t p = 0; p < l; ++p) {
      if (reqs.accepted[p]) acc_pos.push_back(p);
    }
    std::vector<std::uint32_t> out_pos;
    for (std::uint32_t j = 0; j < acc_pos.size(); ++j) {
      if (!in_s[reqs.dest[acc_pos[j]]]) out_pos.push_back(j);
    }

    sw.begin("field1");
    out.write_gamma(l);
    out.write_big(subset_rank(l, acc_pos), rank_width(l, d));

    sw.begin("field2");
    out.write_gamma(out_pos.size() + 1);
    out.write_big(subset_rank(d, out_pos), rank_width(d, out_pos.size()));

    sw.begin("field3");
    const auto nbr_s = detail::neighbors_in(g, v, in_s);
    const unsigned in_width = index_width(nbr_s.size());
    for (const auto p : acc_pos) {
      const NodeId dest = reqs.dest[p];
      if (!in_s[dest]) {
        out.write(tape.at(v, p), w);
      } else {
        const auto it = std::lower_bound(nbr_s.begin(), nbr_s.end(), dest);
        out.write(static_cast<std::uint64_t>(it - nbr_s.begin()), in_width);
      }
    }

    sw.begin("field4");
    const auto i = static_cast<std::size_t>(std::lower_bound(S.begin(), S.end(), v) - S.begin());
    for (const bool critical : cls.critical_flags[i]) out.write_bit(critical);

    sw.begin("field5");
    for (std::uint32_t p = l; p < dT; ++p) out.write(tape.at(v, p), w);
  }
  physical("table2_rows", begin);

  begin = out.size();
  sw.begin("table3");
  for (std::uint32_t t = 1; t <= T; ++t) {
    const std::uint32_t c_t = cls.c_t(t);
    out.write_gamma(c_t + 1);
    if (c_t > 0) {
      out.write_big(subset_rank(n, to_u32(cls.rounds[t - 1].critical)), rank_width(n, c_t));
    }
  }
  physical("table3", begin);

  begin = out.size();
  sw.begin("field4");
  for (std::uint32_t t = 1; t <= cls.rounds.size(); ++t) {
    const auto& sets = cls.rounds[t - 1];
    for (const NodeId v : S) {
      for (const auto& r : trace.rounds[t - 1].from(v)) {
        if (r.accepted) continue;
        const bool critical = std::binary_search(sets.critical.begin(), sets.critical.end(), r.to);
        const auto& set = critical ? sets.critical : sets.semi_saturated;
        const auto it = std::lower_bound(set.begin(), set.end(), r.to);
        out.write(static_cast<std::uint64_t>(it - set.begin()), index_width(set.size()));
      }
    }
  }
  physical("field4_ranks", begin);
  sw.flush();

  for (const auto& audit : report.sections) {
    if (sw.bits(audit.name) != audit.actual_bits) {
      throw InternalError("section " + audit.name + ": wrote " + std::to_string(sw.bits(audit.name)) +
                          " bits, cost model predicted " + std::to_string(audit.actual_bits));
    }
  }
  enc.bits = out.take();
  return {std::move(enc), report};
}

namespace {

struct RowS {
  std::uint32_t l = 0;
  std::vector<std::uint32_t> acc_pos;
  std::vector<char> accepted;           // per position < l
  std::vector<NodeId> acc_dest;         // per accepted request, in order
  std::vector<std::uint32_t> acc_draw;  // tape value of each accepted request
  std::vector<char> critical;           // per rejection, in tape order
  std::vector<std::uint32_t> tail;      // positions l..dT-1
};

}  // namespace

DecodedExecution decode_execution(const Graph& g, const CompressedEncoding& enc) {
  const auto& h = enc.header;
  const std::uint32_t n = g.n();
  const std::uint32_t delta = g.delta();
  const unsigned w = index_width(delta);
  if (h.n != n) throw DecodeError("header", "n does not match the graph");
  if (h.w != w) throw DecodeError("header", "draw width does not match the graph degree");
  if (h.d < 1 || h.cd < 1 || h.max_rounds < 1) throw DecodeError("header", "d, cd and T must be >= 1");
  if (h.s < 1 || h.s >= n) throw DecodeError("header", "s must lie in [1, n)");
  if (static_cast<std::uint64_t>(h.d) * h.max_rounds > (1ull << 26)) {
    throw DecodeError("header", "d*T is implausibly large");
  }
  const RaesParams params{h.d, Rational::make(h.cd, h.d), h.max_rounds};
  const std::uint32_t d = h.d;
  const std::uint32_t cd = h.cd;
  const std::uint32_t T = h.max_rounds;
  const std::uint32_t dT = d * T;

  BitReader in(enc.bits);
  auto raw_draw = [&](const char* section) {
    const auto x = static_cast<std::uint32_t>(in.read(w, section));
    if (x >= delta) throw DecodeError(section, "draw " + std::to_string(x) + " not below Delta");
    return x;
  };

  const auto s = in.read_gamma("table1");
  if (s != h.s) throw DecodeError("table1", "set size disagrees with the header");
  std::vector<NodeId> S;
  try {
    S = subset_unrank(n, h.s, in.read_big(rank_width(n, h.s), "table1"));
  } catch (const DecodeError& e) {
    throw DecodeError("table1", e.what());
  }
  const auto in_s = node_mask(n, S);

  std::vector<std::vector<std::uint32_t>> rows(n);
  for (NodeId v = 0; v < n; ++v) {
    if (in_s[v]) continue;
    rows[v].resize(dT);
    for (auto& x : rows[v]) x = raw_draw("table2_upper");
  }

  std::vector<RowS> srows(S.size());
  for (std::size_t i = 0; i < S.size(); ++i) {
    const NodeId v = S[i];
    auto& row = srows[i];
    const auto l = in.read_gamma("field1");
    if (l < d || l > dT) throw DecodeError("field1", "l_v out of [d, dT]");
    row.l = static_cast<std::uint32_t>(l);
    try {
      row.acc_pos = subset_unrank(row.l, d, in.read_big(rank_width(row.l, d), "field1"));
    } catch (const DecodeError& e) {
      throw DecodeError("field1", e.what());
    }
    row.accepted.assign(row.l, 0);
    for (auto p : row.acc_pos) row.accepted[p] = 1;

    const auto k1 = in.read_gamma("field2");
    if (k1 > d + 1) throw DecodeError("field2", "more out-of-set requests than d");
    const auto k = static_cast<std::uint32_t>(k1 - 1);
    std::vector<std::uint32_t> out_idx;
    try {
      out_idx = subset_unrank(d, k, in.read_big(rank_width(d, k), "field2"));
    } catch (const DecodeError& e) {
      throw DecodeError("field2", e.what());
    }
    std::vector<char> is_out(d, 0);
    for (auto j : out_idx) is_out[j] = 1;

    const auto nbr_s = detail::neighbors_in(g, v, in_s);
    const unsigned in_width = index_width(nbr_s.size());
    for (std::uint32_t j = 0; j < d; ++j) {
      if (is_out[j]) {
        const auto x = raw_draw("field3");
        const NodeId dest = g.neighbors(v)[x];
        if (in_s[dest]) throw DecodeError("field3", "out-of-set request lands inside S");
        row.acc_dest.push_back(dest);
        row.acc_draw.push_back(x);
      } else {
        const auto idx = in.read(in_width, "field3");
        if (idx >= nbr_s.size()) throw DecodeError("field3", "in-set neighbor index out of range");
        const NodeId dest = nbr_s[idx];
        row.acc_dest.push_back(dest);
        row.acc_draw.push_back(static_cast<std::uint32_t>(g.local_index(v, dest)));
      }
    }
    for (std::uint32_t r = 0; r < row.l - d; ++r) row.critical.push_back(in.read_bit("field4"));
    for (std::uint32_t p = row.l; p < dT; ++p) row.tail.push_back(raw_draw("field5"));
  }

  std::vector<std::vector<NodeId>> crit_sets(T);
  for (std::uint32_t t = 1; t <= T; ++t) {
    const auto c1 = in.read_gamma("table3");
    if (c1 > static_cast<std::uint64_t>(n) + 1) throw DecodeError("table3", "c_t exceeds n");
    const auto c_t = static_cast<std::uint32_t>(c1 - 1);
    if (c_t > 0) {
      try {
        crit_sets[t - 1] = subset_unrank(n, c_t, in.read_big(rank_width(n, c_t), "table3"));
      } catch (const DecodeError& e) {
        throw DecodeError("table3", e.what());
      }
    }
  }

  // Replay. Requests of V-S come straight from their rows; SS_t depends only on
  // those and on earlier rounds, so rejected destinations of S can be resolved.
  std::vector<std::uint32_t> d_out(n, 0), d_in(n, 0), consumed(n, 0);
  std::vector<std::size_t> next_acc(S.size(), 0), next_rej(S.size(), 0);
  std::vector<std::vector<std::uint32_t>> s_draws(S.size());
  std::vector<std::uint64_t> from_outside(n), total(n);
  std::optional<std::uint32_t> finished;
  for (std::uint32_t t = 1; t <= T; ++t) {
    if (finished) {
      if (!crit_sets[t - 1].empty()) throw DecodeError("table3", "critical nodes after termination");
      continue;
    }
    std::vector<Request> reqs;
    std::vector<int> claim;  // -1 unknown (V-S), else claimed acceptance
    struct Pending {
      std::size_t request;
      std::size_t i;     // index in S
      std::size_t draw;  // index in s_draws[i]
    };
    std::vector<Pending> pending;  // rejected requests of S awaiting a destination
    for (NodeId v = 0; v < n; ++v) {
      const std::uint32_t missing = d - d_out[v];
      if (!in_s[v]) {
        for (std::uint32_t j = 0; j < missing; ++j) {
          reqs.push_back({v, g.neighbors(v)[rows[v][consumed[v]++]], false});
          claim.push_back(-1);
        }
        continue;
      }
      const auto i = static_cast<std::size_t>(std::lower_bound(S.begin(), S.end(), v) - S.begin());
      auto& row = srows[i];
      for (std::uint32_t j = 0; j < missing; ++j) {
        const std::uint32_t p = consumed[v]++;
        if (p >= row.l) throw DecodeError("field1", "node uses more requests than l_v");
        if (row.accepted[p]) {
          if (next_acc[i] >= row.acc_dest.size()) throw DecodeError("field3", "accepted list exhausted");
          reqs.push_back({v, row.acc_dest[next_acc[i]], false});
          s_draws[i].push_back(row.acc_draw[next_acc[i]]);
          ++next_acc[i];
          claim.push_back(1);
        } else {
          pending.push_back({reqs.size(), i, s_draws[i].size()});
          reqs.push_back({v, 0, false});
          s_draws[i].push_back(0);
          claim.push_back(0);
        }
      }
    }

    std::fill(from_outside.begin(), from_outside.end(), 0);
    for (const auto& r : reqs) {
      if (!in_s[r.from]) ++from_outside[r.to];
    }
    std::vector<NodeId> ss;
    for (NodeId x = 0; x < n; ++x) {
      if (2 * (static_cast<std::uint64_t>(d_in[x]) + from_outside[x]) >= cd) ss.push_back(x);
    }
    const auto& crit = crit_sets[t - 1];

    for (const auto& [q, i, draw_at] : pending) {
      const NodeId v = reqs[q].from;
      if (next_rej[i] >= srows[i].critical.size()) throw DecodeError("field4", "rejection list exhausted");
      const bool is_crit = srows[i].critical[next_rej[i]++];
      const auto& set = is_crit ? crit : ss;
      if (set.empty()) throw DecodeError("field4_ranks", "rejection into an empty set");
      const auto rank = in.read(index_width(set.size()), "field4_ranks");
      if (rank >= set.size()) throw DecodeError("field4_ranks", "rank out of range");
      const NodeId dest = set[rank];
      const auto local = g.local_index(v, dest);
      if (local < 0) throw DecodeError("field4_ranks", "destination is not a neighbor");
      reqs[q].to = dest;
      s_draws[i][draw_at] = static_cast<std::uint32_t>(local);
    }

    std::fill(total.begin(), total.end(), 0);
    for (const auto& r : reqs) ++total[r.to];
    std::vector<NodeId> crit_check;
    for (NodeId x = 0; x < n; ++x) {
      const bool is_ss = 2 * (static_cast<std::uint64_t>(d_in[x]) + from_outside[x]) >= cd;
      if (!is_ss && d_in[x] + total[x] > cd) crit_check.push_back(x);
    }
    if (crit_check != crit) throw DecodeError("table3", "critical set of round " + std::to_string(t) + " does not replay");

    for (std::size_t q = 0; q < reqs.size(); ++q) {
      reqs[q].accepted = total[reqs[q].to] <= cd - d_in[reqs[q].to];
      if (claim[q] != -1 && claim[q] != static_cast<int>(reqs[q].accepted)) {
        throw DecodeError("field1", "claimed acceptance of round " + std::to_string(t) + " does not replay");
      }
    }
    for (const auto& r : reqs) {
      if (r.accepted) {
        ++d_out[r.from];
        ++d_in[r.to];
      }
    }
    if (std::all_of(d_out.begin(), d_out.end(), [d](auto x) { return x == d; })) finished = t;
  }
  if (!finished) throw DecodeError("replay", "execution does not terminate within T rounds");
  if (in.remaining() != 0) throw DecodeError("field4_ranks", "trailing bits after the last field");

  std::vector<std::uint32_t> draws;
  draws.reserve(static_cast<std::size_t>(n) * dT);
  for (NodeId v = 0; v < n; ++v) {
    if (!in_s[v]) {
      draws.insert(draws.end(), rows[v].begin(), rows[v].end());
      continue;
    }
    const auto i = static_cast<std::size_t>(std::lower_bound(S.begin(), S.end(), v) - S.begin());
    if (consumed[v] != srows[i].l) throw DecodeError("field1", "l_v disagrees with the replay");
    draws.insert(draws.end(), s_draws[i].begin(), s_draws[i].end());
    draws.insert(draws.end(), srows[i].tail.begin(), srows[i].tail.end());
  }

  DecodedExecution out{RandomTape(n, delta, d, T, std::move(draws)), {}, S};
  auto outcome = run_raes(g, params, out.tape);
  if (!outcome.terminated() || outcome.trace.terminated_at != finished) {
    throw DecodeError("replay", "rebuilt tape does not reproduce the decoded execution");
  }
  out.trace = std::move(outcome.trace);
  return out;
}

}  // namespace raes::codec
