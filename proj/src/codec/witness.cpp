#include "raes/codec/witness.hpp"

#include <algorithm>
#include <string>

#include "raes/codec/subset_rank.hpp"
#include "raes/error.hpp"

namespace raes::codec {

namespace {

constexpr const char* kSection = "witness";

// Neighbors w of v that can reject v in this round: accepted so far plus the
// requests of everyone else plus all of v's requests exceeds cd.
std::vector<NodeId> overloaded(const Graph& g, NodeId v, std::span<const std::uint32_t> d_in,
                               std::span<const std::uint32_t> others, std::uint32_t k,
                               std::uint32_t cd) {
  std::vector<NodeId> out;
  for (NodeId w : g.neighbors(v)) {
    if (static_cast<std::uint64_t>(d_in[w]) + others[w] + k > cd) out.push_back(w);
  }
  return out;
}

}  // namespace

BitStream encode_termination_witness(const Graph& g, const RaesParams& params,
                                     const RandomTape& tape, NodeId v, std::uint32_t t) {
  params.validate();
  tape.check_fits(g, params);
  const std::uint32_t n = g.n();
  if (v >= n) throw InvalidParameter("node " + std::to_string(v) + " out of range");
  if (t < 1 || t > params.max_rounds) throw InvalidParameter("round t must lie in [1, T]");
  const auto outcome = run_raes(g, params, tape);
  const auto& trace = outcome.trace;
  if (t > trace.rounds_recorded() || trace.d_out(v, t) >= params.d) {
    throw PreconditionError("node " + std::to_string(v) + " is not deficient at the end of round " +
                            std::to_string(t));
  }
  const std::uint32_t d = params.d;
  const std::uint32_t cd = params.capacity();
  const unsigned w = index_width(g.delta());

  BitWriter out;
  out.write_gamma(d);
  out.write_gamma(cd);
  out.write_gamma(params.max_rounds);
  out.write_gamma(t);
  out.write(v, index_width(n));
  for (NodeId u = 0; u < n; ++u) {
    if (u == v) continue;
    for (auto x : tape.row(u)) out.write(x, w);
  }

  std::uint32_t l = 0;
  std::vector<std::uint32_t> acc_pos;
  for (std::uint32_t r = 1; r <= t; ++r) {
    for (const auto& req : trace.rounds[r - 1].from(v)) {
      if (req.accepted) acc_pos.push_back(l);
      ++l;
    }
  }
  const auto d_prime = static_cast<std::uint32_t>(acc_pos.size());
  out.write_gamma(l);
  out.write_gamma(d_prime + 1);
  out.write_big(subset_rank(l, acc_pos), rank_width(l, d_prime));
  for (auto p : acc_pos) out.write(tape.at(v, p), w);

  std::vector<std::uint32_t> others(n);
  for (std::uint32_t r = 1; r <= t; ++r) {
    const Round& round = trace.rounds[r - 1];
    std::fill(others.begin(), others.end(), 0);
    for (const auto& req : round.requests) {
      if (req.from != v) ++others[req.to];
    }
    const auto mine = round.from(v);
    const auto& d_in = r == 1 ? std::vector<std::uint32_t>(n, 0) : trace.d_in_after[r - 2];
    const auto o_r = overloaded(g, v, d_in, others, static_cast<std::uint32_t>(mine.size()), cd);
    for (const auto& req : mine) {
      if (req.accepted) continue;
      const auto it = std::lower_bound(o_r.begin(), o_r.end(), req.to);
      if (it == o_r.end() || *it != req.to) {
        throw InternalError("rejected destination outside the overloaded set");
      }
      out.write(static_cast<std::uint64_t>(it - o_r.begin()), index_width(o_r.size()));
    }
  }
  for (std::uint32_t p = l; p < tape.per_node(); ++p) out.write(tape.at(v, p), w);
  return out.take();
}

RandomTape decode_termination_witness(const Graph& g, const BitStream& stream) {
  const std::uint32_t n = g.n();
  const std::uint32_t delta = g.delta();
  const unsigned w = index_width(delta);
  BitReader in(stream);
  auto bounded_gamma = [&](std::uint64_t limit, const char* what) {
    const auto x = in.read_gamma(kSection);
    if (x > limit) throw DecodeError(kSection, std::string(what) + " out of range");
    return static_cast<std::uint32_t>(x);
  };
  auto raw_draw = [&] {
    const auto x = static_cast<std::uint32_t>(in.read(w, kSection));
    if (x >= delta) throw DecodeError(kSection, "draw not below Delta");
    return x;
  };

  const std::uint32_t d = bounded_gamma(1u << 20, "d");
  const std::uint32_t cd = bounded_gamma(1u << 30, "cd");
  const std::uint32_t T = bounded_gamma(1u << 20, "T");
  if (static_cast<std::uint64_t>(d) * T > (1ull << 26)) throw DecodeError(kSection, "d*T too large");
  const std::uint32_t t = bounded_gamma(T, "t");
  const auto v = static_cast<NodeId>(in.read(index_width(n), kSection));
  if (v >= n) throw DecodeError(kSection, "node id out of range");
  const std::uint32_t dT = d * T;

  std::vector<std::vector<std::uint32_t>> rows(n);
  for (NodeId u = 0; u < n; ++u) {
    if (u == v) continue;
    rows[u].resize(dT);
    for (auto& x : rows[u]) x = raw_draw();
  }
  const std::uint32_t l = bounded_gamma(dT, "l_v");
  const std::uint32_t d_prime = bounded_gamma(d + 1, "d'+1") - 1;
  if (d_prime > l) throw DecodeError(kSection, "more accepted requests than l_v");
  std::vector<std::uint32_t> acc_pos;
  try {
    acc_pos = subset_unrank(l, d_prime, in.read_big(rank_width(l, d_prime), kSection));
  } catch (const DecodeError& e) {
    throw DecodeError(kSection, e.what());
  }
  std::vector<char> accepted(l, 0);
  for (auto p : acc_pos) accepted[p] = 1;
  std::vector<std::uint32_t> row_v(l, 0);
  for (auto p : acc_pos) row_v[p] = raw_draw();

  std::vector<std::uint32_t> d_out(n, 0), d_in(n, 0), consumed(n, 0), others(n), incoming(n);
  for (std::uint32_t r = 1; r <= t; ++r) {
    std::vector<Request> reqs;
    std::fill(others.begin(), others.end(), 0);
    for (NodeId u = 0; u < n; ++u) {
      if (u == v) continue;
      for (std::uint32_t j = d_out[u]; j < d; ++j) {
        const NodeId to = g.neighbors(u)[rows[u][consumed[u]++]];
        reqs.push_back({u, to, false});
        ++others[to];
      }
    }
    const std::uint32_t k = d - d_out[v];
    const auto o_r = overloaded(g, v, d_in, others, k, cd);
    std::vector<std::size_t> mine;
    for (std::uint32_t j = 0; j < k; ++j) {
      const std::uint32_t p = consumed[v]++;
      if (p >= l) throw DecodeError(kSection, "node uses more draws than l_v");
      if (!accepted[p]) {
        if (o_r.empty()) throw DecodeError(kSection, "rejection with no overloaded neighbor");
        const auto rank = in.read(index_width(o_r.size()), kSection);
        if (rank >= o_r.size()) throw DecodeError(kSection, "overloaded-set rank out of range");
        row_v[p] = static_cast<std::uint32_t>(g.local_index(v, o_r[rank]));
      }
      mine.push_back(reqs.size());
      reqs.push_back({v, g.neighbors(v)[row_v[p]], false});
    }

    std::fill(incoming.begin(), incoming.end(), 0);
    for (const auto& req : reqs) ++incoming[req.to];
    for (auto& req : reqs) req.accepted = incoming[req.to] <= cd - d_in[req.to];
    for (std::size_t j = 0; j < mine.size(); ++j) {
      const auto p = consumed[v] - k + j;
      if (reqs[mine[j]].accepted != static_cast<bool>(accepted[p])) {
        throw DecodeError(kSection, "replayed acceptance of round " + std::to_string(r) +
                                        " disagrees with the encoded positions");
      }
    }
    for (const auto& req : reqs) {
      if (req.accepted) {
        ++d_out[req.from];
        ++d_in[req.to];
      }
    }
  }
  if (consumed[v] != l) throw DecodeError(kSection, "l_v disagrees with the replay");
  if (d_out[v] != d_prime) throw DecodeError(kSection, "d' disagrees with the replay");

  for (std::uint32_t p = l; p < dT; ++p) row_v.push_back(raw_draw());
  if (in.remaining() != 0) throw DecodeError(kSection, "trailing bits");
  rows[v] = std::move(row_v);

  std::vector<std::uint32_t> draws;
  draws.reserve(static_cast<std::size_t>(n) * dT);
  for (const auto& row : rows) draws.insert(draws.end(), row.begin(), row.end());
  return RandomTape(n, delta, d, T, std::move(draws));
}

}  // namespace raes::codec
