#include "raes/protocol.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <random>

#include "raes/error.hpp"

namespace raes {

Rational Rational::make(std::int64_t num, std::int64_t den) {
  if (den <= 0 || num <= 0) throw InvalidParameter("capacity factor must be a positive rational");
  const auto g = std::gcd(num, den);
  return {num / g, den / g};
}

namespace {

std::int64_t parse_int(std::string_view text, std::string_view what) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw InvalidParameter("cannot parse " + std::string(what) + " '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

Rational Rational::parse(std::string_view text) {
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    return make(parse_int(text.substr(0, slash), "rational"),
                parse_int(text.substr(slash + 1), "rational"));
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    auto frac = text.substr(dot + 1);
    if (frac.size() > 12) throw InvalidParameter("too many decimals in '" + std::string(text) + "'");
    std::int64_t den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    auto whole = text.substr(0, dot);
    std::int64_t w = whole.empty() ? 0 : parse_int(whole, "rational");
    std::int64_t f = frac.empty() ? 0 : parse_int(frac, "rational");
    return make(w * den + f, den);
  }
  return make(parse_int(text, "rational"), 1);
}

std::string Rational::str() const {
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

std::uint32_t RaesParams::capacity() const {
  return static_cast<std::uint32_t>(static_cast<std::int64_t>(d) * c.num / c.den);
}

void RaesParams::validate() const {
  if (d < 1) throw InvalidParameter("d must be >= 1");
  if (c.num <= 0 || c.den <= 0) throw InvalidParameter("c must be positive");
  if ((static_cast<std::int64_t>(d) * c.num) % c.den != 0) {
    throw InvalidParameter("c*d must be an integer (c=" + c.str() + ", d=" + std::to_string(d) + ")");
  }
  if (capacity() < 1) throw InvalidParameter("c*d must be >= 1");
  if (max_rounds < 1) throw InvalidParameter("max rounds must be >= 1");
}

bool RaesParams::capacity_hypothesis(double alpha) const {
  // c >= max{(2/alpha)^2, 10 e^{10d}}, compared in log space.
  const double log_c = std::log(c.value());
  return log_c >= 2.0 * std::log(2.0 / alpha) && log_c >= std::log(10.0) + 10.0 * d;
}

RandomTape::RandomTape(std::uint32_t n, std::uint32_t delta, std::uint32_t d,
                       std::uint32_t max_rounds, std::vector<std::uint32_t> draws)
    : n_(n), delta_(delta), d_(d), max_rounds_(max_rounds), draws_(std::move(draws)) {
  if (draws_.size() != static_cast<std::size_t>(n) * d * max_rounds) {
    throw InvalidParameter("tape has " + std::to_string(draws_.size()) + " draws, expected n*d*T = " +
                           std::to_string(static_cast<std::size_t>(n) * d * max_rounds));
  }
  for (auto x : draws_) {
    if (x >= delta_) throw InvalidParameter("tape draw " + std::to_string(x) + " not below Delta");
  }
}

void RandomTape::check_fits(const Graph& g, const RaesParams& params) const {
  if (n_ != g.n() || delta_ != g.delta() || d_ != params.d || max_rounds_ != params.max_rounds) {
    throw InvalidParameter("tape shape (n=" + std::to_string(n_) + ", Delta=" +
                           std::to_string(delta_) + ", d=" + std::to_string(d_) +
                           ", T=" + std::to_string(max_rounds_) +
                           ") does not match the graph and parameters");
  }
}

RandomTape fresh_tape(const Graph& g, const RaesParams& params, std::uint64_t seed) {
  params.validate();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint32_t> draw(0, g.delta() - 1);
  std::vector<std::uint32_t> draws(static_cast<std::size_t>(g.n()) * params.d * params.max_rounds);
  for (auto& x : draws) x = draw(rng);
  return RandomTape(g.n(), g.delta(), params.d, params.max_rounds, std::move(draws));
}

SubgraphH::SubgraphH(std::uint32_t n, std::vector<Link> links)
    : n_(n), links_(std::move(links)), out_(n, 0), in_(n, 0) {
  for (const auto& l : links_) {
    if (l.from >= n || l.to >= n) throw InvalidParameter("link endpoint out of range");
    ++out_[l.from];
    ++in_[l.to];
  }
}

std::vector<std::vector<NodeId>> SubgraphH::adjacency(bool simple) const {
  std::vector<std::vector<NodeId>> adj(n_);
  for (const auto& l : links_) {
    adj[l.from].push_back(l.to);
    adj[l.to].push_back(l.from);
  }
  for (auto& row : adj) {
    std::sort(row.begin(), row.end());
    if (simple) row.erase(std::unique(row.begin(), row.end()), row.end());
  }
  return adj;
}

std::vector<Edge> SubgraphH::edges() const {
  std::vector<Edge> out;
  out.reserve(links_.size());
  for (const auto& l : links_) out.emplace_back(std::min(l.from, l.to), std::max(l.from, l.to));
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// Degree bookkeeping shared by the simulator and the trace reader.
struct DegreeState {
  std::vector<std::uint32_t> d_out;
  std::vector<std::uint32_t> d_in;
  std::vector<std::uint32_t> consumed;

  explicit DegreeState(std::uint32_t n) : d_out(n, 0), d_in(n, 0), consumed(n, 0) {}

  bool all_done(std::uint32_t d) const {
    return std::all_of(d_out.begin(), d_out.end(), [d](auto x) { return x == d; });
  }
};

// Phase 2: a recipient accepts everything it got this round iff the count
// fits its remaining capacity. Fills `accepted` and updates degrees.
void settle_round(Round& round, DegreeState& state, std::uint32_t capacity,
                  std::vector<std::uint32_t>& incoming) {
  std::fill(incoming.begin(), incoming.end(), 0);
  for (const auto& r : round.requests) ++incoming[r.to];
  for (auto& r : round.requests) {
    r.accepted = incoming[r.to] <= capacity - state.d_in[r.to];
  }
  for (const auto& r : round.requests) {
    if (r.accepted) {
      ++state.d_out[r.from];
      ++state.d_in[r.to];
    }
  }
}

void finish_round(ExecutionTrace& trace, Round round, const DegreeState& state) {
  trace.rounds.push_back(std::move(round));
  trace.d_out_after.push_back(state.d_out);
  trace.d_in_after.push_back(state.d_in);
}

}  // namespace

RunOutcome run_raes(const Graph& g, const RaesParams& params, const RandomTape& tape) {
  params.validate();
  tape.check_fits(g, params);
  const std::uint32_t n = g.n();
  const std::uint32_t d = params.d;
  const std::uint32_t capacity = params.capacity();

  ExecutionTrace trace;
  trace.n = n;
  trace.params = params;
  DegreeState state(n);
  std::vector<std::uint32_t> incoming(n, 0);

  for (std::uint32_t t = 1; t <= params.max_rounds; ++t) {
    Round round;
    round.offsets.assign(n + 1, 0);
    for (NodeId v = 0; v < n; ++v) {
      round.offsets[v] = static_cast<std::uint32_t>(round.requests.size());
      const std::uint32_t missing = d - state.d_out[v];
      if (state.consumed[v] + missing > tape.per_node()) {
        throw InternalError("tape exhausted for node " + std::to_string(v));
      }
      for (std::uint32_t j = 0; j < missing; ++j) {
        const auto draw = tape.at(v, state.consumed[v]++);
        round.requests.push_back({v, g.neighbors(v)[draw], false});
      }
    }
    round.offsets[n] = static_cast<std::uint32_t>(round.requests.size());
    settle_round(round, state, capacity, incoming);
    finish_round(trace, std::move(round), state);
    if (state.all_done(d)) {
      trace.terminated_at = t;
      break;
    }
  }
  trace.consumed = state.consumed;

  RunOutcome out;
  out.status = trace.terminated_at ? RunStatus::Terminated : RunStatus::NotTerminated;
  out.h = subgraph_of(trace);
  out.stats = stats_of(trace);
  out.trace = std::move(trace);
  return out;
}

std::uint64_t unsettled_after(const ExecutionTrace& trace, std::uint32_t t) {
  if (t > trace.rounds_recorded()) {
    throw InvalidParameter("round " + std::to_string(t) + " beyond the " +
                           std::to_string(trace.rounds_recorded()) + " recorded rounds");
  }
  std::uint64_t settled = 0;
  for (NodeId v = 0; v < trace.n; ++v) settled += trace.d_out(v, t);
  return static_cast<std::uint64_t>(trace.n) * trace.params.d - settled;
}

ExecutionTrace rebuild_trace(std::uint32_t n, const RaesParams& params,
                             std::vector<std::vector<Request>> rounds,
                             std::optional<std::uint32_t> terminated_at) {
  params.validate();
  if (rounds.size() > params.max_rounds) throw InvalidParameter("trace has more rounds than T");
  const std::uint32_t d = params.d;
  const std::uint32_t capacity = params.capacity();

  ExecutionTrace trace;
  trace.n = n;
  trace.params = params;
  DegreeState state(n);
  std::vector<std::uint32_t> incoming(n, 0);

  for (std::size_t t = 0; t < rounds.size(); ++t) {
    if (state.all_done(d)) throw InvalidParameter("trace continues after every node finished");
    Round round;
    round.requests = std::move(rounds[t]);
    round.offsets.assign(n + 1, 0);
    std::vector<bool> claimed(round.requests.size());
    for (std::size_t i = 0; i < round.requests.size(); ++i) {
      claimed[i] = round.requests[i].accepted;
      const auto& r = round.requests[i];
      if (r.from >= n || r.to >= n) throw InvalidParameter("request endpoint out of range");
      if (i > 0 && r.from < round.requests[i - 1].from) {
        throw InvalidParameter("requests of a round must be grouped by ascending sender");
      }
    }
    std::size_t pos = 0;
    for (NodeId v = 0; v < n; ++v) {
      round.offsets[v] = static_cast<std::uint32_t>(pos);
      std::uint32_t count = 0;
      while (pos < round.requests.size() && round.requests[pos].from == v) {
        ++pos;
        ++count;
      }
      if (count != d - state.d_out[v]) {
        throw InvalidParameter("node " + std::to_string(v) + " issued " + std::to_string(count) +
                               " requests in round " + std::to_string(t + 1) + ", expected " +
                               std::to_string(d - state.d_out[v]));
      }
      state.consumed[v] += count;
    }
    round.offsets[n] = static_cast<std::uint32_t>(pos);
    settle_round(round, state, capacity, incoming);
    for (std::size_t i = 0; i < claimed.size(); ++i) {
      if (claimed[i] != round.requests[i].accepted) {
        throw InvalidParameter("acceptance flags of round " + std::to_string(t + 1) +
                               " violate the capacity rule");
      }
    }
    finish_round(trace, std::move(round), state);
  }
  trace.consumed = state.consumed;

  const bool done = !trace.rounds.empty() && state.all_done(d);
  if (done) trace.terminated_at = trace.rounds_recorded();
  if (terminated_at != trace.terminated_at) {
    throw InvalidParameter("terminated_at does not match the recorded rounds");
  }
  return trace;
}

SubgraphH subgraph_of(const ExecutionTrace& trace) {
  std::vector<Link> links;
  links.reserve(static_cast<std::size_t>(trace.n) * trace.params.d);
  for (std::uint32_t t = 0; t < trace.rounds.size(); ++t) {
    for (const auto& r : trace.rounds[t].requests) {
      if (r.accepted) links.push_back({r.from, r.to, t + 1});
    }
  }
  return SubgraphH(trace.n, std::move(links));
}

RandomTape tape_of(const Graph& g, const ExecutionTrace& trace) {
  if (trace.n != g.n()) throw InvalidParameter("trace and graph have different node counts");
  const std::uint32_t per_node = trace.params.d * trace.params.max_rounds;
  std::vector<std::uint32_t> draws(static_cast<std::size_t>(g.n()) * per_node, 0);
  std::vector<std::uint32_t> used(g.n(), 0);
  for (const auto& round : trace.rounds) {
    for (const auto& r : round.requests) {
      const auto local = g.local_index(r.from, r.to);
      if (local < 0) {
        throw InvalidParameter("request " + std::to_string(r.from) + "->" + std::to_string(r.to) +
                               " does not follow an edge of the graph");
      }
      draws[static_cast<std::size_t>(r.from) * per_node + used[r.from]++] =
          static_cast<std::uint32_t>(local);
    }
  }
  return RandomTape(g.n(), g.delta(), trace.params.d, trace.params.max_rounds, std::move(draws));
}

RunStats stats_of(const ExecutionTrace& trace) {
  RunStats stats;
  stats.rounds_used = trace.rounds_recorded();
  for (auto l : trace.consumed) stats.total_requests += l;
  stats.total_messages = 2 * stats.total_requests;
  for (std::uint32_t t = 1; t <= trace.rounds_recorded(); ++t) {
    stats.unsettled_per_round.push_back(unsettled_after(trace, t));
  }
  return stats;
}

}  // namespace raes
