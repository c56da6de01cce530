#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "raes/graph.hpp"

namespace raes {

/// Positive rational, kept in lowest terms.
struct Rational {
  std::int64_t num = 1;
  std::int64_t den = 1;

  static Rational make(std::int64_t num, std::int64_t den);
  /// Accepts "4", "3/2" or "1.5".
  static Rational parse(std::string_view text);

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const;
  friend bool operator==(const Rational&, const Rational&) = default;
};

/// Parameters of RAES(G, d, c) with a round budget T.
struct RaesParams {
  std::uint32_t d = 1;
  Rational c;
  std::uint32_t max_rounds = 1;

  /// c*d; must be a positive integer.
  std::uint32_t capacity() const;
  /// Throws InvalidParameter unless d >= 1, c*d is a positive integer and T >= 1.
  void validate() const;

  // Advisory hypotheses of the expansion guarantee; never enforced.
  bool degree_hypothesis() const { return d >= 44; }
  bool capacity_hypothesis(double alpha) const;

  friend bool operator==(const RaesParams&, const RaesParams&) = default;
};

/// Per-node sequence of d*T neighbor-index draws, each in [0, Delta).
/// Fixing the tape makes the protocol a deterministic function.
class RandomTape {
 public:
  RandomTape() = default;
  RandomTape(std::uint32_t n, std::uint32_t delta, std::uint32_t d, std::uint32_t max_rounds,
             std::vector<std::uint32_t> draws);

  std::uint32_t n() const noexcept { return n_; }
  std::uint32_t delta() const noexcept { return delta_; }
  std::uint32_t d() const noexcept { return d_; }
  std::uint32_t max_rounds() const noexcept { return max_rounds_; }
  std::uint32_t per_node() const noexcept { return d_ * max_rounds_; }

  std::span<const std::uint32_t> row(NodeId v) const {
    return {draws_.data() + static_cast<std::size_t>(v) * per_node(), per_node()};
  }
  std::uint32_t at(NodeId v, std::uint32_t i) const { return row(v)[i]; }
  const std::vector<std::uint32_t>& draws() const noexcept { return draws_; }

  /// Throws InvalidParameter unless the tape is shaped for (g, params).
  void check_fits(const Graph& g, const RaesParams& params) const;

  friend bool operator==(const RandomTape&, const RandomTape&) = default;

 private:
  std::uint32_t n_ = 0;
  std::uint32_t delta_ = 0;
  std::uint32_t d_ = 0;
  std::uint32_t max_rounds_ = 0;
  std::vector<std::uint32_t> draws_;
};

/// n*d*T uniform draws on [0, Delta), deterministic in `seed`.
RandomTape fresh_tape(const Graph& g, const RaesParams& params, std::uint64_t seed);

struct Request {
  NodeId from = 0;
  NodeId to = 0;
  bool accepted = false;
  friend bool operator==(const Request&, const Request&) = default;
};

/// All requests of one round, grouped by sender (ascending) and in tape order
/// within a sender.
struct Round {
  std::vector<Request> requests;
  std::vector<std::uint32_t> offsets;  // n+1 entries; sender v owns [offsets[v], offsets[v+1])

  std::span<const Request> from(NodeId v) const {
    return {requests.data() + offsets[v], offsets[v + 1] - offsets[v]};
  }
  friend bool operator==(const Round&, const Round&) = default;
};

/// Round-by-round record of an execution.
struct ExecutionTrace {
  std::uint32_t n = 0;
  RaesParams params;
  std::vector<Round> rounds;
  // After round t (index t-1): out- and in-degree of every node in H.
  std::vector<std::vector<std::uint32_t>> d_out_after;
  std::vector<std::vector<std::uint32_t>> d_in_after;
  std::vector<std::uint32_t> consumed;  // l_v: requests issued by v overall
  std::optional<std::uint32_t> terminated_at;

  std::uint32_t rounds_recorded() const { return static_cast<std::uint32_t>(rounds.size()); }
  /// d_out(v) at the end of round t; t = 0 is the initial state.
  std::uint32_t d_out(NodeId v, std::uint32_t t) const { return t == 0 ? 0 : d_out_after[t - 1][v]; }
  std::uint32_t d_in(NodeId v, std::uint32_t t) const { return t == 0 ? 0 : d_in_after[t - 1][v]; }

  friend bool operator==(const ExecutionTrace&, const ExecutionTrace&) = default;
};

/// A directed link of H with its origin (requester, round).
struct Link {
  NodeId from = 0;
  NodeId to = 0;
  std::uint32_t round = 0;
  friend bool operator==(const Link&, const Link&) = default;
};

/// The output multigraph H: undirected, parallel edges kept with multiplicity.
class SubgraphH {
 public:
  SubgraphH() = default;
  SubgraphH(std::uint32_t n, std::vector<Link> links);

  std::uint32_t n() const noexcept { return n_; }
  const std::vector<Link>& links() const noexcept { return links_; }

  std::uint32_t degree(NodeId v) const { return out_[v] + in_[v]; }
  std::uint32_t out_degree(NodeId v) const { return out_[v]; }
  std::uint32_t in_degree(NodeId v) const { return in_[v]; }

  /// Undirected neighbor lists; a neighbor appears once per parallel edge
  /// unless `simple` is set.
  std::vector<std::vector<NodeId>> adjacency(bool simple = false) const;

  /// Edge list (u < v per entry, sorted) with multiplicity.
  std::vector<Edge> edges() const;

 private:
  std::uint32_t n_ = 0;
  std::vector<Link> links_;
  std::vector<std::uint32_t> out_;
  std::vector<std::uint32_t> in_;
};

struct RunStats {
  std::uint32_t rounds_used = 0;
  std::uint64_t total_requests = 0;  // sum of l_v
  std::uint64_t total_messages = 0;  // one request plus one 1-bit reply each
  std::vector<std::uint64_t> unsettled_per_round;  // after each round
};

enum class RunStatus { Terminated, NotTerminated };

/// Result of run_raes. NotTerminated is an ordinary outcome: the trace, the
/// partial H and the stats describe the execution so far.
struct RunOutcome {
  RunStatus status = RunStatus::NotTerminated;
  ExecutionTrace trace;
  SubgraphH h;
  RunStats stats;

  bool terminated() const { return status == RunStatus::Terminated; }
};

/// Executes RAES(G, d, c) on the given tape for at most T rounds.
RunOutcome run_raes(const Graph& g, const RaesParams& params, const RandomTape& tape);

/// Unsettled links n*d - sum_v d_out(v) at the end of round t (t = 0 allowed).
std::uint64_t unsettled_after(const ExecutionTrace& trace, std::uint32_t t);

/// Rebuilds degree snapshots and counters from raw rounds, checking that the
/// acceptance decisions follow the capacity rule. Used by trace readers.
ExecutionTrace rebuild_trace(std::uint32_t n, const RaesParams& params,
                             std::vector<std::vector<Request>> rounds,
                             std::optional<std::uint32_t> terminated_at);

SubgraphH subgraph_of(const ExecutionTrace& trace);

/// Tape whose consumed prefix reproduces the trace's requests; the draws a
/// node never used are filled with 0.
RandomTape tape_of(const Graph& g, const ExecutionTrace& trace);
RunStats stats_of(const ExecutionTrace& trace);

}  // namespace raes
