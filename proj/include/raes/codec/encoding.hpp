#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "raes/codec/bitstream.hpp"
#include "raes/graph.hpp"
#include "raes/protocol.hpp"

namespace raes::codec {

/// Fixed header of an encoding. The graph itself is never encoded: encoder
/// and decoder both hold G.
struct Header {
  std::uint32_t n = 0;
  std::uint32_t w = 0;  // ceil(log2 Delta): width of one raw draw
  std::uint32_t d = 0;
  std::uint32_t cd = 0;
  std::uint32_t max_rounds = 0;
  std::uint32_t s = 0;
  friend bool operator==(const Header&, const Header&) = default;
};

/// Contiguous physical section [begin, begin + length) of the stream.
struct Section {
  std::string name;
  std::size_t begin = 0;
  std::size_t length = 0;
};

/// Compressed representation of an execution's randomness relative to a set S.
///
/// Stream layout (all fields self-delimiting given G and the header):
///   table1        gamma(s), rank of S among s-subsets of [n]
///   table2_upper  rows of V-S in node order, d*T raw draws of w bits each
///   table2_rows   per v in S, in node order:
///                   field1 gamma(l_v), rank of the d accepted positions among l_v
///                   field2 gamma(k+1), rank of the k out-of-S positions among the d accepted
///                   field3 per accepted request: raw draw if out of S, else
///                          rank within v's neighbors in S
///                   field4 categories: one bit per rejection, 1 = critical node
///                   field5 the d*T - l_v unused draws, raw
///   table3        per round t = 1..T: gamma(c_t + 1), rank of C_t among c_t-subsets of [n]
///   field4_ranks  per round, per v in S, per rejection in tape order: rank of the
///                 destination within C_t or SS_t (ceil(log2 |set|) bits)
/// The field4 destination ranks trail the stream because their widths depend on
/// SS_t, which the decoder only knows after replaying round t.
struct CompressedEncoding {
  Header header;
  BitStream bits;
  std::vector<Section> sections;  // empty when read back from a file
};

/// Budget check of one logical section: actual <= fractional + slack.
struct SectionAudit {
  std::string name;
  std::uint64_t actual_bits = 0;
  double fractional = 0.0;
  double slack = 0.0;
  bool within_budget() const { return static_cast<double>(actual_bits) <= fractional + slack + 1e-9; }
};

/// Fractional (formula) costs next to actual bit counts.
struct CostReport {
  std::uint32_t n = 0;
  std::uint32_t delta = 0;
  std::uint32_t d = 0;
  std::uint32_t capacity = 0;
  std::uint32_t max_rounds = 0;
  std::uint32_t s = 0;
  double eps = 0.0;          // mean eps_v over S
  double delta_mean = 0.0;   // mean delta_v over S

  double cost_S = 0.0;         // 2 log s + log C(n, s)
  double cost_A = 0.0;         // sum 2 log l_v + log C(l_v, d)
  double cost_cut = 0.0;       // sum 2 log(eps_v d) + log C(d, eps_v d)
  double cost_dest_acc = 0.0;  // sum (1-eps_v) d log((1-delta_v) Delta) + eps_v d log Delta
  double cost_C = 0.0;         // sum_t 2 log c_t + log C(n, c_t)
  double cost_dest_rej = 0.0;  // sum (l_v - d) + rss(v) log(2n/c) + sum_t rc_t(v) log c_t
  double cost_upper = 0.0;     // (n - s) d T log Delta
  double unused = 0.0;         // sum_{v in S} (d T - l_v) log Delta
  double raw_total = 0.0;      // n d T log Delta
  double fractional_total = 0.0;

  std::vector<SectionAudit> sections;
  std::uint64_t stream_bits = 0;

  double savings = 0.0;                // closed form
  double savings_by_components = 0.0;  // d s T log Delta minus the summed cost bound

  double lambda2_plus = 0.0;
  bool degree_hypothesis = false;    // d >= 44
  bool capacity_hypothesis = false;  // c >= max{(2/alpha)^2, 10 e^{10d}}
  bool spectral_hypothesis = false;  // lambda <= eps alpha^2 Delta

  std::uint64_t actual_sum() const;
  bool all_within_budget() const;
  const SectionAudit& section(const std::string& name) const;
};

/// Closed-form savings -3 s log(n/s) + (1 - 13 eps log(1/eps))/2 d s log(n/s) - (1/4 + 2 eps) d s.
double savings_formula(std::uint32_t n, std::uint32_t s, std::uint32_t d, double eps);
/// Same quantity as d s T log Delta minus the total encoding bound.
double savings_by_components(std::uint32_t n, std::uint32_t s, std::uint32_t d, std::uint32_t delta,
                             std::uint32_t max_rounds, double eps);

/// Evaluates every cost formula for a terminated trace and the bit counts the
/// encoder will produce for it.
CostReport cost_report(const Graph& g, const ExecutionTrace& trace, std::span<const NodeId> s_set,
                       double lambda2_plus);

/// Encodes a terminated execution. Refuses (PreconditionError) a trace that did
/// not terminate within T, and (InvalidParameter) a trace that does not replay
/// from the tape.
std::pair<CompressedEncoding, CostReport> encode_execution(const Graph& g, const RaesParams& params,
                                                           const RandomTape& tape,
                                                           const ExecutionTrace& trace,
                                                           std::span<const NodeId> s_set,
                                                           double lambda2_plus = 0.0);

struct DecodedExecution {
  RandomTape tape;
  ExecutionTrace trace;
  std::vector<NodeId> s_set;
};

/// Rebuilds the tape and the trace round by round. Throws DecodeError naming
/// the offending section.
DecodedExecution decode_execution(const Graph& g, const CompressedEncoding& enc);

/// File container: "RAESC1", six 32-bit big-endian header fields
/// (n, w, d, cd, T, s), then the stream followed by p zero bits and a 3-bit
/// value p so that the total is a whole number of bytes.
std::vector<std::uint8_t> to_bytes(const CompressedEncoding& enc);
CompressedEncoding from_bytes(std::span<const std::uint8_t> bytes);

/// Appends the pad bits and the 3-bit pad length.
void append_padding(BitStream& stream);
/// Inverse of append_padding on a byte payload.
BitStream strip_padding(std::span<const std::uint8_t> payload, const char* section);

}  // namespace raes::codec
