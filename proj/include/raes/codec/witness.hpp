#pragma once

#include <cstdint>

#include "raes/codec/bitstream.hpp"
#include "raes/graph.hpp"
#include "raes/protocol.hpp"

namespace raes::codec {

/// Compressed tape of an execution in which node v is still deficient
/// (d_out(v) < d) at the end of round t.
///
/// Layout: gamma(d), gamma(cd), gamma(T), gamma(t), v in ceil(log2 n) bits,
/// the d*T raw draws of every u != v in node order, then for v: gamma(l_v)
/// (draws used through round t), gamma(d'+1), rank of the d' accepted
/// positions among l_v, the accepted draws raw, one rank per rejected request
/// within the round's overloaded set O_r, and finally v's remaining draws raw.
///
/// O_r holds the neighbors w of v with
///   d_in(w, r-1) + (round-r requests to w from u != v) + k_r > cd,
/// where k_r is the number of requests v issues in round r. Every rejected
/// destination of v lies in O_r, and the decoder knows O_r before placing v's
/// rejected requests of round r.
BitStream encode_termination_witness(const Graph& g, const RaesParams& params,
                                     const RandomTape& tape, NodeId v, std::uint32_t t);

/// Rebuilds the full tape. Throws DecodeError on malformed input or when the
/// replay disagrees with the encoded acceptances.
RandomTape decode_termination_witness(const Graph& g, const BitStream& stream);

}  // namespace raes::codec
