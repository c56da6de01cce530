#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "raes/codec/bitstream.hpp"

namespace raes::codec {

/// Exact binomial coefficient C(n, k); 0 when k > n.
BigInt binomial(std::uint64_t n, std::uint64_t k);

/// log2 C(n, k) in floating point (0 when C(n, k) <= 1).
double log2_binomial(std::uint64_t n, std::uint64_t k);

/// ceil(log2 C(n, k)): width of a fixed-length rank field.
unsigned rank_width(std::uint64_t n, std::uint64_t k);

/// Position of a sorted k-subset of {0..n-1} in the lexicographic order of
/// all k-subsets ({0,1,..} is rank 0). Uses the combinatorial number system:
///   rank = C(n,k) - 1 - sum_i C(n-1-a_i, k-i)    (i = 0..k-1)
BigInt subset_rank(std::uint32_t n, std::span<const std::uint32_t> subset);

/// Inverse of subset_rank. Throws DecodeError("subset", ...) when
/// rank >= C(n, k).
std::vector<std::uint32_t> subset_unrank(std::uint32_t n, std::uint32_t k, const BigInt& rank);

}  // namespace raes::codec
