#include "raes/codec/subset_rank.hpp"

#include <cmath>
#include <string>

#include "raes/error.hpp"

namespace raes::codec {

BigInt binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  BigInt out = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    out *= n - k + i;
    out /= i;
  }
  return out;
}

double log2_binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n || k == 0 || k == n) return 0.0;
  const double ln = std::lgamma(static_cast<double>(n) + 1) - std::lgamma(static_cast<double>(k) + 1) -
                    std::lgamma(static_cast<double>(n - k) + 1);
  return std::max(0.0, ln / std::log(2.0));
}

unsigned rank_width(std::uint64_t n, std::uint64_t k) {
  const BigInt count = binomial(n, k);
  if (count <= 1) return 0;
  return static_cast<unsigned>(boost::multiprecision::msb(BigInt(count - 1))) + 1;
}

BigInt subset_rank(std::uint32_t n, std::span<const std::uint32_t> subset) {
  const auto k = static_cast<std::uint32_t>(subset.size());
  if (k > n) throw InvalidParameter("subset larger than its universe");
  BigInt sum = 0;
  for (std::uint32_t i = 0; i < k; ++i) {
    if (subset[i] >= n || (i > 0 && subset[i] <= subset[i - 1])) {
      throw InvalidParameter("subset must be strictly increasing and within range");
    }
    sum += binomial(n - 1 - subset[i], k - i);
  }
  return binomial(n, k) - 1 - sum;
}

std::vector<std::uint32_t> subset_unrank(std::uint32_t n, std::uint32_t k, const BigInt& rank) {
  if (k > n) throw DecodeError("subset", "subset size " + std::to_string(k) + " exceeds universe " +
                                             std::to_string(n));
  const BigInt total = binomial(n, k);
  if (rank < 0 || rank >= total) throw DecodeError("subset", "rank out of range");
  // Greedy combinadic of R = C(n,k) - 1 - rank with strictly decreasing b_i.
  BigInt remaining = total - 1 - rank;
  std::vector<std::uint32_t> out;
  out.reserve(k);
  std::int64_t b = static_cast<std::int64_t>(n) - 1;
  for (std::uint32_t i = 0; i < k; ++i) {
    const std::uint64_t m = k - i;
    BigInt cur = b >= 0 ? binomial(static_cast<std::uint64_t>(b), m) : BigInt(0);
    while (cur > remaining) {
      // C(b-1, m) = C(b, m) * (b - m) / b
      cur = cur * static_cast<std::uint64_t>(b - static_cast<std::int64_t>(m)) /
            static_cast<std::uint64_t>(b);
      --b;
    }
    remaining -= cur;
    out.push_back(static_cast<std::uint32_t>(static_cast<std::int64_t>(n) - 1 - b));
    --b;
  }
  return out;
}

}  // namespace raes::codec
