#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace raes::codec {

using BigInt = boost::multiprecision::cpp_int;

/// Bit vector, most significant bit of byte 0 first. Multi-bit fields are
/// big-endian.
struct BitStream {
  std::vector<std::uint8_t> bytes;
  std::size_t bit_length = 0;

  bool bit(std::size_t i) const { return (bytes[i / 8] >> (7 - i % 8)) & 1; }
  /// "0101..." rendering, handy in tests and debugging.
  std::string to_string() const;
  friend bool operator==(const BitStream&, const BitStream&) = default;
};

class BitWriter {
 public:
  void write_bit(bool b);
  /// Low `width` bits of value, most significant first. width <= 64.
  void write(std::uint64_t value, unsigned width);
  void write_big(const BigInt& value, unsigned width);
  /// Elias gamma; x >= 1. Costs 2*floor(log2 x) + 1 bits.
  void write_gamma(std::uint64_t x);

  std::size_t size() const noexcept { return stream_.bit_length; }
  const BitStream& stream() const noexcept { return stream_; }
  BitStream take() { return std::move(stream_); }

 private:
  BitStream stream_;
};

/// Sequential reader over a BitStream. Every read names the section being
/// decoded so failures surface as DecodeError(section, ...).
class BitReader {
 public:
  explicit BitReader(const BitStream& stream, std::size_t begin = 0);
  BitReader(const BitStream& stream, std::size_t begin, std::size_t end);

  bool read_bit(const char* section);
  std::uint64_t read(unsigned width, const char* section);
  BigInt read_big(unsigned width, const char* section);
  std::uint64_t read_gamma(const char* section);

  std::size_t position() const noexcept { return pos_; }
  std::size_t remaining() const noexcept { return end_ - pos_; }

 private:
  void need(std::size_t bits, const char* section) const;

  const BitStream* stream_;
  std::size_t pos_;
  std::size_t end_;
};

/// Length in bits of the Elias gamma code of x >= 1.
unsigned gamma_length(std::uint64_t x);

/// ceil(log2 x) for x >= 1 (0 for x = 1): bits of a fixed-width index < x.
unsigned index_width(std::uint64_t x);

}  // namespace raes::codec
