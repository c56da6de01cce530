#include "raes/codec/bitstream.hpp"

#include <bit>

#include "raes/error.hpp"

namespace raes::codec {

std::string BitStream::to_string() const {
  std::string out;
  out.reserve(bit_length);
  for (std::size_t i = 0; i < bit_length; ++i) out.push_back(bit(i) ? '1' : '0');
  return out;
}

void BitWriter::write_bit(bool b) {
  const std::size_t i = stream_.bit_length++;
  if (i / 8 >= stream_.bytes.size()) stream_.bytes.push_back(0);
  if (b) stream_.bytes[i / 8] |= static_cast<std::uint8_t>(0x80u >> (i % 8));
}

void BitWriter::write(std::uint64_t value, unsigned width) {
  if (width > 64) throw InternalError("bit field wider than 64 bits");
  if (width < 64 && (value >> width) != 0) {
    throw InternalError("value " + std::to_string(value) + " does not fit in " +
                        std::to_string(width) + " bits");
  }
  for (unsigned k = width; k-- > 0;) write_bit((value >> k) & 1);
}

void BitWriter::write_big(const BigInt& value, unsigned width) {
  if (value < 0 || (value != 0 && boost::multiprecision::msb(value) >= width)) {
    throw InternalError("big value does not fit in " + std::to_string(width) + " bits");
  }
  for (unsigned k = width; k-- > 0;) write_bit(boost::multiprecision::bit_test(value, k));
}

void BitWriter::write_gamma(std::uint64_t x) {
  if (x == 0) throw InternalError("Elias gamma needs x >= 1");
  const unsigned n = 63 - std::countl_zero(x);
  for (unsigned k = 0; k < n; ++k) write_bit(false);
  write(x, n + 1);
}

BitReader::BitReader(const BitStream& stream, std::size_t begin)
    : BitReader(stream, begin, stream.bit_length) {}

BitReader::BitReader(const BitStream& stream, std::size_t begin, std::size_t end)
    : stream_(&stream), pos_(begin), end_(end) {
  if (end > stream.bit_length || begin > end) throw InternalError("bit reader range out of bounds");
}

void BitReader::need(std::size_t bits, const char* section) const {
  if (bits > end_ - pos_) {
    throw DecodeError(section, "truncated: need " + std::to_string(bits) + " bits, " +
                                   std::to_string(end_ - pos_) + " left");
  }
}

bool BitReader::read_bit(const char* section) {
  need(1, section);
  return stream_->bit(pos_++);
}

std::uint64_t BitReader::read(unsigned width, const char* section) {
  if (width > 64) throw DecodeError(section, "field wider than 64 bits");
  need(width, section);
  std::uint64_t v = 0;
  for (unsigned k = 0; k < width; ++k) v = (v << 1) | (stream_->bit(pos_++) ? 1u : 0u);
  return v;
}

BigInt BitReader::read_big(unsigned width, const char* section) {
  need(width, section);
  BigInt v = 0;
  for (unsigned k = 0; k < width; ++k) {
    v <<= 1;
    if (stream_->bit(pos_++)) v |= 1;
  }
  return v;
}

std::uint64_t BitReader::read_gamma(const char* section) {
  unsigned zeros = 0;
  while (!read_bit(section)) {
    if (++zeros > 63) throw DecodeError(section, "malformed Elias gamma prefix");
  }
  if (zeros == 0) return 1;
  return (std::uint64_t{1} << zeros) | read(zeros, section);
}

unsigned gamma_length(std::uint64_t x) {
  return 2 * static_cast<unsigned>(63 - std::countl_zero(x)) + 1;
}

unsigned index_width(std::uint64_t x) {
  return x <= 1 ? 0u : static_cast<unsigned>(64 - std::countl_zero(x - 1));
}

}  // namespace raes::codec
