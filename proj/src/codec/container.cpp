#include <algorithm>
#include <array>
#include <string>

#include "raes/codec/encoding.hpp"
#include "raes/error.hpp"

namespace raes::codec {

namespace {

constexpr std::array<char, 6> kMagic{'R', 'A', 'E', 'S', 'C', '1'};
constexpr std::size_t kHeaderBytes = kMagic.size() + 6 * 4;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t x) {
  for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<std::uint8_t>(x >> shift));
}

std::uint32_t get_u32(std::span<const std::uint8_t> in, std::size_t at) {
  std::uint32_t x = 0;
  for (std::size_t k = 0; k < 4; ++k) x = (x << 8) | in[at + k];
  return x;
}

}  // namespace

void append_padding(BitStream& stream) {
  const auto p = static_cast<unsigned>((8 - (stream.bit_length + 3) % 8) % 8);
  BitWriter full;
  for (std::size_t i = 0; i < stream.bit_length; ++i) full.write_bit(stream.bit(i));
  full.write(0, p);
  full.write(p, 3);
  stream = full.take();
}

BitStream strip_padding(std::span<const std::uint8_t> payload, const char* section) {
  if (payload.empty()) throw DecodeError(section, "empty payload");
  const unsigned p = payload.back() & 0x7u;
  const std::size_t total = payload.size() * 8;
  if (total < 3 + p) throw DecodeError(section, "payload shorter than its padding");
  const std::size_t length = total - 3 - p;
  for (std::size_t i = length; i < length + p; ++i) {
    if ((payload[i / 8] >> (7 - i % 8)) & 1) throw DecodeError(section, "nonzero padding bit");
  }
  BitStream out;
  out.bit_length = length;
  out.bytes.assign(payload.begin(), payload.begin() + static_cast<std::ptrdiff_t>((length + 7) / 8));
  if (length % 8 != 0) out.bytes.back() &= static_cast<std::uint8_t>(0xFFu << (8 - length % 8));
  return out;
}

std::vector<std::uint8_t> to_bytes(const CompressedEncoding& enc) {
  std::vector<std::uint8_t> out(kMagic.begin(), kMagic.end());
  const auto& h = enc.header;
  for (auto x : {h.n, h.w, h.d, h.cd, h.max_rounds, h.s}) put_u32(out, x);
  BitStream body = enc.bits;
  append_padding(body);
  out.insert(out.end(), body.bytes.begin(), body.bytes.end());
  return out;
}

CompressedEncoding from_bytes(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kHeaderBytes || !std::equal(kMagic.begin(), kMagic.end(), bytes.begin())) {
    throw DecodeError("header", "not an encoding file (bad magic or short header)");
  }
  CompressedEncoding enc;
  auto& h = enc.header;
  std::size_t at = kMagic.size();
  for (auto* field : {&h.n, &h.w, &h.d, &h.cd, &h.max_rounds, &h.s}) {
    *field = get_u32(bytes, at);
    at += 4;
  }
  enc.bits = strip_padding(bytes.subspan(kHeaderBytes), "padding");
  return enc;
}

}  // namespace raes::codec
