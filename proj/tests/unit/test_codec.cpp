#include <doctest.h>

#include <cmath>
#include <random>

#include "../oracles/enumeration.hpp"
#include "fixtures.hpp"
#include "raes/analysis.hpp"
#include "raes/codec/bitstream.hpp"
#include "raes/codec/encoding.hpp"
#include "raes/codec/subset_rank.hpp"
#include "raes/codec/witness.hpp"
#include "raes/error.hpp"

using namespace raes;
using namespace raes::codec;

namespace {

std::string gamma_bits(std::uint64_t x) {
  BitWriter w;
  w.write_gamma(x);
  return w.stream().to_string();
}

struct Instance {
  Graph g;
  RaesParams params;
  RandomTape tape;
  RunOutcome run;
  std::vector<NodeId> s;
};

// Random terminated instance with a random nonempty proper S.
Instance random_instance(std::mt19937_64& rng, std::uint64_t seed) {
  for (;;) {
    const std::uint32_t n = 8 + rng() % 57;
    const int family = static_cast<int>(rng() % 4);
    Graph g = family == 0   ? gen_complete(n)
            : family == 1   ? gen_complete_bipartite(std::max<std::uint32_t>(4, n / 2))
            : family == 2   ? gen_random_regular(n + n % 2, 3 + rng() % 6, seed)
                            : gen_circulant(n, close_offsets(n, std::vector<std::uint32_t>{1, 2, 3}));
    const std::uint32_t d = 1 + rng() % 4;
    const std::int64_t num = 1 + static_cast<std::int64_t>(rng() % (3 * d));
    RaesParams p{d, Rational::make(num, d), 40};
    if (p.capacity() < 1) continue;
    auto tape = fresh_tape(g, p, seed);
    auto run = run_raes(g, p, tape);
    if (!run.terminated()) continue;
    std::vector<NodeId> s;
    const std::uint32_t k = 1 + rng() % (g.n() - 1);
    std::vector<NodeId> all = fixtures::iota(g.n());
    std::shuffle(all.begin(), all.end(), rng);
    s.assign(all.begin(), all.begin() + k);
    return {std::move(g), p, std::move(tape), std::move(run), std::move(s)};
  }
}

}  // namespace

TEST_SUITE("bitstream") {

TEST_CASE("Elias gamma") {
  CHECK(gamma_bits(1) == "1");
  CHECK(gamma_bits(3) == "011");
  CHECK(gamma_bits(5) == "00101");
  for (std::uint64_t x : {1ull, 2ull, 7ull, 8ull, 1000ull, 1ull << 40}) {
    CHECK(gamma_bits(x).size() == gamma_length(x));
    CHECK(gamma_length(x) == 2 * static_cast<unsigned>(std::floor(std::log2(static_cast<double>(x)))) + 1);
  }
  BitWriter w;
  for (std::uint64_t x = 1; x < 300; ++x) w.write_gamma(x);
  const auto s = w.take();
  BitReader r(s);
  for (std::uint64_t x = 1; x < 300; ++x) CHECK(r.read_gamma("t") == x);
  CHECK(r.remaining() == 0);
}

TEST_CASE("malformed gamma and truncation") {
  BitWriter w;
  w.write(0, 5);
  const auto zeros = w.take();
  BitReader r(zeros);
  CHECK_THROWS_AS(r.read_gamma("x"), DecodeError);
  BitReader r2(zeros);
  CHECK_THROWS_AS(r2.read(6, "x"), DecodeError);
  try {
    BitReader r3(zeros);
    r3.read(9, "table3");
  } catch (const DecodeError& e) {
    CHECK(e.section() == "table3");
  }
}

TEST_CASE("fixed width fields") {
  BitWriter w;
  w.write(5, 3);
  w.write(0, 0);
  w.write_big(BigInt(1) << 70, 71);
  const auto s = w.take();
  CHECK(s.bit_length == 74);
  BitReader r(s);
  CHECK(r.read(3, "x") == 5);
  CHECK(r.read_big(71, "x") == (BigInt(1) << 70));
  CHECK(index_width(1) == 0);
  CHECK(index_width(2) == 1);
  CHECK(index_width(3) == 2);
  CHECK(index_width(4) == 2);
  CHECK(index_width(5) == 3);
  BitWriter bad;
  CHECK_THROWS_AS(bad.write(4, 2), InternalError);
}

TEST_CASE("subset rank examples") {
  CHECK(subset_rank(4, std::vector<std::uint32_t>{0, 2}) == 1);
  CHECK(subset_rank(4, std::vector<std::uint32_t>{0, 1}) == 0);
  CHECK(subset_rank(4, std::vector<std::uint32_t>{1, 2, 3}) == 3);
  CHECK(subset_rank(5, std::vector<std::uint32_t>{}) == 0);
  CHECK(rank_width(4, 3) == 2);
  CHECK(rank_width(10, 0) == 0);
  CHECK(rank_width(10, 10) == 0);
  CHECK(binomial(64, 32) == BigInt("1832624140942590534"));
  CHECK_THROWS_AS(subset_rank(4, std::vector<std::uint32_t>{2, 1}), InvalidParameter);
  CHECK_THROWS_AS(subset_rank(4, std::vector<std::uint32_t>{4}), InvalidParameter);
  CHECK_THROWS_AS(subset_unrank(4, 2, 6), DecodeError);
}

TEST_CASE("subset rank agrees with lexicographic enumeration") {
  for (std::uint32_t n = 0; n <= 9; ++n) {
    for (std::uint32_t k = 0; k <= n; ++k) {
      const auto all = oracle::lex_subsets(n, k);
      CHECK(BigInt(all.size()) == binomial(n, k));
      for (std::size_t i = 0; i < all.size(); ++i) {
        CHECK(subset_rank(n, all[i]) == i);
        CHECK(subset_unrank(n, k, i) == all[i]);
      }
    }
  }
}

TEST_CASE("subset rank roundtrip n = 40, k = 12") {
  std::mt19937_64 rng(1);
  std::vector<std::uint32_t> all = fixtures::iota(40);
  for (int i = 0; i < 1000; ++i) {
    std::shuffle(all.begin(), all.end(), rng);
    std::vector<std::uint32_t> s(all.begin(), all.begin() + 12);
    std::sort(s.begin(), s.end());
    const auto r = subset_rank(40, s);
    CHECK(r < binomial(40, 12));
    CHECK(subset_unrank(40, 12, r) == s);
  }
}

}  // TEST_SUITE

TEST_SUITE("codec") {

TEST_CASE("hand vector encoding") {
  const auto g = gen_complete(4);
  const auto p = fixtures::hand_params();
  const auto tape = fixtures::hand_tape();
  const auto run = run_raes(g, p, tape);
  const std::vector<NodeId> s{1, 2, 3};
  const auto [enc, report] = encode_execution(g, p, tape, run.trace, s);
  CHECK(enc.header == Header{4, 2, 1, 1, 4, 3});

  const auto bits = enc.bits.to_string();
  // table1: gamma(3) then rank 3 of {1,2,3} in 2 bits
  CHECK(bits.substr(0, 5) == "01111");
  REQUIRE(enc.sections.size() == 5);
  CHECK(enc.sections[0].name == "table1");
  CHECK(enc.sections[0].length == 5);
  // table2_upper: node 0's four draws, 2 bits each
  CHECK(enc.sections[1].length == 8);
  CHECK(bits.substr(5, 8) == "00000000");

  // node 3's row: l=4 -> gamma "00100", rank of {3} among 1-subsets of 4 = 3 -> "11";
  // k=1 -> gamma(2) "010", rank of {0} in 1-subsets of 1 -> 0 bits;
  // field3: destination 0 is outside S -> raw draw 0 "00";
  // field4 categories: critical, semi-saturated, semi-saturated -> "100"; field5 empty.
  CHECK(bits.find("00100" "11" "010" "00" "100") != std::string::npos);

  // field4_ranks: |C_1| = |SS_2| = 1 -> 0 bits; round 3 rejection 3->2 lies in SS_3 = {1, 2} -> "1"
  const auto& ranks = enc.sections[4];
  CHECK(ranks.name == "field4_ranks");
  CHECK(ranks.length == 1);
  CHECK(bits.substr(ranks.begin) == "1");

  CHECK(report.cost_S == doctest::Approx(2 * std::log2(3.0) + 2.0).epsilon(1e-12));
  CHECK(report.section("table1").fractional == doctest::Approx(5.170).epsilon(1e-3));
  CHECK(report.actual_sum() == enc.bits.bit_length);
  CHECK(report.all_within_budget());
  CHECK(report.eps == doctest::Approx(1.0 / 3.0));

  const auto dec = decode_execution(g, enc);
  CHECK(dec.tape == tape);
  CHECK(dec.trace == run.trace);
  CHECK(dec.s_set == s);
}

TEST_CASE("encoder refuses unterminated or mismatched traces") {
  const auto g = gen_complete(4);
  auto p = fixtures::hand_params();
  const auto tape = fixtures::hand_tape();
  const auto run = run_raes(g, p, tape);
  CHECK_THROWS_AS(encode_execution(g, p, tape, run.trace, std::vector<NodeId>{}), InvalidParameter);
  CHECK_THROWS_AS(encode_execution(g, p, tape, run.trace, fixtures::iota(4)), InvalidParameter);

  auto other = tape.draws();
  other[0] = 2;
  CHECK_THROWS_AS(encode_execution(g, p, RandomTape(4, 3, 1, 4, other), run.trace, std::vector<NodeId>{1}),
                  InvalidParameter);

  p.max_rounds = 2;
  std::vector<std::uint32_t> draws;
  for (NodeId v = 0; v < 4; ++v)
    for (std::uint32_t i = 0; i < 2; ++i) draws.push_back(tape.at(v, i));
  const RandomTape short_tape(4, 3, 1, 2, draws);
  const auto partial = run_raes(g, p, short_tape);
  CHECK_THROWS_AS(encode_execution(g, p, short_tape, partial.trace, std::vector<NodeId>{1}), PreconditionError);
  CHECK_THROWS_AS(cost_report(g, partial.trace, std::vector<NodeId>{1}, 0.0), PreconditionError);
}

TEST_CASE("single node with all accepted links leaving S") {
  const auto g = gen_complete(4);
  const auto p = fixtures::hand_params();
  const auto tape = fixtures::hand_tape();
  const auto run = run_raes(g, p, tape);
  const std::vector<NodeId> s{3};  // node 3's only link goes to 0
  const auto [enc, report] = encode_execution(g, p, tape, run.trace, s);
  CHECK(report.eps == 1.0);
  CHECK(report.all_within_budget());
  CHECK(decode_execution(g, enc).tape == tape);
}

TEST_CASE("randomized roundtrip and audit") {
  std::mt19937_64 rng(2024);
  for (std::uint64_t i = 0; i < 150; ++i) {
    const auto inst = random_instance(rng, i);
    const auto [enc, report] = encode_execution(inst.g, inst.params, inst.tape, inst.run.trace, inst.s);
    CHECK(report.actual_sum() == enc.bits.bit_length);
    CHECK(report.all_within_budget());
    std::size_t physical = 0;
    for (const auto& sec : enc.sections) physical += sec.length;
    CHECK(physical == enc.bits.bit_length);
    CHECK(report.savings == doctest::Approx(report.savings_by_components).epsilon(1e-9));
    const auto dec = decode_execution(inst.g, enc);
    CHECK(dec.tape == inst.tape);
    CHECK(dec.trace == inst.run.trace);
    const auto bytes = to_bytes(enc);
    const auto back = from_bytes(bytes);
    CHECK(back.header == enc.header);
    CHECK(back.bits == enc.bits);
  }
}

TEST_CASE("corrupted encodings raise decode errors") {
  const auto g = gen_complete(4);
  const auto p = fixtures::hand_params();
  const auto tape = fixtures::hand_tape();
  const auto run = run_raes(g, p, tape);
  const auto [enc, report] = encode_execution(g, p, tape, run.trace, std::vector<NodeId>{1, 2, 3});

  // table3 c_t beyond n: rewrite the stream with gamma(c_1 + 1) = gamma(9)
  const auto& t3 = enc.sections[3];
  BitWriter w;
  for (std::size_t i = 0; i < t3.begin; ++i) w.write_bit(enc.bits.bit(i));
  w.write_gamma(9);
  auto bad = enc;
  bad.bits = w.take();
  try {
    decode_execution(g, bad);
    FAIL("expected DecodeError");
  } catch (const DecodeError& e) {
    CHECK(e.section() == "table3");
  }

  // truncation
  auto cut = enc;
  cut.bits.bit_length -= 1;
  CHECK_THROWS_AS(decode_execution(g, cut), DecodeError);

  // header mismatch
  auto hdr = enc;
  hdr.header.n = 5;
  CHECK_THROWS_AS(decode_execution(g, hdr), DecodeError);
  hdr = enc;
  hdr.header.s = 0;
  CHECK_THROWS_AS(decode_execution(g, hdr), DecodeError);

  // every single-bit flip either decodes to something or fails cleanly with DecodeError
  for (std::size_t i = 0; i < enc.bits.bit_length; ++i) {
    auto flip = enc;
    flip.bits.bytes[i / 8] ^= static_cast<std::uint8_t>(0x80u >> (i % 8));
    try {
      const auto dec = decode_execution(g, flip);
      CHECK_FALSE(dec.tape == tape);
    } catch (const DecodeError&) {
    }
  }
}

TEST_CASE("container format") {
  const auto g = gen_complete(4);
  const auto tape = fixtures::hand_tape();
  const auto run = run_raes(g, fixtures::hand_params(), tape);
  const auto [enc, report] = encode_execution(g, fixtures::hand_params(), tape, run.trace, std::vector<NodeId>{1, 2, 3});
  const auto bytes = to_bytes(enc);
  CHECK(std::string(bytes.begin(), bytes.begin() + 6) == "RAESC1");
  CHECK(bytes.size() == 30 + (enc.bits.bit_length + 3 + 7) / 8);
  CHECK(bytes[9] == 4);  // n, big-endian
  const auto back = from_bytes(bytes);
  CHECK(back.bits == enc.bits);
  CHECK(to_bytes(back) == bytes);
  CHECK(decode_execution(g, back).tape == tape);

  auto bad = bytes;
  bad[0] = 'X';
  CHECK_THROWS_AS(from_bytes(bad), DecodeError);
  CHECK_THROWS_AS(from_bytes(std::vector<std::uint8_t>(bytes.begin(), bytes.begin() + 20)), DecodeError);

  for (std::size_t len = 0; len < 40; ++len) {
    BitStream s;
    BitWriter w;
    for (std::size_t i = 0; i < len; ++i) w.write_bit(i % 3 == 0);
    s = w.take();
    auto padded = s;
    append_padding(padded);
    CHECK(padded.bit_length % 8 == 0);
    CHECK(strip_padding(padded.bytes, "padding") == s);
  }
}

TEST_CASE("cost formulas") {
  CHECK(savings_formula(100, 10, 4, 0.0) ==
        doctest::Approx(-30 * std::log2(10.0) + 0.5 * 40 * std::log2(10.0) - 0.25 * 40));
  for (double eps : {0.0, 0.1, 0.3, 1.0}) {
    CHECK(savings_formula(200, 17, 5, eps) ==
          doctest::Approx(savings_by_components(200, 17, 5, 150, 9, eps)).epsilon(1e-9));
  }
}

TEST_CASE("hypothesis predicates are reported") {
  const auto g = gen_complete(4);
  const auto tape = fixtures::hand_tape();
  const auto run = run_raes(g, fixtures::hand_params(), tape);
  const auto r = cost_report(g, run.trace, std::vector<NodeId>{1, 2, 3}, 0.0);
  CHECK_FALSE(r.degree_hypothesis);
  CHECK_FALSE(r.capacity_hypothesis);
  CHECK(r.spectral_hypothesis);  // lambda+ = 0 on K_4
  CHECK(r.raw_total == doctest::Approx(16 * std::log2(3.0)));
}

}  // TEST_SUITE

TEST_SUITE("witness") {

TEST_CASE("hand vector witness") {
  const auto g = gen_complete(4);
  const auto p = fixtures::hand_params();
  const auto tape = fixtures::hand_tape();
  const auto bits = encode_termination_witness(g, p, tape, 3, 3);
  CHECK(decode_termination_witness(g, bits) == tape);
  CHECK_THROWS_AS(encode_termination_witness(g, p, tape, 3, 4), PreconditionError);
  CHECK_THROWS_AS(encode_termination_witness(g, p, tape, 0, 1), PreconditionError);
  CHECK_THROWS_AS(encode_termination_witness(g, p, tape, 4, 1), InvalidParameter);
  CHECK_THROWS_AS(encode_termination_witness(g, p, tape, 3, 5), InvalidParameter);
}

TEST_CASE("witness roundtrip on contended instances") {
  std::mt19937_64 rng(99);
  int done = 0;
  for (std::uint64_t seed = 0; done < 80 && seed < 5000; ++seed) {
    const std::uint32_t n = 6 + rng() % 30;
    const auto g = seed % 2 ? gen_complete(n) : gen_random_regular(n + n % 2, 4, seed);
    const std::uint32_t d = 1 + rng() % 3;
    const RaesParams p{d, Rational::make(1, 1), 6};
    const auto tape = fresh_tape(g, p, seed);
    const auto run = run_raes(g, p, tape);
    const std::uint32_t t = 1 + rng() % run.trace.rounds_recorded();
    std::vector<NodeId> deficient;
    for (NodeId v = 0; v < g.n(); ++v)
      if (run.trace.d_out(v, t) < d) deficient.push_back(v);
    if (deficient.empty()) continue;
    const NodeId v = deficient[rng() % deficient.size()];
    const auto bits = encode_termination_witness(g, p, tape, v, t);
    CHECK(decode_termination_witness(g, bits) == tape);
    ++done;
  }
  CHECK(done == 80);
}

TEST_CASE("witness decode errors") {
  const auto g = gen_complete(4);
  const auto bits = encode_termination_witness(g, fixtures::hand_params(), fixtures::hand_tape(), 3, 3);
  auto cut = bits;
  cut.bit_length -= 1;
  CHECK_THROWS_AS(decode_termination_witness(g, cut), DecodeError);
  for (std::size_t i = 0; i < bits.bit_length; ++i) {
    auto flip = bits;
    flip.bytes[i / 8] ^= static_cast<std::uint8_t>(0x80u >> (i % 8));
    try {
      decode_termination_witness(g, flip);
    } catch (const DecodeError&) {
    } catch (const InvalidParameter&) {
    }
  }
}

}  // TEST_SUITE
