#include "wavesix/codec.hpp"

#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "wavesix/construct.hpp"
#include "wavesix/linalg6.hpp"

namespace wavesix {
namespace {

std::vector<std::uint8_t> random_bits(std::mt19937_64& rng, std::size_t n) {
  std::bernoulli_distribution coin(0.5);
  std::vector<std::uint8_t> v(n);
  for (auto& b : v) b = coin(rng) ? 1 : 0;
  return v;
}

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorKind::InvalidArgument;
}

TEST(Encode, ZeroInput) {
  const auto rep = construct_bbr(8);
  CostLedger ledger;
  const auto rec = encode(std::vector<std::uint8_t>(8, 0), rep, ledger);
  for (auto x : rec.x) EXPECT_TRUE(x.is_zero());
  for (std::size_t i = 0; i < 8; ++i) {
    EXPECT_EQ(rec.pi3[i], 0);
    EXPECT_EQ(rec.pi2[i], 0);
  }
}

TEST(Encode, IdentityPayloadIsInput) {
  const auto rep = construct_trivial(5);
  const std::vector<std::uint8_t> bits{1, 0, 1, 1, 0};
  CostLedger ledger;
  const auto rec = encode(bits, rep, ledger);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(rec.x[i].value(), bits[i]);
  CostLedger dec;
  for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(decode_bit(rec, i, rep, dec), bits[i]);
}

TEST(Encode, MatchesNaiveMatrixVectorOracle) {
  const auto rep = construct_bbr(4);
  const std::vector<std::uint8_t> bits{1, 0, 1, 0};
  CostLedger ledger;
  const auto rec = encode(bits, rep, ledger);
  EXPECT_EQ(ledger.mults, 0u);
  for (std::size_t j = 0; j < rep.t(); ++j) {
    int sum = 0;
    for (std::size_t i = 0; i < 4; ++i) sum += rep.b().get(i, j) * bits[i];
    EXPECT_EQ(rec.x[j].value(), sum % 6);
  }
  CostLedger dec;
  EXPECT_EQ(decode_all(rec, rep, dec), bits);
}

TEST(Codec, RoundTripAndLedger) {
  std::mt19937_64 rng(5);
  for (std::size_t n : {4, 8, 64}) {
    const auto rep = construct_bbr(n);
    const auto g = gram(rep);
    for (int trial = 0; trial < 100; ++trial) {
      const auto bits = random_bits(rng, n);
      CostLedger enc, dec;
      const auto rec = encode(bits, rep, g, enc);
      ASSERT_EQ(decode_all(rec, rep, dec), bits);
      EXPECT_EQ(enc.mults, 0u);
      EXPECT_EQ(dec.mults, 0u);
      EXPECT_EQ(dec.filter_ops, n);
    }
  }
  const auto rep = construct_bbr(16);
  CostLedger l;
  const std::vector<std::uint8_t> ones(16, 1);
  EXPECT_EQ(decode_all(encode(ones, rep, l), rep, l), ones);
}

TEST(Codec, TamperDetectionOnIdentityRep) {
  for (std::size_t n = 1; n <= 6; ++n) {
    const auto rep = construct_trivial(n);
    for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
      std::vector<std::uint8_t> bits(n);
      for (std::size_t i = 0; i < n; ++i) bits[i] = (mask >> i) & 1U;
      CostLedger l;
      const auto rec = encode(bits, rep, l);
      for (std::size_t j = 0; j < n; ++j) {
        for (int delta = 1; delta < 6; ++delta) {
          auto bad = rec;
          bad.x[j] += Z6Value(delta);
          bool detected = false;
          try {
            detected = decode_all(bad, rep, l) != bits;
          } catch (const Error& e) {
            detected = e.kind() == ErrorKind::CorruptedRecord;
          }
          EXPECT_TRUE(detected) << n << " " << mask << " " << j << " " << delta;
        }
      }
    }
  }
}

TEST(Codec, TamperedBbrRecordIsNoticed) {
  const auto rep = construct_bbr(4);
  const std::vector<std::uint8_t> bits{1, 0, 1, 0};
  CostLedger l;
  auto rec = encode(bits, rep, l);
  rec.x[0] += Z6Value(1);  // column 0 is the constant column, read by every bit
  bool detected = false;
  try {
    detected = decode_all(rec, rep, l) != bits;
  } catch (const Error& e) {
    detected = e.kind() == ErrorKind::CorruptedRecord;
  }
  EXPECT_TRUE(detected);
}

TEST(Codec, Errors) {
  const auto rep = construct_bbr(4);
  const auto other = construct_trivial(4);
  CostLedger l;
  const auto rec = encode(std::vector<std::uint8_t>{1, 1, 0, 0}, rep, l);
  EXPECT_EQ(kind_of([&] { decode_all(rec, other, l); }), ErrorKind::DigestMismatch);
  EXPECT_EQ(kind_of([&] { decode_bit(rec, 4, rep, l); }), ErrorKind::OutOfRange);
  EXPECT_EQ(kind_of([&] { encode(std::vector<std::uint8_t>{1, 0}, rep, l); }), ErrorKind::DimensionMismatch);
  BitMatrix ones(2, 1);
  ones.set(0, 0, true);
  ones.set(1, 0, true);
  const BilinearRep invalid(ones, ones, {});
  EXPECT_EQ(kind_of([&] { encode(std::vector<std::uint8_t>{1, 0}, invalid, l); }),
            ErrorKind::InvalidRepresentation);
}

TEST(ChannelAccounting, Sizes) {
  const auto ident = construct_trivial(8);
  CostLedger l;
  const auto r = channel_accounting(encode(std::vector<std::uint8_t>(8, 1), ident, l));
  EXPECT_EQ(r.n, 8u);
  EXPECT_EQ(r.t, 8u);
  EXPECT_DOUBLE_EQ(r.payload_bits, 8 * std::log2(6.0));
  EXPECT_DOUBLE_EQ(r.phase_bits, 8 * (1 + std::log2(3.0)));

  const auto bbr = construct_bbr(4);
  const auto rb = channel_accounting(encode(std::vector<std::uint8_t>(4, 1), bbr, l));
  EXPECT_EQ(rb.t, 25u);
  EXPECT_GT(rb.payload_bits, 4.0);
  EXPECT_FALSE(rb.payload_below_n);
}

TEST(RecordDocument, RoundTripIsBitExact) {
  std::mt19937_64 rng(8);
  const auto rep = construct_bbr(8);
  CostLedger l;
  const auto rec = encode(random_bits(rng, 8), rep, l);
  const std::string doc = serialize_record(rec);
  const auto back = deserialize_record(doc);
  EXPECT_EQ(back, rec);
  EXPECT_EQ(serialize_record(back), doc);
}

TEST(RecordDocument, NamedErrors) {
  const std::string good = R"({"version":1,"n":2,"t":3,"x":"012","phases":{"pi3":"01","pi2":"12"},"rep_digest":"ab"})";
  EXPECT_NO_THROW(deserialize_record(good));
  auto replace = [&](const std::string& from, const std::string& to) {
    std::string s = good;
    s.replace(s.find(from), from.size(), to);
    return s;
  };
  EXPECT_EQ(kind_of([&] { deserialize_record(replace("\"012\"", "\"0126\"")); }), ErrorKind::MalformedDocument);
  EXPECT_EQ(kind_of([&] { deserialize_record(replace("\"012\"", "\"0123\"")); }), ErrorKind::DimensionMismatch);
  EXPECT_EQ(kind_of([&] { deserialize_record(replace("\"01\"", "\"02\"")); }), ErrorKind::MalformedDocument);
  EXPECT_EQ(kind_of([&] { deserialize_record(replace("\"12\"", "\"1\"")); }), ErrorKind::DimensionMismatch);
  EXPECT_EQ(kind_of([&] { deserialize_record(replace("\"rep_digest\"", "\"digest\"")); }), ErrorKind::UnknownField);
  EXPECT_EQ(kind_of([&] { deserialize_record(good.substr(0, 20)); }), ErrorKind::MalformedDocument);
}

TEST(Decode, AgreesWithDotProductMachine) {
  std::mt19937_64 rng(21);
  for (std::size_t n : {3, 8, 16}) {
    const auto rep = construct_bbr(n);
    const ProductEngine engine(rep);
    for (int trial = 0; trial < 10; ++trial) {
      const auto bits = random_bits(rng, n);
      CostLedger ledger;
      const auto rec = encode(bits, rep, ledger);
      for (std::size_t i = 0; i < n; ++i) {
        std::vector<Z6Value> zeta(2 * n);
        for (std::size_t l = 0; l < n; ++l) zeta[l] = Z6Value(bits[l]);
        zeta[n + i] = Z6Value(1);
        CostLedger a, b;
        EXPECT_EQ(Z6Value(decode_bit(rec, i, rep, a)), engine.machine().query(zeta, b));
        EXPECT_EQ(a.filter_ops, 1U);
      }
    }
  }
}

}  // namespace
}  // namespace wavesix
