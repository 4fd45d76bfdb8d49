#pragma once

#include <cstdint>
#include <ostream>
#include <utility>

#include "wavesix/error.hpp"

namespace wavesix {

inline constexpr int kModulus = 6;
inline constexpr int kPrime2 = 2;
inline constexpr int kPrime3 = 3;

// Element of Z/6Z, always stored as the canonical residue 0..5.
class Z6Value {
 public:
  constexpr Z6Value() = default;
  constexpr Z6Value(long long v)  // NOLINT(google-explicit-constructor)
      : value_(static_cast<std::uint8_t>(((v % kModulus) + kModulus) % kModulus)) {}

  constexpr int value() const { return value_; }
  constexpr explicit operator int() const { return value_; }

  constexpr bool is_zero() const { return value_ == 0; }

  // Uncounted ring operators. Algorithm paths that are measured use
  // z6_add / z6_mul with a ledger instead.
  friend constexpr Z6Value operator+(Z6Value a, Z6Value b) { return Z6Value(a.value_ + b.value_); }
  friend constexpr Z6Value operator-(Z6Value a, Z6Value b) { return Z6Value(a.value_ - b.value_); }
  friend constexpr Z6Value operator-(Z6Value a) { return Z6Value(-a.value_); }
  friend constexpr Z6Value operator*(Z6Value a, Z6Value b) { return Z6Value(a.value_ * b.value_); }
  constexpr Z6Value& operator+=(Z6Value o) { return *this = *this + o; }
  constexpr Z6Value& operator-=(Z6Value o) { return *this = *this - o; }
  constexpr Z6Value& operator*=(Z6Value o) { return *this = *this * o; }

  friend constexpr bool operator==(Z6Value a, Z6Value b) = default;

  friend std::ostream& operator<<(std::ostream& os, Z6Value v) { return os << v.value(); }

 private:
  std::uint8_t value_ = 0;
};

// Operation counters. Each computation owns its ledger; there are no global
// counters. Multiplying by a literal 0/1 coefficient is selection, not a
// multiplication, and must never be charged to `mults`.
struct CostLedger {
  std::uint64_t mults = 0;
  std::uint64_t filter_ops = 0;
  std::uint64_t adds = 0;

  CostLedger& operator+=(const CostLedger& o) {
    mults += o.mults;
    filter_ops += o.filter_ops;
    adds += o.adds;
    return *this;
  }
  friend bool operator==(const CostLedger&, const CostLedger&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const CostLedger& l) {
  return os << "mults=" << l.mults << " filter_ops=" << l.filter_ops << " adds=" << l.adds;
}

inline Z6Value z6_add(Z6Value a, Z6Value b, CostLedger& ledger) {
  ++ledger.adds;
  return a + b;
}

inline Z6Value z6_mul(Z6Value a, Z6Value b, CostLedger& ledger) {
  ++ledger.mults;
  return a * b;
}

struct CrtPair {
  int mod2 = 0;
  int mod3 = 0;
  friend bool operator==(const CrtPair&, const CrtPair&) = default;
};

constexpr CrtPair crt_split(Z6Value a) { return {a.value() % kPrime2, a.value() % kPrime3}; }

// Unique x in Z6 with x = r2 (mod 2) and x = r3 (mod 3): x = 3*r2 + 4*r3 mod 6.
inline Z6Value crt_join(int r2, int r3) {
  if (r2 < 0 || r2 >= kPrime2 || r3 < 0 || r3 >= kPrime3) {
    throw Error(ErrorKind::OutOfRange,
                "crt_join residues must satisfy r2 in {0,1}, r3 in {0,1,2}; got (" +
                    std::to_string(r2) + ", " + std::to_string(r3) + ")");
  }
  return Z6Value(3 * r2 + 4 * r3);
}

inline Z6Value crt_join(CrtPair p) { return crt_join(p.mod2, p.mod3); }

}  // namespace wavesix
