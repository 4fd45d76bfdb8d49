#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "wavesix/error.hpp"
#include "wavesix/z6.hpp"

namespace wavesix {

// Support of a multilinear monomial: strictly increasing 0-based variable indices.
using Monomial = std::vector<std::uint32_t>;

// Degree first, then lexicographic on the sorted support.
struct MonomialOrder {
  bool operator()(const Monomial& a, const Monomial& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  }
};

inline Monomial monomial_union(const Monomial& a, const Monomial& b) {
  Monomial out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline std::string monomial_to_string(const Monomial& m, std::uint32_t split = 0,
                                      const char* first = "x", const char* second = "y") {
  if (m.empty()) return "1";
  std::string s;
  for (auto v : m) {
    if (split != 0 && v >= split) {
      s += second + std::to_string(v - split + 1);
    } else {
      s += first + std::to_string(v + 1);
    }
  }
  return s;
}

// Sparse polynomial over Z_2, Z_3 or Z_6 with every exponent capped at 1.
// The x^2 = x reduction is sound because every evaluation during
// construction uses 0/1 arguments.
class MultilinearPoly {
 public:
  using Terms = std::map<Monomial, int, MonomialOrder>;

  MultilinearPoly(std::uint32_t nvars, int modulus) : nvars_(nvars), modulus_(modulus) {
    if (modulus != 2 && modulus != 3 && modulus != 6) {
      throw Error(ErrorKind::InvalidArgument,
                  "modulus must be 2, 3 or 6, got " + std::to_string(modulus));
    }
  }

  static MultilinearPoly constant(std::uint32_t nvars, int modulus, long long c) {
    MultilinearPoly p(nvars, modulus);
    p.add_term({}, c);
    return p;
  }

  static MultilinearPoly variable(std::uint32_t nvars, int modulus, std::uint32_t index) {
    MultilinearPoly p(nvars, modulus);
    p.add_term({index}, 1);
    return p;
  }

  std::uint32_t nvars() const { return nvars_; }
  int modulus() const { return modulus_; }
  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  std::size_t degree() const {
    std::size_t d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m.size());
    return d;
  }

  int coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? 0 : it->second;
  }

  // Adds c to the coefficient of m (support must be sorted and unique).
  void add_term(Monomial m, long long c) {
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] >= nvars_ || (i > 0 && m[i] <= m[i - 1])) {
        throw Error(ErrorKind::OutOfRange, "monomial support " + monomial_to_string(m) +
                                               " is not a sorted subset of " +
                                               std::to_string(nvars_) + " variables");
      }
    }
    const int r = reduce(c);
    if (r == 0) return;
    auto [it, inserted] = terms_.try_emplace(std::move(m), r);
    if (!inserted) {
      it->second = reduce(it->second + r);
      if (it->second == 0) terms_.erase(it);
    }
  }

  friend bool operator==(const MultilinearPoly& a, const MultilinearPoly& b) {
    return a.nvars_ == b.nvars_ && a.modulus_ == b.modulus_ && a.terms_ == b.terms_;
  }

  std::string to_string(std::uint32_t split = 0) const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
      if (!first) os << " + ";
      first = false;
      if (m.empty()) {
        os << c;
      } else {
        if (c != 1) os << c;
        os << monomial_to_string(m, split);
      }
    }
    return os.str();
  }

 private:
  int reduce(long long c) const {
    return static_cast<int>(((c % modulus_) + modulus_) % modulus_);
  }

  std::uint32_t nvars_;
  int modulus_;
  Terms terms_;
};

namespace detail {
inline void require_compatible(const MultilinearPoly& a, const MultilinearPoly& b) {
  if (a.modulus() != b.modulus()) {
    throw Error(ErrorKind::ModulusMismatch, "operands are mod " + std::to_string(a.modulus()) +
                                                " and mod " + std::to_string(b.modulus()));
  }
  if (a.nvars() != b.nvars()) {
    throw Error(ErrorKind::DimensionMismatch, "operands have " + std::to_string(a.nvars()) +
                                                  " and " + std::to_string(b.nvars()) +
                                                  " variables");
  }
}
}  // namespace detail

inline MultilinearPoly poly_add(const MultilinearPoly& a, const MultilinearPoly& b) {
  detail::require_compatible(a, b);
  MultilinearPoly out = a;
  for (const auto& [m, c] : b.terms()) out.add_term(m, c);
  return out;
}

inline MultilinearPoly poly_scale(const MultilinearPoly& a, long long s) {
  MultilinearPoly out(a.nvars(), a.modulus());
  for (const auto& [m, c] : a.terms()) out.add_term(m, static_cast<long long>(c) * s);
  return out;
}

inline MultilinearPoly poly_sub(const MultilinearPoly& a, const MultilinearPoly& b) {
  return poly_add(a, poly_scale(b, -1));
}

inline MultilinearPoly poly_mul(const MultilinearPoly& a, const MultilinearPoly& b) {
  detail::require_compatible(a, b);
  MultilinearPoly out(a.nvars(), a.modulus());
  for (const auto& [ma, ca] : a.terms()) {
    for (const auto& [mb, cb] : b.terms()) {
      out.add_term(monomial_union(ma, mb), static_cast<long long>(ca) * cb);
    }
  }
  return out;
}

// Applies fn to every coefficient, producing a polynomial over `modulus`.
inline MultilinearPoly poly_map_coeffs(const MultilinearPoly& a, int modulus,
                                       const std::function<long long(int)>& fn) {
  MultilinearPoly out(a.nvars(), modulus);
  for (const auto& [m, c] : a.terms()) out.add_term(m, fn(c));
  return out;
}

// Coefficient-wise CRT lift of a mod-2 and a mod-3 polynomial into Z6.
inline MultilinearPoly crt_lift(const MultilinearPoly& p2, const MultilinearPoly& p3) {
  if (p2.modulus() != 2 || p3.modulus() != 3) {
    throw Error(ErrorKind::ModulusMismatch, "crt_lift expects a mod-2 and a mod-3 polynomial");
  }
  if (p2.nvars() != p3.nvars()) {
    throw Error(ErrorKind::DimensionMismatch, "crt_lift operands differ in variable count");
  }
  MultilinearPoly out(p2.nvars(), 6);
  for (const auto& [m, c] : p2.terms()) out.add_term(m, crt_join(c, 0).value());
  for (const auto& [m, c] : p3.terms()) out.add_term(m, crt_join(0, c).value());
  return out;
}

// Evaluates p at a point with values in {0..5}. Monomial products and
// applications of non-unit coefficients are charged to ledger.mults.
inline int poly_eval(const MultilinearPoly& p, std::span<const int> point, CostLedger& ledger) {
  long long acc = 0;
  bool first = true;
  for (const auto& [m, c] : p.terms()) {
    long long term = 1;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] >= point.size()) {
        throw Error(ErrorKind::MissingAssignment,
                    "no value for variable x" + std::to_string(m[i] + 1));
      }
      const int v = point[m[i]];
      if (v < 0 || v >= kModulus) {
        throw Error(ErrorKind::OutOfRange, "point values must lie in {0..5}");
      }
      term = (i == 0) ? v : (term * v) % p.modulus();
      if (i > 0) ++ledger.mults;
    }
    if (c != 1) {
      term = (term * c) % p.modulus();
      if (!m.empty()) ++ledger.mults;
    }
    acc = (acc + term) % p.modulus();
    if (!first) ++ledger.adds;
    first = false;
  }
  return static_cast<int>(acc % p.modulus());
}

inline int poly_eval(const MultilinearPoly& p, std::span<const int> point) {
  CostLedger scratch;
  return poly_eval(p, point, scratch);
}

namespace detail {
inline void for_each_subset(std::uint32_t k, std::uint32_t d, std::uint32_t start, Monomial& cur,
                            const std::function<void(const Monomial&)>& fn) {
  if (cur.size() == d) {
    fn(cur);
    return;
  }
  const std::uint32_t need = d - static_cast<std::uint32_t>(cur.size());
  for (std::uint32_t v = start; v + need <= k; ++v) {
    cur.push_back(v);
    for_each_subset(k, d, v + 1, cur, fn);
    cur.pop_back();
  }
}
}  // namespace detail

// Calls fn on every d-subset of {0..k-1}, in lexicographic order.
inline void for_each_subset(std::uint32_t k, std::uint32_t d,
                            const std::function<void(const Monomial&)>& fn) {
  if (d > k) return;
  Monomial cur;
  cur.reserve(d);
  detail::for_each_subset(k, d, 0, cur, fn);
}

inline MultilinearPoly elementary_symmetric(std::uint32_t k, std::uint32_t d, int modulus) {
  if (d > k) {
    throw Error(ErrorKind::InvalidArgument, "elementary_symmetric degree " + std::to_string(d) +
                                                " exceeds variable count " + std::to_string(k));
  }
  MultilinearPoly out(k, modulus);
  for_each_subset(k, d, [&](const Monomial& m) { out.add_term(m, 1); });
  return out;
}

}  // namespace wavesix
