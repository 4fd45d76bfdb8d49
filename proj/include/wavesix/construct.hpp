#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "wavesix/bitmatrix.hpp"
#include "wavesix/error.hpp"
#include "wavesix/multilinear.hpp"
#include "wavesix/represent.hpp"
#include "wavesix/z6.hpp"

namespace wavesix {

using BigInt = boost::multiprecision::cpp_int;

// Codeword length k = ceil(log2 n); n = 1 gets the empty codeword.
inline std::uint32_t codeword_length(std::uint64_t n) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "n must be at least 1");
  std::uint32_t k = 0;
  while (k < 64 && (std::uint64_t{1} << k) < n) ++k;
  return k;
}

// Parameters of the weight-divisibility gadget: codewords have length k, and
// no weight in 1..k is divisible by both 2^a and 3^b.
struct BbrParams {
  std::uint32_t k = 0;
  std::uint32_t a = 0;
  std::uint32_t b = 0;

  std::uint64_t pow2a() const { return std::uint64_t{1} << a; }
  std::uint64_t pow3b() const {
    std::uint64_t p = 1;
    for (std::uint32_t i = 0; i < b; ++i) p *= 3;
    return p;
  }
  bool valid() const {
    if (a >= 40 || b >= 25) return false;
    return pow2a() * pow3b() > k;
  }
  void validate() const {
    if (!valid()) {
      throw Error(ErrorKind::InvalidArgument, "params (k=" + std::to_string(k) + ", a=" + std::to_string(a) +
                                                  ", b=" + std::to_string(b) + ") need 2^a * 3^b > k");
    }
  }
  friend bool operator==(const BbrParams&, const BbrParams&) = default;
};

struct IndicatorPolys {
  MultilinearPoly i2;  // mod 2: 1 iff weight = 0 mod 2^a
  MultilinearPoly i3;  // mod 3: 1 iff weight = 0 mod 3^b
};

// I2 = prod_{i<a} (1 + e_{2^i}) mod 2 and I3 = prod_{i<b} (1 - e_{3^i}^2) mod 3.
// By Lucas, e_{p^i}(x) mod p is the i-th base-p digit of the weight of x.
inline IndicatorPolys build_indicator_polynomials(const BbrParams& params) {
  params.validate();
  const std::uint32_t k = params.k;
  MultilinearPoly i2 = MultilinearPoly::constant(k, 2, 1);
  for (std::uint32_t i = 0; i < params.a; ++i) {
    const std::uint64_t deg = std::uint64_t{1} << i;
    if (deg > k) break;  // e_deg vanishes, the factor is 1
    auto factor = poly_add(MultilinearPoly::constant(k, 2, 1),
                           elementary_symmetric(k, static_cast<std::uint32_t>(deg), 2));
    i2 = poly_mul(i2, factor);
  }
  MultilinearPoly i3 = MultilinearPoly::constant(k, 3, 1);
  std::uint64_t deg = 1;
  for (std::uint32_t i = 0; i < params.b; ++i, deg *= 3) {
    if (deg > k) break;
    auto e = elementary_symmetric(k, static_cast<std::uint32_t>(deg), 3);
    i3 = poly_mul(i3, poly_sub(MultilinearPoly::constant(k, 3, 1), poly_mul(e, e)));
  }
  return {std::move(i2), std::move(i3)};
}

// Q' = CRT(1 - I2 mod 2, 1 - I3 mod 3). Vanishes at 0; at every nonzero 0/1
// point of weight <= k it is a unit mod 2 or mod 3.
inline MultilinearPoly build_qprime(const BbrParams& params) {
  const auto ind = build_indicator_polynomials(params);
  const std::uint32_t k = params.k;
  return crt_lift(poly_sub(MultilinearPoly::constant(k, 2, 1), ind.i2),
                  poly_sub(MultilinearPoly::constant(k, 3, 1), ind.i3));
}

// Q' is symmetric; gamma[d] is its coefficient on any degree-d monomial.
inline std::vector<Z6Value> qprime_degree_coefficients(const MultilinearPoly& qprime) {
  const std::uint32_t k = qprime.nvars();
  std::vector<Z6Value> gamma(k + 1);
  for (std::uint32_t d = 0; d <= k; ++d) {
    Monomial first;
    for (std::uint32_t v = 0; v < d; ++v) first.push_back(v);
    gamma[d] = qprime.coefficient(first);
  }
  for (const auto& [m, c] : qprime.terms()) {
    if (gamma[m.size()].value() != c) {
      throw Error(ErrorKind::InvalidRepresentation, "Q' is not symmetric at " + monomial_to_string(m));
    }
  }
  return gamma;
}

// Value of Q' at any 0/1 point of Hamming weight w, straight from the
// divisibility definition.
inline Z6Value qprime_at_weight(std::uint64_t w, std::uint32_t a, std::uint32_t b) {
  std::uint64_t p3 = 1;
  for (std::uint32_t i = 0; i < b; ++i) p3 *= 3;
  const int i2 = (w % (std::uint64_t{1} << a) == 0) ? 1 : 0;
  const int i3 = (w % p3 == 0) ? 1 : 0;
  return crt_join((1 - i2 + 2) % 2, (1 - i3 + 3) % 3);
}

// Degree coefficients of Q' by Moebius inversion of its weight profile:
// gamma_d = sum_{w<=d} (-1)^{d-w} C(d,w) Q'(w) mod 6. Needs no polynomial
// over k variables, so it works for any k.
inline std::vector<Z6Value> qprime_coefficients_by_weight(std::uint32_t max_degree, std::uint32_t a,
                                                          std::uint32_t b) {
  std::vector<Z6Value> gamma(max_degree + 1);
  std::vector<int> row{1};  // C(d, .) mod 6
  for (std::uint32_t d = 0; d <= max_degree; ++d) {
    if (d > 0) {
      std::vector<int> next(d + 1, 1);
      for (std::uint32_t w = 1; w < d; ++w) next[w] = (row[w - 1] + row[w]) % 6;
      row = std::move(next);
    }
    Z6Value acc;
    for (std::uint32_t w = 0; w <= d; ++w) {
      const Z6Value term = Z6Value(row[w]) * qprime_at_weight(w, a, b);
      acc += ((d - w) % 2 == 0) ? term : -term;
    }
    gamma[d] = acc;
  }
  return gamma;
}

// Collected coefficient of u_P v_Q in 1 - Q'(u xor v), with |P u Q| = d and
// |P n Q| = c, from substituting x_l = u_l + v_l - 2 u_l v_l.
inline Z6Value pair_coefficient(std::uint32_t d, std::uint32_t c, std::span<const Z6Value> gamma) {
  Z6Value pw(1);
  for (std::uint32_t i = 0; i < c; ++i) pw *= Z6Value(-2);
  return (d == 0 ? Z6Value(1) : Z6Value(0)) - gamma[d] * pw;
}

inline BilinearRep construct_trivial(std::size_t n) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "n must be at least 1");
  check_guard(n, n);
  return BilinearRep(BitMatrix::identity(n), BitMatrix::identity(n), RepMeta{"trivial", {}});
}

struct CensusClass {
  std::uint32_t d = 0;  // |P u Q|
  std::uint32_t c = 0;  // |P n Q|
  BigInt pairs;         // number of (P, Q) in the class
  Z6Value coefficient;  // collected coefficient, shared by the class
  BigInt columns;       // pairs * canonical residue
};

struct ColumnCensus {
  BbrParams params;
  std::vector<CensusClass> classes;  // only classes with nonzero coefficient
  BigInt total;                      // width t, duplicates counted
  BigInt distinct_terms;             // rank-1 terms before duplication
};

namespace detail {
inline BigInt binomial(std::uint32_t n, std::uint32_t r) {
  if (r > n) return 0;
  BigInt out = 1;
  for (std::uint32_t i = 1; i <= r; ++i) {
    out *= n - r + i;
    out /= i;
  }
  return out;
}
}  // namespace detail

// Exact width of construct_bbr without materializing anything.
inline ColumnCensus count_columns(const BbrParams& params) {
  params.validate();
  const std::uint32_t k = params.k;
  const auto gamma = qprime_coefficients_by_weight(k, params.a, params.b);
  ColumnCensus census;
  census.params = params;
  for (std::uint32_t d = 0; d <= k; ++d) {
    const BigInt sets = detail::binomial(k, d);
    for (std::uint32_t c = 0; c <= d; ++c) {
      if (d == 0 && c > 0) break;
      const Z6Value coef = pair_coefficient(d, c, gamma);
      if (coef.is_zero()) continue;
      CensusClass cls;
      cls.d = d;
      cls.c = c;
      cls.pairs = sets * detail::binomial(d, c) * (BigInt(1) << (d - c));
      cls.coefficient = coef;
      cls.columns = cls.pairs * coef.value();
      census.total += cls.columns;
      census.distinct_terms += cls.pairs;
      census.classes.push_back(std::move(cls));
    }
  }
  return census;
}

// Minimizes the census width over (a, b) with k < 2^a 3^b <= max(6k, 1).
// Ties keep the first candidate in (a, b) lexicographic order.
inline BbrParams choose_params(std::uint32_t k) {
  const std::uint64_t cap = std::max<std::uint64_t>(6ULL * k, 1);
  std::optional<std::pair<BigInt, BbrParams>> best;
  for (std::uint32_t a = 0; (std::uint64_t{1} << a) <= cap; ++a) {
    std::uint64_t p3 = 1;
    for (std::uint32_t b = 0; (std::uint64_t{1} << a) * p3 <= cap; ++b, p3 *= 3) {
      if ((std::uint64_t{1} << a) * p3 <= k) continue;
      BbrParams p{k, a, b};
      BigInt t = count_columns(p).total;
      if (!best || t < best->first) best.emplace(std::move(t), p);
    }
  }
  return best->second;
}

inline double log_ratio(const BigInt& t, std::uint32_t k) {
  if (k == 0) return std::nan("");
  return std::log2(t.convert_to<double>()) / static_cast<double>(k);
}

struct CensusRow {
  BigInt n;  // 2^k
  BbrParams params;
  BigInt t;
  double log_t_over_log_n = 0.0;
};

inline CensusRow census_row(std::uint32_t k) {
  const BbrParams p = choose_params(k);
  CensusRow row;
  row.n = BigInt(1) << k;
  row.params = p;
  row.t = count_columns(p).total;
  row.log_t_over_log_n = log_ratio(row.t, k);
  return row;
}

// Distinct codewords u_i = binary(i) in k bits. Builds the 0/1 bilinear form
// whose Gram matrix is M[i][j] = 1 - Q'(u_i xor u_j): each (P, Q) with
// collected coefficient c contributes c identical columns
// B[i] = prod_{l in P} u_i[l], C[i] = prod_{l in Q} u_i[l].
inline BilinearRep construct_bbr(std::size_t n, std::optional<BbrParams> params = std::nullopt) {
  const std::uint32_t k = codeword_length(n);
  BbrParams p = params ? *params : choose_params(k);
  if (p.k != k) {
    throw Error(ErrorKind::InvalidArgument, "params.k = " + std::to_string(p.k) + " but n = " + std::to_string(n) +
                                                " needs k = " + std::to_string(k));
  }
  p.validate();
  const BigInt predicted = count_columns(p).total;
  if (predicted > BigInt(materialization_guard())) {
    throw Error(ErrorKind::GuardExceeded, "width " + predicted.str() + " at n = " + std::to_string(n) +
                                              " cannot be materialized; use count_columns");
  }
  check_guard(n, predicted.convert_to<std::uint64_t>());

  const auto gamma = qprime_degree_coefficients(build_qprime(p));

  struct PairTerm {
    std::uint64_t p_mask;
    std::uint64_t q_mask;
    int copies;
  };
  std::vector<PairTerm> pairs;
  std::size_t width = 0;
  auto emit = [&](std::uint64_t pm, std::uint64_t qm, Z6Value coef) {
    if (coef.is_zero()) return;
    pairs.push_back({pm, qm, coef.value()});
    width += static_cast<std::size_t>(coef.value());
  };
  emit(0, 0, pair_coefficient(0, 0, gamma));
  for (std::uint32_t d = 1; d <= k; ++d) {
    if (gamma[d].is_zero()) continue;
    for_each_subset(k, d, [&](const Monomial& s) {
      // Each element of S goes to P only (0), Q only (1) or both (2).
      std::vector<int> role(d, 0);
      while (true) {
        std::uint64_t pm = 0;
        std::uint64_t qm = 0;
        std::uint32_t both = 0;
        for (std::uint32_t e = 0; e < d; ++e) {
          const std::uint64_t bit = std::uint64_t{1} << s[e];
          if (role[e] != 1) pm |= bit;
          if (role[e] != 0) qm |= bit;
          if (role[e] == 2) ++both;
        }
        emit(pm, qm, pair_coefficient(d, both, gamma));
        std::uint32_t e = 0;
        while (e < d && role[e] == 2) role[e++] = 0;
        if (e == d) break;
        ++role[e];
      }
    });
  }

  BitMatrix bm(n, width);
  BitMatrix cm(n, width);
  std::size_t col = 0;
  for (const auto& term : pairs) {
    for (int copy = 0; copy < term.copies; ++copy, ++col) {
      for (std::size_t i = 0; i < n; ++i) {
        const auto u = static_cast<std::uint64_t>(i);
        if ((u & term.p_mask) == term.p_mask) bm.set(i, col, true);
        if ((u & term.q_mask) == term.q_mask) cm.set(i, col, true);
      }
    }
  }
  RepMeta meta{"bbr",
               {{"k", p.k}, {"a", p.a}, {"b", p.b}, {"distinct_terms", static_cast<long long>(pairs.size())}}};
  return BilinearRep(std::move(bm), std::move(cm), std::move(meta));
}

// ---------------------------------------------------------------------------
// Exhaustive minimal-width search for tiny n.

inline constexpr std::size_t kDefaultSearchMaxN = 4;
inline constexpr std::size_t kDefaultSearchMaxT = 6;

enum class SearchStatus { Found, Exhausted, Timeout };

struct SearchResult {
  SearchStatus status = SearchStatus::Exhausted;
  std::size_t t_min = 0;
  std::optional<BilinearRep> witness;
  std::uint64_t leaves_checked = 0;
};

// Tries widths 1..t_max in order. A width-t form is a multiset of t rank-1
// outer products u v^T with u, v nonzero 0/1 vectors (zero columns never help),
// enumerated as non-decreasing index sequences.
inline SearchResult search_minimal(std::size_t n, std::size_t t_max, std::chrono::milliseconds timeout,
                                   std::size_t max_n = kDefaultSearchMaxN,
                                   std::size_t max_t = kDefaultSearchMaxT) {
  if (n == 0 || n > max_n) {
    throw Error(ErrorKind::InvalidArgument, "search needs 1 <= n <= " + std::to_string(max_n));
  }
  if (t_max == 0 || t_max > max_t) {
    throw Error(ErrorKind::InvalidArgument, "search needs 1 <= t_max <= " + std::to_string(max_t));
  }
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  const std::uint32_t full = (1U << n) - 1;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> gens;
  for (std::uint32_t u = 1; u <= full; ++u) {
    for (std::uint32_t v = 1; v <= full; ++v) gens.emplace_back(u, v);
  }

  SearchResult result;
  std::vector<int> counts(n * n, 0);
  std::vector<std::size_t> chosen;
  bool timed_out = false;

  auto apply = [&](std::size_t g, int sign) {
    const auto [u, v] = gens[g];
    for (std::size_t l = 0; l < n; ++l) {
      if (!((u >> l) & 1U)) continue;
      for (std::size_t i = 0; i < n; ++i) {
        if ((v >> i) & 1U) counts[l * n + i] += sign;
      }
    }
  };
  auto is_valid = [&]() {
    for (std::size_t l = 0; l < n; ++l) {
      for (std::size_t i = 0; i < n; ++i) {
        const Z6Value v(counts[l * n + i]);
        if (l == i ? v.value() != 1 : !off_diagonal_admissible(v)) return false;
      }
    }
    return true;
  };

  std::function<bool(std::size_t, std::size_t)> dfs = [&](std::size_t depth, std::size_t start) -> bool {
    if (depth == 0) {
      ++result.leaves_checked;
      if ((result.leaves_checked & 0xFFFF) == 0 && std::chrono::steady_clock::now() > deadline) {
        timed_out = true;
      }
      return is_valid();
    }
    for (std::size_t g = start; g < gens.size() && !timed_out; ++g) {
      apply(g, +1);
      chosen.push_back(g);
      if (dfs(depth - 1, g)) return true;
      chosen.pop_back();
      apply(g, -1);
    }
    return false;
  };

  for (std::size_t t = 1; t <= t_max; ++t) {
    chosen.clear();
    std::fill(counts.begin(), counts.end(), 0);
    if (dfs(t, 0)) {
      BitMatrix bm(n, t);
      BitMatrix cm(n, t);
      for (std::size_t j = 0; j < t; ++j) {
        const auto [u, v] = gens[chosen[j]];
        for (std::size_t i = 0; i < n; ++i) {
          bm.set(i, j, (u >> i) & 1U);
          cm.set(i, j, (v >> i) & 1U);
        }
      }
      result.status = SearchStatus::Found;
      result.t_min = t;
      result.witness.emplace(std::move(bm), std::move(cm),
                             RepMeta{"search", {{"t_max", static_cast<long long>(t_max)}}});
      return result;
    }
    if (timed_out) {
      result.status = SearchStatus::Timeout;
      return result;
    }
  }
  result.status = SearchStatus::Exhausted;
  return result;
}

}  // namespace wavesix
