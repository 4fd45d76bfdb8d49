#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "wavesix/bitmatrix.hpp"
#include "wavesix/error.hpp"
#include "wavesix/multilinear.hpp"
#include "wavesix/z6.hpp"

namespace wavesix {

inline constexpr std::uint64_t kDefaultGuardCells = std::uint64_t{1} << 28;

// Upper bound on n*t cells for any materialized representation.
// WAVESIX_GUARD_CELLS overrides the default.
inline std::uint64_t materialization_guard() {
  if (const char* env = std::getenv("WAVESIX_GUARD_CELLS"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != nullptr && *end == '\0' && v > 0) return v;
  }
  return kDefaultGuardCells;
}

inline void check_guard(std::uint64_t n, std::uint64_t t) {
  const std::uint64_t guard = materialization_guard();
  if (t != 0 && n > guard / t) {
    throw Error(ErrorKind::GuardExceeded,
                "n*t = " + std::to_string(n) + "*" + std::to_string(t) + " exceeds " +
                    std::to_string(guard) + " cells; use count_columns for widths at this size");
  }
}

inline std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : data) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string to_hex(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

struct RepMeta {
  std::string strategy;
  std::map<std::string, long long> params;
  friend bool operator==(const RepMeta&, const RepMeta&) = default;
};

// The 0/1 coefficient matrices of a bilinear form
//   sum_j (sum_i B[i][j] x_i) (sum_i C[i][j] y_i),
// both n x t. Immutable once built.
class BilinearRep {
 public:
  BilinearRep(BitMatrix b, BitMatrix c, RepMeta meta)
      : b_(std::move(b)), c_(std::move(c)), meta_(std::move(meta)) {
    if (b_.rows() == 0 || b_.cols() == 0) {
      throw Error(ErrorKind::InvalidArgument, "representation needs n >= 1 and t >= 1");
    }
    if (b_.rows() != c_.rows() || b_.cols() != c_.cols()) {
      throw Error(ErrorKind::DimensionMismatch, "B and C must have identical n x t shape");
    }
    digest_ = compute_digest();
  }

  std::size_t n() const { return b_.rows(); }
  std::size_t t() const { return b_.cols(); }
  const BitMatrix& b() const { return b_; }
  const BitMatrix& c() const { return c_; }
  const RepMeta& meta() const { return meta_; }

  // Content fingerprint (hex), used to bind wave records to their rep.
  const std::string& digest() const { return digest_; }

  friend bool operator==(const BilinearRep& a, const BilinearRep& b) {
    return a.b_ == b.b_ && a.c_ == b.c_ && a.meta_ == b.meta_;
  }

 private:
  std::string compute_digest() const {
    std::string content = "wavesix-rep-v1|" + std::to_string(n()) + "|" + std::to_string(t()) +
                          "|" + meta_.strategy + "|";
    for (const auto& [k, v] : meta_.params) content += k + "=" + std::to_string(v) + ";";
    for (std::size_t i = 0; i < n(); ++i) content += "|" + b_.row_string(i);
    for (std::size_t i = 0; i < n(); ++i) content += "|" + c_.row_string(i);
    return to_hex(fnv1a64(content));
  }

  BitMatrix b_;
  BitMatrix c_;
  RepMeta meta_;
  std::string digest_;
};

struct GramViolation {
  std::size_t row = 0;  // l
  std::size_t col = 0;  // i
  Z6Value value;
};

// M[l][i] = sum_j B[l][j] C[i][j] mod 6, the coefficient of x_l y_i, together
// with the split of the off-diagonal part into the 3g (S3) and 4h (S2) pieces.
struct GramSplit {
  std::size_t n = 0;
  std::vector<Z6Value> m;  // row-major n x n
  bool diag_ok = false;
  bool valid = false;
  // Off-diagonal entries restricted to {0, 3, 4}.
  bool strict_form2 = false;
  std::optional<GramViolation> first_violation;
  // s3[i]: l != i with M[l][i] == 3.  s2[i]: l != i with M[l][i] in {2, 4}.
  std::vector<std::vector<std::uint32_t>> s3;
  std::vector<std::vector<std::uint32_t>> s2;

  Z6Value at(std::size_t l, std::size_t i) const { return m[l * n + i]; }
};

inline bool off_diagonal_admissible(Z6Value v) {
  const int x = v.value();
  return x == 0 || x == 2 || x == 3 || x == 4;
}

inline GramSplit gram(const BilinearRep& rep) {
  GramSplit g;
  const std::size_t n = rep.n();
  g.n = n;
  g.m.resize(n * n);
  g.s3.resize(n);
  g.s2.resize(n);
  g.diag_ok = true;
  g.strict_form2 = true;
  for (std::size_t l = 0; l < n; ++l) {
    for (std::size_t i = 0; i < n; ++i) {
      const Z6Value v(static_cast<long long>(rep.b().and_popcount(l, rep.c(), i)));
      g.m[l * n + i] = v;
      bool ok = true;
      if (l == i) {
        ok = v.value() == 1;
        g.diag_ok = g.diag_ok && ok;
      } else {
        ok = off_diagonal_admissible(v);
        if (v.value() == 2) g.strict_form2 = false;
        if (v.value() == 3) g.s3[i].push_back(static_cast<std::uint32_t>(l));
        if (v.value() == 2 || v.value() == 4) g.s2[i].push_back(static_cast<std::uint32_t>(l));
      }
      if (!ok && !g.first_violation) g.first_violation = GramViolation{l, i, v};
    }
  }
  g.valid = !g.first_violation.has_value();
  g.strict_form2 = g.valid && g.strict_form2;
  return g;
}

// A pair (f, g): target polynomial and a candidate 1-a-strong representation.
struct RepOfPoly {
  MultilinearPoly target;
  MultilinearPoly candidate;
};

struct Verdict {
  bool accepted = false;
  std::optional<Monomial> witness;
  int target_coefficient = 0;
  int candidate_coefficient = 0;
  std::string reason;
};

// Checks the mod-6 1-a-strong condition monomial by monomial: the coefficients
// a (target) and b (candidate) must agree mod 2 or mod 3, and may disagree
// modulo one of the primes only where a = 0 mod 6. Monomials are visited in
// MonomialOrder so the reported witness is deterministic.
inline Verdict verify_1a_strong(const RepOfPoly& r) {
  if (r.target.nvars() != r.candidate.nvars()) {
    throw Error(ErrorKind::DimensionMismatch, "target and candidate differ in variable count");
  }
  if (r.target.modulus() != 6 || r.candidate.modulus() != 6) {
    throw Error(ErrorKind::ModulusMismatch, "1-a-strong verification is defined mod 6");
  }
  std::map<Monomial, std::pair<int, int>, MonomialOrder> merged;
  for (const auto& [m, c] : r.target.terms()) merged[m].first = c;
  for (const auto& [m, c] : r.candidate.terms()) merged[m].second = c;

  for (const auto& [m, ab] : merged) {
    const auto [a, b] = ab;
    const bool ok2 = (a - b) % 2 == 0;
    const bool ok3 = (a - b) % 3 == 0;
    if (ok2 && ok3) continue;
    Verdict v;
    v.witness = m;
    v.target_coefficient = a;
    v.candidate_coefficient = b;
    if (!ok2 && !ok3) {
      v.reason = "coefficients disagree modulo both 2 and 3";
      return v;
    }
    if (a != 0) {
      v.reason = "coefficient of a nonzero target monomial differs modulo " +
                 std::string(ok2 ? "3" : "2");
      return v;
    }
  }
  Verdict v;
  v.accepted = true;
  return v;
}

// Expands the bilinear form into a polynomial over x_1..x_n (indices 0..n-1)
// and y_1..y_n (indices n..2n-1), paired with the dot product as target.
inline RepOfPoly rep_as_polynomial(const BilinearRep& rep) {
  const auto n = static_cast<std::uint32_t>(rep.n());
  const std::uint32_t nvars = 2 * n;
  MultilinearPoly target(nvars, 6);
  for (std::uint32_t i = 0; i < n; ++i) target.add_term({i, n + i}, 1);

  MultilinearPoly candidate(nvars, 6);
  for (std::size_t j = 0; j < rep.t(); ++j) {
    MultilinearPoly lx(nvars, 6);
    MultilinearPoly ly(nvars, 6);
    for (std::uint32_t i = 0; i < n; ++i) {
      if (rep.b().get(i, j)) lx.add_term({i}, 1);
      if (rep.c().get(i, j)) ly.add_term({n + i}, 1);
    }
    candidate = poly_add(candidate, poly_mul(lx, ly));
  }
  return {std::move(target), std::move(candidate)};
}

// ---------------------------------------------------------------------------
// Representation document (JSON).

inline std::string serialize_rep(const BilinearRep& rep, const GramSplit& g) {
  nlohmann::ordered_json doc;
  doc["version"] = 1;
  doc["n"] = rep.n();
  doc["t"] = rep.t();
  doc["strategy"] = rep.meta().strategy;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  for (const auto& [k, v] : rep.meta().params) params[k] = v;
  doc["params"] = params;
  auto rows = [&](const BitMatrix& m) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) arr.push_back(m.row_string(i));
    return arr;
  };
  doc["b_rows"] = rows(rep.b());
  doc["c_rows"] = rows(rep.c());
  doc["valid"] = g.valid;
  doc["strict_form2"] = g.strict_form2;
  return doc.dump(2) + "\n";
}

inline std::string serialize_rep(const BilinearRep& rep) { return serialize_rep(rep, gram(rep)); }

struct LoadedRep {
  BilinearRep rep;
  bool declared_valid = false;
  bool declared_strict_form2 = false;
};

inline LoadedRep deserialize_rep(std::string_view text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::MalformedDocument, e.what());
  }
  if (!doc.is_object()) throw Error(ErrorKind::MalformedDocument, "top level must be an object");

  static const char* const kFields[] = {"version", "n",      "t",     "strategy",    "params",
                                        "b_rows",  "c_rows", "valid", "strict_form2"};
  for (const auto& [key, value] : doc.items()) {
    if (std::find(std::begin(kFields), std::end(kFields), key) == std::end(kFields)) {
      throw Error(ErrorKind::UnknownField, "'" + key + "'");
    }
  }
  auto require = [&](const char* key) -> const json& {
    auto it = doc.find(key);
    if (it == doc.end()) throw Error(ErrorKind::MalformedDocument, std::string("missing field '") + key + "'");
    return *it;
  };
  auto require_uint = [&](const char* key) {
    const json& v = require(key);
    if (!v.is_number_unsigned()) {
      throw Error(ErrorKind::MalformedDocument, std::string("field '") + key + "' must be a non-negative integer");
    }
    return v.get<std::uint64_t>();
  };
  auto require_bool = [&](const char* key) {
    const json& v = require(key);
    if (!v.is_boolean()) throw Error(ErrorKind::MalformedDocument, std::string("field '") + key + "' must be boolean");
    return v.get<bool>();
  };

  const json& version = require("version");
  if (!version.is_number_integer()) throw Error(ErrorKind::MalformedDocument, "field 'version' must be an integer");
  if (version.get<long long>() != 1) {
    throw Error(ErrorKind::UnsupportedVersion, "version " + version.dump());
  }
  const std::uint64_t n = require_uint("n");
  const std::uint64_t t = require_uint("t");
  if (n == 0 || t == 0) throw Error(ErrorKind::MalformedDocument, "n and t must be positive");
  check_guard(n, t);

  RepMeta meta;
  const json& strategy = require("strategy");
  if (!strategy.is_string()) throw Error(ErrorKind::MalformedDocument, "field 'strategy' must be a string");
  meta.strategy = strategy.get<std::string>();
  const json& params = require("params");
  if (!params.is_object()) throw Error(ErrorKind::MalformedDocument, "field 'params' must be an object");
  for (const auto& [k, v] : params.items()) {
    if (!v.is_number_integer()) throw Error(ErrorKind::MalformedDocument, "param '" + k + "' must be an integer");
    meta.params[k] = v.get<long long>();
  }

  auto read_rows = [&](const char* key) {
    const json& rows = require(key);
    if (!rows.is_array()) throw Error(ErrorKind::MalformedDocument, std::string("field '") + key + "' must be an array");
    if (rows.size() != n) {
      throw Error(ErrorKind::DimensionMismatch, std::string(key) + " has " + std::to_string(rows.size()) +
                                                    " rows, declared n = " + std::to_string(n));
    }
    BitMatrix m(n, t);
    for (std::size_t i = 0; i < n; ++i) {
      if (!rows[i].is_string()) throw Error(ErrorKind::MalformedDocument, std::string(key) + " rows must be strings");
      const auto& s = rows[i].get_ref<const std::string&>();
      for (std::size_t j = 0; j < s.size(); ++j) {
        if (s[j] != '0' && s[j] != '1') {
          throw Error(ErrorKind::NonBinaryEntry, std::string(key) + "[" + std::to_string(i) + "][" +
                                                     std::to_string(j) + "] = '" + s[j] + "'");
        }
      }
      if (s.size() != t) {
        throw Error(ErrorKind::DimensionMismatch, std::string(key) + "[" + std::to_string(i) + "] has length " +
                                                      std::to_string(s.size()) + ", declared t = " + std::to_string(t));
      }
      for (std::size_t j = 0; j < t; ++j) {
        if (s[j] == '1') m.set(i, j, true);
      }
    }
    return m;
  };
  BitMatrix b = read_rows("b_rows");
  BitMatrix c = read_rows("c_rows");
  const bool declared_valid = require_bool("valid");
  const bool declared_strict = require_bool("strict_form2");
  return LoadedRep{BilinearRep(std::move(b), std::move(c), std::move(meta)), declared_valid, declared_strict};
}

}  // namespace wavesix
