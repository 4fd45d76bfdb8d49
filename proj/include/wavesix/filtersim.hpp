#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wavesix/error.hpp"
#include "wavesix/z6.hpp"

namespace wavesix {

// Monomial with repetition allowed: a sorted multiset of 0-based variable
// indices ({0, 0, 2} is z1^2 z3). Evaluated as written, with no x^2 = x
// reduction, because the machine is queried on points of {0..5}^m.
using FilterMonomial = std::vector<std::uint32_t>;
using TermList = std::map<FilterMonomial, Z6Value>;

enum class WaveComponent { F, G, H };

inline const char* to_string(WaveComponent c) {
  switch (c) {
    case WaveComponent::F: return "f";
    case WaveComponent::G: return "g";
    case WaveComponent::H: return "h";
  }
  return "?";
}

// G(z) = f(z) + 3 g(z) + 4 h(z) over m variables.
struct FilterDecomposition {
  std::uint32_t nvars = 0;
  TermList f_terms;
  TermList g_terms;
  TermList h_terms;
};

inline Z6Value eval_terms(const TermList& terms, std::span<const Z6Value> point) {
  Z6Value acc;
  for (const auto& [mono, coef] : terms) {
    Z6Value prod = coef;
    for (auto v : mono) prod *= point[v];
    acc += prod;
  }
  return acc;
}

inline std::string filter_monomial_to_string(const FilterMonomial& m) {
  if (m.empty()) return "1";
  std::string s;
  for (std::size_t i = 0; i < m.size();) {
    std::size_t j = i;
    while (j < m.size() && m[j] == m[i]) ++j;
    s += "z" + std::to_string(m[i] + 1);
    if (j - i > 1) s += "^" + std::to_string(j - i);
    i = j;
  }
  return s;
}

// The filtering step itself: strip the period-2 wave 3g and the period-3
// wave 4h from an observed value of G. 3g mod 6 depends only on g mod 2, and
// 4h mod 6 only on h mod 3, so the wave values may be given by residue.
inline Z6Value filter_waves(Z6Value observed, Z6Value g_wave, Z6Value h_wave, CostLedger& ledger) {
  ++ledger.filter_ops;
  const int g2 = g_wave.value() % 2;
  const int h3 = h_wave.value() % 3;
  return observed - Z6Value(3 * g2) - Z6Value(2 * ((2 * h3) % 3));
}

struct WaveTrace {
  WaveComponent component = WaveComponent::F;
  std::vector<Z6Value> samples;
  std::size_t detected_period = 0;
};

// Smallest p >= 1 with samples[s + p] == samples[s] for every s in range.
inline std::size_t detect_period(std::span<const Z6Value> samples) {
  for (std::size_t p = 1; p < samples.size(); ++p) {
    bool ok = true;
    for (std::size_t s = 0; s + p < samples.size() && ok; ++s) ok = samples[s + p] == samples[s];
    if (ok) return p;
  }
  return samples.size();
}

// Mod-6 filter machine bound to one decomposition. One query costs exactly
// one filter op; the classical work done here to simulate the waves is
// simulator overhead and never reaches the ledger.
class FilterMachine {
 public:
  const FilterDecomposition& decomposition() const { return d_; }
  std::uint32_t nvars() const { return d_.nvars; }

  Z6Value f_value(std::span<const Z6Value> zeta) const { return eval_terms(d_.f_terms, checked(zeta)); }
  Z6Value g_value(std::span<const Z6Value> zeta) const { return eval_terms(d_.g_terms, checked(zeta)); }
  Z6Value h_value(std::span<const Z6Value> zeta) const { return eval_terms(d_.h_terms, checked(zeta)); }

  Z6Value g_value_unchecked(std::span<const Z6Value> zeta) const { return eval_terms(d_.g_terms, zeta); }
  Z6Value h_value_unchecked(std::span<const Z6Value> zeta) const { return eval_terms(d_.h_terms, zeta); }

  Z6Value combined_value(std::span<const Z6Value> zeta) const {
    return f_value(zeta) + Z6Value(3) * g_value(zeta) + Z6Value(4) * h_value(zeta);
  }

  // Returns f(zeta) mod 6.
  Z6Value query(std::span<const Z6Value> zeta, CostLedger& ledger) const {
    const Z6Value out = filter_waves(combined_value(zeta), g_value(zeta), h_value(zeta), ledger);
#ifndef NDEBUG
    if (out != f_value(zeta)) throw std::logic_error("filter machine disagrees with direct f evaluation");
#endif
    return out;
  }

  // Filters a value of G observed elsewhere (for example assembled from
  // bilinear products) using this machine's access to the g and h waves at zeta.
  Z6Value filter(Z6Value observed, std::span<const Z6Value> zeta, CostLedger& ledger) const {
    checked(zeta);
    return filter_waves(observed, g_value_unchecked(zeta), h_value_unchecked(zeta), ledger);
  }

  // samples[s] = G(zeta) with the chosen component's aggregate advanced by s
  // before weighting: f+s, 3(g+s) or 4(h+s).
  WaveTrace wave_trace(std::span<const Z6Value> zeta, WaveComponent component, std::size_t steps) const {
    if (steps < 6) throw Error(ErrorKind::InvalidArgument, "wave_trace needs at least 6 steps");
    const Z6Value f = f_value(zeta);
    const Z6Value g = g_value(zeta);
    const Z6Value h = h_value(zeta);
    WaveTrace trace;
    trace.component = component;
    trace.samples.reserve(steps);
    for (std::size_t s = 0; s < steps; ++s) {
      const Z6Value shift(static_cast<long long>(s));
      Z6Value fs = f, gs = g, hs = h;
      switch (component) {
        case WaveComponent::F: fs += shift; break;
        case WaveComponent::G: gs += shift; break;
        case WaveComponent::H: hs += shift; break;
      }
      trace.samples.push_back(fs + Z6Value(3) * gs + Z6Value(4) * hs);
    }
    trace.detected_period = detect_period(trace.samples);
    return trace;
  }

 private:
  friend FilterMachine make_filter_machine(FilterDecomposition d);
  explicit FilterMachine(FilterDecomposition d) : d_(std::move(d)) {}

  std::span<const Z6Value> checked(std::span<const Z6Value> zeta) const {
    if (zeta.size() < d_.nvars) {
      throw Error(ErrorKind::MissingAssignment, "point assigns " + std::to_string(zeta.size()) + " of " +
                                                    std::to_string(d_.nvars) + " variables");
    }
    return zeta;
  }

  FilterDecomposition d_;
};

// Validates that every f coefficient is 1 and that f, g, h have pairwise
// disjoint supports (zero g/h coefficients are dropped first).
inline FilterMachine make_filter_machine(FilterDecomposition d) {
  auto check_vars = [&](const TermList& terms) {
    for (const auto& [m, c] : terms) {
      for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i] >= d.nvars || (i > 0 && m[i] < m[i - 1])) {
          throw Error(ErrorKind::OutOfRange, "monomial " + filter_monomial_to_string(m) +
                                                 " is not a sorted multiset over " + std::to_string(d.nvars) +
                                                 " variables");
        }
      }
    }
  };
  check_vars(d.f_terms);
  check_vars(d.g_terms);
  check_vars(d.h_terms);
  std::erase_if(d.g_terms, [](const auto& kv) { return kv.second.is_zero(); });
  std::erase_if(d.h_terms, [](const auto& kv) { return kv.second.is_zero(); });
  for (const auto& [m, c] : d.f_terms) {
    if (c.value() != 1) {
      throw Error(ErrorKind::NonUnitCoefficient,
                  filter_monomial_to_string(m) + " has coefficient " + std::to_string(c.value()));
    }
  }
  auto disjoint = [](const TermList& a, const TermList& b, const char* na, const char* nb) {
    for (const auto& [m, c] : a) {
      if (b.contains(m)) {
        throw Error(ErrorKind::OverlappingSupport,
                    filter_monomial_to_string(m) + " appears in both " + na + " and " + nb);
      }
    }
  };
  disjoint(d.f_terms, d.g_terms, "f", "g");
  disjoint(d.f_terms, d.h_terms, "f", "h");
  disjoint(d.g_terms, d.h_terms, "g", "h");
  return FilterMachine(std::move(d));
}

// Random valid decomposition: up to max_terms distinct monomials of degree
// <= max_degree, each dealt to f (coefficient 1), g or h (coefficient 1..5).
inline FilterDecomposition random_filter_decomposition(std::mt19937_64& rng, std::uint32_t nvars,
                                                       std::size_t max_terms, std::uint32_t max_degree) {
  FilterDecomposition d;
  d.nvars = nvars;
  std::uniform_int_distribution<std::size_t> term_count(1, max_terms);
  std::uniform_int_distribution<std::uint32_t> degree(0, max_degree);
  std::uniform_int_distribution<std::uint32_t> var(0, nvars - 1);
  std::uniform_int_distribution<int> which(0, 2);
  std::uniform_int_distribution<int> coef(1, 5);
  std::set<FilterMonomial> used;
  const std::size_t want = term_count(rng);
  for (std::size_t attempt = 0; attempt < 4 * want && used.size() < want; ++attempt) {
    FilterMonomial m(degree(rng));
    for (auto& v : m) v = var(rng);
    std::sort(m.begin(), m.end());
    if (!used.insert(m).second) continue;
    switch (which(rng)) {
      case 0: d.f_terms[m] = Z6Value(1); break;
      case 1: d.g_terms[m] = Z6Value(coef(rng)); break;
      default: d.h_terms[m] = Z6Value(coef(rng)); break;
    }
  }
  return d;
}

}  // namespace wavesix
