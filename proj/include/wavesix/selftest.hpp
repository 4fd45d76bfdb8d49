#pragma once

#include <chrono>
#include <cstdint>
#include <exception>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "wavesix/codec.hpp"
#include "wavesix/construct.hpp"
#include "wavesix/filtersim.hpp"
#include "wavesix/linalg6.hpp"
#include "wavesix/multilinear.hpp"
#include "wavesix/represent.hpp"
#include "wavesix/z6.hpp"

namespace wavesix {

struct SelfCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

namespace detail {

inline SelfCheck run_check(const std::string& name, const std::function<std::string()>& body) {
  SelfCheck c{name, false, {}};
  try {
    c.detail = body();
    c.passed = c.detail.empty();
  } catch (const std::exception& e) {
    c.detail = std::string("exception: ") + e.what();
  }
  return c;
}

inline BilinearRep random_rep(std::mt19937_64& rng, std::size_t n, std::size_t t) {
  std::bernoulli_distribution coin(0.5);
  BitMatrix b(n, t), c(n, t);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < t; ++j) {
      b.set(i, j, coin(rng));
      c.set(i, j, coin(rng));
    }
  }
  return BilinearRep(std::move(b), std::move(c), RepMeta{"random", {}});
}

inline std::vector<std::uint8_t> random_bits(std::mt19937_64& rng, std::size_t n) {
  std::bernoulli_distribution coin(0.5);
  std::vector<std::uint8_t> v(n);
  for (auto& b : v) b = coin(rng) ? 1 : 0;
  return v;
}

}  // namespace detail

// Quick invariant sweep over every module; the full acceptance suite lives
// with the tests. Deterministic for a given seed.
inline std::vector<SelfCheck> run_selftest(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<SelfCheck> out;

  out.push_back(detail::run_check("z6 ring laws and CRT round trip", [] {
    for (int a = 0; a < 6; ++a) {
      if (crt_join(crt_split(Z6Value(a))) != Z6Value(a)) return std::string("crt round trip fails at ") + std::to_string(a);
      for (int b = 0; b < 6; ++b) {
        for (int c = 0; c < 6; ++c) {
          const Z6Value x(a), y(b), z(c);
          if ((x + y) + z != x + (y + z) || (x * y) * z != x * (y * z) || x * (y + z) != x * y + x * z) {
            return std::string("ring law violated");
          }
        }
      }
    }
    return std::string();
  }));

  out.push_back(detail::run_check("1-a-strong verifier on the reference example", [] {
    MultilinearPoly f(3, 6);
    f.add_term({0, 1}, 1);
    f.add_term({1, 2}, 1);
    f.add_term({0, 2}, 1);
    auto g = f;
    g.add_term({0}, 3);
    g.add_term({1}, 4);
    if (!verify_1a_strong({f, g}).accepted) return std::string("example not accepted");
    auto bad = f;
    bad.add_term({2}, 5);
    const auto v = verify_1a_strong({f, bad});
    if (v.accepted || !v.witness || *v.witness != Monomial{2}) return std::string("5 x3 mutant not rejected at x3");
    return std::string();
  }));

  out.push_back(detail::run_check("Gram validity agrees with polynomial verifier", [&] {
    std::uniform_int_distribution<std::size_t> nd(1, 4), td(1, 5);
    for (int trial = 0; trial < 200; ++trial) {
      const auto rep = detail::random_rep(rng, nd(rng), td(rng));
      if (gram(rep).valid != verify_1a_strong(rep_as_polynomial(rep)).accepted) {
        return "disagreement on random rep at trial " + std::to_string(trial);
      }
    }
    return std::string();
  }));

  out.push_back(detail::run_check("constructor contract and census agreement", [] {
    for (std::size_t n : {1, 2, 3, 4, 8, 16}) {
      const auto rep = construct_bbr(n);
      if (!gram(rep).valid) return "invalid construction at n = " + std::to_string(n);
      const BbrParams p{static_cast<std::uint32_t>(rep.meta().params.at("k")),
                        static_cast<std::uint32_t>(rep.meta().params.at("a")),
                        static_cast<std::uint32_t>(rep.meta().params.at("b"))};
      if (count_columns(p).total != BigInt(rep.t())) return "census mismatch at n = " + std::to_string(n);
    }
    return std::string();
  }));

  out.push_back(detail::run_check("filter machine equals direct f evaluation", [&] {
    std::uniform_int_distribution<std::uint32_t> md(1, 8);
    std::uniform_int_distribution<int> zd(0, 5);
    for (int trial = 0; trial < 300; ++trial) {
      const std::uint32_t m = md(rng);
      const auto machine = make_filter_machine(random_filter_decomposition(rng, m, 10, 3));
      std::vector<Z6Value> zeta(m);
      for (auto& z : zeta) z = Z6Value(zd(rng));
      CostLedger ledger;
      if (machine.query(zeta, ledger) != eval_terms(machine.decomposition().f_terms, zeta)) {
        return "mismatch at trial " + std::to_string(trial);
      }
      if (ledger.filter_ops != 1 || ledger.mults != 0) return std::string("query cost is not one filter op");
      const auto g = machine.wave_trace(zeta, WaveComponent::G, 12).detected_period;
      const auto h = machine.wave_trace(zeta, WaveComponent::H, 12).detected_period;
      const auto f = machine.wave_trace(zeta, WaveComponent::F, 12).detected_period;
      if (2 % g != 0 || 3 % h != 0 || 6 % f != 0) return std::string("wave period out of family");
    }
    return std::string();
  }));

  out.push_back(detail::run_check("hyperdense codec round trip", [&] {
    for (std::size_t n : {4, 8, 16}) {
      const auto rep = construct_bbr(n);
      const auto g = gram(rep);
      for (int trial = 0; trial < 20; ++trial) {
        const auto bits = detail::random_bits(rng, n);
        CostLedger enc, dec;
        const auto rec = encode(bits, rep, g, enc);
        if (decode_all(rec, rep, dec) != bits) return "round trip failed at n = " + std::to_string(n);
        if (enc.mults != 0 || dec.mults != 0 || dec.filter_ops != n) return std::string("codec ledger mismatch");
      }
    }
    return std::string();
  }));

  out.push_back(detail::run_check("products through representation match naive", [&] {
    std::bernoulli_distribution coin(0.5);
    for (std::size_t n : {2, 4, 8}) {
      const auto rep = construct_bbr(n);
      const ProductEngine engine(rep);
      Mat6 a(n, n), b(n, n);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          a.at(i, j) = Z6Value(coin(rng) ? 1 : 0);
          b.at(i, j) = Z6Value(coin(rng) ? 1 : 0);
        }
      }
      CostLedger fast, slow;
      if (engine.matmul(a, b, fast) != naive_matmul(a, b, slow)) return "matmul mismatch at n = " + std::to_string(n);
      if (fast.mults != n * n * rep.t() || fast.filter_ops != n * n) return std::string("matmul ledger mismatch");
    }
    return std::string();
  }));

  out.push_back(detail::run_check("minimal-width search ground truth", [] {
    using namespace std::chrono_literals;
    const auto s1 = search_minimal(1, 6, 10s);
    const auto s2 = search_minimal(2, 6, 10s);
    const auto s3 = search_minimal(3, 2, 10s);
    if (s1.status != SearchStatus::Found || s1.t_min != 1) return std::string("n = 1 should give t_min = 1");
    if (s2.status != SearchStatus::Found || s2.t_min != 2) return std::string("n = 2 should give t_min = 2");
    if (s3.status != SearchStatus::Exhausted) return std::string("n = 3, t_max = 2 should be exhausted");
    return std::string();
  }));

  return out;
}

}  // namespace wavesix
