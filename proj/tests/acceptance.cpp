// Acceptance suite: one line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "wavesix/wavesix.hpp"

namespace {

using namespace wavesix;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool ok = true;
  std::string why;

  void require(bool cond, const std::string& msg) {
    if (!cond && ok) {
      ok = false;
      why = msg;
    }
  }
};

// ---------------------------------------------------------------------------
// Oracles. Plain integer arithmetic; nothing here goes through the library's
// Gram, polynomial or ledger code paths.

int crt6(int r2, int r3) {
  for (int v = 0; v < 6; ++v) {
    if (v % 2 == r2 && v % 3 == r3) return v;
  }
  return -1;
}

int qprime_by_weight(int w, int a, int b) {
  int p3 = 1;
  for (int i = 0; i < b; ++i) p3 *= 3;
  return crt6(w % (1 << a) == 0 ? 0 : 1, w % p3 == 0 ? 0 : 1);
}

std::vector<int> gram_oracle(const BilinearRep& rep) {
  const std::size_t n = rep.n();
  std::vector<int> m(n * n, 0);
  for (std::size_t l = 0; l < n; ++l) {
    for (std::size_t i = 0; i < n; ++i) {
      int s = 0;
      for (std::size_t j = 0; j < rep.t(); ++j) s += rep.b().get(l, j) * rep.c().get(i, j);
      m[l * n + i] = s % 6;
    }
  }
  return m;
}

int eval_terms_oracle(const TermList& terms, const std::vector<int>& zeta) {
  long long acc = 0;
  for (const auto& [mono, coef] : terms) {
    long long p = coef.value();
    for (auto v : mono) p *= zeta[v];
    acc += p;
  }
  return static_cast<int>(acc % 6);
}

std::vector<Z6Value> bits_of(std::uint64_t mask, std::size_t n) {
  std::vector<Z6Value> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = Z6Value((mask >> i) & 1U);
  return v;
}

Mat6 mat_of(std::uint64_t mask, std::size_t n) {
  Mat6 m(n, n);
  for (std::size_t i = 0; i < n * n; ++i) m.at(i / n, i % n) = Z6Value((mask >> i) & 1U);
  return m;
}

int dot_oracle(std::span<const Z6Value> x, std::span<const Z6Value> y) {
  int s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i].value() * y[i].value();
  return s % 6;
}

Mat6 matmul_oracle(const Mat6& a, const Mat6& b) {
  Mat6 c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      int s = 0;
      for (std::size_t k = 0; k < a.cols(); ++k) s += a.at(i, k).value() * b.at(k, j).value();
      c.at(i, j) = Z6Value(s);
    }
  }
  return c;
}

BbrParams params_of(const BilinearRep& rep) {
  return {static_cast<std::uint32_t>(rep.meta().params.at("k")), static_cast<std::uint32_t>(rep.meta().params.at("a")),
          static_cast<std::uint32_t>(rep.meta().params.at("b"))};
}

// ---------------------------------------------------------------------------

Outcome ac1_reference_example() {
  Outcome o;
  MultilinearPoly f(3, 6);
  f.add_term({0, 1}, 1);
  f.add_term({1, 2}, 1);
  f.add_term({0, 2}, 1);
  auto g = f;
  g.add_term({0}, 3);
  g.add_term({1}, 4);
  o.require(verify_1a_strong({f, g}).accepted, "reference pair rejected");
  auto mutant = f;
  mutant.add_term({2}, 5);
  for (int run = 0; run < 3; ++run) {
    const auto v = verify_1a_strong({f, mutant});
    o.require(!v.accepted, "5 x3 mutant accepted");
    o.require(v.witness && *v.witness == Monomial{2}, "witness is not x3");
  }
  return o;
}

const std::vector<std::size_t> kContractSizes{1, 2, 4, 8, 16, 32, 64};

Outcome ac2_constructor_contract() {
  Outcome o;
  for (std::size_t n : kContractSizes) {
    const auto rep = construct_bbr(n);
    const auto p = params_of(rep);
    const auto m = gram_oracle(rep);
    const auto lib = gram(rep);
    const auto qprime = build_qprime(p);
    o.require(lib.valid, "library Gram check fails at n = " + std::to_string(n));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const int v = m[i * n + j];
        if (i == j) {
          o.require(v == 1, "diagonal entry != 1 at n = " + std::to_string(n));
        } else {
          o.require(v == 0 || v == 2 || v == 3 || v == 4, "off-diagonal entry outside {0,2,3,4}");
        }
        const std::size_t x = i ^ j;
        std::vector<int> pt(p.k);
        for (std::uint32_t l = 0; l < p.k; ++l) pt[l] = (x >> l) & 1U;
        const int by_poly = (7 - poly_eval(qprime, pt)) % 6;
        const int by_weight = (7 - qprime_by_weight(std::popcount(x), static_cast<int>(p.a), static_cast<int>(p.b))) % 6;
        o.require(v == by_poly && v == by_weight, "M[i][j] != 1 - Q'(u_i xor u_j) at n = " + std::to_string(n));
        o.require(lib.at(i, j).value() == v, "library Gram differs from oracle");
      }
    }
  }
  return o;
}

Outcome ac3_census_consistency() {
  Outcome o;
  for (std::size_t n : kContractSizes) {
    const auto rep = construct_bbr(n);
    o.require(count_columns(params_of(rep)).total == BigInt(rep.t()),
              "census differs from materialized t at n = " + std::to_string(n));
  }
  return o;
}

Outcome ac4_crossover() {
  Outcome o;
  const std::uint32_t k_lo = 1, k_hi = 64;
  std::vector<CensusRow> rows;
  bool crossed = false;
  for (std::uint32_t k = k_lo; k <= k_hi; ++k) {
    rows.push_back(census_row(k));
    crossed = crossed || rows.back().t < rows.back().n;
  }
  o.require(crossed, "no n <= 2^64 with t(n) < n");
  o.require(count_columns({60, 3, 2}).total < (BigInt(1) << 60), "k = 60, a = 3, b = 2 does not cross over");
  const std::uint32_t top_start = k_lo + (k_hi - k_lo + 1) / 2;
  for (std::uint32_t k = top_start + 1; k <= k_hi; ++k) {
    const double prev = rows[k - 1 - k_lo].log_t_over_log_n;
    const double cur = rows[k - k_lo].log_t_over_log_n;
    o.require(cur <= prev, "log t / log n increases at k = " + std::to_string(k));
  }
  return o;
}

Outcome ac5_filter_equivalence() {
  Outcome o;
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::uint32_t> md(1, 12);
  std::uniform_int_distribution<int> zd(0, 5);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::uint32_t m = md(rng);
    const auto machine = make_filter_machine(random_filter_decomposition(rng, m, 16, 4));
    std::vector<int> zeta(m);
    for (auto& z : zeta) z = zd(rng);
    const std::vector<Z6Value> zz(zeta.begin(), zeta.end());
    CostLedger ledger;
    const Z6Value got = machine.query(zz, ledger);
    o.require(got.value() == eval_terms_oracle(machine.decomposition().f_terms, zeta),
              "query differs from f at trial " + std::to_string(trial));
    o.require(ledger.filter_ops == 1 && ledger.mults == 0, "query not charged exactly one filter op");
  }
  return o;
}

Outcome ac6_wave_periods() {
  Outcome o;
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<std::uint32_t> md(1, 12);
  std::uniform_int_distribution<int> zd(0, 5);
  for (int trial = 0; trial < 200; ++trial) {
    const std::uint32_t m = md(rng);
    const auto machine = make_filter_machine(random_filter_decomposition(rng, m, 16, 4));
    std::vector<Z6Value> zeta(m);
    for (auto& z : zeta) z = Z6Value(zd(rng));
    o.require(2 % machine.wave_trace(zeta, WaveComponent::G, 12).detected_period == 0, "g period does not divide 2");
    o.require(3 % machine.wave_trace(zeta, WaveComponent::H, 12).detected_period == 0, "h period does not divide 3");
    o.require(6 % machine.wave_trace(zeta, WaveComponent::F, 12).detected_period == 0, "f period does not divide 6");
  }
  return o;
}

Outcome ac7_codec_round_trip() {
  Outcome o;
  std::mt19937_64 rng(7);
  std::bernoulli_distribution coin(0.5);
  for (std::size_t n : {4, 8, 64, 256}) {
    const auto rep = construct_bbr(n);
    const auto g = gram(rep);
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<std::uint8_t> bits(n);
      for (auto& b : bits) b = coin(rng) ? 1 : 0;
      CostLedger enc, dec;
      const auto rec = encode(bits, rep, g, enc);
      o.require(decode_all(rec, rep, dec) == bits, "round trip failed at n = " + std::to_string(n));
      o.require(enc.mults == 0 && dec.mults == 0, "codec used counted multiplications");
      o.require(dec.filter_ops == n, "decode did not use exactly n filter ops");
    }
  }
  return o;
}

Outcome ac8_products() {
  Outcome o;
  for (std::size_t n = 1; n <= 3; ++n) {
    const auto rep = construct_bbr(n);
    const ProductEngine engine(rep);
    const std::size_t t = rep.t();
    const std::uint64_t vecs = 1ULL << n, mats = 1ULL << (n * n);
    for (std::uint64_t mx = 0; mx < vecs; ++mx) {
      for (std::uint64_t my = 0; my < vecs; ++my) {
        const auto x = bits_of(mx, n), y = bits_of(my, n);
        CostLedger l;
        o.require(engine.dot(x, y, l).value() == dot_oracle(x, y), "dot mismatch (exhaustive)");
        o.require(l.mults == t && l.filter_ops == 1, "dot ledger != (t, 1)");
      }
    }
    for (std::uint64_t ma = 0; ma < mats; ++ma) {
      const auto a = mat_of(ma, n);
      for (std::uint64_t my = 0; my < vecs; ++my) {
        const auto y = bits_of(my, n);
        CostLedger l;
        const auto got = engine.matvec(a, y, l);
        for (std::size_t r = 0; r < n; ++r) {
          o.require(got[r].value() == dot_oracle(a.row(r), y), "matvec mismatch (exhaustive)");
        }
        o.require(l.mults == n * t && l.filter_ops == n, "matvec ledger != (n t, n)");
      }
      for (std::uint64_t mb = 0; mb < mats; ++mb) {
        const auto b = mat_of(mb, n);
        CostLedger l;
        o.require(engine.matmul(a, b, l) == matmul_oracle(a, b), "matmul mismatch (exhaustive)");
        o.require(l.mults == n * n * t && l.filter_ops == n * n, "matmul ledger != (n^2 t, n^2)");
      }
    }
  }
  std::mt19937_64 rng(8);
  for (std::size_t n : {4, 8, 16}) {
    const auto rep = construct_bbr(n);
    const ProductEngine engine(rep);
    const std::size_t t = rep.t();
    std::uniform_int_distribution<std::uint64_t> vd(0, (1ULL << n) - 1);
    std::bernoulli_distribution coin(0.5);
    for (int trial = 0; trial < 50; ++trial) {
      const auto x = bits_of(vd(rng), n), y = bits_of(vd(rng), n);
      Mat6 a(n, n), b(n, n);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          a.at(i, j) = Z6Value(coin(rng) ? 1 : 0);
          b.at(i, j) = Z6Value(coin(rng) ? 1 : 0);
        }
      }
      CostLedger ld, lv, lm;
      o.require(engine.dot(x, y, ld).value() == dot_oracle(x, y), "dot mismatch (random)");
      const auto mv = engine.matvec(a, y, lv);
      for (std::size_t r = 0; r < n; ++r) o.require(mv[r].value() == dot_oracle(a.row(r), y), "matvec mismatch");
      o.require(engine.matmul(a, b, lm) == matmul_oracle(a, b), "matmul mismatch (random)");
      o.require(ld.mults == t && ld.filter_ops == 1, "dot ledger != (t, 1)");
      o.require(lv.mults == n * t && lv.filter_ops == n, "matvec ledger != (n t, n)");
      o.require(lm.mults == n * n * t && lm.filter_ops == n * n, "matmul ledger != (n^2 t, n^2)");
    }
  }
  return o;
}

Outcome ac9_minimal_width() {
  using namespace std::chrono_literals;
  Outcome o;
  const auto s1 = search_minimal(1, 6, 60s);
  o.require(s1.status == SearchStatus::Found && s1.t_min == 1, "n = 1: expected t_min = 1");
  const auto s2 = search_minimal(2, 6, 60s);
  o.require(s2.status == SearchStatus::Found && s2.t_min == 2, "n = 2: expected t_min = 2");
  o.require(s2.witness && gram(*s2.witness).valid, "n = 2 witness is not valid");
  o.require(search_minimal(3, 2, 60s).status == SearchStatus::Exhausted, "n = 3, t_max = 2: expected exhaustion");
  return o;
}

Outcome ac10_serialization() {
  namespace fs = std::filesystem;
  Outcome o;
  std::mt19937_64 rng(10);
  std::bernoulli_distribution coin(0.5);
  for (std::size_t n : {1, 3, 8, 64}) {
    for (const auto& rep : {construct_bbr(n), construct_trivial(n)}) {
      const std::string doc = serialize_rep(rep);
      const auto back = deserialize_rep(doc).rep;
      o.require(back == rep && serialize_rep(back) == doc, "rep document does not round-trip");
      std::vector<std::uint8_t> bits(n);
      for (auto& b : bits) b = coin(rng) ? 1 : 0;
      CostLedger l;
      const auto rec = encode(bits, rep, l);
      const std::string rdoc = serialize_record(rec);
      o.require(deserialize_record(rdoc) == rec && serialize_record(deserialize_record(rdoc)) == rdoc,
                "record document does not round-trip");
    }
  }

  const fs::path dir = fs::temp_directory_path() / "wavesix_acceptance";
  fs::create_directories(dir);
  auto file = [&](const std::string& name, const std::string& content) {
    const auto p = (dir / name).string();
    std::ofstream(p) << content;
    return p;
  };
  auto exit_code = [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    return cli::run(args, out, err);
  };
  const auto rep = construct_bbr(8);
  const std::string good = serialize_rep(rep);
  const auto rep_path = file("rep.json", good);
  o.require(exit_code({"verify", rep_path}) == 0, "valid file does not verify");

  auto doc = nlohmann::json::parse(good);
  doc["b_rows"][1] = doc["b_rows"][0];
  o.require(exit_code({"verify", file("offdiag.json", doc.dump())}) == 1, "corrupted Gram entry: expected exit 1");
  o.require(exit_code({"verify", file("trunc.json", good.substr(0, good.size() / 2))}) == 2,
            "truncated file: expected exit 2");
  auto nonbin = nlohmann::json::parse(good);
  std::string row = nonbin["b_rows"][0];
  row[0] = '2';
  nonbin["b_rows"][0] = row;
  o.require(exit_code({"verify", file("nonbin.json", nonbin.dump())}) == 2, "non-binary entry: expected exit 2");
  auto dims = nlohmann::json::parse(good);
  dims["t"] = rep.t() + 1;
  o.require(exit_code({"verify", file("dims.json", dims.dump())}) == 2, "dimension mismatch: expected exit 2");

  CostLedger l;
  const auto rec = encode(std::vector<std::uint8_t>(8, 1), rep, l);
  const std::string rdoc = serialize_record(rec);
  o.require(exit_code({"decode", "--rep", rep_path, "--record", file("rec.json", rdoc)}) == 0, "decode failed");
  o.require(exit_code({"decode", "--rep", rep_path, "--record", file("rtrunc.json", rdoc.substr(0, 15))}) == 2,
            "truncated record: expected exit 2");
  const auto other = file("other.json", serialize_rep(construct_trivial(8)));
  o.require(exit_code({"decode", "--rep", other, "--record", dir / "rec.json"}) == 1,
            "digest mismatch: expected exit 1");
  o.require(exit_code({"construct", "--n", "1048576"}) == 3, "guard: expected exit 3");
  fs::remove_all(dir);
  return o;
}

struct Criterion {
  const char* id;
  const char* name;
  double limit_seconds;  // 0 = no runtime bound
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"AC-1", "1-a-strong verifier on the reference pair and 5x3 mutant", 1.0, ac1_reference_example},
      {"AC-2", "constructor Gram contract and M = 1 - Q'(u_i xor u_j), n <= 64", 60.0, ac2_constructor_contract},
      {"AC-3", "census width equals materialized width", 0.0, ac3_census_consistency},
      {"AC-4", "census crossover t(n) < n and non-increasing log t / log n", 10.0, ac4_crossover},
      {"AC-5", "filter machine equals direct f on 1000 random decompositions", 0.0, ac5_filter_equivalence},
      {"AC-6", "wave periods divide 2 (g), 3 (h), 6 (f)", 0.0, ac6_wave_periods},
      {"AC-7", "hyperdense codec round trip, n in {4, 8, 64, 256}", 60.0, ac7_codec_round_trip},
      {"AC-8", "dot / matvec / matmul exactness and exact ledgers", 0.0, ac8_products},
      {"AC-9", "minimal-width search ground truth", 60.0, ac9_minimal_width},
      {"AC-10", "document round trips and corrupted-file exit codes", 0.0, ac10_serialization},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.ok = false;
      o.why = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    if (o.ok && c.limit_seconds > 0 && secs > c.limit_seconds) {
      o.ok = false;
      o.why = "exceeded runtime bound of " + std::to_string(c.limit_seconds) + " s";
    }
    std::cout << (o.ok ? "[PASS] " : "[FAIL] ") << c.id << " " << c.name << " (" << std::fixed
              << std::setprecision(3) << secs << " s)";
    if (!o.ok) std::cout << ": " << o.why;
    std::cout << "\n";
    failures += o.ok ? 0 : 1;
  }
  std::cout << (failures == 0 ? "all acceptance criteria passed" : std::to_string(failures) + " criteria failed")
            << "\n";
  return failures == 0 ? 0 : 1;
}
