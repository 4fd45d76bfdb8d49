#include "cli.hpp"

#include <chrono>
#include <fstream>
#include <iomanip>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wavesix/wavesix.hpp"

namespace wavesix::cli {
namespace {

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::GuardExceeded:
      return kExitGuard;
    case ErrorKind::DigestMismatch:
    case ErrorKind::CorruptedRecord:
    case ErrorKind::InvalidRepresentation:
      return kExitVerifyFailed;
    default:
      return kExitUsage;
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::MalformedDocument, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write '" + path + "'");
  out << content;
  if (!out) throw Error(ErrorKind::InvalidArgument, "write to '" + path + "' failed");
}

std::vector<std::uint8_t> parse_bits(const std::string& s) {
  std::vector<std::uint8_t> bits;
  bits.reserve(s.size());
  for (char ch : s) {
    if (ch != '0' && ch != '1') throw Error(ErrorKind::InvalidArgument, "bit string may only contain 0 and 1");
    bits.push_back(static_cast<std::uint8_t>(ch - '0'));
  }
  return bits;
}

std::string bits_string(const std::vector<std::uint8_t>& bits) {
  std::string s;
  for (auto b : bits) s.push_back(static_cast<char>('0' + b));
  return s;
}

std::vector<std::uint8_t> random_bits(std::uint64_t seed, std::size_t n) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.5);
  std::vector<std::uint8_t> bits(n);
  for (auto& b : bits) b = coin(rng) ? 1 : 0;
  return bits;
}

std::string fmt_double(double v, int prec = 6) {
  if (std::isnan(v)) return "nan";
  std::ostringstream os;
  os << std::fixed << std::setprecision(prec) << v;
  return os.str();
}

struct ConstructOpts {
  std::size_t n = 0;
  std::string strategy = "bbr";
  std::optional<std::uint32_t> a;
  std::optional<std::uint32_t> b;
  std::size_t t_max = kDefaultSearchMaxT;
  long long timeout_ms = 60000;
  std::string output;
};

int cmd_construct(const ConstructOpts& o, std::ostream& out, std::ostream& err) {
  if (o.a.has_value() != o.b.has_value()) {
    err << "error: --a and --b must be given together\n";
    return kExitUsage;
  }
  std::optional<BilinearRep> rep;
  if (o.strategy == "trivial") {
    rep.emplace(construct_trivial(o.n));
  } else if (o.strategy == "bbr") {
    std::optional<BbrParams> params;
    if (o.a) params = BbrParams{codeword_length(o.n), *o.a, *o.b};
    rep.emplace(construct_bbr(o.n, params));
  } else {
    const auto res = search_minimal(o.n, o.t_max, std::chrono::milliseconds(o.timeout_ms));
    if (res.status == SearchStatus::Timeout) {
      err << "search timed out after " << res.leaves_checked << " candidates\n";
      return kExitTimeout;
    }
    if (res.status == SearchStatus::Exhausted) {
      out << "n=" << o.n << " exhausted: no valid representation with t <= " << o.t_max << "\n";
      return kExitVerifyFailed;
    }
    rep.emplace(*res.witness);
  }
  const auto g = gram(*rep);
  out << "n=" << rep->n() << " t=" << rep->t() << " strategy=" << rep->meta().strategy
      << " valid=" << (g.valid ? "true" : "false") << " strict_form2=" << (g.strict_form2 ? "true" : "false");
  for (const auto& [k, v] : rep->meta().params) out << " " << k << "=" << v;
  out << "\n";
  if (!o.output.empty()) write_file(o.output, serialize_rep(*rep, g));
  return g.valid ? kExitOk : kExitVerifyFailed;
}

int cmd_verify(const std::string& path, std::ostream& out) {
  const auto loaded = deserialize_rep(read_file(path));
  const auto& rep = loaded.rep;
  const auto g = gram(rep);
  out << "n=" << rep.n() << " t=" << rep.t() << " strategy=" << rep.meta().strategy << "\n";
  if (loaded.declared_valid != g.valid || loaded.declared_strict_form2 != g.strict_form2) {
    out << "note: declared flags (valid=" << loaded.declared_valid << ", strict_form2="
        << loaded.declared_strict_form2 << ") differ from recomputed ones\n";
  }
  if (g.valid) {
    out << "valid strict_form2=" << (g.strict_form2 ? "true" : "false") << "\n";
    return kExitOk;
  }
  const auto& v = *g.first_violation;
  out << "invalid: M[" << v.row + 1 << "][" << v.col + 1 << "] = " << v.value.value()
      << (v.row == v.col ? " (diagonal must be 1)" : " (off-diagonal must be 0, 2, 3 or 4)") << "\n";
  out << "witness l=" << v.row + 1 << " i=" << v.col + 1 << " value=" << v.value.value() << "\n";
  return kExitVerifyFailed;
}

int cmd_count(std::uint32_t from, std::uint32_t to, const std::string& format, const std::string& output,
              std::ostream& out, std::ostream& err) {
  if (from > to || to > 64) {
    err << "error: need 0 <= --from <= --to <= 64\n";
    return kExitUsage;
  }
  std::ostringstream table;
  if (format == "csv") {
    table << "n,k,a,b,t,log_t_over_log_n\n";
  } else {
    table << std::setw(22) << "n" << std::setw(4) << "k" << std::setw(4) << "a" << std::setw(4) << "b"
          << std::setw(22) << "t" << std::setw(12) << "logt/logn" << "  t<n\n";
  }
  for (std::uint32_t k = from; k <= to; ++k) {
    const auto row = census_row(k);
    if (format == "csv") {
      table << row.n.str() << "," << k << "," << row.params.a << "," << row.params.b << "," << row.t.str() << ","
            << fmt_double(row.log_t_over_log_n) << "\n";
    } else {
      table << std::setw(22) << row.n.str() << std::setw(4) << k << std::setw(4) << row.params.a << std::setw(4)
            << row.params.b << std::setw(22) << row.t.str() << std::setw(12) << fmt_double(row.log_t_over_log_n, 4)
            << "  " << (row.t < row.n ? "yes" : "") << "\n";
    }
  }
  if (output.empty()) {
    out << table.str();
  } else {
    write_file(output, table.str());
  }
  return kExitOk;
}

struct EncodeOpts {
  std::string rep_path;
  std::string bits;
  std::uint64_t seed = 1;
  std::string output;
};

int cmd_encode(const EncodeOpts& o, std::ostream& out) {
  const auto rep = deserialize_rep(read_file(o.rep_path)).rep;
  const auto bits = o.bits.empty() ? random_bits(o.seed, rep.n()) : parse_bits(o.bits);
  CostLedger ledger;
  const auto rec = encode(bits, rep, ledger);
  const auto report = channel_accounting(rec);
  out << "bits=" << bits_string(bits) << "\n";
  out << "n=" << report.n << " t=" << report.t << " payload_bits=" << fmt_double(report.payload_bits, 3)
      << " phase_bits=" << fmt_double(report.phase_bits, 3) << " total_bits=" << fmt_double(report.total_bits, 3)
      << "\n";
  out << "ledger " << ledger << "\n";
  const std::string doc = serialize_record(rec);
  if (o.output.empty()) {
    out << doc;
  } else {
    write_file(o.output, doc);
  }
  return kExitOk;
}

int cmd_decode(const std::string& rep_path, const std::string& record_path, std::ostream& out) {
  const auto rep = deserialize_rep(read_file(rep_path)).rep;
  const auto rec = deserialize_record(read_file(record_path));
  CostLedger ledger;
  const auto bits = decode_all(rec, rep, ledger);
  out << bits_string(bits) << "\n";
  out << "ledger " << ledger << "\n";
  return kExitOk;
}

struct TraceOpts {
  std::string rep_path;
  std::size_t n = 4;
  std::string bits;
  std::uint64_t seed = 1;
  std::size_t index = 1;
  std::size_t steps = 12;
  std::string format = "text";
};

// Traces the dot-product machine at zeta = (xi, e_index), the substitution
// used to read back one bit.
int cmd_trace(const TraceOpts& o, std::ostream& out, std::ostream& err) {
  const BilinearRep rep =
      o.rep_path.empty() ? construct_bbr(o.n) : deserialize_rep(read_file(o.rep_path)).rep;
  const std::size_t n = rep.n();
  if (o.index == 0 || o.index > n) {
    err << "error: --index must lie in 1.." << n << "\n";
    return kExitUsage;
  }
  const auto bits = o.bits.empty() ? random_bits(o.seed, n) : parse_bits(o.bits);
  if (bits.size() != n) {
    err << "error: expected " << n << " bits\n";
    return kExitUsage;
  }
  const auto g = gram(rep);
  if (!g.valid) throw Error(ErrorKind::InvalidRepresentation, "trace needs a valid representation");
  const auto machine = make_filter_machine(dot_product_decomposition(g));
  std::vector<Z6Value> zeta(2 * n);
  for (std::size_t i = 0; i < n; ++i) zeta[i] = Z6Value(bits[i]);
  zeta[n + o.index - 1] = Z6Value(1);

  if (o.format == "csv") {
    out << "component,period";
    for (std::size_t s = 0; s < o.steps; ++s) out << ",s" << s;
    out << "\n";
  } else {
    out << "bits=" << bits_string(bits) << " index=" << o.index << " f=" << machine.f_value(zeta)
        << " g=" << machine.g_value(zeta) << " h=" << machine.h_value(zeta) << "\n";
  }
  for (auto comp : {WaveComponent::F, WaveComponent::G, WaveComponent::H}) {
    const auto tr = machine.wave_trace(zeta, comp, o.steps);
    if (o.format == "csv") {
      out << to_string(comp) << "," << tr.detected_period;
      for (auto v : tr.samples) out << "," << v;
      out << "\n";
    } else {
      out << to_string(comp) << " |";
      for (auto v : tr.samples) out << " " << v;
      out << " | period " << tr.detected_period << "\n";
    }
  }
  return kExitOk;
}

int cmd_bench(std::size_t n, const std::string& rep_path, std::uint64_t seed, std::ostream& out,
              std::ostream& err) {
  const BilinearRep rep = rep_path.empty() ? construct_bbr(n) : deserialize_rep(read_file(rep_path)).rep;
  n = rep.n();
  const ProductEngine engine(rep);
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.5);
  auto rand_vec = [&] {
    std::vector<Z6Value> v(n);
    for (auto& e : v) e = Z6Value(coin(rng) ? 1 : 0);
    return v;
  };
  auto rand_mat = [&] {
    Mat6 m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) m.at(i, j) = Z6Value(coin(rng) ? 1 : 0);
    }
    return m;
  };
  bool all_equal = true;
  out << "op,n,t,mults_rep,filter_ops,mults_naive\n";
  {
    const auto x = rand_vec();
    const auto y = rand_vec();
    CostLedger fast, slow;
    all_equal &= engine.dot(x, y, fast) == naive_dot(x, y, slow);
    out << "dot," << n << "," << rep.t() << "," << fast.mults << "," << fast.filter_ops << "," << slow.mults << "\n";
  }
  {
    const auto a = rand_mat();
    const auto y = rand_vec();
    CostLedger fast, slow;
    all_equal &= engine.matvec(a, y, fast) == naive_matvec(a, y, slow);
    out << "matvec," << n << "," << rep.t() << "," << fast.mults << "," << fast.filter_ops << "," << slow.mults
        << "\n";
  }
  {
    const auto a = rand_mat();
    const auto b = rand_mat();
    CostLedger fast, slow;
    all_equal &= engine.matmul(a, b, fast) == naive_matmul(a, b, slow);
    out << "matmul," << n << "," << rep.t() << "," << fast.mults << "," << fast.filter_ops << "," << slow.mults
        << "\n";
  }
  if (!all_equal) {
    err << "error: representation-based result differs from the naive product\n";
    return kExitVerifyFailed;
  }
  return kExitOk;
}

int cmd_selftest(std::uint64_t seed, std::ostream& out) {
  bool ok = true;
  for (const auto& check : run_selftest(seed)) {
    out << (check.passed ? "[PASS] " : "[FAIL] ") << check.name;
    if (!check.passed) out << ": " << check.detail;
    out << "\n";
    ok = ok && check.passed;
  }
  return ok ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"wavesix: mod-6 bilinear representations, filter-machine simulation and hyperdense coding"};
  app.require_subcommand(1);

  ConstructOpts construct_opts;
  auto* construct = app.add_subcommand("construct", "build a bilinear representation of the dot product");
  construct->add_option("--n", construct_opts.n, "input length")->required()->check(CLI::PositiveNumber);
  construct->add_option("--strategy", construct_opts.strategy)->check(CLI::IsMember({"trivial", "bbr", "search"}));
  construct->add_option("--a", construct_opts.a, "power of 2 in the gadget");
  construct->add_option("--b", construct_opts.b, "power of 3 in the gadget");
  construct->add_option("--t-max", construct_opts.t_max, "search: largest width tried");
  construct->add_option("--timeout-ms", construct_opts.timeout_ms, "search: wall-clock budget");
  construct->add_option("-o,--output", construct_opts.output, "representation file to write");

  std::string verify_path;
  auto* verify = app.add_subcommand("verify", "re-verify a representation file");
  verify->add_option("file", verify_path)->required();

  std::uint32_t count_from = 0, count_to = 0;
  std::string count_format = "csv", count_output;
  auto* count = app.add_subcommand("count", "census of widths for n = 2^k without materializing");
  count->add_option("--from", count_from)->required();
  count->add_option("--to", count_to)->required();
  count->add_option("--format", count_format)->check(CLI::IsMember({"csv", "text"}));
  count->add_option("-o,--output", count_output);

  EncodeOpts encode_opts;
  auto* encode_cmd = app.add_subcommand("encode", "hyperdense-encode a bit string");
  encode_cmd->add_option("--rep", encode_opts.rep_path)->required();
  encode_cmd->add_option("--bits", encode_opts.bits, "bit string; random from --seed when omitted");
  encode_cmd->add_option("--seed", encode_opts.seed);
  encode_cmd->add_option("-o,--output", encode_opts.output, "wave-record file to write");

  std::string decode_rep, decode_record;
  auto* decode_cmd = app.add_subcommand("decode", "recover every bit of a wave record");
  decode_cmd->add_option("--rep", decode_rep)->required();
  decode_cmd->add_option("--record", decode_record)->required();

  TraceOpts trace_opts;
  auto* trace = app.add_subcommand("trace", "show the f, g and h wave rows of a decode query");
  trace->add_option("--rep", trace_opts.rep_path);
  trace->add_option("--n", trace_opts.n)->check(CLI::PositiveNumber);
  trace->add_option("--bits", trace_opts.bits);
  trace->add_option("--seed", trace_opts.seed);
  trace->add_option("--index", trace_opts.index, "1-based bit to query");
  trace->add_option("--steps", trace_opts.steps)->check(CLI::Range(6, 1000));
  trace->add_option("--format", trace_opts.format)->check(CLI::IsMember({"csv", "text"}));

  std::size_t bench_n = 8;
  std::string bench_rep;
  std::uint64_t bench_seed = 1;
  auto* bench = app.add_subcommand("bench", "count operations of rep-based vs naive products");
  bench->add_option("--n", bench_n)->check(CLI::PositiveNumber);
  bench->add_option("--rep", bench_rep);
  bench->add_option("--seed", bench_seed);

  std::uint64_t selftest_seed = 1;
  auto* selftest = app.add_subcommand("selftest", "run the built-in invariant checks");
  selftest->add_option("--seed", selftest_seed);

  std::vector<std::string> argv_storage{"wavesix"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_storage) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*construct) return cmd_construct(construct_opts, out, err);
    if (*verify) return cmd_verify(verify_path, out);
    if (*count) return cmd_count(count_from, count_to, count_format, count_output, out, err);
    if (*encode_cmd) return cmd_encode(encode_opts, out);
    if (*decode_cmd) return cmd_decode(decode_rep, decode_record, out);
    if (*trace) return cmd_trace(trace_opts, out, err);
    if (*bench) return cmd_bench(bench_n, bench_rep, bench_seed, out, err);
    if (*selftest) return cmd_selftest(selftest_seed, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  }
  return kExitUsage;
}

}  // namespace wavesix::cli
