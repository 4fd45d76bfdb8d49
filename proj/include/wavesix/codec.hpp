#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "wavesix/error.hpp"
#include "wavesix/filtersim.hpp"
#include "wavesix/represent.hpp"
#include "wavesix/z6.hpp"

namespace wavesix {

// Encoded payload X (t wave-bit values) plus the sealed per-bit phase table
// that stands in for the filter machine's access to the periodic components.
//   pi3[i] = sum_{l in S3(i)} xi_l mod 2
//   pi2[i] = sum_{l in S2(i)} (M[l][i] / 2) xi_l mod 3
struct WaveRecord {
  std::size_t n = 0;
  std::size_t t = 0;
  std::vector<Z6Value> x;
  std::vector<std::uint8_t> pi3;
  std::vector<std::uint8_t> pi2;
  std::string rep_digest;

  friend bool operator==(const WaveRecord&, const WaveRecord&) = default;
};

inline WaveRecord encode(std::span<const std::uint8_t> bits, const BilinearRep& rep, const GramSplit& g,
                         CostLedger& ledger) {
  if (!g.valid) throw Error(ErrorKind::InvalidRepresentation, "cannot encode with an invalid representation");
  if (bits.size() != rep.n()) {
    throw Error(ErrorKind::DimensionMismatch, "got " + std::to_string(bits.size()) + " bits for n = " +
                                                  std::to_string(rep.n()));
  }
  for (auto b : bits) {
    if (b > 1) throw Error(ErrorKind::InvalidArgument, "input must be a bit sequence");
  }
  WaveRecord rec;
  rec.n = rep.n();
  rec.t = rep.t();
  rec.x.assign(rep.t(), Z6Value(0));
  rec.rep_digest = rep.digest();
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == 0) continue;
    rep.b().for_each_set(i, [&](std::size_t j) { rec.x[j] = z6_add(rec.x[j], Z6Value(1), ledger); });
  }
  rec.pi3.resize(rec.n);
  rec.pi2.resize(rec.n);
  for (std::size_t i = 0; i < rec.n; ++i) {
    int p3 = 0;
    for (auto l : g.s3[i]) p3 += bits[l];
    int p2 = 0;
    for (auto l : g.s2[i]) p2 += bits[l] * (g.at(l, i).value() / 2);
    rec.pi3[i] = static_cast<std::uint8_t>(p3 % 2);
    rec.pi2[i] = static_cast<std::uint8_t>(p2 % 3);
  }
  return rec;
}

inline WaveRecord encode(std::span<const std::uint8_t> bits, const BilinearRep& rep, CostLedger& ledger) {
  return encode(bits, rep, gram(rep), ledger);
}

// Recovers bit i (0-based) from the record alone: V_i = sum_j C[i][j] X[j]
// is the form evaluated at y = e_i, and one filter op strips 3 pi3 + 2 pi2.
inline std::uint8_t decode_bit(const WaveRecord& record, std::size_t i, const BilinearRep& rep, CostLedger& ledger) {
  if (record.rep_digest != rep.digest()) {
    throw Error(ErrorKind::DigestMismatch, "record was encoded with rep " + record.rep_digest + ", got " +
                                               rep.digest());
  }
  if (record.n != rep.n() || record.t != rep.t() || record.x.size() != record.t || record.pi3.size() != record.n ||
      record.pi2.size() != record.n) {
    throw Error(ErrorKind::DimensionMismatch, "record shape does not match representation");
  }
  if (i >= record.n) throw Error(ErrorKind::OutOfRange, "bit index " + std::to_string(i));
  Z6Value v;
  bool first = true;
  rep.c().for_each_set(i, [&](std::size_t j) {
    v = first ? record.x[j] : z6_add(v, record.x[j], ledger);
    first = false;
  });
  // 4h = 2 pi2 (mod 6) for h = 2 pi2 (mod 3).
  const Z6Value h_wave((2 * record.pi2[i]) % 3);
  const Z6Value out = filter_waves(v, Z6Value(record.pi3[i]), h_wave, ledger);
  if (out.value() > 1) {
    throw Error(ErrorKind::CorruptedRecord, "bit " + std::to_string(i + 1) + " decoded to " +
                                                std::to_string(out.value()));
  }
  return static_cast<std::uint8_t>(out.value());
}

inline std::vector<std::uint8_t> decode_all(const WaveRecord& record, const BilinearRep& rep, CostLedger& ledger) {
  std::vector<std::uint8_t> out(record.n);
  for (std::size_t i = 0; i < record.n; ++i) out[i] = decode_bit(record, i, rep, ledger);
  return out;
}

// Classical sizes of what a record actually carries. The phase table is
// real storage in this simulation; any compression lives in the
// hypothetical wave channel, not here.
struct ChannelReport {
  std::size_t n = 0;
  std::size_t t = 0;
  double payload_bits = 0.0;
  double phase_bits = 0.0;
  double total_bits = 0.0;
  bool payload_below_n = false;
};

inline ChannelReport channel_accounting(const WaveRecord& record) {
  ChannelReport r;
  r.n = record.n;
  r.t = record.t;
  r.payload_bits = static_cast<double>(record.t) * std::log2(6.0);
  r.phase_bits = static_cast<double>(record.n) * (1.0 + std::log2(3.0));
  r.total_bits = r.payload_bits + r.phase_bits;
  r.payload_below_n = r.payload_bits < static_cast<double>(record.n);
  return r;
}

// ---------------------------------------------------------------------------
// Wave-record document (JSON).

inline std::string serialize_record(const WaveRecord& rec) {
  nlohmann::ordered_json doc;
  doc["version"] = 1;
  doc["n"] = rec.n;
  doc["t"] = rec.t;
  std::string x;
  x.reserve(rec.x.size());
  for (auto v : rec.x) x.push_back(static_cast<char>('0' + v.value()));
  doc["x"] = x;
  std::string p3, p2;
  for (auto v : rec.pi3) p3.push_back(static_cast<char>('0' + v));
  for (auto v : rec.pi2) p2.push_back(static_cast<char>('0' + v));
  doc["phases"]["pi3"] = p3;
  doc["phases"]["pi2"] = p2;
  doc["rep_digest"] = rec.rep_digest;
  return doc.dump(2) + "\n";
}

inline WaveRecord deserialize_record(std::string_view text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::MalformedDocument, e.what());
  }
  if (!doc.is_object()) throw Error(ErrorKind::MalformedDocument, "top level must be an object");
  for (const auto& [key, value] : doc.items()) {
    if (key != "version" && key != "n" && key != "t" && key != "x" && key != "phases" && key != "rep_digest") {
      throw Error(ErrorKind::UnknownField, "'" + key + "'");
    }
  }
  auto field = [](const json& obj, const char* key) -> const json& {
    auto it = obj.find(key);
    if (it == obj.end()) throw Error(ErrorKind::MalformedDocument, std::string("missing field '") + key + "'");
    return *it;
  };
  auto string_field = [&](const json& obj, const char* key) {
    const json& v = field(obj, key);
    if (!v.is_string()) throw Error(ErrorKind::MalformedDocument, std::string("field '") + key + "' must be a string");
    return v.get<std::string>();
  };
  const json& version = field(doc, "version");
  if (!version.is_number_integer()) throw Error(ErrorKind::MalformedDocument, "field 'version' must be an integer");
  if (version.get<long long>() != 1) throw Error(ErrorKind::UnsupportedVersion, "version " + version.dump());
  const json& n = field(doc, "n");
  const json& t = field(doc, "t");
  if (!n.is_number_unsigned() || !t.is_number_unsigned()) {
    throw Error(ErrorKind::MalformedDocument, "n and t must be non-negative integers");
  }
  WaveRecord rec;
  rec.n = n.get<std::size_t>();
  rec.t = t.get<std::size_t>();

  auto digits = [](const std::string& s, int base, const char* what) {
    std::vector<std::uint8_t> out;
    out.reserve(s.size());
    for (char ch : s) {
      if (ch < '0' || ch >= '0' + base) {
        throw Error(ErrorKind::MalformedDocument, std::string(what) + " contains '" + ch + "'");
      }
      out.push_back(static_cast<std::uint8_t>(ch - '0'));
    }
    return out;
  };
  for (auto d : digits(string_field(doc, "x"), 6, "x")) rec.x.emplace_back(d);
  const json& phases = field(doc, "phases");
  if (!phases.is_object()) throw Error(ErrorKind::MalformedDocument, "field 'phases' must be an object");
  for (const auto& [key, value] : phases.items()) {
    if (key != "pi3" && key != "pi2") throw Error(ErrorKind::UnknownField, "'phases." + key + "'");
  }
  rec.pi3 = digits(string_field(phases, "pi3"), 2, "phases.pi3");
  rec.pi2 = digits(string_field(phases, "pi2"), 3, "phases.pi2");
  rec.rep_digest = string_field(doc, "rep_digest");
  if (rec.x.size() != rec.t) {
    throw Error(ErrorKind::DimensionMismatch, "x has " + std::to_string(rec.x.size()) + " digits, t = " +
                                                  std::to_string(rec.t));
  }
  if (rec.pi3.size() != rec.n || rec.pi2.size() != rec.n) {
    throw Error(ErrorKind::DimensionMismatch, "phase strings must have n = " + std::to_string(rec.n) + " entries");
  }
  return rec;
}

}  // namespace wavesix
