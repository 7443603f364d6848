#pragma once

/*
 * Text formats: weight specifications, coefficient files, partition files,
 * and a deterministic JSON emitter (fixed %.12e floats, "-inf"/"inf"/"nan"
 * string sentinels, insertion-ordered keys).
 */

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "solid/block_norms.hpp"
#include "solid/coeffs.hpp"
#include "solid/critical_radii.hpp"
#include "solid/errors.hpp"
#include "solid/tail_bounds.hpp"
#include "solid/weights.hpp"

namespace solid::io {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Scalars and ranges

inline std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

/// Whole-token decimal literal; `offset` locates the token in the enclosing input.
inline double parse_real(std::string_view s, std::size_t offset = 0) {
  if (s.empty()) throw parse_error("expected a number", offset);
  const char* first = s.data();
  if (*first == '+') ++first;
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), x);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw parse_error("malformed number '" + std::string(s) + "'", offset + static_cast<std::size_t>(ptr - s.data()));
  return x;
}

inline long long parse_integer(std::string_view s, std::size_t offset = 0) {
  if (s.empty()) throw parse_error("expected an integer", offset);
  const char* first = s.data();
  if (*first == '+') ++first;
  long long x = 0;
  const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), x);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw parse_error("malformed integer '" + std::string(s) + "'", offset + static_cast<std::size_t>(ptr - s.data()));
  return x;
}

struct IntRange {
  long long first = 0;
  long long last = 0;
};

/// "A..B" or a single integer "A".
inline IntRange parse_range(std::string_view s) {
  const auto dots = s.find("..");
  if (dots == std::string_view::npos) {
    const long long a = parse_integer(s);
    return {a, a};
  }
  const IntRange r{parse_integer(s.substr(0, dots)), parse_integer(s.substr(dots + 2), dots + 2)};
  if (r.last < r.first) throw parse_error("empty range '" + std::string(s) + "'", dots);
  return r;
}

/// "A..B" (every integer in between) or a comma list of reals.
inline std::vector<double> parse_real_list(std::string_view s) {
  std::vector<double> out;
  if (s.find("..") != std::string_view::npos) {
    const IntRange r = parse_range(s);
    for (long long m = r.first; m <= r.last; ++m) out.push_back(static_cast<double>(m));
    return out;
  }
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto comma = std::min(s.find(',', start), s.size());
    out.push_back(parse_real(trim(s.substr(start, comma - start)), start));
    start = comma + 1;
  }
  return out;
}

inline std::vector<long long> parse_int_list(std::string_view s) {
  std::vector<long long> out;
  if (s.find("..") != std::string_view::npos) {
    const IntRange r = parse_range(s);
    for (long long m = r.first; m <= r.last; ++m) out.push_back(m);
    return out;
  }
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto comma = std::min(s.find(',', start), s.size());
    out.push_back(parse_integer(trim(s.substr(start, comma - start)), start));
    start = comma + 1;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Weight specifications: family[:key=value{,key=value}]

inline RadialWeight parse_weight(std::string_view spec) {
  const auto colon = spec.find(':');
  const std::string name = lower(spec.substr(0, colon));
  struct Param {
    std::string key;
    std::string value;
    std::size_t pos;
    std::size_t key_pos;
    bool used = false;
  };
  std::vector<Param> params;
  if (colon != std::string_view::npos) {
    std::size_t start = colon + 1;
    while (start <= spec.size()) {
      const auto comma = std::min(spec.find(',', start), spec.size());
      const std::string_view item = spec.substr(start, comma - start);
      const auto eq = item.find('=');
      if (eq == std::string_view::npos || eq == 0) throw parse_error("expected key=value", start);
      params.push_back({lower(item.substr(0, eq)), std::string(item.substr(eq + 1)), start + eq + 1, start});
      start = comma + 1;
    }
  }
  for (std::size_t i = 0; i < params.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (params[i].key == params[j].key) throw parse_error("duplicate key '" + params[i].key + "'", params[i].key_pos);

  // Unknown keys are reported before missing ones so a misspelt key points at itself.
  static const std::map<std::string, std::vector<std::string>> known{
      {"expdisc", {"a", "b", "w"}}, {"expdisc2", {"a", "b"}}, {"std", {"alpha", "form"}},
      {"expplane", {"p"}},          {"expexp", {}},           {"logsq", {}}};
  const auto family_keys = known.find(name);
  if (family_keys == known.end())
    throw parse_error("unknown weight family '" + std::string(spec.substr(0, colon)) + "'", 0);
  for (const auto& p : params)
    if (std::find(family_keys->second.begin(), family_keys->second.end(), p.key) == family_keys->second.end())
      throw parse_error("unknown parameter '" + p.key + "' for weight '" + name + "'", p.key_pos);

  auto find = [&](const std::string& key) -> Param* {
    for (auto& p : params)
      if (p.key == key) {
        p.used = true;
        return &p;
      }
    return nullptr;
  };
  auto real = [&](const std::string& key, std::optional<double> fallback = std::nullopt) {
    if (Param* p = find(key)) return parse_real(p->value, p->pos);
    if (fallback) return *fallback;
    throw parse_error("missing parameter '" + key + "' for weight '" + name + "'", spec.size());
  };
  auto finish = [&](WeightFamily f) {
    for (const auto& p : params)
      if (!p.used) throw parse_error("unknown parameter '" + p.key + "' for weight '" + name + "'", p.key_pos);
    try {
      return RadialWeight{std::move(f)};
    } catch (const domain_error& e) {
      throw parse_error(e.what(), colon == std::string_view::npos ? spec.size() : colon + 1);
    }
  };

  if (name == "expdisc") {
    family::ExpDisc f{real("a"), real("b"), wfactor::One{}};
    if (Param* p = find("w")) {
      const std::string w = lower(p->value);
      if (w == "one") f.w = wfactor::One{};
      else if (w == "oneminusr") f.w = wfactor::OneMinusR{};
      else if (w == "invlog") f.w = wfactor::InvLog{};
      else if (w == "explogsq") f.w = wfactor::ExpLogSq{};
      else throw parse_error("unknown w factor '" + p->value + "'", p->pos);
    }
    return finish(f);
  }
  if (name == "expdisc2") return finish(family::ExpDiscSquared{real("a"), real("b")});
  if (name == "std") {
    family::StandardDisc f{real("alpha"), family::StandardForm::OneMinusR};
    if (Param* p = find("form")) {
      const std::string form = lower(p->value);
      if (form == "sq") f.form = family::StandardForm::OneMinusRSquared;
      else if (form != "gap") throw parse_error("unknown standard form '" + p->value + "'", p->pos);
    }
    return finish(f);
  }
  if (name == "expplane") return finish(family::ExpPlane{real("p")});
  if (name == "expexp") return finish(family::ExpExpPlane{});
  if (name == "logsq") return finish(family::LogSqPlane{});
  throw parse_error("unknown weight family '" + std::string(spec.substr(0, colon)) + "'", 0);
}

// ---------------------------------------------------------------------------
// Deterministic JSON

inline std::string format_real(double x) {
  if (std::isnan(x)) return "\"nan\"";
  if (std::isinf(x)) return x > 0 ? "\"inf\"" : "\"-inf\"";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12e", x);
  return buf;
}

inline void emit(const Json& j, std::string& out, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
  const char* nl = indent > 0 ? "\n" : "";
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      out += nl;
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) out += std::string(",") + nl;
        first = false;
        out += pad + Json(k).dump() + (indent > 0 ? ": " : ":");
        emit(v, out, indent, depth + 1);
      }
      out += nl + close_pad + '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += '[';
      out += nl;
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i > 0) out += std::string(",") + nl;
        out += pad;
        emit(j[i], out, indent, depth + 1);
      }
      out += nl + close_pad + ']';
      return;
    }
    case Json::value_t::number_float:
      out += format_real(j.get<double>());
      return;
    default:
      out += j.dump();
  }
}

inline std::string dump(const Json& j, int indent = 2) {
  std::string out;
  emit(j, out, indent, 0);
  return out;
}

/// Number or sentinel string back to double.
inline double json_real(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = lower(j.get<std::string>());
    if (s == "-inf") return neg_inf;
    if (s == "inf") return pos_inf;
    if (s == "nan") return not_a_number;
    return parse_real(s);
  }
  throw parse_error("expected a number, got " + j.dump(), 0);
}

inline Json optional_int(const std::optional<long long>& x) { return x ? Json(*x) : Json(nullptr); }

inline Json to_json(const CriticalPoint& c) {
  return Json{{"m", c.m}, {"r", c.r}, {"log_r", c.log_r}, {"log_max", c.log_max}};
}

inline Json to_json(const NormReport& r) {
  Json blocks = Json::array();
  for (const auto& b : r.blocks) blocks.push_back(Json{{"n", b.n}, {"log_value", b.log_value}});
  return Json{{"blocks", blocks}, {"log_sup", r.log_sup}, {"attained_n", optional_int(r.attained_n)}};
}

inline Json to_json(const BlockPartition& p) {
  Json arr = Json::array();
  for (const auto& e : p.entries)
    arr.push_back(Json{{"n", e.n}, {"m_n", e.m}, {"r_mn", e.r}, {"log_v_at_rmn", e.log_v}});
  return arr;
}

inline Json to_json(const ConditionBReport& rep) {
  Json rows = Json::array();
  for (const auto& r : rep.rows)
    rows.push_back(Json{{"n", r.n}, {"log_lower", r.log_lower}, {"log_upper", r.log_upper}, {"lower_q", r.lower_q},
                        {"upper_q", r.upper_q}});
  return Json{{"rows", rows},
              {"inferred_b", rep.inferred_b},
              {"inferred_K", rep.inferred_K},
              {"n0", optional_int(rep.n0)},
              {"holds", rep.holds()}};
}

inline Json to_json(const AnnulusCertificate& c) {
  return Json{{"k", c.k}, {"inner_r", c.inner_r}, {"outer_r", c.outer_r}, {"leakage", c.leakage}};
}

inline Json to_json(const ConcentratedSelection& s) {
  Json certs = Json::array();
  for (const auto& c : s.certificates) certs.push_back(to_json(c));
  Json radii = Json::array();
  for (double r : s.radii) radii.push_back(r);
  return Json{{"selected", s.selected},
              {"radii", radii},
              {"certificates", certs},
              {"truncated", s.truncated},
              {"certified_mode", s.certified_mode},
              {"log_sup_blocks", s.log_sup_blocks},
              {"log_norm_of_sum", s.log_norm_of_sum},
              {"factor_two_ok", s.factor_two_ok()}};
}

// ---------------------------------------------------------------------------
// CSV

inline std::string partition_csv(const BlockPartition& p) {
  std::string out = "n,m_n,r_mn,log_v_at_rmn\n";
  for (const auto& e : p.entries) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%lld,%.17g,%.17g,%.17g\n", e.n, e.m, e.r, e.log_v);
    out += buf;
  }
  return out;
}

inline std::string norm_csv(const NormReport& r) {
  std::string out = "n,log_value\n";
  for (const auto& b : r.blocks) out += std::to_string(b.n) + "," + format_real(b.log_value) + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Coefficient files

inline std::string read_all(std::istream& in) {
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw parse_error("cannot open '" + path + "'", 0);
  return read_all(in);
}

inline bool looks_like_json(std::string_view text) {
  const std::string_view t = trim(text);
  return !t.empty() && (t.front() == '[' || t.front() == '{');
}

inline Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw parse_error(std::string("malformed JSON: ") + e.what(), e.byte);
  }
}

/// Text lines `m<TAB>magnitude` or `m<TAB>log:<value>`; blank lines and '#' comments skipped.
/// JSON input `[{"m": int, "log_mag": real}]` is detected automatically.
inline CoeffSeq parse_coeffs(const std::string& text) {
  std::vector<Coefficient> terms;
  if (looks_like_json(text)) {
    const Json j = parse_json(text);
    if (!j.is_array()) throw parse_error("coefficient JSON must be an array", 0);
    for (const auto& e : j) {
      if (!e.contains("m") || !e.contains("log_mag")) throw parse_error("coefficient entry needs m and log_mag", 0);
      terms.push_back({e.at("m").get<long long>(), json_real(e.at("log_mag"))});
    }
  } else {
    std::size_t offset = 0;
    while (offset < text.size()) {
      const auto eol = std::min(text.find('\n', offset), text.size());
      const std::string_view line = trim(std::string_view(text).substr(offset, eol - offset));
      const std::size_t line_start = offset;
      offset = eol + 1;
      if (line.empty() || line.front() == '#') continue;
      const auto sep = line.find_first_of(" \t");
      if (sep == std::string_view::npos) throw parse_error("expected 'm<TAB>magnitude'", line_start);
      const long long m = parse_integer(line.substr(0, sep), line_start);
      const std::string_view value = trim(line.substr(sep));
      const std::size_t value_pos = line_start + static_cast<std::size_t>(value.data() - line.data());
      double log_mag;
      if (lower(value.substr(0, 4)) == "log:") {
        const std::string v = lower(value.substr(4));
        log_mag = v == "-inf" ? neg_inf : parse_real(v, value_pos + 4);
      } else {
        const double mag = parse_real(value, value_pos);
        if (!(mag >= 0.0)) throw parse_error("negative magnitude", value_pos);
        log_mag = mag == 0.0 ? neg_inf : std::log(mag);
      }
      terms.push_back({m, log_mag});
    }
  }
  try {
    return CoeffSeq::from_log(std::move(terms));
  } catch (const domain_error& e) {
    throw parse_error(e.what(), 0);
  }
}

inline CoeffSeq read_coeffs(const std::string& path) { return parse_coeffs(read_file(path)); }

/// Lossless text form (log magnitudes).
inline std::string coeffs_text(const CoeffSeq& c) {
  std::string out;
  for (const auto& t : c) {
    char buf[80];
    std::snprintf(buf, sizeof buf, "%lld\tlog:%.17g\n", t.m, t.log_mag);
    out += buf;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Partition files

/// JSON array of {n, m_n, r_mn, log_v_at_rmn} or CSV with the same columns.
inline BlockPartition parse_partition(const std::string& text) {
  BlockPartition p;
  p.source = PartitionSource::UserSupplied;
  if (looks_like_json(text)) {
    const Json j = parse_json(text);
    if (!j.is_array()) throw parse_error("partition JSON must be an array", 0);
    for (const auto& e : j) {
      for (const char* key : {"n", "m_n", "r_mn", "log_v_at_rmn"})
        if (!e.contains(key)) throw parse_error(std::string("partition entry lacks '") + key + "'", 0);
      const double r = json_real(e.at("r_mn"));
      p.entries.push_back({e.at("n").get<long long>(), json_real(e.at("m_n")), r, std::log(r),
                           json_real(e.at("log_v_at_rmn"))});
    }
  } else {
    std::size_t offset = 0;
    bool header = true;
    while (offset < text.size()) {
      const auto eol = std::min(text.find('\n', offset), text.size());
      const std::string_view line = trim(std::string_view(text).substr(offset, eol - offset));
      const std::size_t line_start = offset;
      offset = eol + 1;
      if (line.empty() || line.front() == '#') continue;
      if (header) {
        header = false;
        if (lower(line) != "n,m_n,r_mn,log_v_at_rmn") throw parse_error("expected CSV header n,m_n,r_mn,log_v_at_rmn", line_start);
        continue;
      }
      std::vector<std::string_view> cols;
      std::vector<std::size_t> pos;
      std::size_t start = 0;
      while (start <= line.size()) {
        const auto comma = std::min(line.find(',', start), line.size());
        cols.push_back(trim(line.substr(start, comma - start)));
        pos.push_back(line_start + start);
        start = comma + 1;
      }
      if (cols.size() != 4) throw parse_error("expected four CSV columns", line_start);
      const double r = parse_real(cols[2], pos[2]);
      p.entries.push_back({parse_integer(cols[0], pos[0]), parse_real(cols[1], pos[1]), r, std::log(r),
                           parse_real(cols[3], pos[3])});
    }
  }
  if (p.entries.empty()) throw parse_error("partition has no entries", 0);
  check_monotone(p);
  return p;
}

inline BlockPartition read_partition(const std::string& path) { return parse_partition(read_file(path)); }

}  // namespace solid::io
