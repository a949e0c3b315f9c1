#pragma once

// State, mixture and report documents.
//
// State:   {"dims": [d1, ...], "matrix": [[re, im], ...]}   (row-major)
// Mixture: {"weights": [...], "components": [<state>, ...]}
// Reports: {"tool": ..., "version": ..., "records": [<record>, ...]} or CSV.
//
// Reals are written with 17 significant digits, so write -> parse -> write is
// byte-identical.

#include <charconv>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "qcorr/errors.hpp"
#include "qcorr/lab.hpp"
#include "qcorr/states.hpp"
#include "qcorr/syntax.hpp"
#include "qcorr/tensor.hpp"
#include "qcorr/version.hpp"

namespace qcorr {

using Json = nlohmann::json;

namespace detail {

inline std::string json_string(std::string_view s) { return Json(std::string(s)).dump(); }

inline void write_state_body(std::ostream& os, const DensityMatrix& rho, const std::string& indent) {
  os << indent << "\"dims\": [";
  for (std::size_t i = 0; i < rho.dims().size(); ++i) os << (i ? ", " : "") << rho.dims()[i];
  os << "],\n" << indent << "\"matrix\": [\n";
  const auto& m = rho.matrix();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    os << indent << "  ";
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      os << '[' << format_real(m(r, c).real()) << ", " << format_real(m(r, c).imag()) << ']';
      if (c + 1 < m.cols()) os << ", ";
    }
    os << (r + 1 < m.rows() ? ",\n" : "\n");
  }
  os << indent << "]\n";
}

inline Json parse_json(std::string_view text, std::string_view source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string(source) + ": " + e.what());
  }
}

inline const Json& field(const Json& j, const char* name, std::string_view source) {
  if (!j.is_object()) throw ParseError(std::string(source) + ": expected a JSON object");
  auto it = j.find(name);
  if (it == j.end()) throw ParseError(std::string(source) + ": missing field '" + name + "'");
  return *it;
}

inline double number(const Json& j, std::string_view where) {
  if (!j.is_number()) throw ParseError(std::string(where) + ": expected a number");
  return j.get<double>();
}

inline DensityMatrix state_from_json(const Json& j, std::string_view source,
                                     const DensityValidation& v) {
  const Json& jd = field(j, "dims", source);
  if (!jd.is_array() || jd.empty()) {
    throw ParseError(std::string(source) + ": field 'dims' must be a nonempty integer list");
  }
  Dims dims;
  for (std::size_t i = 0; i < jd.size(); ++i) {
    if (!jd[i].is_number_unsigned() || jd[i].get<std::size_t>() < 1) {
      throw ParseError(std::string(source) + ": field 'dims' entry " + std::to_string(i) +
                       ": expected a positive integer");
    }
    dims.push_back(jd[i].get<std::size_t>());
  }
  const std::size_t d = total_dim(dims);
  if (d > v.max_total_dim) {
    throw ParseError(std::string(source) + ": total dimension " + std::to_string(d) +
                     " exceeds cap " + std::to_string(v.max_total_dim));
  }
  const Json& jm = field(j, "matrix", source);
  if (!jm.is_array() || jm.size() != d * d) {
    throw ParseError(std::string(source) + ": field 'matrix' must hold " + std::to_string(d * d) +
                     " [re, im] pairs");
  }
  ComplexMatrix m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < d * d; ++i) {
    const Json& e = jm[i];
    const std::string where = std::string(source) + ": field 'matrix' entry " + std::to_string(i);
    if (!e.is_array() || e.size() != 2) throw ParseError(where + ": expected an [re, im] pair");
    m(static_cast<Eigen::Index>(i / d), static_cast<Eigen::Index>(i % d)) =
        Complex{number(e[0], where), number(e[1], where)};
  }
  try {
    return DensityMatrix(std::move(dims), std::move(m), v);
  } catch (const PreconditionError& e) {
    throw ParseError(std::string(source) + ": " + e.what());
  }
}

}  // namespace detail

// -----------------------------------------------------------------------------
// States and mixtures

inline void write_state(std::ostream& os, const DensityMatrix& rho) {
  os << "{\n";
  detail::write_state_body(os, rho, "  ");
  os << "}\n";
}

inline std::string state_to_string(const DensityMatrix& rho) {
  std::ostringstream os;
  write_state(os, rho);
  return os.str();
}

/// Parses and fully validates a state document.
inline DensityMatrix parse_state(std::string_view text, std::string_view source = "state",
                                 const DensityValidation& v = {}) {
  return detail::state_from_json(detail::parse_json(text, source), source, v);
}

inline void write_mixture(std::ostream& os, const Mixture& m) {
  os << "{\n  \"weights\": [";
  for (std::size_t k = 0; k < m.size(); ++k) os << (k ? ", " : "") << format_real(m.weights()[k]);
  os << "],\n  \"components\": [\n";
  for (std::size_t k = 0; k < m.size(); ++k) {
    os << "    {\n";
    detail::write_state_body(os, m.components()[k], "      ");
    os << (k + 1 < m.size() ? "    },\n" : "    }\n");
  }
  os << "  ]\n}\n";
}

inline std::string mixture_to_string(const Mixture& m) {
  std::ostringstream os;
  write_mixture(os, m);
  return os.str();
}

inline Mixture parse_mixture(std::string_view text, std::string_view source = "mixture",
                             const DensityValidation& v = {}) {
  const Json j = detail::parse_json(text, source);
  const Json& jw = detail::field(j, "weights", source);
  const Json& jc = detail::field(j, "components", source);
  if (!jw.is_array() || !jc.is_array()) {
    throw ParseError(std::string(source) + ": 'weights' and 'components' must be lists");
  }
  std::vector<double> w;
  for (std::size_t k = 0; k < jw.size(); ++k) {
    w.push_back(detail::number(jw[k], std::string(source) + ": field 'weights' entry " + std::to_string(k)));
  }
  std::vector<DensityMatrix> comps;
  for (std::size_t k = 0; k < jc.size(); ++k) {
    comps.push_back(detail::state_from_json(
        jc[k], std::string(source) + ": component " + std::to_string(k + 1), v));
  }
  try {
    return Mixture(std::move(w), std::move(comps));
  } catch (const PreconditionError& e) {
    throw ParseError(std::string(source) + ": " + e.what());
  }
}

// -----------------------------------------------------------------------------
// Reports

/// A report as written to disk.
struct ReportRecord {
  VerificationReport report;
  std::string timestamp;  ///< ISO-8601
  std::string tool_version = std::string(kVersion);

  bool operator==(const ReportRecord&) const = default;
};

inline void write_record_json(std::ostream& os, const ReportRecord& rec) {
  const auto& r = rec.report;
  os << "{\"check_name\": " << detail::json_string(r.check_name)
     << ", \"kind\": \"" << to_string(r.kind) << '"'
     << ", \"lhs\": " << format_real(r.lhs)
     << ", \"rhs\": " << format_real(r.rhs)
     << ", \"residual\": " << format_real(r.residual)
     << ", \"tolerance\": " << format_real(r.tolerance)
     << ", \"passed\": " << (r.passed ? "true" : "false")
     << ", \"seed\": ";
  if (r.seed) {
    os << *r.seed;
  } else {
    os << "null";
  }
  os << ", \"context\": {";
  bool first = true;
  for (const auto& [k, v] : r.context) {
    os << (first ? "" : ", ") << detail::json_string(k) << ": " << detail::json_string(v);
    first = false;
  }
  os << "}, \"timestamp\": " << detail::json_string(rec.timestamp)
     << ", \"tool_version\": " << detail::json_string(rec.tool_version) << '}';
}

inline void write_reports_json(std::ostream& os, const std::vector<ReportRecord>& records) {
  os << "{\n  \"tool\": \"qcorr\",\n  \"version\": " << detail::json_string(kVersion)
     << ",\n  \"records\": [";
  for (std::size_t i = 0; i < records.size(); ++i) {
    os << (i ? ",\n    " : "\n    ");
    write_record_json(os, records[i]);
  }
  os << (records.empty() ? "]\n}\n" : "\n  ]\n}\n");
}

inline CheckKind parse_kind(std::string_view s, std::string_view where) {
  if (s == "equality") return CheckKind::equality;
  if (s == "inequality") return CheckKind::inequality;
  throw ParseError(std::string(where) + ": unknown check kind '" + std::string(s) + "'");
}

inline std::vector<ReportRecord> parse_reports_json(std::string_view text,
                                                    std::string_view source = "reports") {
  const Json j = detail::parse_json(text, source);
  const Json& recs = detail::field(j, "records", source);
  if (!recs.is_array()) throw ParseError(std::string(source) + ": 'records' must be a list");
  std::vector<ReportRecord> out;
  for (std::size_t i = 0; i < recs.size(); ++i) {
    const std::string where = std::string(source) + ": record " + std::to_string(i + 1);
    const Json& e = recs[i];
    auto str = [&](const char* name) {
      const Json& f = detail::field(e, name, where);
      if (!f.is_string()) throw ParseError(where + ": field '" + name + "' must be a string");
      return f.get<std::string>();
    };
    ReportRecord rec;
    auto& r = rec.report;
    r.check_name = str("check_name");
    r.kind = parse_kind(str("kind"), where);
    r.lhs = detail::number(detail::field(e, "lhs", where), where + ": field 'lhs'");
    r.rhs = detail::number(detail::field(e, "rhs", where), where + ": field 'rhs'");
    r.residual = detail::number(detail::field(e, "residual", where), where + ": field 'residual'");
    r.tolerance = detail::number(detail::field(e, "tolerance", where), where + ": field 'tolerance'");
    const Json& passed = detail::field(e, "passed", where);
    if (!passed.is_boolean()) throw ParseError(where + ": field 'passed' must be a boolean");
    r.passed = passed.get<bool>();
    const Json& seed = detail::field(e, "seed", where);
    if (seed.is_number_unsigned()) {
      r.seed = seed.get<std::uint64_t>();
    } else if (!seed.is_null()) {
      throw ParseError(where + ": field 'seed' must be an unsigned integer or null");
    }
    const Json& ctx = detail::field(e, "context", where);
    if (!ctx.is_object()) throw ParseError(where + ": field 'context' must be an object");
    for (const auto& [k, v] : ctx.items()) {
      if (!v.is_string()) throw ParseError(where + ": context value '" + k + "' must be a string");
      r.context[k] = v.get<std::string>();
    }
    rec.timestamp = str("timestamp");
    rec.tool_version = str("tool_version");
    out.push_back(std::move(rec));
  }
  return out;
}

// CSV, RFC 4180 quoting. The context map is flattened to "key=value;key=value".

inline constexpr std::string_view kCsvHeader =
    "check_name,kind,lhs,rhs,residual,tolerance,passed,seed,context,timestamp,tool_version";

namespace detail {

inline std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

/// Splits CSV text into records of fields.
inline std::vector<std::vector<std::string>> csv_records(std::string_view text, std::string_view source) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string cur;
  bool quoted = false, field_started = false;
  std::size_t line = 1;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        cur += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (field_started) {
          throw ParseError(std::string(source) + ": line " + std::to_string(line) + ": stray quote");
        }
        quoted = true;
        field_started = true;
        break;
      case ',':
        row.push_back(std::move(cur));
        cur.clear();
        field_started = false;
        break;
      case '\r':
        break;
      case '\n':
        row.push_back(std::move(cur));
        rows.push_back(std::move(row));
        row.clear();
        cur.clear();
        field_started = false;
        ++line;
        break;
      default:
        cur += c;
        field_started = true;
    }
  }
  if (quoted) throw ParseError(std::string(source) + ": unterminated quoted field");
  if (field_started || !row.empty()) {
    row.push_back(std::move(cur));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline double csv_number(const std::string& s, const std::string& where) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw ParseError(where + ": '" + s + "' is not a number");
}

}  // namespace detail

inline void write_reports_csv(std::ostream& os, const std::vector<ReportRecord>& records) {
  os << kCsvHeader << '\n';
  for (const auto& rec : records) {
    const auto& r = rec.report;
    std::string ctx;
    for (const auto& [k, v] : r.context) ctx += (ctx.empty() ? "" : ";") + k + "=" + v;
    os << detail::csv_field(r.check_name) << ',' << to_string(r.kind) << ',' << format_real(r.lhs)
       << ',' << format_real(r.rhs) << ',' << format_real(r.residual) << ','
       << format_real(r.tolerance) << ',' << (r.passed ? "true" : "false") << ','
       << (r.seed ? std::to_string(*r.seed) : std::string()) << ',' << detail::csv_field(ctx) << ','
       << detail::csv_field(rec.timestamp) << ',' << detail::csv_field(rec.tool_version) << '\n';
  }
}

inline std::vector<ReportRecord> parse_reports_csv(std::string_view text,
                                                   std::string_view source = "reports") {
  const auto rows = detail::csv_records(text, source);
  if (rows.empty()) throw ParseError(std::string(source) + ": missing header row");
  std::string header;
  for (std::size_t i = 0; i < rows[0].size(); ++i) header += (i ? "," : "") + rows[0][i];
  if (header != kCsvHeader) throw ParseError(std::string(source) + ": unexpected header row");
  std::vector<ReportRecord> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& f = rows[i];
    const std::string where = std::string(source) + ": line " + std::to_string(i + 1);
    if (f.size() != 11) throw ParseError(where + ": expected 11 fields, got " + std::to_string(f.size()));
    ReportRecord rec;
    auto& r = rec.report;
    r.check_name = f[0];
    r.kind = parse_kind(f[1], where);
    r.lhs = detail::csv_number(f[2], where);
    r.rhs = detail::csv_number(f[3], where);
    r.residual = detail::csv_number(f[4], where);
    r.tolerance = detail::csv_number(f[5], where);
    if (f[6] != "true" && f[6] != "false") throw ParseError(where + ": 'passed' must be true or false");
    r.passed = f[6] == "true";
    if (!f[7].empty()) {
      std::uint64_t s = 0;
      const auto [p, ec] = std::from_chars(f[7].data(), f[7].data() + f[7].size(), s);
      if (ec != std::errc{} || p != f[7].data() + f[7].size()) throw ParseError(where + ": bad seed");
      r.seed = s;
    }
    if (!f[8].empty()) {
      for (auto item : qcorr::detail::split(f[8], ';')) {
        const auto eq = item.find('=');
        if (eq == std::string_view::npos) throw ParseError(where + ": context item without '='");
        r.context[std::string(item.substr(0, eq))] = std::string(item.substr(eq + 1));
      }
    }
    rec.timestamp = f[9];
    rec.tool_version = f[10];
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace qcorr
