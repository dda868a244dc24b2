#pragma once

// CSV and JSON renderings of convergence reports.  Numbers are printed with
// %.17g so identical runs give identical bytes.

#include <string>

#include "padic/config.hpp"

namespace padic {

namespace detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace detail

/// Comment lines carrying version, seed and the effective config.
inline std::string provenance_header(const Json& effective_config, std::uint64_t seed, const std::string& prefix = "# ") {
  return prefix + "padic " + kVersion + "\n" + prefix + "seed " + std::to_string(seed) + "\n" + prefix + "config " +
         effective_config.dump() + "\n";
}

inline std::string report_csv(const ConvergenceReport& rep, const Json& effective_config, std::uint64_t seed) {
  std::string out = provenance_header(effective_config, seed);
  out += "n,point,theoretical,empirical,residual,band\n";
  for (const ReportRow& r : rep.rows) {
    out += std::to_string(r.n) + "," + detail::csv_field(r.point) + "," + Law::format_double(r.theoretical) + "," +
           (r.empirical ? Law::format_double(*r.empirical) : "") + "," + Law::format_double(r.residual) + "," +
           (r.band ? Law::format_double(*r.band) : "") + "\n";
  }
  return out;
}

inline Json report_json(const ConvergenceReport& rep, const Json& effective_config, std::uint64_t seed) {
  Json verdicts = Json::array();
  for (const Verdict& v : rep.verdicts) verdicts.push_back({{"check", v.check}, {"passed", v.passed}, {"detail", v.detail}});
  Json j = {{"tool", "padic"},
            {"version", kVersion},
            {"seed", seed},
            {"config", effective_config},
            {"name", rep.name},
            {"sup_cf_distance", rep.sup_cf_distance},
            {"verdicts", verdicts},
            {"passed", rep.passed()}};
  if (rep.classification) j["classification"] = rep.classification->to_string();
  return j;
}

}  // namespace padic
