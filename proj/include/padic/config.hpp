#pragma once

// JSON documents for measures, laws and scenarios.  Every object is checked
// against its list of known keys; anything else is a validation error.

#include "json.hpp"

#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

#include "padic/limits.hpp"

namespace padic {

using Json = nlohmann::json;

/// Raised for malformed or inconsistent configuration (CLI exit code 2).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr const char* kVersion = "0.1.0";

namespace config {

inline void check_keys(const Json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected a JSON object");
  const std::set<std::string> known(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items())
    if (!known.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
}

template <class T>
T get(const Json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + ": missing key '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

template <class T>
T get_or(const Json& j, const char* key, T fallback, const std::string& where) {
  return j.contains(key) ? get<T>(j, key, where) : fallback;
}

/// A number or a "m/n" string.
inline double get_real(const Json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + ": missing key '" + key + "'");
  const Json& v = j.at(key);
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return parse_scalar<double>(v.get<std::string>());
  throw ConfigError(where + "." + key + ": expected a number or a fraction string");
}

inline std::pair<long long, long long> get_fraction(const Json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + ": missing key '" + key + "'");
  const Json& v = j.at(key);
  if (v.is_number_integer()) return {v.get<long long>(), 1};
  if (v.is_string()) {
    auto f = detail::parse_fraction(v.get<std::string>());
    if (f.second == 0) throw ConfigError(where + "." + key + ": zero denominator");
    return f;
  }
  throw ConfigError(where + "." + key + ": expected an integer or a fraction string");
}

/// Reads a file, or takes the text itself when it starts with '{'.
inline Json load(const std::string& path_or_text) {
  std::string text = path_or_text;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos || text[first] != '{') {
    std::ifstream in(path_or_text);
    if (!in) throw ConfigError("cannot read config '" + path_or_text + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
}

inline StableParams parse_stable(const Json& j, const std::string& where) {
  check_keys(j, {"a", "alpha", "p"}, where);
  StableParams s{get_real(j, "a", where), get_real(j, "alpha", where), get<int>(j, "p", where)};
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(where + ": " + e.what());
  }
  return s;
}

/// `a=1,alpha=1,p=2`
inline StableParams parse_stable_text(const std::string& text) {
  Json j = Json::object();
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError("stable parameters: expected key=value, got '" + item + "'");
    const std::string key(detail::trim(item.substr(0, eq))), value(detail::trim(item.substr(eq + 1)));
    if (key == "p")
      j[key] = static_cast<int>(detail::parse_int(value));
    else
      j[key] = value;
  }
  return parse_stable(j, "stable");
}

/// `{p, beta, gamma0, fundamental: [{sphere, balls: [{center, radius_exp, weight}]}]}` or `{stable: {...}}`.
inline SelfSimilarLevyMeasure<double> parse_measure(const Json& j, const std::string& where = "measure") {
  if (j.is_object() && j.contains("stable")) {
    check_keys(j, {"stable"}, where);
    const StableParams s = parse_stable(j.at("stable"), where + ".stable");
    return make_example_measure(s.a, s.alpha, s.p);
  }
  check_keys(j, {"p", "beta", "gamma0", "fundamental"}, where);
  const int p = get<int>(j, "p", where);
  require_prime(p);
  const double beta = get_real(j, "beta", where);
  const auto [gn, gd] = get_fraction(j, "gamma0", where);
  const Json& fund = j.at("fundamental");
  if (!fund.is_array()) throw ConfigError(where + ".fundamental: expected an array");
  SelfSimilarLevyMeasure<double>::Fundamental data;
  for (std::size_t a = 0; a < fund.size(); ++a) {
    const std::string w = where + ".fundamental[" + std::to_string(a) + "]";
    check_keys(fund[a], {"sphere", "balls"}, w);
    const int r = get<int>(fund[a], "sphere", w);
    if (r < 0) throw ConfigError(w + ": sphere index must be >= 0");
    if (data.size() <= static_cast<std::size_t>(r)) data.resize(static_cast<std::size_t>(r) + 1);
    const Json& balls = fund[a].at("balls");
    for (std::size_t b = 0; b < balls.size(); ++b) {
      const std::string wb = w + ".balls[" + std::to_string(b) + "]";
      check_keys(balls[b], {"center", "radius_exp", "weight"}, wb);
      const int radius = get<int>(balls[b], "radius_exp", wb);
      const PAdicNumber c = parse_padic(get<std::string>(balls[b], "center", wb), p, kDefaultPrecision);
      data[static_cast<std::size_t>(r)].push_back({Ball(c, radius), get_real(balls[b], "weight", wb)});
    }
  }
  try {
    return {p, beta, gn, gd, std::move(data)};
  } catch (const std::invalid_argument& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

/// `{point: "<rational>", p}`, `{haar: "ball(c,R)", p}`, `{stable: {...}}`, `{levy: <measure>}`.
inline Law parse_law(const Json& j, const std::string& where = "law") {
  if (!j.is_object() || j.size() == 0) throw ConfigError(where + ": expected a law object");
  if (j.contains("stable")) {
    check_keys(j, {"stable"}, where);
    return Law::stable(parse_stable(j.at("stable"), where + ".stable"));
  }
  if (j.contains("levy")) {
    check_keys(j, {"levy"}, where);
    return Law::levy(parse_measure(j.at("levy"), where + ".levy"));
  }
  if (j.contains("point")) {
    check_keys(j, {"point", "p"}, where);
    const int p = get<int>(j, "p", where);
    return Law::point(parse_padic(get<std::string>(j, "point", where), p, kDefaultPrecision));
  }
  if (j.contains("haar")) {
    check_keys(j, {"haar", "p"}, where);
    const int p = get<int>(j, "p", where);
    const CompactOpenSet s = parse_set(get<std::string>(j, "haar", where), p);
    if (s.balls().size() != 1) throw ConfigError(where + ".haar: expected a single ball");
    return Law::haar(s.balls().front());
  }
  throw ConfigError(where + ": expected one of point, haar, stable, levy");
}

/// `{mode: "geometric", p, gamma0, beta}` or `{mode: "explicit", p, B: [...], k: [...], gamma0?, beta?}`.
inline LimitScheme parse_scheme(const Json& j, int n_max, const std::string& where = "scheme") {
  const std::string mode = get<std::string>(j, "mode", where);
  const int p = get<int>(j, "p", where);
  if (mode == "geometric") {
    check_keys(j, {"mode", "p", "gamma0", "beta"}, where);
    const auto [gn, gd] = get_fraction(j, "gamma0", where);
    return LimitScheme::geometric(p, gn, gd, get_real(j, "beta", where), n_max);
  }
  if (mode == "explicit") {
    check_keys(j, {"mode", "p", "B", "k", "gamma0", "beta"}, where);
    std::vector<std::pair<long long, long long>> norms;
    const Json& bs = j.at("B");
    for (std::size_t i = 0; i < bs.size(); ++i) {
      Json one = {{"x", bs[i]}};
      norms.push_back(get_fraction(one, "x", where + ".B[" + std::to_string(i) + "]"));
    }
    auto counts = get<std::vector<std::uint64_t>>(j, "k", where);
    std::optional<std::pair<long long, long long>> gamma0;
    if (j.contains("gamma0")) gamma0 = get_fraction(j, "gamma0", where);
    std::optional<double> beta;
    if (j.contains("beta")) beta = get_real(j, "beta", where);
    if (static_cast<int>(norms.size()) < n_max) throw ConfigError(where + ": explicit lists shorter than n_max");
    norms.resize(static_cast<std::size_t>(n_max));
    counts.resize(std::min(counts.size(), static_cast<std::size_t>(n_max)));
    return LimitScheme::explicit_list(p, std::move(norms), std::move(counts), gamma0, beta);
  }
  throw ConfigError(where + ".mode: expected 'geometric' or 'explicit'");
}

/// Defaults of the scenario document, echoed into every output.
inline Json scenario_defaults() {
  return {{"grid", {{"k_min", -6}, {"k_max", 6}, {"units", {1}}}},
          {"balls", Json::array()},
          {"phi_sets", Json::array()},
          {"m", 0},
          {"mc_n", Json::array()},
          {"resolution", -8},
          {"seed", 1},
          {"threads", 1},
          {"cf_tolerance", 1e-12},
          {"phi_tolerance", 5e-3},
          {"phi_monotone", true},
          {"scale_tolerance", 1e-12},
          {"exact_beyond_scale", false}};
}

/// The scenario document with defaults filled in.
inline Json effective_scenario(const Json& j) {
  Json eff = scenario_defaults();
  eff.merge_patch(j);
  return eff;
}

inline Scenario parse_scenario(const Json& input) {
  const std::string where = "scenario";
  check_keys(input,
             {"name", "law", "scheme", "target", "grid", "balls", "phi_sets", "m", "mc_n", "resolution", "seed", "n_max",
              "threads", "cf_tolerance", "phi_tolerance", "phi_monotone", "scale_tolerance", "exact_beyond_scale",
              "expect_positive", "classify"},
             where);
  const Json j = effective_scenario(input);
  Scenario sc;
  sc.name = get_or<std::string>(j, "name", "scenario", where);
  sc.law = parse_law(j.at("law"), "law");
  const int p = sc.law.prime();
  const int n_max = get<int>(j, "n_max", where);
  if (n_max < 1) throw ConfigError("scenario.n_max must be >= 1");
  sc.scheme = parse_scheme(j.at("scheme"), n_max);
  if (sc.scheme.prime() != p) throw ConfigError("scheme and law use different primes");
  if (j.contains("target")) {
    sc.target = parse_law(j.at("target"), "target");
    if (sc.target->prime() != p) throw ConfigError("target and law use different primes");
  }
  const Json& g = j.at("grid");
  check_keys(g, {"k_min", "k_max", "units"}, "grid");
  sc.grid.k_min = get<int>(g, "k_min", "grid");
  sc.grid.k_max = get<int>(g, "k_max", "grid");
  sc.grid.units = get<std::vector<long long>>(g, "units", "grid");
  if (sc.grid.k_min > sc.grid.k_max || sc.grid.units.empty()) throw ConfigError("grid: empty grid");
  for (const auto& b : j.at("balls")) {
    const CompactOpenSet s = parse_set(b.get<std::string>(), p);
    for (const Ball& ball : s.balls()) sc.balls.push_back(ball);
  }
  for (const auto& entry : j.at("phi_sets")) {
    const std::string text = entry.get<std::string>();
    if (text.rfind("tail(", 0) == 0 && text.back() == ')') {
      const int i = static_cast<int>(detail::parse_int(std::string_view(text).substr(5, text.size() - 6)));
      sc.phi_sets.push_back({"M(" + std::to_string(i) + ",inf)", TailSet{i}});
    } else {
      sc.phi_sets.push_back({text, parse_set(text, p)});
    }
  }
  const long long m = get<long long>(j, "m", where);
  if (m < 0) throw ConfigError("scenario.m must be >= 0");
  sc.m = static_cast<std::size_t>(m);
  sc.mc_n = get<std::vector<int>>(j, "mc_n", where);
  for (int n : sc.mc_n)
    if (n < 0 || n > n_max) throw ConfigError("scenario.mc_n entries must lie in [0, n_max]");
  sc.resolution = get<int>(j, "resolution", where);
  sc.seed = get<std::uint64_t>(j, "seed", where);
  sc.threads = get<unsigned>(j, "threads", where);
  sc.cf_tolerance = get_real(j, "cf_tolerance", where);
  sc.phi_tolerance = get_real(j, "phi_tolerance", where);
  sc.phi_monotone = get<bool>(j, "phi_monotone", where);
  sc.scale_tolerance = get_real(j, "scale_tolerance", where);
  sc.exact_beyond_scale = get<bool>(j, "exact_beyond_scale", where);
  if (j.contains("expect_positive")) sc.expect_positive = get<bool>(j, "expect_positive", where);
  if (j.contains("classify")) {
    const Json& c = j.at("classify");
    check_keys(c, {"radius", "depth", "expect"}, "classify");
    sc.classify = ClassifySpec{get_or<int>(c, "radius", 6, "classify"), get_or<int>(c, "depth", 8, "classify"),
                               get_or<std::string>(c, "expect", "", "classify")};
  }
  return sc;
}

}  // namespace config
}  // namespace padic
