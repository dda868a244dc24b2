// padic: command-line front end.  Exit codes: 0 ok, 2 invalid input, 3 numerical failure.
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "padic/acceptance.hpp"

namespace {

using namespace padic;

constexpr int kInvalid = 2;
constexpr int kNumerical = 3;

struct NumericalFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string format_value(std::complex<double> z) {
  char buf[80];
  if (z.imag() == 0.0)
    std::snprintf(buf, sizeof buf, "%.15g", z.real());
  else
    std::snprintf(buf, sizeof buf, "%.15g%+.15gi", z.real(), z.imag());
  return buf;
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("PADIC_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw ConfigError(std::string("PADIC_SEED is not an unsigned integer: ") + env);
    }
  }
  return 1;
}

/// Writes to `path`, or stdout when empty.
void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text << std::flush;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + path);
  f << text;
}

using CharFn = std::function<std::complex<double>(const PAdicNumber&)>;

/// `omega<N>`, `delta0`, `char:<xi>` or `stable:a=..,alpha=..,p=..`.
CharFn named_cf(const std::string& name, int& p) {
  if (name == "delta0") return [](const PAdicNumber&) { return std::complex<double>(1.0); };
  if (name.rfind("omega", 0) == 0) {
    const RadialCharFn g = RadialCharFn::omega(static_cast<int>(detail::parse_int(name.substr(5))), p);
    return [g](const PAdicNumber& t) { return std::complex<double>(g(t)); };
  }
  if (name.rfind("char:", 0) == 0) {
    const PAdicNumber xi = parse_padic(name.substr(5), p);
    p = xi.prime();
    return [xi](const PAdicNumber& t) {
      return t.is_exact_zero() || xi.is_exact_zero() ? std::complex<double>(1.0) : character_phase(t * xi).to_complex();
    };
  }
  if (name.rfind("stable:", 0) == 0) {
    const StableParams s = config::parse_stable_text(name.substr(7));
    p = s.p;
    return [s](const PAdicNumber& t) { return std::complex<double>(stable_cf(s, t)); };
  }
  throw ConfigError("unknown characteristic function '" + name + "'");
}

struct LawSource {
  std::string stable, measure, law;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--stable", stable, "stable law, e.g. a=1,alpha=1,p=2");
    cmd->add_option("--measure", measure, "Levy measure JSON (file or inline)");
    cmd->add_option("--law", law, "law JSON (file or inline)");
  }

  Json describe() const {
    if (!stable.empty()) return {{"stable", stable}};
    if (!measure.empty()) return {{"measure", config::load(measure)}};
    return {{"law", config::load(law)}};
  }

  Law resolve() const {
    const int given = !stable.empty() + !measure.empty() + !law.empty();
    if (given != 1) throw ConfigError("give exactly one of --stable, --measure, --law");
    if (!stable.empty()) return Law::stable(config::parse_stable_text(stable));
    if (!measure.empty()) return Law::levy(config::parse_measure(config::load(measure)));
    return config::parse_law(config::load(law));
  }

  SelfSimilarLevyMeasure<double> measure_only() const {
    if (!stable.empty() && measure.empty()) {
      const StableParams s = config::parse_stable_text(stable);
      return make_example_measure(s.a, s.alpha, s.p);
    }
    if (measure.empty() || !stable.empty()) throw ConfigError("give exactly one of --stable, --measure");
    return config::parse_measure(config::load(measure));
  }
};

PAdicNumber parse_t(const std::string& text, int p) {
  const PAdicNumber t = parse_padic(text, p);
  if (t.prime() != p) throw ConfigError("--t " + text + " uses p=" + std::to_string(t.prime()) + ", expected " + std::to_string(p));
  return t;
}

int run(int argc, char** argv) {
  CLI::App app{"p-adic probability toolkit"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand
  app.set_version_flag("--version", kVersion);
  std::uint64_t seed = 0;
  bool seed_given = false;
  unsigned threads = 1;
  app.add_option_function<std::uint64_t>("--seed", [&](std::uint64_t s) { seed = s, seed_given = true; },
                                         "random seed (default: $PADIC_SEED or 1)");
  app.add_option("--threads", threads, "worker threads")->check(CLI::Range(1u, 256u));

  // cf-eval
  auto* cf_eval = app.add_subcommand("cf-eval", "evaluate a characteristic function");
  LawSource cf_src;
  cf_src.add_to(cf_eval);
  std::string cf_name;
  std::vector<std::string> cf_ts;
  int cf_p = 0;
  cf_eval->add_option("--cf", cf_name, "named cf: omega<N>, delta0, char:<xi>, stable:<params>");
  cf_eval->add_option("--p", cf_p, "prime for named cfs");
  cf_eval->add_option("--t", cf_ts, "argument, e.g. 1/2@p=3")->required();

  // sample
  auto* sample = app.add_subcommand("sample", "draw samples from a law");
  LawSource sample_src;
  sample_src.add_to(sample);
  std::size_t sample_count = 10;
  int sample_res = -8;
  std::string sample_out;
  sample->add_option("--count", sample_count, "number of samples");
  sample->add_option("--resolution", sample_res, "samples are known modulo p^-resolution");
  sample->add_option("--out", sample_out, "output file (default stdout)");

  // levy-exponent
  auto* lexp = app.add_subcommand("levy-exponent", "evaluate the Levy exponent of a self-similar measure");
  LawSource lexp_src;
  lexp_src.add_to(lexp);
  std::vector<std::string> lexp_ts;
  lexp->add_option("--t", lexp_ts, "argument")->required();

  // levy-invert
  auto* linv = app.add_subcommand("levy-invert", "recover measure masses from the exponent");
  LawSource linv_src;
  linv_src.add_to(linv);
  std::string linv_set;
  double linv_tol = 1e-10;
  linv->add_option("--set", linv_set, "annulus(i,l) or tail(i)")->required();
  linv->add_option("--tol", linv_tol, "accepted relative error bound");

  // classify
  auto* classify = app.add_subcommand("classify", "recognize delta and Haar-cutoff characteristic functions");
  std::string cls_cf;
  int cls_p = 2, cls_radius = 6, cls_depth = 8;
  double cls_tol = 1e-9;
  classify->add_option("--cf", cls_cf, "omega<N>, delta0, char:<xi>, stable:<params>")->required();
  classify->add_option("--p", cls_p, "prime");
  classify->add_option("--radius", cls_radius, "largest probed |t| exponent");
  classify->add_option("--depth", cls_depth, "smallest probed |t| exponent is -depth");
  classify->add_option("--tol", cls_tol, "tolerance on probed values");

  // limit-verify
  auto* verify = app.add_subcommand("limit-verify", "check a limit scenario against its target");
  std::string cfg_path, csv_out, json_out;
  verify->add_option("--config", cfg_path, "scenario JSON (file or inline)")->required();
  verify->add_option("--csv", csv_out, "CSV report path (default stdout)");
  verify->add_option("--json", json_out, "JSON summary path");

  // selftest
  auto* selftest = app.add_subcommand("selftest", "run the acceptance suite");
  std::string st_filter, st_out;
  bool st_corrupt = false;
  selftest->add_option("--filter", st_filter, "criterion id or tag");
  selftest->add_flag("--corrupt-tolerance", st_corrupt, "negative control: make every tolerance unattainable");
  selftest->add_option("--out", st_out, "JSON report path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalid;
  }
  if (!seed_given) seed = default_seed();

  if (*cf_eval) {
    CharFn f;
    int p = cf_p;
    if (!cf_name.empty()) {
      if (!cf_src.stable.empty() || !cf_src.measure.empty() || !cf_src.law.empty())
        throw ConfigError("--cf excludes --stable, --measure, --law");
      if (p == 0) {
        // the prime may come from the argument itself
        p = parse_padic(cf_ts.front()).prime();
      }
      f = named_cf(cf_name, p);
    } else {
      const Law law = cf_src.resolve();
      p = law.prime();
      f = [law](const PAdicNumber& t) { return law.cf(t); };
    }
    for (const auto& text : cf_ts) std::cout << format_value(f(parse_t(text, p))) << "\n";
    return 0;
  }

  if (*sample) {
    const Law law = sample_src.resolve();
    const Sampler s = law.sampler(sample_res);
    Json cfg = sample_src.describe();
    cfg["count"] = sample_count;
    cfg["resolution"] = sample_res;
    std::vector<std::string> lines(sample_count);
    auto work = [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) {
        RandomStream rng(seed, i);
        lines[i] = to_display_string(s.draw(rng));
      }
    };
    const unsigned nt = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, sample_count))));
    std::vector<std::thread> pool;
    const std::size_t chunk = (sample_count + nt - 1) / nt;
    for (unsigned w = 0; w < nt; ++w) pool.emplace_back(work, std::min(sample_count, w * chunk), std::min(sample_count, (w + 1) * chunk));
    for (auto& th : pool) th.join();
    std::string text = Json{{"tool", "padic"}, {"version", kVersion}, {"seed", seed}, {"config", cfg}}.dump() + "\n";
    for (const auto& l : lines) text += l + "\n";
    emit(sample_out, text);
    return 0;
  }

  if (*lexp) {
    const auto m = lexp_src.measure_only();
    for (const auto& text : lexp_ts) std::cout << format_value(levy_exponent(m, parse_t(text, m.prime()))) << "\n";
    return 0;
  }

  if (*linv) {
    const auto m = linv_src.measure_only();
    const ExponentEvaluator ev = exponent_evaluator(m);
    const std::string set(detail::trim(linv_set));
    Recovered r;
    double exact = 0.0;
    if (set.rfind("tail(", 0) == 0 && set.back() == ')') {
      const int i = static_cast<int>(detail::parse_int(set.substr(5, set.size() - 6)));
      r = invert_exponent_tail(ev, i);
      exact = measure_mass(m, TailSet{i});
    } else if (set.rfind("annulus(", 0) == 0 && set.back() == ')') {
      const std::string args = set.substr(8, set.size() - 9);
      const auto comma = args.find(',');
      if (comma == std::string::npos) throw ConfigError("annulus(<i>,<l>)");
      const int i = static_cast<int>(detail::parse_int(args.substr(0, comma)));
      const int l = static_cast<int>(detail::parse_int(args.substr(comma + 1)));
      r = invert_exponent(ev, i, l);
      exact = measure_mass(m, annulus(i, l, m.prime()));
    } else {
      throw ConfigError("--set expects annulus(i,l) or tail(i)");
    }
    const double rel = exact == 0.0 ? std::abs(r.value) : std::abs(r.value - exact) / exact;
    std::printf("recovered %.15g\nerror_bound %.3g\ndirect %.15g\nrelative_difference %.3g\n", r.value, r.error_bound, exact, rel);
    const double bound_rel = exact == 0.0 ? r.error_bound : r.error_bound / exact;
    if (rel > linv_tol || bound_rel > linv_tol) throw NumericalFailure("inversion outside tolerance " + acceptance::fmt(linv_tol));
    return 0;
  }

  if (*classify) {
    int p = cls_p;
    const CharFn f = named_cf(cls_cf, p);
    std::cout << classify_two_valued(f, p, cls_radius, cls_depth, cls_tol).to_string() << "\n";
    return 0;
  }

  if (*verify) {
    Json input = config::load(cfg_path);
    if (seed_given || std::getenv("PADIC_SEED")) input["seed"] = seed;
    if (threads > 1) input["threads"] = threads;
    Scenario sc = config::parse_scenario(input);
    Json eff = config::effective_scenario(input);
    eff.erase("threads");  // not part of the result
    const ConvergenceReport rep = convergence_report(sc);
    emit(csv_out, report_csv(rep, eff, sc.seed));
    if (!json_out.empty()) emit(json_out, report_json(rep, eff, sc.seed).dump(2) + "\n");
    std::ostream& log = csv_out.empty() ? std::cerr : std::cout;
    for (const Verdict& v : rep.verdicts) log << (v.passed ? "PASS " : "FAIL ") << v.check << ": " << v.detail << "\n";
    if (rep.classification) log << "classification " << rep.classification->to_string() << "\n";
    log << "verdict " << (rep.passed() ? "PASS" : "FAIL") << "\n";
    return rep.passed() ? 0 : kNumerical;
  }

  if (*selftest) {
    acceptance::Options opt;
    opt.seed = seed_given || std::getenv("PADIC_SEED") ? seed : opt.seed;
    opt.threads = threads;
    opt.corrupt_tolerance = st_corrupt;
    std::vector<acceptance::Result> results;
    for (const auto& c : acceptance::criteria()) {
      if (!acceptance::matches(c, st_filter)) continue;
      results.push_back(acceptance::run(c, opt));
      const auto& r = results.back();
      std::cout << (r.passed ? "PASS " : "FAIL ") << r.id << " " << r.name << ": " << r.detail << std::endl;
    }
    if (results.empty()) throw ConfigError("no criterion matches '" + st_filter + "'");
    if (!st_out.empty()) emit(st_out, acceptance::to_json(results, opt).dump(2) + "\n");
    for (const auto& r : results)
      if (!r.passed) return kNumerical;
    return 0;
  }
  return kInvalid;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const BudgetError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const PrecisionError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const ToleranceError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const ClassificationError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  }
}
