#include <gtest/gtest.h>

#include "padic/report.hpp"

using namespace padic;

TEST(Config, StableText) {
  const auto s = config::parse_stable_text("a=1.5,alpha=0.7,p=3");
  EXPECT_EQ(s.a, 1.5);
  EXPECT_EQ(s.alpha, 0.7);
  EXPECT_EQ(s.p, 3);
  EXPECT_THROW(config::parse_stable_text("a=1,alpha=1"), ConfigError);
  EXPECT_THROW(config::parse_stable_text("a=1,alpha=1,p=2,q=3"), ConfigError);
  EXPECT_THROW(config::parse_stable_text("a=1,alpha=1,p=6"), std::invalid_argument);
  EXPECT_THROW(config::parse_stable_text("a=0,alpha=1,p=2"), std::invalid_argument);
}

TEST(Config, MeasureDocumentMatchesExample) {
  const Json j = Json::parse(R"({"p": 2, "beta": "1/2", "gamma0": "2",
      "fundamental": [{"sphere": 0, "balls": [{"center": "1", "radius_exp": -1, "weight": "2/3"}]}]})");
  EXPECT_TRUE(config::parse_measure(j) == make_example_measure(1.0, 1.0, 2));
  EXPECT_TRUE(config::parse_measure(Json::parse(R"({"stable": {"a": 1, "alpha": 1, "p": 2}})")) ==
              make_example_measure(1.0, 1.0, 2));
}

TEST(Config, UnknownKeysRejected) {
  EXPECT_THROW(config::parse_measure(Json::parse(R"({"p": 2, "beta": 0.5, "gamma0": "2", "fundamental": [], "extra": 1})")),
               ConfigError);
  EXPECT_THROW(config::parse_law(Json::parse(R"({"stable": {"a": 1, "alpha": 1, "p": 2}, "p": 2})")), ConfigError);
  EXPECT_THROW(config::parse_scenario(Json::parse(R"({"law": {"point": "0", "p": 2},
      "scheme": {"mode": "geometric", "p": 2, "gamma0": "2", "beta": 0.5}, "n_max": 2, "sed": 1})")),
               ConfigError);
}

TEST(Config, ScenarioDefaultsAreEchoed) {
  const Json in = Json::parse(R"({"law": {"stable": {"a": 1, "alpha": 1, "p": 2}},
      "scheme": {"mode": "geometric", "p": 2, "gamma0": "2", "beta": "1/2"}, "n_max": 3, "seed": 9})");
  const Json eff = config::effective_scenario(in);
  EXPECT_EQ(eff.at("seed"), 9);
  EXPECT_EQ(eff.at("resolution"), -8);
  EXPECT_EQ(eff.at("cf_tolerance"), 1e-12);
  const Scenario sc = config::parse_scenario(in);
  EXPECT_EQ(sc.seed, 9u);
  EXPECT_EQ(sc.scheme.count(3), 8u);
}

TEST(Config, SchemeValidation) {
  EXPECT_THROW(config::parse_scheme(Json::parse(R"({"mode": "spiral", "p": 2})"), 3), ConfigError);
  EXPECT_THROW(config::parse_scheme(Json::parse(R"({"mode": "explicit", "p": 2, "B": ["1/2"], "k": [1]})"), 3), ConfigError);
  const auto s = config::parse_scheme(Json::parse(R"({"mode": "explicit", "p": 3, "B": ["1/3", "1/9"], "k": [1, 4]})"), 2);
  EXPECT_EQ(s.count(2), 4u);
}

TEST(Config, LoadInlineOrFile) {
  EXPECT_EQ(config::load(R"({"a": 1})").at("a"), 1);
  EXPECT_THROW(config::load("/nonexistent/file.json"), ConfigError);
}

TEST(Report, CsvCarriesProvenance) {
  Scenario sc;
  sc.law = Law::stable({1.0, 1.0, 2});
  sc.scheme = LimitScheme::geometric(2, 2, 1, 0.5, 2);
  sc.target = sc.law;
  sc.grid = GridSpec{-1, 1, {1}};
  const Json cfg = {{"name", "x,y"}};
  const std::string csv = report_csv(convergence_report(sc), cfg, 77);
  EXPECT_EQ(csv.rfind("# padic " + std::string(kVersion) + "\n# seed 77\n# config {\"name\":\"x,y\"}\n", 0), 0u);
  EXPECT_NE(csv.find("n,point,theoretical,empirical,residual,band\n"), std::string::npos);
  const Json j = report_json(convergence_report(sc), cfg, 77);
  EXPECT_EQ(j.at("seed"), 77);
  EXPECT_EQ(j.at("config"), cfg);
  EXPECT_TRUE(j.at("passed").get<bool>());
}

TEST(Report, CsvFieldQuoting) {
  EXPECT_EQ(detail::csv_field("plain"), "plain");
  EXPECT_EQ(detail::csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(detail::csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
}
