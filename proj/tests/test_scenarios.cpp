#include <catch2/catch_amalgamated.hpp>

#include "nflab/report.hpp"
#include "nflab/scenario.hpp"

using namespace nflab;
using Catch::Approx;

TEST_CASE("dichotomy scenario passes and pins the exponent") {
  Config cfg;
  scenario::DichotomyParams p;
  auto reports = scenario::run_dichotomy(p, cfg);
  REQUIRE(reports.size() == 2);
  for (const auto& r : reports) {
    INFO(r.id);
    CHECK(r.verdict == Verdict::Pass);
  }
  // margins: final arg/mod errors within the scenario tolerance
  for (const auto& [name, v] : reports[1].margins) {
    if (name == "final_arg_error" || name == "final_mod_error") CHECK(v <= 0.05);
  }
}

TEST_CASE("conjugate dichotomy lands on the other alternative") {
  Config cfg;
  scenario::DichotomyParams p;
  p.conjugate = true;
  auto reports = scenario::run_dichotomy(p, cfg);
  CHECK(reports[0].verdict == Verdict::Pass);
  CHECK(reports[1].verdict == Verdict::Pass);
}

TEST_CASE("dichotomy wants at least three members") {
  Config cfg;
  scenario::DichotomyParams p;
  p.ks = {10.0};
  CHECK_THROWS_AS(scenario::run_dichotomy(p, cfg), Error);
}

TEST_CASE("origin blow-up scenario") {
  Config cfg;
  scenario::OriginBlowupParams p;
  auto reports = scenario::run_origin_blowup(p, cfg);
  REQUIRE(reports.size() == 1);
  CHECK(reports[0].verdict == Verdict::Pass);
  double inner = 0.0, annulus = 1e300;
  for (const auto& [name, v] : reports[0].margins) {
    if (name == "final_inner_sup") inner = v;
    if (name == "annulus_max") annulus = v;
  }
  CHECK(inner == Approx(6400.0).epsilon(1e-3));  // k = 80 peak
  CHECK(annulus <= 2.0);
}

TEST_CASE("factored form scenario") {
  Config cfg;
  scenario::FactoredFormParams p;
  auto reports = scenario::run_factored_form(p, cfg);
  REQUIRE(reports.size() == 1);
  CHECK(reports[0].verdict == Verdict::Pass);
}

TEST_CASE("ring min/max scenario and its premise failure") {
  Config cfg;
  scenario::MinMaxRescaleParams p;
  auto reports = scenario::run_minmax_rescale(p, cfg);
  REQUIRE(reports.size() == 1);
  CHECK(reports[0].verdict == Verdict::Pass);

  scenario::MinMaxRescaleParams flat;
  flat.expr = "1";
  auto flat_reports = scenario::run_minmax_rescale(flat, cfg);
  CHECK(flat_reports[0].verdict == Verdict::HypothesisFailed);

  scenario::MinMaxRescaleParams bad;
  bad.radii = {2.0, 1.0};
  CHECK_THROWS_AS(scenario::run_minmax_rescale(bad, cfg), Error);
}

TEST_CASE("config hashing is stable and sensitive") {
  Config a, b;
  CHECK(config_hash(a) == config_hash(b));
  b.b_used = 2.0;
  CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("reports serialize deterministically") {
  CheckReport rep;
  rep.id = "demo";
  rep.margin("m", 0.125);
  rep.value("v", "x");
  const auto j1 = report_to_json(rep, "cafe", true);
  const auto j2 = report_to_json(rep, "cafe", true);
  CHECK(j1.dump() == j2.dump());
  CHECK(j1["check"] == "demo");
  CHECK(j1["verdict"] == "Pass");
  CHECK_FALSE(j1.contains("timing_ms"));
  rep.fail("broke", Json{{"z", 1.5}});
  const auto j3 = report_to_json(rep, "cafe", false);
  CHECK(j3["verdict"] == "Fail");
  CHECK(j3["offending"]["reason"] == "broke");
  CHECK(j3.contains("timing_ms"));
}
