#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "largen/error.hpp"
#include "largen/scan.hpp"

using namespace largen;
using doctest::Approx;

TEST_CASE("single free-theory point") {
  GridSpec g;
  g.w = {1};
  g.lambda = {0};
  g.beta = {0.5};
  g.s = {1};
  const auto rec = run_scan(g);
  REQUIRE(rec.size() == 1);
  CHECK(rec[0].classification == Stability::Boundary);
  CHECK(rec[0].trace == Approx(-2.0).epsilon(1e-9));
  CHECK(rec[0].max_abs_multiplier_deviation < 1e-8);
  CHECK(assert_no_resonance(rec, 1e-6));
}

TEST_CASE("grid validation") {
  GridSpec g = GridSpec::default_grid();
  CHECK(g.size() == 192);
  g.validate();
  g.s.push_back(0.0);
  CHECK_THROWS_AS(g.validate(), Error);
  g = GridSpec::default_grid();
  g.coeffs = {"1:0.5"};
  CHECK_THROWS_AS(g.validate(), Error);
  g = GridSpec::default_grid();
  g.max_points = 100;
  CHECK_THROWS_AS(g.validate(), Error);
  CHECK_THROWS_AS(GridSpec::from_json(nlohmann::json::parse(R"({"w":[1],"lambda":[0],"beta":[1],"s":"x"})")), Error);
  const GridSpec j = GridSpec::from_json(nlohmann::json::parse(R"({"w":[1],"lambda":[0],"beta":["inf"],"s":[1]})"));
  CHECK(std::isinf(j.beta[0]));
}

TEST_CASE("scan output does not depend on the number of jobs") {
  GridSpec g = GridSpec::default_grid();
  g.w = {1.0, 2.0};
  g.lambda = {0.0, 1.0};
  std::ostringstream a, b;
  write_scan_csv(a, run_scan(g, 1), false);
  write_scan_csv(b, run_scan(g, 8), false);
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind("w,lambda,beta,s,x0,x_f,period,trace,", 0) == 0);
}

TEST_CASE("row-major order and free-theory rows") {
  GridSpec g = GridSpec::default_grid();
  g.lambda = {0.0};
  const auto rec = run_scan(g, 4);
  REQUIRE(rec.size() == 48);
  CHECK(rec[1].s == g.s[1]);
  CHECK(rec[4].beta == g.beta[1]);
  CHECK(rec[16].w == g.w[1]);
  for (const auto& r : rec) {
    CHECK(std::abs(r.period - std::numbers::pi / r.w) < 1e-7);
    CHECK(std::abs(r.trace + 2.0) < 1e-7);
  }
}

TEST_CASE("generic potentials") {
  GridSpec g;
  g.coeffs = {"1:0.5,2:0.25", "1:0.2,3:0.1"};
  g.beta = {1.0};
  g.s = {0.5};
  const auto rec = run_scan(g, 2);
  REQUIRE(rec.size() == 2);
  for (const auto& r : rec) CHECK(r.classification == Stability::Oscillatory);
  std::ostringstream os;
  write_scan_csv(os, rec, true);
  CHECK(os.str().find("\"1:0.20000000000000001,3:0.10000000000000001\"") != std::string::npos);
}

TEST_CASE("failing points are kept in place") {
  GridSpec g;
  g.coeffs = {"1:0.5", "1:-1"};
  g.beta = {1.0};
  g.s = {1.0};
  const auto rec = run_scan(g);
  REQUIRE(rec.size() == 2);
  CHECK_FALSE(rec[0].error);
  CHECK(rec[1].error);
  CHECK_THROWS_AS(assert_no_resonance(rec, 1e-6), Error);
  std::ostringstream os;
  write_scan_csv(os, rec, true);
  CHECK(os.str().find(",error,") != std::string::npos);
}

TEST_CASE("resonance check on a synthetic record list") {
  ScanRecord ok;
  ok.trace = -1.5;
  ok.classification = Stability::Oscillatory;
  ScanRecord bad;
  const MonodromyResult m = make_monodromy(1.0, 2.0, 0.0, 0.0, 0.5);
  bad.trace = m.trace;
  bad.classification = m.classification;
  bad.max_abs_multiplier_deviation = m.max_abs_multiplier_deviation();
  CHECK(assert_no_resonance(std::vector<ScanRecord>{ok}, 1e-6));
  CHECK_FALSE(assert_no_resonance(std::vector<ScanRecord>{ok, bad}, 1e-6));
}
