#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "doctest.h"
#include "json.hpp"

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = largen::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("largen_cli_test_" + name);
}

}  // namespace

TEST_CASE("gap") {
  Result r = run({"gap", "--w", "1", "--lambda", "0", "--beta", "0.5"});
  CHECK(r.code == 0);
  CHECK(r.out == "x0=2.0414940825367984 omega=1 residual=0\n");
  r = run({"gap", "--w", "1", "--lambda", "0", "--beta", "inf"});
  CHECK(r.out.rfind("x0=0.5 ", 0) == 0);
  r = run({"gap", "--w", "1", "--beta", "0.5", "--oracle", "100000"});
  CHECK(r.out.find(" oracle=2.04149408") != std::string::npos);
}

TEST_CASE("configuration errors exit with 2") {
  Result r = run({"gap", "--coeffs", "1:-1", "--beta", "1"});
  CHECK(r.code == 2);
  CHECK(r.err.find("monotonic") != std::string::npos);
  CHECK(run({"gap", "--coeffs", "1:0.5", "--w", "1", "--beta", "1"}).code == 2);
  CHECK(run({"gap", "--w", "1"}).code == 2);
  CHECK(run({"gap", "--w", "abc", "--beta", "1"}).code == 2);
  CHECK(run({"bogus"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"floquet", "--w", "1", "--beta", "1", "--s", "0"}).code == 2);
  CHECK(run({"simulate", "--w", "1", "--beta", "1", "--s", "-1"}).code == 2);
  CHECK(run({"scan", "--w", "1", "--lambda", "0", "--beta", "1", "--s", "0"}).code == 2);
}

TEST_CASE("help exits with 0") {
  Result r = run({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("scan") != std::string::npos);
  r = run({"scan", "--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("--assert-stable") != std::string::npos);
}

TEST_CASE("simulate csv") {
  Result r = run({"simulate", "--w", "1", "--lambda", "0", "--beta", "0.5", "--s", "1", "--n-periods", "3"});
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,x,x_dot,u,u_dot,energy_x");
  int rows = 0;
  while (std::getline(in, line)) {
    const double x = std::stod(line.substr(line.find(',') + 1));
    CHECK(x >= 2.0414);
    CHECK(x <= 3.0416);
    ++rows;
  }
  CHECK(rows > 100);

  r = run({"simulate", "--w", "1", "--lambda", "1", "--beta", "0.5", "--s", "0", "--n-periods", "2"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("1.0276717701072606,0,") != std::string::npos);
}

TEST_CASE("floquet json and assertion") {
  Result r = run({"floquet", "--w", "1", "--lambda", "0", "--beta", "0.5", "--s", "1"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["classification"] == "boundary");
  CHECK(std::abs(j["trace"].get<double>() + 2.0) < 1e-7);
  CHECK(run({"floquet", "--w", "1", "--lambda", "1", "--beta", "0.5", "--s", "1", "--assert-stable", "1e-6"}).code ==
        0);
}

TEST_CASE("beats json, envelope csv and control run") {
  const auto env = temp_file("env.csv");
  Result r = run({"beats", "--w", "1", "--lambda", "1", "--beta", "0.5", "--s", "1", "--envelope-csv", env.string()});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["modulation_depth"].get<double>() > 0.1);
  CHECK(j["recurrence_ratio"].get<double>() >= 0.5);
  std::ifstream in(env);
  std::string header;
  std::getline(in, header);
  CHECK(header == "t,amplitude");
  std::filesystem::remove(env);

  r = run({"beats", "--w", "1", "--lambda", "1", "--beta", "0.5", "--s", "1", "--control"});
  REQUIRE(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["modulation_depth"].get<double>() < 1e-6);
}

TEST_CASE("config file with flags taking precedence") {
  const auto cfg = temp_file("cfg.json");
  std::ofstream(cfg) << R"({"w": 2, "lambda": 0, "beta": "inf"})";
  Result r = run({"gap", "--config", cfg.string()});
  CHECK(r.out.rfind("x0=0.25 ", 0) == 0);
  r = run({"gap", "--config", cfg.string(), "--w", "1"});
  CHECK(r.out.rfind("x0=0.5 ", 0) == 0);
  std::filesystem::remove(cfg);
  CHECK(run({"gap", "--config", cfg.string()}).code == 2);
}

TEST_CASE("scan") {
  const auto grid = temp_file("grid.json");
  std::ofstream(grid) << R"({"w": [1], "lambda": [0, 1], "beta": [0.5], "s": [1]})";
  const auto out = temp_file("scan.csv");
  Result r = run({"scan", "--grid", grid.string(), "--assert-stable", "1e-6", "--out", out.string()});
  CHECK(r.code == 0);
  std::ifstream in(out);
  std::stringstream text;
  text << in.rdbuf();
  CHECK(text.str().find("1,1,0.5,1,1.0276717701072606,") != std::string::npos);

  Result inline_axes = run({"scan", "--w", "1", "--lambda", "0,1", "--beta", "0.5", "--s", "1", "--jobs", "3"});
  CHECK(inline_axes.code == 0);
  CHECK(inline_axes.out == text.str());
  std::filesystem::remove(grid);
  std::filesystem::remove(out);

  // a potential whose gap equation fails cannot be certified
  r = run({"scan", "--coeffs", "1:0.5", "--coeffs", "1:-1", "--beta", "1", "--s", "1", "--assert-stable", "1e-6"});
  CHECK(r.code == 3);
  // an impossibly tight tolerance trips the assertion
  r = run({"scan", "--w", "1", "--lambda", "1", "--beta", "0.5", "--s", "1", "--assert-stable", "1e-20"});
  CHECK(r.code == 4);
}
