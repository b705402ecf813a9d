#include <cmath>
#include <limits>

#include "doctest.h"
#include "largen/error.hpp"
#include "largen/format.hpp"
#include "largen/json_io.hpp"

using namespace largen;

TEST_CASE("format_real round-trips doubles") {
  for (double v : {0.0, 1.0, -2.5, 0.1, 1e-300, 2.0414940825367984, 1.0 / 3.0}) {
    CHECK(parse_real(format_real(v)) == v);
  }
  CHECK(format_real(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_real(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(format_real(std::nan("")) == "nan");
}

TEST_CASE("parse_real accepts inf spellings and rejects junk") {
  CHECK(std::isinf(parse_real("inf")));
  CHECK(std::isinf(parse_real("+inf")));
  CHECK(std::isinf(parse_real("infinity")));
  CHECK(parse_real("0.5") == 0.5);
  CHECK_THROWS_AS(parse_real("abc"), Error);
  CHECK_THROWS_AS(parse_real("1.0x"), Error);
  CHECK_THROWS_AS(parse_real(""), Error);
}

TEST_CASE("dump_json prints full precision and keeps key order") {
  nlohmann::ordered_json j;
  j["b"] = 0.1;
  j["a"] = std::numeric_limits<double>::infinity();
  j["c"] = 3;
  CHECK(dump_json(j) == R"({"b":0.10000000000000001,"a":"inf","c":3})");
}

TEST_CASE("exit codes by error kind") {
  CHECK(exit_code_for(ErrorKind::Config) == 2);
  CHECK(exit_code_for(ErrorKind::Domain) == 2);
  CHECK(exit_code_for(ErrorKind::NotMonotonic) == 2);
  CHECK(exit_code_for(ErrorKind::Degenerate) == 2);
  CHECK(exit_code_for(ErrorKind::NoBracket) == 3);
  CHECK(exit_code_for(ErrorKind::NotFound) == 3);
  CHECK(exit_code_for(ErrorKind::Numerical) == 3);
}
