#include <cmath>
#include <random>

#include "doctest.h"
#include "largen/error.hpp"
#include "largen/thermal.hpp"

using namespace largen;
using doctest::Approx;

namespace {

double coth_width(double w, double beta) { return 1.0 / (2.0 * w * std::tanh(0.5 * beta * w)); }

// Self-consistency by bisection on the Matsubara sum, independent of the solver.
double matsubara_gap(const Potential& v, double beta, long n_max) {
  double lo = 1e-6, hi = 10.0;
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double g = mid - matsubara_x0(std::sqrt(2.0 * v.derivative(mid)), beta, n_max);
    (g > 0.0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("free theory closed form") {
  CHECK(solve_gap_equation(Potential::quartic(1, 0), kInfiniteBeta) == Approx(0.5).epsilon(1e-14));
  CHECK(solve_gap_equation(Potential::quartic(1, 0), 0.5) == Approx(2.0414940825367984).epsilon(1e-13));
  for (double w : {0.5, 1.0, 2.0})
    for (double beta : {0.25, 0.5, 1.0, 2.0})
      CHECK(std::abs(solve_gap_equation(Potential::quartic(w, 0), beta) - coth_width(w, beta)) < 1e-10);
}

TEST_CASE("paper model x0 against a Matsubara self-consistency oracle") {
  const Potential v = Potential::quartic(1, 1);
  const double x0 = solve_gap_equation(v, 0.5);
  CHECK(x0 == Approx(1.0276717701072605).epsilon(1e-13));
  CHECK(std::abs(gap_residual(v, 0.5, x0)) < 1e-12);
  CHECK(std::abs(matsubara_gap(v, 0.5, 1000000) - x0) < 1e-6);
}

TEST_CASE("matsubara oracle") {
  CHECK(std::abs(matsubara_x0(1.0, 0.5, 100000) - 2.041494) < 1e-6);
  CHECK(std::abs(matsubara_x0(1.0, 100.0, 1000000) - 0.5) < 1e-5);

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> omega(0.2, 3.0), beta(0.1, 5.0);
  for (int i = 0; i < 20; ++i) {
    const double w = omega(rng), b = beta(rng);
    CHECK(std::abs(matsubara_x0(w, b, 100000) - coth_width(w, b)) < 1e-6);
  }
}

TEST_CASE("matsubara truncation error falls with n_max") {
  const double exact = coth_width(1.0, 0.5);
  // Plain truncation: error ~ beta / (2 pi^2 n), halves when n doubles.
  const double e1 = std::abs(matsubara_x0(1.0, 0.5, 1000, false) - exact);
  const double e2 = std::abs(matsubara_x0(1.0, 0.5, 2000, false) - exact);
  CHECK(e1 / e2 == Approx(2.0).epsilon(0.01));
  // With the tail term the leading error cancels and the rest falls as 1/n^2.
  const double t1 = std::abs(matsubara_x0(1.0, 0.5, 1000) - exact);
  const double t2 = std::abs(matsubara_x0(1.0, 0.5, 2000) - exact);
  CHECK(t1 < e1 * 1e-2);
  CHECK(t1 / t2 == Approx(4.0).epsilon(0.05));
}

TEST_CASE("x0 grows with temperature") {
  for (const Potential& v : {Potential::quartic(1, 0), Potential::quartic(1, 1), Potential::parse("1:0.2,3:0.5")}) {
    double prev = solve_gap_equation(v, kInfiniteBeta);
    for (double beta : {8.0, 4.0, 2.0, 1.0, 0.5, 0.25}) {
      const double x0 = solve_gap_equation(v, beta);
      CHECK(x0 > prev);
      prev = x0;
    }
  }
}

TEST_CASE("gap equation failures") {
  CHECK_THROWS_AS(solve_gap_equation(Potential::parse("1:-1"), 1.0), Error);
  try {
    solve_gap_equation(Potential::parse("1:-1"), 1.0);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotMonotonic);
  }
  CHECK_THROWS_AS(solve_gap_equation(Potential::quartic(1, 0), -1.0), Error);
}

TEST_CASE("setup and effective potential") {
  const Potential v = Potential::quartic(1, 0);
  const PerturbedSetup s = build_setup(v, 0.5, 1.0);
  CHECK(s.x0 == Approx(2.041493).epsilon(1e-6));
  CHECK(s.x_init == Approx(3.041493).epsilon(1e-6));
  CHECK(s.e_per_dof == Approx(2.541493).epsilon(1e-6));
  CHECK(s.omega_eff == Approx(1.0).epsilon(1e-14));
  CHECK(energy_per_dof(v, s.x0, s.x_init) == s.e_per_dof);
  CHECK(effective_potential(s, v, 0.0) == 0.0);
  CHECK(effective_gradient(s, v, s.x_init) == Approx(2.0).epsilon(1e-12));

  // The gradient vanishes at x0 only when s = 0.
  const PerturbedSetup eq = build_setup(Potential::quartic(1, 1), 0.5, 0.0);
  CHECK(eq.x_init == eq.x0);
  CHECK(std::abs(effective_gradient(eq, Potential::quartic(1, 1), eq.x0)) < 1e-13);

  const PerturbedSetup cold = build_setup(Potential::quartic(2, 0), kInfiniteBeta, 0.3);
  CHECK(cold.x0 == Approx(0.25));
  CHECK(cold.omega_eff == Approx(2.0));
  CHECK_THROWS_AS(build_setup(v, 0.5, -1.0), Error);
}

TEST_CASE("paper model frozen setup") {
  const PerturbedSetup s = build_setup(Potential::quartic(1, 1), 0.5, 1.0);
  CHECK(s.e_per_dof == Approx(3.0835896054674334).epsilon(1e-13));
}

TEST_CASE("effective gradient matches finite differences") {
  const Potential v = Potential::parse("1:0.3,2:0.7,4:0.05");
  const PerturbedSetup s = build_setup(v, 1.3, 0.4);
  for (double x : {0.2, 0.8, 1.5}) {
    const double h = 1e-5;
    CHECK((effective_potential(s, v, x + h) - effective_potential(s, v, x - h)) / (2 * h) ==
          Approx(effective_gradient(s, v, x)).epsilon(1e-8));
  }
}
