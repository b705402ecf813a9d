#include "largen/thermal.hpp"

#include <cmath>
#include <numbers>

#include "largen/error.hpp"
#include "largen/format.hpp"

namespace largen {

namespace {

void require_beta(double beta) {
  if (!(beta > 0.0)) throw Error(ErrorKind::Config, "inverse temperature must be > 0 or inf, got " + format_real(beta));
}

}  // namespace

double thermal_width(double omega, double beta) {
  if (std::isinf(beta)) return 0.5 / omega;
  return 0.5 / (omega * std::tanh(0.5 * beta * omega));
}

double gap_residual(const Potential& model, double beta, double x0) {
  const double omega = std::sqrt(2.0 * model.derivative(x0));
  return x0 - thermal_width(omega, beta);
}

double solve_gap_equation(const Potential& model, double beta, double tol) {
  require_beta(beta);
  if (!(tol > 0.0)) throw Error(ErrorKind::Config, "gap tolerance must be > 0");

  constexpr double kUpperLimit = 1e6;
  // g(x) = x - width(omega(x)) is increasing for monotone V', negative near 0.
  double lo = 1e-300;
  double hi = 1.0;
  for (;;) {
    if (!model.check_monotonic(hi))
      throw Error(ErrorKind::NotMonotonic,
                  "potential " + model.to_string() + " is not monotonic on [0, " + format_real(hi) + "]: V'(x) <= 0");
    if (gap_residual(model, beta, hi) > 0.0) break;
    lo = hi;
    hi *= 2.0;
    if (hi > kUpperLimit)
      throw Error(ErrorKind::NoBracket, "gap equation has no sign change on (0, " + format_real(kUpperLimit) + "]");
  }
  if (!(gap_residual(model, beta, lo) < 0.0))
    throw Error(ErrorKind::NoBracket, "gap equation residual is not negative near x = 0");

  for (int it = 0; it < 2000; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (gap_residual(model, beta, mid) < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  const double rlo = std::abs(gap_residual(model, beta, lo));
  const double rhi = std::abs(gap_residual(model, beta, hi));
  const double x0 = rlo <= rhi ? lo : hi;
  const double residual = std::min(rlo, rhi);
  if (!(residual < tol))
    throw Error(ErrorKind::Numerical, "gap equation residual " + format_real(residual) + " above tolerance " +
                                          format_real(tol));
  return x0;
}

double matsubara_x0(double omega, double beta, long n_max, bool tail_correction) {
  if (n_max < 1) throw Error(ErrorKind::Config, "n_max must be >= 1");
  const double w2 = omega * omega;
  const double step = 2.0 * std::numbers::pi / beta;
  // Smallest terms first.
  double sum = 0.0;
  for (long n = n_max; n >= 1; --n) {
    const double wn = step * static_cast<double>(n);
    sum += 2.0 / (wn * wn + w2);
  }
  sum += 1.0 / w2;
  double result = sum / beta;
  if (tail_correction) result += beta / (2.0 * std::numbers::pi * std::numbers::pi * static_cast<double>(n_max));
  return result;
}

double energy_per_dof(const Potential& model, double x0, double x_init) {
  if (!(x0 > 0.0)) throw Error(ErrorKind::Domain, "x0 must be > 0");
  if (!(x_init >= x0)) throw Error(ErrorKind::Domain, "x_init must be >= x0");
  return x0 * model.derivative(x0) + model.value(x_init);
}

double effective_potential(const PerturbedSetup& setup, const Potential& model, double x) {
  return 4.0 * x * (model.value(x) - setup.e_per_dof);
}

double effective_gradient(const PerturbedSetup& setup, const Potential& model, double x) {
  return 4.0 * model.value(x) + 4.0 * x * model.derivative(x) - 4.0 * setup.e_per_dof;
}

PerturbedSetup build_setup(const Potential& model, double beta, double s, double tol) {
  if (!(s >= 0.0) || !std::isfinite(s))
    throw Error(ErrorKind::Config, "perturbation strength s must be finite and >= 0, got " + format_real(s));
  PerturbedSetup setup;
  setup.beta = beta;
  setup.x0 = solve_gap_equation(model, beta, tol);
  setup.s = s;
  setup.x_init = setup.x0 + s;
  setup.e_per_dof = energy_per_dof(model, setup.x0, setup.x_init);
  setup.omega_eff = std::sqrt(2.0 * model.derivative(setup.x0));
  return setup;
}

nlohmann::ordered_json to_json(const PerturbedSetup& setup) {
  nlohmann::ordered_json j;
  if (std::isinf(setup.beta))
    j["beta"] = "inf";
  else
    j["beta"] = setup.beta;
  j["x0"] = setup.x0;
  j["s"] = setup.s;
  j["x_init"] = setup.x_init;
  j["e_per_dof"] = setup.e_per_dof;
  j["omega_eff"] = setup.omega_eff;
  return j;
}

}  // namespace largen
