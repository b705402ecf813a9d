#pragma once

#include <array>
#include <complex>
#include <string>

#include "json.hpp"
#include "largen/dynamics.hpp"

namespace largen {

enum class PeriodMethod { Events, Quadrature };

/// Period of x(t), which oscillates between the inner turning point x_f and x_max = x_init.
struct PeriodEstimate {
  double period = 0.0;
  PeriodMethod method = PeriodMethod::Events;
  double x_f = 0.0;
  double x_max = 0.0;
};

enum class Stability { Oscillatory, Resonant, Boundary };

inline constexpr double kDefaultBoundaryBand = 1e-9;
inline constexpr double kMaxDetError = 1e-6;

/// One-period map of (u, u') for u'' = -2 V'(x(t)) u, with the Floquet data derived from it.
struct MonodromyResult {
  double period = 0.0;
  double m11 = 0.0, m12 = 0.0, m21 = 0.0, m22 = 0.0;
  double trace = 0.0;
  double det_error = 0.0;       // |det M - 1|
  double symmetry_error = 0.0;  // |m11 - m22|, zero by time-reversal symmetry of x(t)
  std::array<std::complex<double>, 2> multipliers{};
  Stability classification = Stability::Boundary;

  /// max_i ||lambda_i| - 1|
  double max_abs_multiplier_deviation() const;
};

/// Assembles trace, errors, eigenvalues and the class from the four entries.
MonodromyResult make_monodromy(double period, double m11, double m12, double m21, double m22,
                               double tol_b = kDefaultBoundaryBand);

/// Inner turning point: the largest root of Veff(x) = Veff(x_init) below x_init.
double turning_point_root(const PerturbedSetup& setup, const Potential& model);

/// T = 2 t1 with t1 the first zero of x' (arrival at x_f); the second zero must sit at 2 t1.
PeriodEstimate period_by_events(const PerturbedSetup& setup, const Potential& model, const IntegratorConfig& config);

/// T = 2 int_{x_f}^{x_init} dx / sqrt(2 (Veff(x_init) - Veff(x))) by composite Gauss-Legendre
/// after x = c - A cos(theta), which makes the integrand regular at simple turning points.
PeriodEstimate period_by_quadrature(const PerturbedSetup& setup, const Potential& model, double x_f);

/// Integrates the basis solutions (1, 0) and (0, 1) over [0, period] alongside
/// a single shared x(t) and builds the monodromy matrix column-wise.
MonodromyResult monodromy_matrix(const PerturbedSetup& setup, const Potential& model, const IntegratorConfig& config,
                                 double period, double tol_b = kDefaultBoundaryBand);

/// oscillatory: |trace| < 2 - tol_b; resonant: |trace| > 2 + tol_b; boundary otherwise.
/// Throws Error(Numerical) when det_error >= 1e-6.
Stability classify_stability(const MonodromyResult& result, double tol_b = kDefaultBoundaryBand);

std::string to_string(Stability s);

nlohmann::ordered_json to_json(const MonodromyResult& result, double x_f);

}  // namespace largen
