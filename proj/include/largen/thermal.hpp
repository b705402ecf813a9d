#pragma once

#include <limits>

#include "json.hpp"
#include "largen/potential.hpp"

namespace largen {

inline constexpr double kInfiniteBeta = std::numeric_limits<double>::infinity();
inline constexpr double kDefaultGapTolerance = 1e-12;

/// Initial data of the perturbed thermal state at large N.
///
/// The coordinate shift xi_a enters only through s = (1/N) sum_a xi_a^2, and the
/// per-degree-of-freedom energy fixes the linear term of the effective potential
/// that drives x(t). Both initial velocities are zero.
struct PerturbedSetup {
  double beta = 0.0;       // inverse temperature, may be +infinity
  double x0 = 0.0;         // thermal expectation of x
  double s = 0.0;          // perturbation strength xi^2 / N
  double x_init = 0.0;     // x(0) = x0 + s
  double e_per_dof = 0.0;  // energy per degree of freedom, x0 V'(x0) + V(x_init)
  double omega_eff = 0.0;  // sqrt(2 V'(x0))
};

/// (1 / 2w) coth(beta w / 2): equal-time width of a thermal oscillator of frequency w.
double thermal_width(double omega, double beta);

/// Self-consistent large-N gap equation x0 = thermal_width(sqrt(2 V'(x0)), beta),
/// solved by bracketing and bisection. The returned value satisfies
/// |gap_residual| < tol.
double solve_gap_equation(const Potential& model, double beta, double tol = kDefaultGapTolerance);

double gap_residual(const Potential& model, double beta, double x0);

/// Truncated Matsubara sum (1/beta) sum_{|n| <= n_max} 1/(w_n^2 + w^2), w_n = 2 pi n / beta,
/// optionally with the analytic tail beta / (2 pi^2 n_max) for the omitted modes.
double matsubara_x0(double omega, double beta, long n_max, bool tail_correction = true);

double energy_per_dof(const Potential& model, double x0, double x_init);

/// 4 x (V(x) - E)
double effective_potential(const PerturbedSetup& setup, const Potential& model, double x);

/// d/dx of effective_potential: 4 V(x) + 4 x V'(x) - 4 E
double effective_gradient(const PerturbedSetup& setup, const Potential& model, double x);

PerturbedSetup build_setup(const Potential& model, double beta, double s, double tol = kDefaultGapTolerance);

nlohmann::ordered_json to_json(const PerturbedSetup& setup);

}  // namespace largen
