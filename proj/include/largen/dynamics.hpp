#pragma once

#include <vector>

#include "largen/potential.hpp"
#include "largen/thermal.hpp"

namespace largen {

/// Perturbations with s at or below this are treated as static (x stays at x0).
inline constexpr double kDegenerateThreshold = 1e-12;

/// Point of the joint evolution. `u` is the perturbation projected on its
/// initial direction and divided by |xi|, so u(0) = 1 and u'(0) = 0.
struct State {
  double t = 0.0;
  double x = 0.0;
  double x_dot = 0.0;
  double u = 0.0;
  double u_dot = 0.0;
};

struct Rates {
  double x_dot = 0.0;
  double x_ddot = 0.0;
  double u_dot = 0.0;
  double u_ddot = 0.0;
};

struct IntegratorConfig {
  double rtol = 1e-10;
  double atol = 1e-12;
  double max_step = 0.0;       // 0: unbounded
  double output_stride = 0.0;  // 0: resolve the fastest oscillation with 64 samples
  double energy_tol = 1e-8;    // max relative drift of energy_x over the samples

  void validate() const;
};

struct Sample {
  State state;
  double energy_x = 0.0;
};

struct IntegratorStats {
  long steps = 0;
  long rejected = 0;
  double max_energy_drift = 0.0;
};

struct Trajectory {
  std::vector<Sample> samples;
  PerturbedSetup setup;
  IntegratorStats stats;
  double output_stride = 0.0;
};

struct TurningEvent {
  double t = 0.0;
  double x = 0.0;
};

State initial_state(const PerturbedSetup& setup);

/// Right-hand side of x'' = -dVeff/dx, u'' = -2 V'(x) u. Throws Error(Domain) for x <= 0.
Rates derivative(const PerturbedSetup& setup, const Potential& model, const State& state);

/// 1/2 x'^2 + Veff(x), the conserved energy of the x-motion.
double energy_x(const PerturbedSetup& setup, const Potential& model, const State& state);

/// Stride used when IntegratorConfig::output_stride is 0.
double auto_output_stride(const PerturbedSetup& setup, const Potential& model);

/// Adaptive DOP853 integration on [0, t_end], sampled every output_stride via
/// the continuous extension plus a final sample at exactly t_end. Throws
/// Error(Numerical) if the relative energy drift exceeds energy_tol.
Trajectory integrate(const PerturbedSetup& setup, const Potential& model, const IntegratorConfig& config,
                     double t_end);

/// Control run: x evolves as usual but the u-equation uses the constant
/// coefficient 2 V'(x_init), so u is a rigid cosine.
Trajectory integrate_frozen_control(const PerturbedSetup& setup, const Potential& model,
                                    const IntegratorConfig& config, double t_end);

/// Evolves `start` for `duration` and returns the end state.
State propagate(const PerturbedSetup& setup, const Potential& model, const IntegratorConfig& config,
                const State& start, double duration);

/// First `count` zeros of x' after t = 0, located on the dense output. Even
/// indices sit at the inner turning point x_f, odd ones back at x_init.
/// `t_max` of 0 picks a horizon from the small-oscillation period.
std::vector<TurningEvent> locate_turning_events(const PerturbedSetup& setup, const Potential& model,
                                                const IntegratorConfig& config, int count, double t_max = 0.0);

/// Evolves forward n_periods * period, flips both velocities, evolves the same
/// time again and returns the largest deviation from (x_init, 0, 1, 0).
double time_reversal_roundtrip(const PerturbedSetup& setup, const Potential& model, const IntegratorConfig& config,
                               double period, int n_periods);

}  // namespace largen
