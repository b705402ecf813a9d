#include "largen/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "largen/dop853.hpp"
#include "largen/error.hpp"
#include "largen/format.hpp"
#include "largen/roots.hpp"

namespace largen {

namespace {

using Stepper = ode::Dop853<4>;
using Vec = Stepper::Vec;

ode::StepperConfig stepper_config(const IntegratorConfig& config) {
  ode::StepperConfig sc;
  sc.rtol = config.rtol;
  sc.atol = config.atol;
  if (config.max_step > 0.0) sc.max_step = config.max_step;
  return sc;
}

// (a^k - b^k) / (a - b)
double power_difference_quotient(int k, double a, double b) {
  double sum = 0.0, ap = 1.0;
  for (int j = 0; j < k; ++j) {
    sum += ap * std::pow(b, k - 1 - j);
    ap *= a;
  }
  return sum;
}

// dVeff/dx at x = x0 + xi, written as 4 (V(x) - V(x_init)) + 4 (x V'(x) - x0 V'(x0))
// with both differences divided out, so nothing cancels when x - x0 is tiny.
double gradient_from_x0(const PerturbedSetup& setup, const Potential& model, double xi) {
  const double x = setup.x0 + xi;
  double g = 0.0;
  for (const Term& t : model.terms()) {
    g += t.coeff * ((xi - setup.s) * power_difference_quotient(t.power, x, setup.x_init) +
                    t.power * xi * power_difference_quotient(t.power, x, setup.x0));
  }
  return 4.0 * g;
}

// frozen_coeff < 0 selects the physical coefficient 2 V'(x(t)). The first
// component holds x - x_shift.
Stepper::Rhs make_rhs(const PerturbedSetup& setup, const Potential& model, double frozen_coeff,
                      double x_shift = 0.0) {
  return [&setup, &model, frozen_coeff, x_shift](double, const Vec& y, Vec& f) {
    const double x = y[0] + x_shift;
    if (!(x > 0.0)) return false;
    f[0] = y[1];
    f[1] = x_shift == setup.x0 ? -gradient_from_x0(setup, model, y[0]) : -effective_gradient(setup, model, x);
    f[2] = y[3];
    const double coeff = frozen_coeff >= 0.0 ? frozen_coeff : 2.0 * model.derivative(x);
    f[3] = -coeff * y[2];
    return true;
  };
}

Vec to_vec(const State& s) { return {s.x, s.x_dot, s.u, s.u_dot}; }
State to_state(double t, const Vec& y) { return {t, y[0], y[1], y[2], y[3]}; }

Trajectory run(const PerturbedSetup& setup, const Potential& model, const IntegratorConfig& config, double t_end,
               double frozen_coeff) {
  config.validate();
  if (!(t_end > 0.0) || !std::isfinite(t_end))
    throw Error(ErrorKind::Config, "t_end must be finite and > 0, got " + format_real(t_end));
  const double stride = config.output_stride > 0.0 ? config.output_stride : auto_output_stride(setup, model);

  Stepper stepper(make_rhs(setup, model, frozen_coeff), stepper_config(config));
  const State start = initial_state(setup);
  stepper.reset(0.0, to_vec(start));

  Trajectory traj;
  traj.setup = setup;
  traj.output_stride = stride;
  const double e0 = energy_x(setup, model, start);
  auto emit = [&](double t, const Vec& y) {
    Sample s{to_state(t, y), 0.0};
    s.energy_x = energy_x(setup, model, s.state);
    traj.stats.max_energy_drift = std::max(traj.stats.max_energy_drift, std::abs(s.energy_x - e0) / std::abs(e0));
    traj.samples.push_back(s);
  };
  emit(0.0, to_vec(start));

  // Uniform grid k * stride strictly below t_end; t_end itself is the final sample.
  const double guard = 1e-9 * stride;
  long next = 1;
  bool done = false;
  while (!done) {
    done = stepper.step_toward(t_end);
    while (true) {
      const double tk = static_cast<double>(next) * stride;
      if (tk >= t_end - guard || tk > stepper.time()) break;
      emit(tk, tk == stepper.time() ? stepper.state() : stepper.dense(tk));
      ++next;
    }
  }
  emit(t_end, stepper.state());

  traj.stats.steps = stepper.stats().accepted;
  traj.stats.rejected = stepper.stats().rejected;
  if (!(traj.stats.max_energy_drift <= config.energy_tol))
    throw Error(ErrorKind::Numerical, "energy drift " + format_real(traj.stats.max_energy_drift) +
                                          " exceeds energy_tol " + format_real(config.energy_tol) +
                                          "; tighten rtol/atol");
  return traj;
}

}  // namespace

void IntegratorConfig::validate() const {
  if (!(rtol > 0.0) || !(atol > 0.0) || !(energy_tol > 0.0))
    throw Error(ErrorKind::Config, "rtol, atol and energy_tol must be > 0");
  if (!(max_step >= 0.0) || !(output_stride >= 0.0))
    throw Error(ErrorKind::Config, "max_step and output_stride must be >= 0");
}

State initial_state(const PerturbedSetup& setup) { return {0.0, setup.x_init, 0.0, 1.0, 0.0}; }

Rates derivative(const PerturbedSetup& setup, const Potential& model, const State& state) {
  if (!(state.x > 0.0)) throw Error(ErrorKind::Domain, "x must stay > 0, got " + format_real(state.x));
  return {state.x_dot, -effective_gradient(setup, model, state.x), state.u_dot,
          -2.0 * model.derivative(state.x) * state.u};
}

double energy_x(const PerturbedSetup& setup, const Potential& model, const State& state) {
  return 0.5 * state.x_dot * state.x_dot + effective_potential(setup, model, state.x);
}

double auto_output_stride(const PerturbedSetup& setup, const Potential& model) {
  // Fastest of the u-oscillation at x_init and the x-oscillation near the ends of the well.
  auto veff_curvature = [&](double x) { return 8.0 * model.derivative(x) + 4.0 * x * model.second_derivative(x); };
  const double omega = std::max({std::sqrt(2.0 * model.derivative(setup.x_init)),
                                 std::sqrt(std::abs(veff_curvature(setup.x_init))),
                                 std::sqrt(std::abs(veff_curvature(setup.x0)))});
  return 2.0 * std::numbers::pi / (64.0 * omega);
}

Trajectory integrate(const PerturbedSetup& setup, const Potential& model, const IntegratorConfig& config,
                     double t_end) {
  return run(setup, model, config, t_end, -1.0);
}

Trajectory integrate_frozen_control(const PerturbedSetup& setup, const Potential& model,
                                    const IntegratorConfig& config, double t_end) {
  return run(setup, model, config, t_end, 2.0 * model.derivative(setup.x_init));
}

State propagate(const PerturbedSetup& setup, const Potential& model, const IntegratorConfig& config,
                const State& start, double duration) {
  config.validate();
  Stepper stepper(make_rhs(setup, model, -1.0), stepper_config(config));
  stepper.reset(start.t, to_vec(start));
  const double t_stop = start.t + duration;
  while (!stepper.step_toward(t_stop)) {
  }
  return to_state(t_stop, stepper.state());
}

std::vector<TurningEvent> locate_turning_events(const PerturbedSetup& setup, const Potential& model,
                                                const IntegratorConfig& config, int count, double t_max) {
  config.validate();
  if (setup.s <= kDegenerateThreshold)
    throw Error(ErrorKind::Degenerate, "perturbation s = " + format_real(setup.s) + " is at or below s_min = " +
                                           format_real(kDegenerateThreshold) + "; x(t) does not move");
  if (count < 1) return {};
  if (!(t_max > 0.0)) {
    const double curvature = 8.0 * model.derivative(setup.x0) + 4.0 * setup.x0 * model.second_derivative(setup.x0);
    t_max = 100.0 * (count + 1) * std::numbers::pi / std::sqrt(curvature);
  }

  // Event times hinge on x', whose size is set by s. Integrating x - x0 and
  // scaling atol keep the error control on that scale even for tiny s.
  ode::StepperConfig sc = stepper_config(config);
  sc.atol *= std::min(1.0, setup.s);
  Stepper stepper(make_rhs(setup, model, -1.0, setup.x0), sc);
  stepper.reset(0.0, {setup.x_init - setup.x0, 0.0, 1.0, 0.0});

  std::vector<TurningEvent> events;
  constexpr int kProbes = 8;
  // x' vanishes at t = 0 itself; the first sign is taken just after it.
  double prev_t = 0.0;
  double prev_v = 0.0;
  bool done = false;
  while (!done && static_cast<int>(events.size()) < count) {
    done = stepper.step_toward(t_max);
    const double t0 = stepper.previous_time();
    const double t1 = stepper.time();
    for (int p = 1; p <= kProbes && static_cast<int>(events.size()) < count; ++p) {
      const double tp = p == kProbes ? t1 : t0 + (t1 - t0) * p / kProbes;
      const double vp = p == kProbes ? stepper.state()[1] : stepper.dense(tp)[1];
      if (prev_v != 0.0 && vp != 0.0 && (prev_v > 0.0) != (vp > 0.0)) {
        auto xdot = [&](double t) { return stepper.dense(t)[1]; };
        const double te = brent_root(xdot, prev_t, tp, 1e-14);
        events.push_back({te, stepper.dense(te)[0] + setup.x0});
      } else if (vp == 0.0 && tp > 0.0) {
        events.push_back({tp, stepper.dense(tp)[0] + setup.x0});
      }
      if (vp != 0.0) {
        prev_t = tp;
        prev_v = vp;
      }
    }
  }
  if (static_cast<int>(events.size()) < count)
    throw Error(ErrorKind::NotFound, "found " + std::to_string(events.size()) + " of " + std::to_string(count) +
                                         " turning events before t = " + format_real(t_max));
  return events;
}

double time_reversal_roundtrip(const PerturbedSetup& setup, const Potential& model, const IntegratorConfig& config,
                               double period, int n_periods) {
  if (n_periods < 1) throw Error(ErrorKind::Config, "n_periods must be >= 1");
  if (!(period > 0.0)) throw Error(ErrorKind::Config, "period must be > 0");
  const double span = period * n_periods;
  State s = propagate(setup, model, config, initial_state(setup), span);
  s.t = 0.0;
  s.x_dot = -s.x_dot;
  s.u_dot = -s.u_dot;
  s = propagate(setup, model, config, s, span);
  return std::max({std::abs(s.u - 1.0), std::abs(s.u_dot), std::abs(s.x - setup.x_init), std::abs(s.x_dot)});
}

}  // namespace largen
