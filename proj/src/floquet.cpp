#include "largen/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "largen/dop853.hpp"
#include "largen/error.hpp"
#include "largen/format.hpp"
#include "largen/polynomial.hpp"

namespace largen {

namespace {

void require_motion(const PerturbedSetup& setup) {
  if (setup.s <= kDegenerateThreshold)
    throw Error(ErrorKind::Degenerate, "perturbation s = " + format_real(setup.s) + " is at or below s_min = " +
                                           format_real(kDegenerateThreshold) + "; x(t) has no period");
}

// Veff(x) - Veff(x_init) as a polynomial in x.
Polynomial well_depth_polynomial(const PerturbedSetup& setup, const Potential& model) {
  const auto v = model.polynomial().coefficients();
  std::vector<double> p(v.size() + 1, 0.0);
  for (std::size_t k = 0; k < v.size(); ++k) p[k + 1] += 4.0 * v[k];
  p[1] -= 4.0 * setup.e_per_dof;
  p[0] = -effective_potential(setup, model, setup.x_init);
  return Polynomial(std::move(p));
}

struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Nodes and weights on [-1, 1] by Newton iteration on P_n.
GaussLegendre gauss_legendre(int n) {
  GaussLegendre gl{std::vector<double>(n), std::vector<double>(n)};
  for (int i = 0; i < n; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    gl.nodes[i] = z;
    gl.weights[i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  return gl;
}

}  // namespace

double MonodromyResult::max_abs_multiplier_deviation() const {
  return std::max(std::abs(std::abs(multipliers[0]) - 1.0), std::abs(std::abs(multipliers[1]) - 1.0));
}

MonodromyResult make_monodromy(double period, double m11, double m12, double m21, double m22, double tol_b) {
  MonodromyResult r;
  r.period = period;
  r.m11 = m11;
  r.m12 = m12;
  r.m21 = m21;
  r.m22 = m22;
  r.trace = m11 + m22;
  r.det_error = std::abs(m11 * m22 - m12 * m21 - 1.0);
  r.symmetry_error = std::abs(m11 - m22);
  // trace^2/4 - det written without the cancellation of the naive form.
  const double half_gap = 0.5 * (m11 - m22);
  const double disc = half_gap * half_gap + m12 * m21;
  const double half_trace = 0.5 * r.trace;
  if (disc >= 0.0) {
    const double root = std::sqrt(disc);
    // Larger-magnitude root first, the other from the product to avoid cancellation.
    const double big = half_trace >= 0.0 ? half_trace + root : half_trace - root;
    const double det = m11 * m22 - m12 * m21;
    const double small = big != 0.0 ? det / big : 0.0;
    r.multipliers = {std::complex<double>(big, 0.0), std::complex<double>(small, 0.0)};
  } else {
    const double im = std::sqrt(-disc);
    r.multipliers = {std::complex<double>(half_trace, im), std::complex<double>(half_trace, -im)};
  }
  const double excess = std::abs(r.trace) - 2.0;
  r.classification = excess < -tol_b ? Stability::Oscillatory : excess > tol_b ? Stability::Resonant : Stability::Boundary;
  return r;
}

double turning_point_root(const PerturbedSetup& setup, const Potential& model) {
  require_motion(setup);
  // x_init is an exact root of the well polynomial; dividing it out leaves a
  // factor that is negative at 0 and positive at x_init.
  const Polynomial q = well_depth_polynomial(setup, model).deflate(setup.x_init);
  const std::vector<double> roots = q.real_roots(0.0, setup.x_init);
  double x_f = -1.0;
  for (double r : roots) {
    if (r > 0.0 && r < setup.x_init) x_f = std::max(x_f, r);
  }
  if (!(x_f > 0.0))
    throw Error(ErrorKind::NotFound, "no inner turning point of the effective potential in (0, x_init)");

  constexpr int kChecks = 64;
  for (int i = 1; i < kChecks; ++i) {
    const double x = x_f + (setup.x_init - x_f) * i / kChecks;
    if (!(q(x) > 0.0))
      throw Error(ErrorKind::NotFound, "effective potential is not below its initial value between the turning points");
  }
  return x_f;
}

PeriodEstimate period_by_events(const PerturbedSetup& setup, const Potential& model, const IntegratorConfig& config) {
  require_motion(setup);
  const auto events = locate_turning_events(setup, model, config, 2);
  const double t1 = events[0].t;
  const double t2 = events[1].t;
  if (std::abs(t2 - 2.0 * t1) > 1e-9 * 2.0 * t1)
    throw Error(ErrorKind::Numerical, "turning events are not evenly spaced: t1 = " + format_real(t1) +
                                          ", t2 = " + format_real(t2));
  return {2.0 * t1, PeriodMethod::Events, events[0].x, setup.x_init};
}

PeriodEstimate period_by_quadrature(const PerturbedSetup& setup, const Potential& model, double x_f) {
  if (!(x_f > 0.0 && x_f < setup.x_init))
    throw Error(ErrorKind::Domain, "turning point x_f = " + format_real(x_f) + " outside (0, x_init)");

  // Veff(x_init) - Veff(x) = (x_init - x)(x - x_f) r(x); with x = c - A cos(theta)
  // the period integral becomes 2 * int_0^pi dtheta / sqrt(2 r(x(theta))).
  const Polynomial r = well_depth_polynomial(setup, model).deflate(setup.x_init).deflate(x_f);
  const double c = 0.5 * (setup.x_init + x_f);
  const double a = 0.5 * (setup.x_init - x_f);
  const double guard = 1e12 / std::sqrt(std::abs(r(c)) + 1e-300);

  auto integrand = [&](double theta) {
    const double rv = r(c - a * std::cos(theta));
    const double g = rv > 0.0 ? 1.0 / std::sqrt(2.0 * rv) : std::numeric_limits<double>::infinity();
    if (!(g < guard))
      throw Error(ErrorKind::Numerical, "period integrand diverges at theta = " + format_real(theta) +
                                            "; turning point is not simple");
    return g;
  };

  static const GaussLegendre gl = gauss_legendre(10);
  auto composite = [&](int panels) {
    const double width = std::numbers::pi / panels;
    double sum = 0.0;
    for (int p = 0; p < panels; ++p) {
      const double mid = (p + 0.5) * width;
      for (std::size_t i = 0; i < gl.nodes.size(); ++i) sum += gl.weights[i] * integrand(mid + 0.5 * width * gl.nodes[i]);
    }
    return 0.5 * width * sum;
  };

  double prev = composite(1);
  for (int panels = 2; panels <= (1 << 16); panels *= 2) {
    const double cur = composite(panels);
    if (std::abs(cur - prev) <= 1e-10 * std::abs(cur)) return {2.0 * cur, PeriodMethod::Quadrature, x_f, setup.x_init};
    prev = cur;
  }
  throw Error(ErrorKind::Numerical, "period quadrature did not converge");
}

MonodromyResult monodromy_matrix(const PerturbedSetup& setup, const Potential& model, const IntegratorConfig& config,
                                 double period, double tol_b) {
  config.validate();
  if (!(period > 0.0) || !std::isfinite(period))
    throw Error(ErrorKind::Config, "monodromy period must be finite and > 0");

  using Stepper = ode::Dop853<6>;
  auto rhs = [&setup, &model](double, const Stepper::Vec& y, Stepper::Vec& f) {
    const double x = y[0];
    if (!(x > 0.0)) return false;
    const double coeff = 2.0 * model.derivative(x);
    f[0] = y[1];
    f[1] = -effective_gradient(setup, model, x);
    f[2] = y[3];
    f[3] = -coeff * y[2];
    f[4] = y[5];
    f[5] = -coeff * y[4];
    return true;
  };
  ode::StepperConfig sc;
  sc.rtol = config.rtol;
  sc.atol = config.atol;
  if (config.max_step > 0.0) sc.max_step = config.max_step;
  Stepper stepper(rhs, sc);
  stepper.reset(0.0, {setup.x_init, 0.0, 1.0, 0.0, 0.0, 1.0});
  while (!stepper.step_toward(period)) {
  }
  const auto& y = stepper.state();
  return make_monodromy(period, y[2], y[4], y[3], y[5], tol_b);
}

Stability classify_stability(const MonodromyResult& result, double tol_b) {
  if (!(result.det_error < kMaxDetError))
    throw Error(ErrorKind::Numerical, "monodromy determinant is off by " + format_real(result.det_error) +
                                          "; matrix is not trustworthy");
  const double excess = std::abs(result.trace) - 2.0;
  if (excess < -tol_b) return Stability::Oscillatory;
  if (excess > tol_b) return Stability::Resonant;
  return Stability::Boundary;
}

std::string to_string(Stability s) {
  switch (s) {
    case Stability::Oscillatory:
      return "oscillatory";
    case Stability::Resonant:
      return "resonant";
    case Stability::Boundary:
      return "boundary";
  }
  return "unknown";
}

nlohmann::ordered_json to_json(const MonodromyResult& r, double x_f) {
  nlohmann::ordered_json j;
  j["period"] = r.period;
  j["x_f"] = x_f;
  j["monodromy"] = nlohmann::ordered_json::array({nlohmann::ordered_json::array({r.m11, r.m12}), nlohmann::ordered_json::array({r.m21, r.m22})});
  j["trace"] = r.trace;
  j["det_error"] = r.det_error;
  j["symmetry_error"] = r.symmetry_error;
  j["multipliers"] = nlohmann::ordered_json::array();
  for (const auto& m : r.multipliers) j["multipliers"].push_back({{"re", m.real()}, {"im", m.imag()}});
  j["classification"] = to_string(r.classification);
  return j;
}

}  // namespace largen
