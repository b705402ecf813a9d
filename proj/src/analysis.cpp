#include "largen/analysis.hpp"

#include <algorithm>
#include <array>
#include <optional>
#include <cmath>
#include <numbers>

#include "largen/error.hpp"
#include "largen/format.hpp"

namespace largen {

namespace {

// Vertex of the parabola through three points; falls back to the middle sample
// when the points are collinear.
EnvelopePoint parabola_vertex(double t0, double y0, double t1, double y1, double t2, double y2) {
  const double d01 = (y1 - y0) / (t1 - t0);
  const double d12 = (y2 - y1) / (t2 - t1);
  const double curv = (d12 - d01) / (t2 - t0);
  if (!(curv < 0.0)) return {t1, y1};
  // y = y1 + b (t - t1) + curv (t - t1)^2 with b the slope at t1.
  const double b = d01 + curv * (t1 - t0);
  const double dt = -b / (2.0 * curv);
  return {t1 + dt, y1 + 0.5 * b * dt};
}

// Maximum of the quartic through five samples centred on i, found by Newton
// from the parabolic vertex. Stays within the neighbouring samples or gives up.
std::optional<EnvelopePoint> quartic_peak(std::span<const double> t, const std::array<double, 5>& y, std::size_t i,
                                          const EnvelopePoint& start) {
  // Newton divided differences.
  std::array<double, 5> ts{}, c{};
  for (int k = 0; k < 5; ++k) {
    ts[k] = t[i - 2 + k];
    c[k] = y[k];
  }
  for (int level = 1; level < 5; ++level)
    for (int k = 4; k >= level; --k) c[k] = (c[k] - c[k - 1]) / (ts[k] - ts[k - level]);

  // value, first and second derivative of the Newton form at x
  auto eval = [&](double x) {
    double p = c[4], dp = 0.0, d2p = 0.0;
    for (int k = 3; k >= 0; --k) {
      d2p = d2p * (x - ts[k]) + 2.0 * dp;
      dp = dp * (x - ts[k]) + p;
      p = p * (x - ts[k]) + c[k];
    }
    return std::array<double, 3>{p, dp, d2p};
  };
  double x = start.t;
  for (int it = 0; it < 20; ++it) {
    const auto [p, dp, d2p] = eval(x);
    if (!(d2p < 0.0)) return std::nullopt;
    const double step = dp / d2p;
    x -= step;
    if (x < t[i - 1] || x > t[i + 1]) return std::nullopt;
    if (std::abs(step) <= 1e-15 * (std::abs(x) + 1.0)) break;
  }
  return EnvelopePoint{x, eval(x)[0]};
}

}  // namespace

EnvelopeSeries extract_envelope(std::span<const double> t, std::span<const double> u) {
  if (t.size() != u.size()) throw Error(ErrorKind::Config, "envelope: time and value series differ in length");
  EnvelopeSeries env;
  for (std::size_t i = 1; i + 1 < u.size(); ++i) {
    const double a = std::abs(u[i - 1]);
    const double b = std::abs(u[i]);
    const double c = std::abs(u[i + 1]);
    if (b >= a && b > c && b > 0.0) {
      EnvelopePoint p = parabola_vertex(t[i - 1], a, t[i], b, t[i + 1], c);
      // |u| is smooth two samples out unless u changes sign there.
      if (i >= 2 && i + 2 < u.size() && u[i - 2] * u[i] > 0.0 && u[i + 2] * u[i] > 0.0) {
        const std::array<double, 5> w{std::abs(u[i - 2]), a, b, c, std::abs(u[i + 2])};
        if (auto q = quartic_peak(t, w, i, p)) p = *q;
      }
      p.amplitude = std::max(p.amplitude, b);
      env.extrema.push_back(p);
    }
  }
  return env;
}

EnvelopeSeries extract_envelope(const Trajectory& trajectory) {
  const double omega = trajectory.setup.omega_eff;
  if (omega > 0.0 && trajectory.output_stride > 2.0 * std::numbers::pi / omega / 20.0)
    throw Error(ErrorKind::Config, "trajectory undersampled for envelope extraction: stride " +
                                       format_real(trajectory.output_stride) + " > T_u / 20");
  std::vector<double> t, u;
  t.reserve(trajectory.samples.size());
  u.reserve(trajectory.samples.size());
  for (const Sample& s : trajectory.samples) {
    t.push_back(s.state.t);
    u.push_back(s.state.u);
  }
  return extract_envelope(t, u);
}

BeatReport beat_report(const EnvelopeSeries& envelope, double late_fraction) {
  if (!(late_fraction > 0.0 && late_fraction < 1.0))
    throw Error(ErrorKind::Config, "late_fraction must lie in (0, 1)");
  const auto& ex = envelope.extrema;
  if (ex.size() < 10)
    throw Error(ErrorKind::Config, "beat report needs at least 10 envelope extrema, got " + std::to_string(ex.size()));

  BeatReport r;
  r.min_envelope = ex.front().amplitude;
  for (const auto& p : ex) r.min_envelope = std::min(r.min_envelope, p.amplitude);

  const double t_cut = (1.0 - late_fraction) * ex.back().t;
  for (const auto& p : ex) {
    if (p.t >= t_cut) r.max_envelope_late = std::max(r.max_envelope_late, p.amplitude);
  }
  r.recurrence_ratio = r.max_envelope_late / 1.0;
  r.modulation_depth = 1.0 - r.min_envelope;

  // Differences at rounding level do not count as turns of the envelope.
  constexpr double kFlat = 1e-9;
  int prev_sign = 0;
  for (std::size_t i = 1; i < ex.size(); ++i) {
    const double d = ex[i].amplitude - ex[i - 1].amplitude;
    if (std::abs(d) <= kFlat) continue;
    const int sign = d > 0.0 ? 1 : -1;
    if (prev_sign != 0 && sign != prev_sign) ++r.n_envelope_cycles;
    prev_sign = sign;
  }
  return r;
}

nlohmann::ordered_json to_json(const BeatReport& r) {
  nlohmann::ordered_json j;
  j["min_envelope"] = r.min_envelope;
  j["max_envelope_late"] = r.max_envelope_late;
  j["recurrence_ratio"] = r.recurrence_ratio;
  j["modulation_depth"] = r.modulation_depth;
  j["n_envelope_cycles"] = r.n_envelope_cycles;
  return j;
}

}  // namespace largen
