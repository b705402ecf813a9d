#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "largen/analysis.hpp"
#include "largen/error.hpp"

using namespace largen;
using doctest::Approx;

namespace {

struct Series {
  std::vector<double> t, u;
};

template <class F>
Series sample(F f, double t_end, double dt) {
  Series s;
  for (long i = 0; i * dt <= t_end; ++i) {
    s.t.push_back(i * dt);
    s.u.push_back(f(i * dt));
  }
  return s;
}

}  // namespace

TEST_CASE("synthetic beats recover the modulation depth") {
  for (double d : {0.1, 0.5}) {
    const double slow = 2.0 * std::numbers::pi / 100.0;
    const Series s = sample([&](double t) { return (1.0 - 0.5 * d * (1.0 - std::cos(slow * t))) * std::cos(t); },
                            400.0, 0.02);
    const BeatReport r = beat_report(extract_envelope(s.t, s.u));
    CHECK(r.modulation_depth == Approx(d).epsilon(0.01));
    CHECK(r.recurrence_ratio > 0.99);
    CHECK_FALSE(r.decaying());
    // four slow periods: a minimum and a maximum each
    CHECK(r.n_envelope_cycles >= 7);
    CHECK(r.n_envelope_cycles <= 9);
  }
}

TEST_CASE("damped series is flagged as decaying") {
  const Series s = sample([](double t) { return std::exp(-0.1 * t) * std::cos(t); }, 60.0, 0.01);
  const EnvelopeSeries env = extract_envelope(s.t, s.u);
  const BeatReport r = beat_report(env, 0.2);
  const double t_late = 0.8 * env.extrema.back().t;
  // first extremum inside the late window sits within one half-period of t_late
  CHECK(r.recurrence_ratio <= std::exp(-0.1 * t_late) * 1.001);
  CHECK(r.recurrence_ratio >= std::exp(-0.1 * (t_late + std::numbers::pi)));
  CHECK(r.decaying());
  CHECK(r.n_envelope_cycles == 0);
}

TEST_CASE("constant envelope") {
  const Series s = sample([](double t) { return std::cos(1.7 * t); }, 100.0, 0.01);
  const EnvelopeSeries env = extract_envelope(s.t, s.u);
  for (const auto& p : env.extrema) CHECK(std::abs(p.amplitude - 1.0) < 1e-8);
  const BeatReport r = beat_report(env);
  CHECK(r.modulation_depth < 1e-8);
  CHECK(r.recurrence_ratio == Approx(1.0).epsilon(1e-8));
}

TEST_CASE("static condensate gives a flat envelope") {
  const Potential v = Potential::quartic(1, 1);
  const PerturbedSetup s = build_setup(v, 0.5, 0.0);
  const Trajectory tr = integrate(s, v, {}, 20.0 * 2.0 * std::numbers::pi / s.omega_eff);
  for (const auto& p : extract_envelope(tr).extrema) CHECK(std::abs(p.amplitude - 1.0) < 1e-8);
}

TEST_CASE("envelope input checks") {
  const std::vector<double> t{0.0, 1.0}, u{1.0};
  CHECK_THROWS_AS(extract_envelope(t, u), Error);
  EnvelopeSeries few;
  few.extrema.resize(3, {0.0, 1.0});
  CHECK_THROWS_AS(beat_report(few), Error);
  const Series s = sample([](double t) { return std::cos(t); }, 100.0, 0.01);
  CHECK_THROWS_AS(beat_report(extract_envelope(s.t, s.u), 1.5), Error);

  const Potential v = Potential::quartic(1, 1);
  IntegratorConfig coarse;
  coarse.output_stride = 0.5;
  CHECK_THROWS_AS(extract_envelope(integrate(build_setup(v, 0.5, 1.0), v, coarse, 10.0)), Error);
}

TEST_CASE("paper model beats") {
  const Potential v = Potential::quartic(1, 1);
  const PerturbedSetup s = build_setup(v, 0.5, 1.0);
  const double period = 1.7698533446141791;
  const BeatReport r = beat_report(extract_envelope(integrate(s, v, {}, 50.0 * period)));
  CHECK(r.modulation_depth > 0.1);
  CHECK(r.recurrence_ratio >= 0.5);
  CHECK(r.min_envelope == Approx(0.64888648913267333).epsilon(1e-8));
  CHECK(r.max_envelope_late == Approx(0.99999561433259487).epsilon(1e-8));

  const BeatReport c = beat_report(extract_envelope(integrate_frozen_control(s, v, {}, 50.0 * period)));
  CHECK(c.modulation_depth < 1e-6);
}
