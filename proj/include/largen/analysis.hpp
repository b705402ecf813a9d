#pragma once

#include <span>
#include <vector>

#include "json.hpp"
#include "largen/dynamics.hpp"

namespace largen {

struct EnvelopePoint {
  double t = 0.0;
  double amplitude = 0.0;
};

/// Local maxima of |u(t)|, refined by a parabola through the neighbouring samples.
struct EnvelopeSeries {
  std::vector<EnvelopePoint> extrema;
};

/// Summary of the envelope modulation. Reference amplitude is u(0) = 1.
struct BeatReport {
  double min_envelope = 0.0;
  double max_envelope_late = 0.0;  // max over the last `late_fraction` of the run
  double recurrence_ratio = 0.0;
  double modulation_depth = 0.0;
  int n_envelope_cycles = 0;  // sign changes of the discrete envelope derivative

  bool decaying(double recurrence_floor = 0.5) const { return recurrence_ratio < recurrence_floor; }
};

inline constexpr double kDefaultLateFraction = 0.2;
inline constexpr double kRecurrenceFloor = 0.5;

/// Requires at least 20 samples per period 2 pi / omega_eff of the unperturbed u-oscillation.
EnvelopeSeries extract_envelope(const Trajectory& trajectory);

/// Same extraction on bare samples (t increasing).
EnvelopeSeries extract_envelope(std::span<const double> t, std::span<const double> u);

BeatReport beat_report(const EnvelopeSeries& envelope, double late_fraction = kDefaultLateFraction);

nlohmann::ordered_json to_json(const BeatReport& report);

}  // namespace largen
