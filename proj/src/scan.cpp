#include "largen/scan.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "largen/error.hpp"
#include "largen/format.hpp"
#include "largen/thermal.hpp"

namespace largen {

namespace {

std::vector<double> read_axis(const nlohmann::json& j, const char* key) {
  std::vector<double> out;
  if (!j.contains(key)) return out;
  const auto& arr = j.at(key);
  if (!arr.is_array()) throw Error(ErrorKind::Config, std::string("grid axis '") + key + "' must be an array");
  for (const auto& v : arr) {
    if (v.is_string())
      out.push_back(parse_real(v.get<std::string>()));
    else if (v.is_number())
      out.push_back(v.get<double>());
    else
      throw Error(ErrorKind::Config, std::string("grid axis '") + key + "' holds a non-numeric entry");
  }
  return out;
}

}  // namespace

std::size_t GridSpec::size() const {
  const std::size_t models = generic() ? coeffs.size() : w.size() * lambda.size();
  return models * beta.size() * s.size();
}

void GridSpec::validate() const {
  if (generic()) {
    if (!w.empty() || !lambda.empty())
      throw Error(ErrorKind::Config, "grid specifies both coeffs and w/lambda axes");
    for (const auto& c : coeffs) (void)Potential::parse(c);
  } else if (w.empty() || lambda.empty()) {
    throw Error(ErrorKind::Config, "grid needs non-empty w and lambda axes (or coeffs)");
  }
  if (beta.empty() || s.empty()) throw Error(ErrorKind::Config, "grid needs non-empty beta and s axes");
  for (double b : beta) {
    if (!(b > 0.0)) throw Error(ErrorKind::Config, "grid beta must be > 0 or inf, got " + format_real(b));
  }
  for (double v : s) {
    if (!(v > kDegenerateThreshold) || !std::isfinite(v))
      throw Error(ErrorKind::Config, "grid s = " + format_real(v) + " must exceed s_min = " +
                                         format_real(kDegenerateThreshold));
  }
  integrator.validate();
  if (size() > max_points)
    throw Error(ErrorKind::Config, "grid has " + std::to_string(size()) + " points, cap is " +
                                       std::to_string(max_points));
}

GridSpec GridSpec::default_grid() {
  GridSpec g;
  g.w = {0.5, 1.0, 2.0};
  g.lambda = {0.0, 0.1, 1.0, 10.0};
  g.beta = {0.25, 0.5, 1.0, 2.0};
  g.s = {0.01, 0.1, 1.0, 10.0};
  return g;
}

GridSpec GridSpec::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorKind::Config, "grid file must hold a JSON object");
  GridSpec g;
  g.w = read_axis(j, "w");
  g.lambda = read_axis(j, "lambda");
  g.beta = read_axis(j, "beta");
  g.s = read_axis(j, "s");
  if (j.contains("coeffs")) {
    for (const auto& c : j.at("coeffs")) {
      if (!c.is_string()) throw Error(ErrorKind::Config, "grid coeffs entries must be strings like \"1:0.5,2:0.25\"");
      g.coeffs.push_back(c.get<std::string>());
    }
  }
  if (j.contains("rtol")) g.integrator.rtol = j.at("rtol").get<double>();
  if (j.contains("atol")) g.integrator.atol = j.at("atol").get<double>();
  if (j.contains("max_points")) g.max_points = j.at("max_points").get<std::size_t>();
  return g;
}

ScanRecord evaluate_point(const Potential& model, double beta, double s, const IntegratorConfig& config) {
  ScanRecord rec;
  rec.beta = beta;
  rec.s = s;
  try {
    const PerturbedSetup setup = build_setup(model, beta, s);
    rec.x0 = setup.x0;
    const PeriodEstimate period = period_by_events(setup, model, config);
    rec.x_f = period.x_f;
    rec.period = period.period;
    const MonodromyResult m = monodromy_matrix(setup, model, config, period.period);
    rec.trace = m.trace;
    rec.det_error = m.det_error;
    rec.symmetry_error = m.symmetry_error;
    rec.max_abs_multiplier_deviation = m.max_abs_multiplier_deviation();
    if (!(m.symmetry_error < kMaxDetError))
      throw Error(ErrorKind::Numerical, "monodromy symmetry error " + format_real(m.symmetry_error) + " too large");
    rec.classification = classify_stability(m);
  } catch (const Error& e) {
    rec.error = e.what();
  }
  return rec;
}

std::vector<ScanRecord> run_scan(const GridSpec& grid, int jobs) {
  grid.validate();
  struct Point {
    double w, lambda;
    std::string coeffs;
    double beta, s;
  };
  std::vector<Point> points;
  points.reserve(grid.size());
  auto push_model = [&](double w, double lambda, const std::string& coeffs) {
    for (double b : grid.beta)
      for (double s : grid.s) points.push_back({w, lambda, coeffs, b, s});
  };
  if (grid.generic()) {
    for (const auto& c : grid.coeffs) push_model(0.0, 0.0, c);
  } else {
    for (double w : grid.w)
      for (double l : grid.lambda) push_model(w, l, {});
  }

  std::vector<ScanRecord> records(points.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      const Point& p = points[i];
      const Potential model = grid.generic() ? Potential::parse(p.coeffs) : Potential::quartic(p.w, p.lambda);
      ScanRecord rec = evaluate_point(model, p.beta, p.s, grid.integrator);
      rec.index = i;
      rec.w = p.w;
      rec.lambda = p.lambda;
      rec.coeffs = grid.generic() ? model.to_string() : std::string{};
      records[i] = std::move(rec);
    }
  };
  const int n = std::clamp(jobs, 1, 256);
  if (n == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int k = 0; k < n; ++k) pool.emplace_back(worker);
  }
  return records;
}

bool assert_no_resonance(std::span<const ScanRecord> records, double tol) {
  if (records.empty()) throw Error(ErrorKind::Config, "no scan records to check");
  for (const auto& r : records) {
    if (r.error) throw Error(ErrorKind::Numerical, "scan point " + std::to_string(r.index) + " failed: " + *r.error);
  }
  return std::none_of(records.begin(), records.end(), [tol](const ScanRecord& r) {
    return r.classification == Stability::Resonant || !(r.max_abs_multiplier_deviation < tol);
  });
}

void write_scan_csv(std::ostream& out, std::span<const ScanRecord> records, bool generic) {
  out << (generic ? "coeffs" : "w,lambda")
      << ",beta,s,x0,x_f,period,trace,max_abs_multiplier_deviation,classification,det_error,symmetry_error\n";
  for (const auto& r : records) {
    if (generic)
      out << '"' << r.coeffs << '"';
    else
      out << format_real(r.w) << ',' << format_real(r.lambda);
    out << ',' << format_real(r.beta) << ',' << format_real(r.s);
    if (r.error) {
      out << ",nan,nan,nan,nan,nan,error,nan,nan\n";
      continue;
    }
    out << ',' << format_real(r.x0) << ',' << format_real(r.x_f) << ',' << format_real(r.period) << ','
        << format_real(r.trace) << ',' << format_real(r.max_abs_multiplier_deviation) << ','
        << to_string(r.classification) << ',' << format_real(r.det_error) << ',' << format_real(r.symmetry_error)
        << '\n';
  }
}

}  // namespace largen
