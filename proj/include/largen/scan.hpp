#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "largen/dynamics.hpp"
#include "largen/floquet.hpp"

namespace largen {

/// Parameter grid for the resonance survey. Either the quartic axes (w, lambda)
/// or a list of explicit `k:c` coefficient strings, crossed with beta and s.
struct GridSpec {
  std::vector<double> w;
  std::vector<double> lambda;
  std::vector<std::string> coeffs;  // non-empty: generic potentials replace w/lambda
  std::vector<double> beta;
  std::vector<double> s;
  IntegratorConfig integrator;
  std::size_t max_points = 100000;

  bool generic() const { return !coeffs.empty(); }
  std::size_t size() const;
  void validate() const;

  static GridSpec default_grid();
  /// Keys: w, lambda | coeffs, beta (numbers or "inf"), s, optional rtol, atol, max_points.
  static GridSpec from_json(const nlohmann::json& j);
};

struct ScanRecord {
  std::size_t index = 0;
  double w = 0.0;
  double lambda = 0.0;
  std::string coeffs;
  double beta = 0.0;
  double s = 0.0;
  double x0 = 0.0;
  double x_f = 0.0;
  double period = 0.0;
  double trace = 0.0;
  double max_abs_multiplier_deviation = 0.0;
  Stability classification = Stability::Boundary;
  double det_error = 0.0;
  double symmetry_error = 0.0;
  std::optional<std::string> error;  // set when this point failed
};

/// Records in row-major grid order (last axis fastest), independent of `jobs`.
std::vector<ScanRecord> run_scan(const GridSpec& grid, int jobs = 1);

/// Evaluates a single grid point; failures are reported in ScanRecord::error.
ScanRecord evaluate_point(const Potential& model, double beta, double s, const IntegratorConfig& config);

/// True iff no record is resonant and every multiplier deviation is below tol.
/// Throws Error(Numerical) if a record carries an error marker.
bool assert_no_resonance(std::span<const ScanRecord> records, double tol);

void write_scan_csv(std::ostream& out, std::span<const ScanRecord> records, bool generic);

}  // namespace largen
