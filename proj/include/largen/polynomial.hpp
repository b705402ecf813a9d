#pragma once

#include <span>
#include <vector>

namespace largen {

// Dense real polynomial, coefficients in ascending degree.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<double> coeffs);

  double operator()(double x) const;
  Polynomial derivative() const;
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  std::span<const double> coefficients() const { return coeffs_; }

  // Synthetic division by (x - root). The remainder is discarded.
  Polynomial deflate(double root) const;

  // Sorted real roots in the closed interval [a, b]. Each monotone piece between
  // consecutive critical points is searched by bisection; roots of even
  // multiplicity are reported when the polynomial touches zero at a critical point.
  std::vector<double> real_roots(double a, double b) const;

 private:
  void trim();
  std::vector<double> coeffs_;
};

}  // namespace largen
