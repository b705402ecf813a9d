#include "largen/polynomial.hpp"

#include <algorithm>
#include <cmath>

namespace largen {

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

void Polynomial::trim() {
  while (coeffs_.size() > 1 && coeffs_.back() == 0.0) coeffs_.pop_back();
  if (coeffs_.empty()) coeffs_.push_back(0.0);
}

double Polynomial::operator()(double x) const {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (coeffs_.size() <= 1) return Polynomial({0.0});
  std::vector<double> d(coeffs_.size() - 1);
  for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = static_cast<double>(k) * coeffs_[k];
  return Polynomial(std::move(d));
}

Polynomial Polynomial::deflate(double root) const {
  if (coeffs_.size() <= 1) return Polynomial({0.0});
  const std::size_t n = coeffs_.size() - 1;
  std::vector<double> q(n);
  q[n - 1] = coeffs_[n];
  for (std::size_t k = n - 1; k > 0; --k) q[k - 1] = coeffs_[k] + root * q[k];
  return Polynomial(std::move(q));
}

namespace {

double bisect_monotone(const Polynomial& p, double lo, double hi) {
  double flo = p(lo);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = p(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::vector<double> Polynomial::real_roots(double a, double b) const {
  std::vector<double> roots;
  if (degree() <= 0) return roots;  // constants (including zero) have no isolated roots
  if (degree() == 1) {
    const double r = -coeffs_[0] / coeffs_[1];
    if (r >= a && r <= b) roots.push_back(r);
    return roots;
  }
  std::vector<double> knots{a};
  for (double c : derivative().real_roots(a, b)) {
    if (c > knots.back()) knots.push_back(c);
  }
  if (b > knots.back()) knots.push_back(b);

  for (std::size_t i = 0; i < knots.size(); ++i) {
    const double fk = (*this)(knots[i]);
    if (fk == 0.0) {
      if (roots.empty() || roots.back() != knots[i]) roots.push_back(knots[i]);
      continue;
    }
    if (i + 1 == knots.size()) break;
    const double fn = (*this)(knots[i + 1]);
    if (fn != 0.0 && (fk < 0.0) != (fn < 0.0)) roots.push_back(bisect_monotone(*this, knots[i], knots[i + 1]));
  }
  return roots;
}

}  // namespace largen
