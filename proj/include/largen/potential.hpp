#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "largen/polynomial.hpp"

namespace largen {

/// One term c * x^k of the interaction potential.
struct Term {
  int power = 1;
  double coeff = 0.0;

  friend bool operator==(const Term&, const Term&) = default;
};

/// Interaction potential V(x) = sum_k c_k x^k of the O(N) model, with x the
/// rotation-invariant combination (1/N) sum_a phi_a^2. Exponents are >= 1 and
/// distinct; terms are stored in ascending exponent order. Immutable.
class Potential {
 public:
  explicit Potential(std::vector<Term> terms);

  /// V(x) = w^2 x / 2 + lambda x^2 / 4.
  static Potential quartic(double w, double lambda);

  /// Parses the `k:c[,k:c...]` text form, e.g. "1:0.5,2:0.25".
  static Potential parse(std::string_view text);

  double value(double x) const;
  double derivative(double x) const;
  double second_derivative(double x) const;

  /// True iff V'(x) > 0 on (0, x_max]; V'(0) = 0 at the endpoint is tolerated.
  bool check_monotonic(double x_max) const;

  /// Copy with every coefficient multiplied by `factor`.
  Potential scaled(double factor) const;

  const std::vector<Term>& terms() const { return terms_; }
  const Polynomial& polynomial() const { return v_; }

  /// Canonical `k:c` text with 17 significant digits.
  std::string to_string() const;

 private:
  std::vector<Term> terms_;
  Polynomial v_;
  Polynomial dv_;
  Polynomial d2v_;
};

}  // namespace largen
