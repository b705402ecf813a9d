#include "largen/potential.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

#include "largen/error.hpp"
#include "largen/format.hpp"

namespace largen {

namespace {

void require_nonnegative(double x) {
  if (!(x >= 0.0)) throw Error(ErrorKind::Domain, "potential evaluated at x = " + format_real(x) + " < 0");
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

Potential::Potential(std::vector<Term> terms) : terms_(std::move(terms)) {
  if (terms_.empty()) throw Error(ErrorKind::Config, "potential needs at least one term");
  std::set<int> seen;
  for (const Term& t : terms_) {
    if (t.power < 1) throw Error(ErrorKind::Config, "potential exponent must be >= 1, got " + std::to_string(t.power));
    if (!std::isfinite(t.coeff)) throw Error(ErrorKind::Config, "potential coefficient must be finite");
    if (!seen.insert(t.power).second)
      throw Error(ErrorKind::Config, "duplicate potential exponent " + std::to_string(t.power));
  }
  std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) { return a.power < b.power; });

  std::vector<double> dense(static_cast<std::size_t>(terms_.back().power) + 1, 0.0);
  for (const Term& t : terms_) dense[static_cast<std::size_t>(t.power)] = t.coeff;
  v_ = Polynomial(std::move(dense));
  dv_ = v_.derivative();
  d2v_ = dv_.derivative();
}

Potential Potential::quartic(double w, double lambda) {
  return Potential({{1, 0.5 * w * w}, {2, 0.25 * lambda}});
}

Potential Potential::parse(std::string_view text) {
  std::vector<Term> terms;
  bool more = !trim(text).empty();
  while (more) {
    const auto comma = text.find(',');
    const std::string_view item = trim(text.substr(0, comma));
    more = comma != std::string_view::npos;
    text = more ? text.substr(comma + 1) : std::string_view{};

    const auto colon = item.find(':');
    if (colon == std::string_view::npos)
      throw Error(ErrorKind::Config, "bad potential term '" + std::string(item) + "', expected k:c");
    const std::string_view ks = trim(item.substr(0, colon));
    const std::string_view cs = trim(item.substr(colon + 1));

    Term term;
    auto [kp, kec] = std::from_chars(ks.data(), ks.data() + ks.size(), term.power);
    if (kec != std::errc{} || kp != ks.data() + ks.size())
      throw Error(ErrorKind::Config, "bad exponent '" + std::string(ks) + "'");
    term.coeff = parse_real(cs);
    terms.push_back(term);
  }
  return Potential(std::move(terms));
}

double Potential::value(double x) const {
  require_nonnegative(x);
  return v_(x);
}

double Potential::derivative(double x) const {
  require_nonnegative(x);
  return dv_(x);
}

double Potential::second_derivative(double x) const {
  require_nonnegative(x);
  return d2v_(x);
}

bool Potential::check_monotonic(double x_max) const {
  if (!(x_max > 0.0)) throw Error(ErrorKind::Domain, "check_monotonic needs x_max > 0");
  if (dv_(0.0) < 0.0) return false;

  // A zero of V' inside (0, x_max] is a violation; a zero at x = 0 is tolerated.
  for (double r : dv_.real_roots(0.0, x_max)) {
    if (r > 0.0) return false;
  }
  // The interior minima of V' sit at roots of V''.
  for (double c : d2v_.real_roots(0.0, x_max)) {
    if (c > 0.0 && !(dv_(c) > 0.0)) return false;
  }
  constexpr int kSamples = 256;
  for (int i = 1; i <= kSamples; ++i) {
    const double x = x_max * static_cast<double>(i) / kSamples;
    if (!(dv_(x) > 0.0)) return false;
  }
  return true;
}

Potential Potential::scaled(double factor) const {
  std::vector<Term> t = terms_;
  for (Term& term : t) term.coeff *= factor;
  return Potential(std::move(t));
}

std::string Potential::to_string() const {
  std::string out;
  for (const Term& t : terms_) {
    if (!out.empty()) out += ',';
    out += std::to_string(t.power) + ':' + format_real(t.coeff);
  }
  return out;
}

}  // namespace largen
