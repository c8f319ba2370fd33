#include "qsearch/bath.hpp"

#include <cmath>
#include <numbers>

#include "qsearch/errors.hpp"
#include "qsearch/special_functions.hpp"

namespace qsearch {

void validate(const BathSpec& b) {
  if (!(b.g >= 0.0) || !std::isfinite(b.g)) throw InvalidParameter("bath g must be >= 0");
  if (!(b.omega_c > 0.0) || !std::isfinite(b.omega_c)) throw InvalidParameter("bath omega_c must be > 0");
  if (!(b.eta > 0.0) || !std::isfinite(b.eta)) throw InvalidParameter("bath eta must be > 0");
  if (!(b.beta > 0.0)) throw InvalidParameter("bath beta must be > 0 (or inf)");
  if (!(b.d > 0.0) || !std::isfinite(b.d)) throw InvalidParameter("bath exponent d must be > 0");
}

double spectral_density(double omega, const BathSpec& b) {
  if (!(omega >= 0.0)) throw DomainError("spectral_density needs omega >= 0; use rate_S for signed frequencies");
  if (omega == 0.0) return 0.0;
  const double pw = b.d == 1.0 ? omega : std::pow(omega, b.d) * std::pow(b.omega_c, 1.0 - b.d);
  return b.eta * b.g * b.g * pw * std::exp(-omega / b.omega_c);
}

double occupation(double omega, double beta) {
  if (std::isinf(beta)) return 0.0;
  return 1.0 / std::expm1(beta * omega);
}

double rate_S(double omega, const BathSpec& b) {
  if (omega == 0.0) {
    if (b.zero_temperature() || b.d > 1.0) return 0.0;
    if (b.d < 1.0) throw DomainError("rate_S(0) diverges for d < 1");
    return b.eta * b.g * b.g / b.beta;
  }
  const double w = std::abs(omega);
  const double j = spectral_density(w, b);
  if (omega > 0) return b.zero_temperature() ? j : j * (occupation(w, b.beta) + 1.0);
  return b.zero_temperature() ? 0.0 : j * occupation(w, b.beta);
}

std::complex<double> correlation_zero_T(double t, const BathSpec& b) {
  if (b.d != 1.0) throw InvalidParameter("closed-form correlation needs d = 1");
  const std::complex<double> den(1.0, t * b.omega_c);
  return b.eta * b.g * b.g * b.omega_c * b.omega_c / (den * den);
}

std::complex<double> correlation_finite_T(double t, const BathSpec& b) {
  if (b.d != 1.0) throw InvalidParameter("closed-form correlation needs d = 1");
  if (b.zero_temperature()) throw InvalidParameter("correlation_finite_T needs finite beta");
  const double a = 1.0 / (b.beta * b.omega_c);
  const double s = t / b.beta;
  const auto sum = trigamma({a, s}) + trigamma({1.0 + a, -s});
  return b.eta * b.g * b.g / (b.beta * b.beta) * sum;
}

std::complex<double> correlation(double t, const BathSpec& b) {
  return b.zero_temperature() ? correlation_zero_T(t, b) : correlation_finite_T(t, b);
}

bool correlation_accuracy_warning(const BathSpec& b) {
  return !b.zero_temperature() && b.beta * b.omega_c < 5.0;
}

namespace {

ComplexIntegrand correlation_integrand(double t, const BathSpec& b) {
  return [t, b](double w) -> std::complex<double> {
    if (w <= 0.0) return 0.0;
    // J(w) coth(beta w / 2) written as eta g^2 wc^(1-d) e^(-w/wc) w^(d-1) [w coth(beta w/2)]
    const double pref = b.eta * b.g * b.g * std::exp(-w / b.omega_c) *
                        (b.d == 1.0 ? 1.0 : std::pow(w, b.d - 1.0) * std::pow(b.omega_c, 1.0 - b.d));
    double wcoth;
    if (b.zero_temperature()) {
      wcoth = w;
    } else {
      const double x = b.beta * w;
      wcoth = x < 1e-6 ? 2.0 / b.beta + b.beta * w * w / 6.0 : w / std::tanh(0.5 * x);
    }
    return {pref * wcoth * std::cos(w * t), -pref * w * std::sin(w * t)};
  };
}

}  // namespace

QuadratureResult correlation_quadrature(double t, const BathSpec& b, double abs_tol, double rel_tol) {
  validate(b);
  const double top = 40.0 * b.omega_c;
  // one panel per half oscillation to start with
  const auto panels = static_cast<std::size_t>(std::max(16.0, std::abs(t) * top / std::numbers::pi));
  return integrate_adaptive(correlation_integrand(t, b), 0.0, top, abs_tol, rel_tol, panels,
                            std::max<std::size_t>(400000, 4 * panels));
}

QuadratureResult correlation_quadrature_panels(double t, const BathSpec& b, std::size_t panels) {
  validate(b);
  return integrate_panels(correlation_integrand(t, b), 0.0, 40.0 * b.omega_c, panels);
}

double correlation_time(const BathSpec& b) {
  if (b.zero_temperature()) return 1.0 / b.omega_c;
  return std::max(b.beta, 1.0 / b.omega_c);
}

double correlation_efold_time(const BathSpec& b) {
  const double f0 = std::abs(correlation(0.0, b));
  const double target = f0 * std::exp(-1.0);
  auto below = [&](double t) { return std::abs(correlation(t, b)) < target; };
  // scan on a grid fine against both time scales, then bisect
  const double step = 0.01 * std::min(1.0 / b.omega_c, b.zero_temperature() ? INFINITY : b.beta);
  double lo = 0.0, hi = step;
  while (!below(hi)) {
    lo = hi;
    hi += step;
    if (hi > 1e6 * correlation_time(b)) throw NumericalError("correlation never drops below 1/e");
  }
  for (int i = 0; i < 100 && hi - lo > 1e-12 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (below(mid) ? hi : lo) = mid;
  }
  return hi;
}

std::string_view to_string(BoundStatus s) {
  switch (s) {
    case BoundStatus::ok: return "ok";
    case BoundStatus::marginal: return "marginal";
    default: return "fail";
  }
}

namespace {

BoundStatus classify(double ratio, double chi) {
  if (ratio >= 1.0) return BoundStatus::fail;
  if (ratio > chi) return BoundStatus::marginal;
  return BoundStatus::ok;
}

}  // namespace

ValidityReport validate_approximations(const BathSpec& b, double delta, std::size_t n,
                                       const ValidityMargins& m) {
  if (!(delta > 0.0)) throw InvalidParameter("validate_approximations needs delta > 0");
  ValidityReport r;
  r.delta_t = correlation_time(b);
  r.markov_ratio = b.g * r.delta_t;
  r.secular_ratio = b.g * std::sqrt(r.delta_t / delta);
  r.markov = classify(r.markov_ratio, m.chi_markov);
  r.secular = classify(r.secular_ratio, m.chi_secular);
  r.markov_ok = r.markov != BoundStatus::fail;
  r.secular_ok = r.secular != BoundStatus::fail;
  const double gap2 = 1.0 - delta;
  r.beta_star = gap2 > 0 ? m.beta_star_c * std::log(static_cast<double>(n)) / gap2 : INFINITY;
  r.two_level_ok = b.zero_temperature() || b.beta > r.beta_star;
  std::string notes = "markov " + std::string(to_string(r.markov)) + ", secular " +
                      std::string(to_string(r.secular));
  if (!r.two_level_ok) notes += ", beta below the two-level threshold";
  if (correlation_accuracy_warning(b)) notes += ", beta*omega_c < 5";
  r.notes = notes;
  return r;
}

}  // namespace qsearch
