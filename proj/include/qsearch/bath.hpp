#pragma once

#include <complex>
#include <limits>
#include <string>
#include <string_view>

#include "qsearch/quadrature.hpp"

namespace qsearch {

/// Ohmic bath J(w) = eta g^2 w^d wc^(1-d) exp(-w/wc). beta = +inf selects zero temperature.
struct BathSpec {
  double beta = std::numeric_limits<double>::infinity();
  double g = 0.0;
  double omega_c = 1.0;
  double eta = 1.0;
  double d = 1.0;

  bool zero_temperature() const { return std::isinf(beta); }
};

/// Throws InvalidParameter unless g >= 0, omega_c > 0, eta > 0, beta > 0, d > 0.
void validate(const BathSpec& bath);

double spectral_density(double omega, const BathSpec& bath);
/// Bose occupation 1/(e^(beta w) - 1); zero at zero temperature.
double occupation(double omega, double beta);

/// One-sided rate at the Bohr frequency omega = E_initial - E_final (no 2 pi):
/// omega > 0 (emission) J(omega)(N+1), omega < 0 (absorption) J(|omega|) N(|omega|),
/// omega = 0 the limit, eta g^2 / beta for d = 1 and 0 at zero temperature.
double rate_S(double omega, const BathSpec& bath);

/// eta g^2 wc^2 / (1 + i t wc)^2
std::complex<double> correlation_zero_T(double t, const BathSpec& bath);
/// (eta g^2/beta^2) [psi1(1/(beta wc) + i t/beta) + psi1(1 + 1/(beta wc) - i t/beta)]
std::complex<double> correlation_finite_T(double t, const BathSpec& bath);
/// Closed form for the bath's temperature mode.
std::complex<double> correlation(double t, const BathSpec& bath);
/// beta wc < 5: the finite-temperature closed form is outside its comfortable range.
bool correlation_accuracy_warning(const BathSpec& bath);

/// Direct integral of J(w) [coth(beta w/2) cos(wt) - i sin(wt)] over [0, 40 wc]; any d.
QuadratureResult correlation_quadrature(double t, const BathSpec& bath, double abs_tol = 1e-17,
                                        double rel_tol = 1e-12);
/// Same integrand on a fixed panel count (for convergence checks).
QuadratureResult correlation_quadrature_panels(double t, const BathSpec& bath, std::size_t panels);

/// 1/wc at zero temperature, max(beta, 1/wc) otherwise.
double correlation_time(const BathSpec& bath);
/// Smallest t with |F(t)|/|F(0)| < 1/e, from the closed form.
double correlation_efold_time(const BathSpec& bath);

enum class BoundStatus { ok, marginal, fail };
std::string_view to_string(BoundStatus s);

struct ValidityMargins {
  double chi_markov = 0.1;
  double chi_secular = 0.5;
  double beta_star_c = 1.0;
};

struct ValidityReport {
  double delta_t = 0.0;
  double markov_ratio = 0.0;   // g delta_t
  double secular_ratio = 0.0;  // g sqrt(delta_t / Delta)
  BoundStatus markov = BoundStatus::ok;
  BoundStatus secular = BoundStatus::ok;
  bool markov_ok = true;   // not fail
  bool secular_ok = true;  // not fail
  double beta_star = 0.0;  // c log(n) / (1 - Delta)
  bool two_level_ok = true;
  std::string notes;
};

/// Reports; never throws for a valid bath and delta > 0.
ValidityReport validate_approximations(const BathSpec& bath, double delta, std::size_t n,
                                       const ValidityMargins& margins = {});

}  // namespace qsearch
