#pragma once

#include <vector>

#include "qsearch/bath.hpp"
#include "qsearch/coupling.hpp"
#include "qsearch/redfield.hpp"

namespace qsearch {

struct SecularRates {
  double w12 = 0.0;  // excited -> ground
  double w21 = 0.0;  // ground -> excited
  double t_rel = 0.0;
  double p_suc = 0.0;
};

/// W12 = k Lambda_12 S(Delta), W21 = k Lambda_12 S(-Delta). Throws for Delta <= 0.
SecularRates secular_rates(const CouplingCoefficients& coeffs, const BathSpec& bath, double delta,
                           double kappa = kRatePrefactor);

/// tanh(beta Delta/2) / (k Lambda_12 J(Delta)); equals t_rel above (1 at zero temperature
/// for the tanh factor).
double secular_t_rel_closed_form(double lambda12, const BathSpec& bath, double delta,
                                 double kappa = kRatePrefactor);

/// rho_11(t) = p_suc + (rho11_0 - p_suc) e^(-t/t_rel)
double secular_populations(const SecularRates& rates, double t, double rho11_0);

/// Populations only; coherences stay zero.
Trajectory secular_trajectory(const SecularRates& rates, const std::vector<double>& times,
                              double rho11_0);

}  // namespace qsearch
