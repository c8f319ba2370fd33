#include "qsearch/secular.hpp"

#include <cmath>

#include "qsearch/errors.hpp"

namespace qsearch {

SecularRates secular_rates(const CouplingCoefficients& cc, const BathSpec& bath, double delta,
                           double kappa) {
  validate(bath);
  if (!(delta > 0.0)) throw InvalidParameter("secular rates need a positive gap");
  if (cc.m < 2) throw InvalidParameter("secular rates need two retained levels");
  const double lam = cc.lambda(0, 1);
  SecularRates r;
  r.w12 = kappa * lam * rate_S(delta, bath);
  r.w21 = kappa * lam * rate_S(-delta, bath);
  const double tot = r.w12 + r.w21;
  if (!(tot > 0.0)) throw NumericalError("secular rates vanish; no relaxation");
  r.t_rel = 1.0 / tot;
  // 1/(1+e^(-beta Delta)) directly rather than the ratio, which loses digits when beta Delta is large
  r.p_suc = bath.zero_temperature() ? 1.0 : 1.0 / (1.0 + std::exp(-bath.beta * delta));
  return r;
}

double secular_t_rel_closed_form(double lambda12, const BathSpec& bath, double delta, double kappa) {
  const double th = bath.zero_temperature() ? 1.0 : std::tanh(0.5 * bath.beta * delta);
  return th / (kappa * lambda12 * spectral_density(delta, bath));
}

double secular_populations(const SecularRates& r, double t, double rho11_0) {
  if (t < 0) throw InvalidParameter("secular_populations needs t >= 0");
  if (!(rho11_0 >= 0.0 && rho11_0 <= 1.0)) throw InvalidParameter("rho11_0 must lie in [0, 1]");
  return r.p_suc + (rho11_0 - r.p_suc) * std::exp(-t / r.t_rel);
}

Trajectory secular_trajectory(const SecularRates& r, const std::vector<double>& times, double rho11_0) {
  Trajectory tr;
  tr.times = times;
  tr.rho.reserve(times.size());
  for (double t : times) {
    ComplexMatrix rho(2, 2);
    const double p = secular_populations(r, t, rho11_0);
    rho(0, 0) = p;
    rho(1, 1) = 1.0 - p;
    tr.rho.push_back(std::move(rho));
  }
  return tr;
}

}  // namespace qsearch
