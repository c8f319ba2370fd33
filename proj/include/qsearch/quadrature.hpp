#pragma once

#include <complex>
#include <cstddef>
#include <functional>

namespace qsearch {

using ComplexIntegrand = std::function<std::complex<double>(double)>;

struct QuadratureResult {
  std::complex<double> value;
  double error_estimate = 0.0;
  std::size_t panels = 0;
};

/// One 15-point Kronrod rule with the embedded 7-point Gauss rule as error estimate.
QuadratureResult gauss_kronrod_15(const ComplexIntegrand& f, double a, double b);

/// Fixed composite rule on `panels` equal panels.
QuadratureResult integrate_panels(const ComplexIntegrand& f, double a, double b,
                                  std::size_t panels);

/// Global adaptive bisection of the worst panel until the summed error estimate is below
/// max(abs_tol, rel_tol |I|). Starts from `initial_panels` equal panels. Throws
/// NumericalError if max_panels is reached first.
QuadratureResult integrate_adaptive(const ComplexIntegrand& f, double a, double b,
                                    double abs_tol, double rel_tol,
                                    std::size_t initial_panels = 16,
                                    std::size_t max_panels = 200000);

}  // namespace qsearch
