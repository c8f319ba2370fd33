#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace qsearch {

using OdeRhs = std::function<void(double t, const std::vector<double>& y, std::vector<double>& dy)>;

struct OdeOptions {
  double atol = 1e-10;
  double rtol = 1e-8;
  double h_initial = 0.0;  // 0: automatic
  double h_max = 0.0;      // 0: unlimited
  std::size_t max_steps = 50'000'000;
};

struct OdeStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t evaluations = 0;
};

/// Dormand-Prince 5(4) with 5th-order continuous extension. Returns the state at every
/// entry of `times` (non-decreasing, times[0] is the initial time). Throws NumericalError
/// on step-size underflow or when max_steps is exceeded.
std::vector<std::vector<double>> integrate_dopri5(const OdeRhs& f, std::vector<double> y0,
                                                  const std::vector<double>& times,
                                                  const OdeOptions& opts = {},
                                                  OdeStats* stats = nullptr);

/// Single stepper exposed for callers that need to stop on a condition. `observe` is
/// called after every accepted step with (t, y); returning false ends the run. Returns
/// the last time reached.
double integrate_dopri5_until(const OdeRhs& f, std::vector<double>& y, double t0, double t_end,
                              const std::function<bool(double, const std::vector<double>&)>& observe,
                              const OdeOptions& opts = {}, OdeStats* stats = nullptr);

}  // namespace qsearch
