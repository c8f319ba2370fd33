#pragma once

#include <vector>

#include "qsearch/matrix.hpp"
#include "qsearch/redfield.hpp"

namespace qsearch {

struct PopulationSeries {
  std::vector<double> p_w;
  /// max_t |P_w - rho_11|: what the shortcut P_w ~ rho_11 would have cost on this run.
  double truncation_error = 0.0;
};

/// P_w = sum_kl rho_kl o_k o_l^*, o_k = <w|lambda_k>.
PopulationSeries solution_population(const Trajectory& traj, const std::vector<Complex>& overlaps);

/// Fits log|P - target| (or the log of its local maxima when the series still oscillates)
/// over the last 60% of the window and returns -1/slope. Throws NumericalError when the
/// series has not converged (|P - target| > 5% of target at the end) or does not decay.
double extract_relaxation_time(const std::vector<double>& times, const std::vector<double>& series,
                               double target);

}  // namespace qsearch
