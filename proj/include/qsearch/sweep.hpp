#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qsearch/experiment.hpp"

namespace qsearch {

struct PowerLawFit {
  double exponent = 0.0;
  double intercept = 0.0;  // log y = intercept + exponent log x
  double r2 = 0.0;
};

/// Least squares on (log x, log y). Needs >= 3 points, all positive (DomainError).
PowerLawFit fit_power_law(const std::vector<double>& xs, const std::vector<double>& ys);

struct SweepRow {
  double value = 0.0;
  std::uint64_t seed = 0;
  double t_rel_fit = 0.0;  // NaN when the estimator gave up
  double t_rel_formula = 0.0;
  double p_suc = 0.0;
  double p_peak = 0.0;
  bool markov_ok = true;
  bool secular_ok = true;
  bool two_level_ok = true;
  std::vector<double> times;  // filled only when trajectories are requested
  std::vector<double> p_w;
};

struct SweepPoint {
  double value = 0.0;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  std::size_t count = 0;  // seeds with an estimate
};

struct SweepResult {
  std::vector<SweepRow> rows;  // ordered by (value index, seed index)
  std::vector<SweepPoint> points;
  std::optional<PowerLawFit> fit;  // medians of t_rel_fit against the value
  std::vector<std::string> warnings;
};

/// Seeds: system.seeds if given explicitly, else 8 seeds 1..8. Each (value, seed) point is
/// independent; `workers` threads pick points off a shared counter and write into their
/// own slot, so the result does not depend on scheduling.
SweepResult sweep(const ExperimentConfig& cfg, unsigned workers, bool force);

/// Linear-interpolated quantile of unsorted data, q in [0, 1].
double quantile(std::vector<double> v, double q);

}  // namespace qsearch
