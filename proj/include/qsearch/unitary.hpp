#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "qsearch/eigensolver.hpp"
#include "qsearch/hamiltonian.hpp"
#include "qsearch/two_level.hpp"

namespace qsearch {

struct ClosedRunResult {
  std::vector<double> times;
  std::vector<double> p_w;
  double t_peak = 0.0;
  double p_peak = 0.0;
  double repetitions = 1.0;
  double t_expected = 0.0;
  double max_norm_error = 0.0;
};

/// `points` uniform samples of [0, t_max], endpoints included.
std::vector<double> uniform_grid(double t_max, std::size_t points);
/// 2000 points over [0, 3 pi / delta].
std::vector<double> default_closed_grid(double delta);

/// Exact evolution of |s> through the eigendecomposition of H.
ClosedRunResult evolve_closed(const SearchHamiltonian& h, const std::vector<double>& times);
ClosedRunResult evolve_closed(const SearchHamiltonian& h, const Spectrum& spectrum,
                              const std::vector<double>& times);
/// Same bookkeeping driven by the reduced model (success_probability_reduced).
ClosedRunResult evolve_reduced(const TwoLevelSystem& tl, const std::vector<double>& times);

/// Plain: sin^2(delta t / 2) / (1 + n eps_w^2 / 4). Shifted: |<w|exp(-i H_red t)|s>|^2.
double success_probability_reduced(const TwoLevelSystem& tl, double t);

enum class Regime { weak, strong };
std::string_view to_string(Regime r);
/// weak iff sigma <= 1/sqrt(n), boundary included.
Regime regime_classify(std::size_t n, double sigma);

struct ExpectedRuntime {
  double t_single;
  double repetitions;
  double t_expected;
};
ExpectedRuntime expected_runtime(std::size_t n, double eps_w);

}  // namespace qsearch
