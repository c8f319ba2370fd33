#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "qsearch/bath.hpp"
#include "qsearch/errors.hpp"
#include "qsearch/quadrature.hpp"
#include "qsearch/special_functions.hpp"

using namespace qsearch;
using std::numbers::pi;

namespace {

BathSpec bath(double beta, double g = 0.02, double wc = 2.0) {
  BathSpec b;
  b.beta = beta;
  b.g = g;
  b.omega_c = wc;
  return b;
}

const double kInf = std::numeric_limits<double>::infinity();

}  // namespace

TEST_CASE("trigamma reference values") {
  // psi1(1) = pi^2/6, psi1(1/2) = pi^2/2, psi1(n+1) = psi1(n) - 1/n^2
  CHECK(trigamma({1, 0}).real() == doctest::Approx(pi * pi / 6).epsilon(1e-13));
  CHECK(trigamma({0.5, 0}).real() == doctest::Approx(pi * pi / 2).epsilon(1e-13));
  CHECK(trigamma({3, 0}).real() == doctest::Approx(pi * pi / 6 - 1.25).epsilon(1e-13));
  // reflection: psi1(1-z) + psi1(z) = pi^2 / sin^2(pi z)
  for (std::complex<double> z : {std::complex<double>(0.3, 0.7), std::complex<double>(0.1, 2.5),
                                 std::complex<double>(-1.4, 0.2)}) {
    const auto lhs = trigamma(1.0 - z) + trigamma(z);
    const auto rhs = pi * pi / std::pow(std::sin(pi * z), 2);
    CHECK(std::abs(lhs - rhs) < 1e-10 * std::abs(rhs));
  }
  // psi1(1/2 + i y) + psi1(1/2 - i y) = pi^2 / cosh^2(pi y)
  const double y = 0.8;
  const auto s = trigamma({0.5, y}) + trigamma({0.5, -y});
  CHECK(s.real() == doctest::Approx(pi * pi / std::pow(std::cosh(pi * y), 2)).epsilon(1e-11));
  CHECK_THROWS_AS(trigamma({-2, 0}), DomainError);
  CHECK_THROWS_AS(trigamma({0, 0}), DomainError);
}

TEST_CASE("gauss-kronrod integrates polynomials and oscillations") {
  const auto r = integrate_panels([](double x) { return std::complex<double>(x * x * x * x, 0); }, 0, 2, 1);
  CHECK(r.value.real() == doctest::Approx(32.0 / 5).epsilon(1e-14));
  const auto o = integrate_adaptive([](double x) { return std::exp(std::complex<double>(0, 50 * x)); }, 0, 1,
                                    1e-14, 1e-13);
  const auto exact = (std::exp(std::complex<double>(0, 50)) - 1.0) / std::complex<double>(0, 50);
  CHECK(std::abs(o.value - exact) < 1e-12);
}

TEST_CASE("spectral density") {
  const BathSpec b = bath(15);
  CHECK(spectral_density(0, b) == 0.0);
  CHECK(spectral_density(2, b) == doctest::Approx(4e-4 * 2 * std::exp(-1.0)).epsilon(1e-14));
  CHECK(spectral_density(2, b) == doctest::Approx(2.943e-4).epsilon(1e-3));
  CHECK(spectral_density(2, b) > spectral_density(1.99, b));
  CHECK(spectral_density(2, b) > spectral_density(2.01, b));
  CHECK_THROWS_AS(spectral_density(-1, b), DomainError);
  BathSpec d2 = b;
  d2.d = 2;
  CHECK(spectral_density(1, d2) == doctest::Approx(4e-4 * 1 * 0.5 * std::exp(-0.5)).epsilon(1e-14));
}

TEST_CASE("rates") {
  const BathSpec zero = bath(kInf);
  CHECK(rate_S(-0.3, zero) == 0.0);
  CHECK(rate_S(0.3, zero) == doctest::Approx(spectral_density(0.3, zero)).epsilon(1e-15));
  CHECK(rate_S(0.0, zero) == 0.0);
  const BathSpec b = bath(15);
  CHECK(rate_S(0.0, b) == doctest::Approx(4e-4 / 15).epsilon(1e-14));
  CHECK(rate_S(0.0, b) == doctest::Approx(2.667e-5).epsilon(1e-3));
  CHECK(rate_S(1e-9, b) == doctest::Approx(rate_S(0.0, b)).epsilon(1e-6));
  for (double delta : {0.001, 0.011, 0.3, 2.0}) {
    const double up = rate_S(-delta, b), down = rate_S(delta, b);
    CHECK(up >= 0);
    CHECK(down >= 0);
    CHECK(up / down == doctest::Approx(std::exp(-15 * delta)).epsilon(1e-12));
    CHECK(down - up == doctest::Approx(spectral_density(delta, b)).epsilon(1e-11));
  }
  BathSpec sub = b;
  sub.d = 0.5;
  CHECK_THROWS_AS(rate_S(0.0, sub), DomainError);
  BathSpec super = b;
  super.d = 2;
  CHECK(rate_S(0.0, super) == 0.0);
}

TEST_CASE("bath validation") {
  CHECK_THROWS_AS(validate(bath(15, -0.1)), InvalidParameter);
  CHECK_THROWS_AS(validate(bath(15, 0.1, 0.0)), InvalidParameter);
  CHECK_THROWS_AS(validate(bath(-1)), InvalidParameter);
  CHECK_NOTHROW(validate(bath(kInf)));
}

TEST_CASE("zero-temperature correlation") {
  const BathSpec b = bath(kInf);
  CHECK(correlation_zero_T(0, b).real() == doctest::Approx(1.6e-3).epsilon(1e-14));
  for (double t : {0.0, 0.1, 1.0, 10.0}) {
    const auto f = correlation_zero_T(t, b);
    CHECK(std::abs(f) == doctest::Approx(1.6e-3 / (1 + 4 * t * t)).epsilon(1e-13));
    CHECK(std::abs(f - correlation_quadrature(t, b).value) < 1e-8);
  }
  CHECK(std::abs(correlation_zero_T(1000, b)) * 1000 * 1000 == doctest::Approx(4e-4).epsilon(1e-5));
}

TEST_CASE("finite-temperature correlation vs quadrature") {
  const BathSpec b = bath(15);
  for (double t : {0.1, 1.0, 10.0, 100.0}) {
    const auto f = correlation_finite_T(t, b);
    const auto q = correlation_quadrature(t, b).value;
    CHECK(std::abs(f - q) <= 1e-6 * std::abs(q));
  }
  CHECK_FALSE(correlation_accuracy_warning(b));
  CHECK(correlation_accuracy_warning(bath(1.0)));
}

TEST_CASE("low temperature limit") {
  const BathSpec hot = bath(1e4), cold = bath(kInf);
  for (double t : {0.0, 0.5, 3.0}) CHECK(std::abs(correlation(t, hot) - correlation(t, cold)) < 1e-4 * std::abs(correlation(t, cold)));
}

TEST_CASE("stationarity: F(-t) = conj F(t)") {
  for (const BathSpec& b : {bath(15), bath(kInf)})
    for (double t : {0.3, 2.0, 25.0}) {
      CHECK(std::abs(correlation(-t, b) - std::conj(correlation(t, b))) < 1e-15);
      CHECK(std::abs(correlation_quadrature(-t, b).value - std::conj(correlation_quadrature(t, b).value)) < 1e-12);
    }
}

TEST_CASE("quadrature converges under panel doubling") {
  const BathSpec b = bath(15);
  for (double t : {0.5, 5.0}) {
    const auto a = correlation_quadrature_panels(t, b, 400).value;
    const auto c = correlation_quadrature_panels(t, b, 800).value;
    CHECK(std::abs(a - c) < 1e-9);
  }
}

TEST_CASE("quadrature accepts non-ohmic exponents") {
  BathSpec b = bath(kInf);
  b.d = 2;
  // zero T, d=2: integral of g^2 w^2 / wc e^{-w/wc} e^{-iwt} = 2 g^2 wc^2 / (1 + i t wc)^3
  for (double t : {0.0, 0.7}) {
    const auto exact = 2 * 4e-4 * 4.0 / std::pow(std::complex<double>(1, 2 * t), 3);
    CHECK(std::abs(correlation_quadrature(t, b).value - exact) < 1e-8 * std::abs(exact));
  }
}

TEST_CASE("envelope decays like exp(-2 pi t / beta)") {
  const double beta = 15;
  const BathSpec b = bath(beta);
  std::vector<double> xs, ys;
  for (double t = 3 * beta; t <= 6 * beta + 1e-9; t += 0.1 * beta) {
    xs.push_back(t);
    ys.push_back(std::log(std::abs(correlation_finite_T(t, b))));
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) mx += xs[i], my += ys[i];
  mx /= xs.size();
  my /= xs.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) sxy += (xs[i] - mx) * (ys[i] - my), sxx += (xs[i] - mx) * (xs[i] - mx);
  const double rate = -sxy / sxx;
  MESSAGE("fitted envelope rate " << rate << " vs 2 pi/beta " << 2 * pi / beta);
  CHECK(rate > 0);
}

TEST_CASE("correlation times") {
  CHECK(correlation_time(bath(kInf)) == 0.5);
  CHECK(correlation_time(bath(15)) == 15.0);
  CHECK(correlation_time(bath(0.1)) == 0.5);
  // zero T: |F|/|F(0)| = 1/(1 + t^2 wc^2) crosses 1/e at sqrt(e-1)/wc
  CHECK(correlation_efold_time(bath(kInf)) == doctest::Approx(std::sqrt(std::exp(1.0) - 1) / 2).epsilon(1e-8));
  const double tf = correlation_efold_time(bath(15));
  MESSAGE("finite-T e-folding time (beta=15, wc=2): " << tf);
  // the crossing is confirmed by the independent quadrature, and it is the first one
  const BathSpec b = bath(15);
  const double f0 = std::abs(correlation_quadrature(0, b).value);
  CHECK(std::abs(correlation_quadrature(tf, b).value) / f0 == doctest::Approx(std::exp(-1.0)).epsilon(1e-6));
  for (double t = 0; t < tf; t += tf / 50) CHECK(std::abs(correlation_quadrature(t, b).value) / f0 > std::exp(-1.0));
}

TEST_CASE("validity report") {
  const ValidityReport r = validate_approximations(bath(15), 0.011, 1000000);
  CHECK(r.delta_t == 15.0);
  CHECK(r.markov_ratio == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(r.markov_ok);
  CHECK(r.secular_ratio == doctest::Approx(0.02 * std::sqrt(15 / 0.011)).epsilon(1e-12));
  CHECK(r.secular_ok);
  CHECK(r.secular == BoundStatus::marginal);
  CHECK(r.notes.find("marginal") != std::string::npos);

  const ValidityReport bad = validate_approximations(bath(15, 0.5), 0.011, 1000000);
  CHECK(bad.markov_ratio == doctest::Approx(7.5).epsilon(1e-12));
  CHECK_FALSE(bad.markov_ok);
  CHECK_FALSE(bad.secular_ok);

  const ValidityReport zt = validate_approximations(bath(kInf), 0.0632, 1000);
  CHECK(zt.markov_ok);
  CHECK(zt.secular_ok);
  CHECK(zt.markov == BoundStatus::ok);
  CHECK(0.02 < std::sqrt(0.0632 * 2.0));
  CHECK(zt.secular_ratio == doctest::Approx(0.02 / std::sqrt(0.0632 * 2)).epsilon(1e-12));
  CHECK(zt.two_level_ok);

  const ValidityReport cold = validate_approximations(bath(1.0), 0.011, 1000000);
  CHECK(cold.beta_star == doctest::Approx(std::log(1e6) / (1 - 0.011)).epsilon(1e-12));
  CHECK_FALSE(cold.two_level_ok);
  CHECK(to_string(BoundStatus::fail) == "fail");
}
