#include "qsearch/disorder.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qsearch/errors.hpp"

namespace qsearch {

std::string_view to_string(Distribution d) {
  return d == Distribution::uniform ? "uniform" : "gaussian-truncated";
}

Distribution distribution_from_string(std::string_view name) {
  if (name == "uniform") return Distribution::uniform;
  if (name == "gaussian-truncated") return Distribution::gaussian_truncated;
  throw InvalidParameter("unknown disorder distribution '" + std::string(name) + "'");
}

double Rng::normal() {
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double DisorderField::mean_excluding(std::size_t w) const {
  if (epsilons.size() < 2) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < epsilons.size(); ++i)
    if (i != w) sum += epsilons[i];
  return sum / static_cast<double>(epsilons.size() - 1);
}

namespace {

double draw(Rng& rng, double sigma, Distribution distribution) {
  if (distribution == Distribution::uniform) return sigma * (2.0 * rng.uniform() - 1.0);
  for (;;) {
    const double z = rng.normal();
    if (std::abs(z) <= 3.0) return sigma * z;
  }
}

void check_sigma(double sigma) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma))
    throw InvalidParameter("disorder strength sigma must be finite and >= 0");
}

}  // namespace

DisorderField sample_disorder(std::size_t n, double sigma, Distribution distribution,
                              std::uint64_t seed) {
  check_sigma(sigma);
  DisorderField field{std::vector<double>(n, 0.0), sigma, seed, distribution};
  if (sigma == 0.0) return field;
  Rng rng(seed);
  for (auto& e : field.epsilons) e = draw(rng, sigma, distribution);
  return field;
}

double sample_disorder_at(std::size_t index, double sigma, Distribution distribution,
                          std::uint64_t seed) {
  check_sigma(sigma);
  if (sigma == 0.0) return 0.0;
  Rng rng(seed);
  double value = 0.0;
  for (std::size_t i = 0; i <= index; ++i) value = draw(rng, sigma, distribution);
  return value;
}

}  // namespace qsearch
