#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace qsearch {

enum class Distribution { uniform, gaussian_truncated };

std::string_view to_string(Distribution d);
Distribution distribution_from_string(std::string_view name);

/// Portable random stream. The generator is std::mt19937_64 (its output sequence is
/// fixed by the standard); the conversions to real numbers are done here rather than
/// through std:: distributions, whose algorithms are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Standard normal via the cosine branch of Box-Muller (two uniforms per draw).
  double normal();

 private:
  std::mt19937_64 engine_;
};

/// Static on-site energies. Uniform draws lie in [-sigma, sigma]; the truncated
/// Gaussian has standard deviation sigma before truncation at +-3 sigma.
struct DisorderField {
  std::vector<double> epsilons;
  double sigma = 0.0;
  std::uint64_t seed = 0;
  Distribution distribution = Distribution::uniform;

  std::size_t size() const { return epsilons.size(); }
  /// Mean over all sites except `w`.
  double mean_excluding(std::size_t w) const;
};

DisorderField sample_disorder(std::size_t n, double sigma, Distribution distribution,
                              std::uint64_t seed);

/// Value the full field of any size > index would hold at `index`; only the stream
/// prefix is drawn.
double sample_disorder_at(std::size_t index, double sigma, Distribution distribution,
                          std::uint64_t seed);

}  // namespace qsearch
