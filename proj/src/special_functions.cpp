#include "qsearch/special_functions.hpp"

#include <cmath>

#include "qsearch/errors.hpp"

namespace qsearch {

std::complex<double> trigamma(std::complex<double> z) {
  if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real()))
    throw DomainError("trigamma has a pole at non-positive integers");
  // psi1(z) = psi1(z+1) + 1/z^2 until z is far enough out for the asymptotic series
  std::complex<double> acc = 0.0;
  while (std::abs(z) < 10.0 || z.real() < 1.0) {
    acc += 1.0 / (z * z);
    z += 1.0;
  }
  // B_2k for k = 1..10
  static constexpr double bern[] = {1.0 / 6,         -1.0 / 30,      1.0 / 42,
                                    -1.0 / 30,       5.0 / 66,       -691.0 / 2730,
                                    7.0 / 6,         -3617.0 / 510,  43867.0 / 798,
                                    -174611.0 / 330};
  const std::complex<double> iz = 1.0 / z;
  const std::complex<double> iz2 = iz * iz;
  std::complex<double> series = 0.0;
  std::complex<double> p = iz2 * iz;  // z^-(2k+1)
  for (double b : bern) {
    series += b * p;
    p *= iz2;
  }
  return acc + iz + 0.5 * iz2 + series;
}

}  // namespace qsearch
