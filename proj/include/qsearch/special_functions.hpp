#pragma once

#include <complex>

namespace qsearch {

/// psi^(1)(z) for complex z off the poles 0, -1, -2, ...
std::complex<double> trigamma(std::complex<double> z);

}  // namespace qsearch
