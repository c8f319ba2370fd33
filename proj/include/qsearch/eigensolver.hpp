#pragma once

#include <vector>

#include "qsearch/matrix.hpp"

namespace qsearch {

/// Ascending eigenvalues, eigenvectors as columns. gap = l2 - l1, gap2 = l3 - l1
/// (NaN when n < 3).
struct Spectrum {
  std::vector<double> values;
  ComplexMatrix vectors;
  double gap = 0.0;
  double gap2 = 0.0;

  std::size_t size() const { return values.size(); }
};

/// Sizes up to this use cyclic Jacobi; larger real input goes through Householder
/// tridiagonalisation and implicit QL.
inline constexpr std::size_t kJacobiLimit = 192;

/// Each eigenvector's largest-magnitude component is made real and positive (first
/// index wins among magnitudes equal to 1e-9 relative). Eigenvalues closer than 1e-10
/// (scaled by max(1, |lambda|max)) form a cluster whose basis is rebuilt from the unit
/// vectors e_0, e_1, ... projected onto the cluster, so it does not depend on the solver.
/// Throws ContractViolation if the input is not Hermitian within 1e-10 ||H||_F.
Spectrum eigendecompose(const RealMatrix& h);
Spectrum eigendecompose(const ComplexMatrix& h);

/// Lower level entry points, exposed for cross-checking the two solvers.
/// Return unsorted, unnormalised-phase results in (values, vectors).
void jacobi_eigen(RealMatrix& a, std::vector<double>& values, RealMatrix& vectors);
void jacobi_eigen(ComplexMatrix& a, std::vector<double>& values, ComplexMatrix& vectors);
void tridiagonal_ql_eigen(const RealMatrix& a, std::vector<double>& values, RealMatrix& vectors);

}  // namespace qsearch
