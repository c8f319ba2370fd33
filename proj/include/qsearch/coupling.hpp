#pragma once

#include <cstddef>
#include <vector>

#include "qsearch/eigensolver.hpp"
#include "qsearch/matrix.hpp"
#include "qsearch/two_level.hpp"

namespace qsearch {

/// Sites sharing the same coefficient row, counted `weight` times. The reduced model
/// needs only two classes (the marked site and the n-1 others).
struct SiteClass {
  double weight = 1.0;
  std::vector<Complex> c;  // c_ik = <lambda_k|i>, k < m
};

struct CouplingCoefficients {
  std::size_t m = 0;
  std::vector<SiteClass> sites;
  RealMatrix lambda;  // Lambda_kl = sum_i |c_ik|^2 |c_il|^2
  double o1 = 0.0, o2 = 0.0, o3 = 0.0;
  std::vector<Complex> a12;  // A^i_12 = c_i1 c_i2^* per site class (empty if m < 2)

  /// A^i_xy = c_ix c_iy^*
  Complex a(std::size_t cls, std::size_t x, std::size_t y) const {
    return sites[cls].c[x] * std::conj(sites[cls].c[y]);
  }
  double site_count() const;
};

/// Fills lambda, o1..o3 and a12 from `sites`.
CouplingCoefficients make_coupling(std::size_t m, std::vector<SiteClass> sites);

/// Reduced model, m = 2.
CouplingCoefficients coupling_coefficients(const TwoLevelSystem& tl);
/// From a full spectrum, keeping the lowest `retained` levels (2 or n).
CouplingCoefficients coupling_coefficients(const Spectrum& spectrum, std::size_t retained);

}  // namespace qsearch
