#pragma once

#include <array>
#include <cstddef>

#include "qsearch/hamiltonian.hpp"
#include "qsearch/matrix.hpp"

namespace qsearch {

/// Reduced model on span{|w>, |s_wbar>} (basis order w, s_wbar). The mean disorder
/// off the marked site is dropped.
struct TwoLevelSystem {
  std::size_t n = 0;
  double eps_w = 0.0;
  double sigma = 0.0;
  GammaPolicy policy = GammaPolicy::plain;
  RealMatrix h_red{2, 2};
  std::array<double, 2> energies{};
  RealMatrix vectors{2, 2};  // columns |lambda_1>, |lambda_2>
  double delta = 0.0;

  double w_overlap(std::size_t k) const { return vectors(0, k); }     // <w|lambda_k>
  double sbar_overlap(std::size_t k) const { return vectors(1, k); }  // <s_wbar|lambda_k>
  /// <s|lambda_k> with the exact components of |s> in this basis.
  double s_overlap(std::size_t k) const;
};

/// Exact 2x2 eigenpairs of a real symmetric matrix, ascending, with the phase rule of
/// eigendecompose.
void diagonalize_2x2(const RealMatrix& h, std::array<double, 2>& values, RealMatrix& vectors);

/// plain:   [[-1+eps_w, -1/sqrt n], [-1/sqrt n, -1]]
/// shifted: [[-1+eps_w, -(1-sigma)/sqrt n], [-(1-sigma)/sqrt n, -(1-sigma)]]
/// sigma only enters the shifted form; there |eps_w| <= sigma is required.
TwoLevelSystem reduce_two_level(std::size_t n, double eps_w, double sigma, GammaPolicy policy);

/// First-order eigenvectors in closed form, normalised, same phase rule.
/// Shifted policy: |w> + a|s_wbar> and a|w> - |s_wbar>, a = 1/(sqrt n (sigma - eps_w)).
/// Plain policy: (1/sqrt n, h + eps_w/2) and (-(h + eps_w/2), 1/sqrt n) with the half gap
/// h = sqrt(eps_w^2/4 + 1/n); equal to the exact 2x2 result.
RealMatrix first_order_vectors(std::size_t n, double eps_w, double sigma, GammaPolicy policy);

/// Leading-order gaps: sqrt(eps_w^2 + 4/n) (plain), sigma - eps_w (shifted).
double leading_order_gap(std::size_t n, double eps_w, double sigma, GammaPolicy policy);

}  // namespace qsearch
