#include "qsearch/two_level.hpp"

#include <cmath>

#include "qsearch/errors.hpp"

namespace qsearch {

double TwoLevelSystem::s_overlap(std::size_t k) const {
  const double nn = static_cast<double>(n);
  return vectors(0, k) / std::sqrt(nn) + std::sqrt((nn - 1.0) / nn) * vectors(1, k);
}

namespace {

void fix_phase(double& x, double& y) {
  const double ax = std::abs(x), ay = std::abs(y);
  const double lead = ax >= ay * (1.0 - 1e-9) ? x : y;
  if (lead < 0) {
    x = -x;
    y = -y;
  }
}

}  // namespace

void diagonalize_2x2(const RealMatrix& h, std::array<double, 2>& values, RealMatrix& vectors) {
  const double a = h(0, 0), b = h(0, 1), d = h(1, 1);
  const double mean = 0.5 * (a + d);
  const double r = std::hypot(0.5 * (a - d), b);
  values = {mean - r, mean + r};
  vectors = RealMatrix(2, 2);
  for (std::size_t k = 0; k < 2; ++k) {
    const double lam = values[k];
    double x, y;
    if (r == 0.0) {
      x = k == 0 ? 1.0 : 0.0;
      y = k == 0 ? 0.0 : 1.0;
    } else {
      // two equivalent null vectors of (h - lam); keep the better conditioned one
      const double x1 = b, y1 = lam - a;
      const double x2 = lam - d, y2 = b;
      if (std::hypot(x1, y1) >= std::hypot(x2, y2)) {
        x = x1;
        y = y1;
      } else {
        x = x2;
        y = y2;
      }
      const double nrm = std::hypot(x, y);
      x /= nrm;
      y /= nrm;
    }
    fix_phase(x, y);
    vectors(0, k) = x;
    vectors(1, k) = y;
  }
}

TwoLevelSystem reduce_two_level(std::size_t n, double eps_w, double sigma, GammaPolicy policy) {
  if (n < 2) throw InvalidParameter("two-level reduction needs n >= 2");
  if (!std::isfinite(eps_w)) throw InvalidParameter("eps_w must be finite");
  const double c = policy == GammaPolicy::plain ? 1.0 : 1.0 - sigma;
  if (policy == GammaPolicy::shifted) {
    if (!(sigma >= 0.0 && sigma < 1.0)) throw InvalidParameter("need 0 <= sigma < 1");
    if (std::abs(eps_w) > sigma * (1.0 + 1e-12))
      throw ContractViolation("reduce_two_level: |eps_w| exceeds sigma");
  }
  TwoLevelSystem tl;
  tl.n = n;
  tl.eps_w = eps_w;
  tl.sigma = sigma;
  tl.policy = policy;
  const double hop = -c / std::sqrt(static_cast<double>(n));
  tl.h_red(0, 0) = -1.0 + eps_w;
  tl.h_red(0, 1) = hop;
  tl.h_red(1, 0) = hop;
  tl.h_red(1, 1) = -c;
  diagonalize_2x2(tl.h_red, tl.energies, tl.vectors);
  tl.delta = tl.energies[1] - tl.energies[0];
  return tl;
}

RealMatrix first_order_vectors(std::size_t n, double eps_w, double sigma, GammaPolicy policy) {
  const double sn = std::sqrt(static_cast<double>(n));
  RealMatrix v(2, 2);
  double w1, s1, w2, s2;
  if (policy == GammaPolicy::shifted) {
    const double a = 1.0 / (sn * (sigma - eps_w));
    w1 = 1.0, s1 = a;
    w2 = a, s2 = -1.0;
  } else {
    const double half = std::sqrt(0.25 * eps_w * eps_w + 1.0 / n);
    w1 = 1.0 / sn, s1 = half + 0.5 * eps_w;
    w2 = -(half + 0.5 * eps_w), s2 = 1.0 / sn;
  }
  const double n1 = std::hypot(w1, s1), n2 = std::hypot(w2, s2);
  w1 /= n1, s1 /= n1, w2 /= n2, s2 /= n2;
  fix_phase(w1, s1);
  fix_phase(w2, s2);
  v(0, 0) = w1, v(1, 0) = s1, v(0, 1) = w2, v(1, 1) = s2;
  return v;
}

double leading_order_gap(std::size_t n, double eps_w, double sigma, GammaPolicy policy) {
  if (policy == GammaPolicy::shifted) return sigma - eps_w;
  return std::sqrt(eps_w * eps_w + 4.0 / static_cast<double>(n));
}

}  // namespace qsearch
