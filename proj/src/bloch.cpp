#include "qsearch/bloch.hpp"

#include <cmath>

#include "qsearch/errors.hpp"

namespace qsearch {

BlochState to_bloch(const ComplexMatrix& rho, double time) {
  if (rho.rows() != 2) throw InvalidParameter("Bloch vector needs a 2x2 density matrix");
  return {2.0 * rho(0, 1).real(), -2.0 * rho(0, 1).imag(), (rho(0, 0) - rho(1, 1)).real(), time};
}

ComplexMatrix from_bloch(const BlochState& s) {
  ComplexMatrix rho(2, 2);
  rho(0, 0) = 0.5 * (1.0 + s.rho_z);
  rho(1, 1) = 0.5 * (1.0 - s.rho_z);
  rho(0, 1) = Complex(0.5 * s.rho_x, -0.5 * s.rho_y);
  rho(1, 0) = std::conj(rho(0, 1));
  return rho;
}

BlochSystem bloch_system(const CouplingCoefficients& o, const BathSpec& bath, double delta,
                         double kappa) {
  const double sp = kappa * rate_S(delta, bath), sm = kappa * rate_S(-delta, bath);
  const double s0 = kappa * rate_S(0.0, bath);
  BlochSystem sys;
  auto& M = sys.M;
  M(0, 0) = -0.5 * s0 * o.o3;
  M(0, 1) = delta;
  M(0, 2) = 0.5 * (sp + sm) * o.o2;
  M(1, 0) = -delta;
  M(1, 1) = -(0.5 * s0 * o.o3 + (sp + sm) * o.o1);
  M(1, 2) = 0.0;
  M(2, 0) = s0 * o.o2;
  M(2, 1) = 0.0;
  M(2, 2) = -(sp + sm) * o.o1;
  sys.b = {0.5 * (sm - sp) * o.o2, 0.0, (sp - sm) * o.o1};
  return sys;
}

BlochState pauli_two_level_rhs(const BlochState& s, const CouplingCoefficients& o,
                               const BathSpec& bath, double delta, double kappa) {
  const BlochSystem sys = bloch_system(o, bath, delta, kappa);
  const double v[3] = {s.rho_x, s.rho_y, s.rho_z};
  double d[3];
  for (int i = 0; i < 3; ++i) {
    d[i] = sys.b[i];
    for (int j = 0; j < 3; ++j) d[i] += sys.M(i, j) * v[j];
  }
  return {d[0], d[1], d[2], s.time};
}

std::array<double, 3> bloch_fixed_point(const BlochSystem& sys) {
  // Cramer's rule on M n = -b
  const auto& M = sys.M;
  auto det3 = [](double a, double b, double c, double d, double e, double f, double g, double h,
                 double i) { return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g); };
  const double det = det3(M(0, 0), M(0, 1), M(0, 2), M(1, 0), M(1, 1), M(1, 2), M(2, 0), M(2, 1), M(2, 2));
  if (det == 0.0) throw NumericalError("Bloch system has no unique fixed point");
  const double r0 = -sys.b[0], r1 = -sys.b[1], r2 = -sys.b[2];
  std::array<double, 3> n{};
  n[0] = det3(r0, M(0, 1), M(0, 2), r1, M(1, 1), M(1, 2), r2, M(2, 1), M(2, 2)) / det;
  n[1] = det3(M(0, 0), r0, M(0, 2), M(1, 0), r1, M(1, 2), M(2, 0), r2, M(2, 2)) / det;
  n[2] = det3(M(0, 0), M(0, 1), r0, M(1, 0), M(1, 1), r1, M(2, 0), M(2, 1), r2) / det;
  return n;
}

double damping_rate(const CouplingCoefficients& o, const BathSpec& bath, double delta, double kappa) {
  return 0.5 * kappa * o.o1 * (rate_S(delta, bath) + rate_S(-delta, bath));
}

double analytic_rho_x(double t, double gamma, double delta, double rho_x0) {
  if (t < 0) throw InvalidParameter("analytic_rho_x needs t >= 0");
  const double q = gamma * gamma - delta * delta;
  const double u = q * t * t;
  if (std::abs(u) < 1e-4 || std::abs(q) < 1e-12 * delta * delta) {
    // cosh(kt) and sinh(kt)/k as series in q t^2
    const double c = 1.0 + u / 2.0 + u * u / 24.0 + u * u * u / 720.0;
    const double s = t * (1.0 + u / 6.0 + u * u / 120.0 + u * u * u / 5040.0);
    return rho_x0 * std::exp(-gamma * t) * (c + gamma * s);
  }
  if (q < 0) {
    const double w = std::sqrt(-q);
    return rho_x0 * std::exp(-gamma * t) * (std::cos(w * t) + gamma / w * std::sin(w * t));
  }
  const double k = std::sqrt(q);
  // e^(-G t) cosh/sinh without overflow: exponents -(G-k) t = -Delta^2 t/(G+k) and -(G+k) t
  const double slow = std::exp(-delta * delta / (gamma + k) * t);
  const double fast = std::exp(-(gamma + k) * t);
  return rho_x0 * (0.5 * (slow + fast) + 0.5 * gamma / k * (slow - fast));
}

}  // namespace qsearch
