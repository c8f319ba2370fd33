#pragma once

#include <array>

#include "qsearch/bath.hpp"
#include "qsearch/coupling.hpp"
#include "qsearch/matrix.hpp"
#include "qsearch/redfield.hpp"

namespace qsearch {

/// Two-level state in the eigenbasis, index 1 = ground:
/// rho_x = 2 Re rho_12, rho_y = -2 Im rho_12, rho_z = rho_11 - rho_22.
struct BlochState {
  double rho_x = 0.0, rho_y = 0.0, rho_z = 0.0;
  double time = 0.0;

  double norm2() const { return rho_x * rho_x + rho_y * rho_y + rho_z * rho_z; }
};

BlochState to_bloch(const ComplexMatrix& rho, double time = 0.0);
ComplexMatrix from_bloch(const BlochState& s);

/// d n/dt = M n + b for the two-level Redfield dynamics, with Sp = k S(Delta),
/// Sm = k S(-Delta), S0 = k S(0):
///   x' =  Delta y - S0 O3 x / 2 + (Sp+Sm) O2 z / 2 + (Sm-Sp) O2 / 2
///   y' = -Delta x - (S0 O3 / 2 + (Sp+Sm) O1) y
///   z' =  S0 O2 x - (Sp+Sm) O1 z + (Sp-Sm) O1
struct BlochSystem {
  RealMatrix M{3, 3};
  std::array<double, 3> b{};
};

BlochSystem bloch_system(const CouplingCoefficients& o, const BathSpec& bath, double delta,
                         double kappa = kRatePrefactor);

/// Derivative of the Bloch vector (the time field carries over unchanged).
BlochState pauli_two_level_rhs(const BlochState& s, const CouplingCoefficients& o,
                               const BathSpec& bath, double delta, double kappa = kRatePrefactor);

/// Solves M n* + b = 0.
std::array<double, 3> bloch_fixed_point(const BlochSystem& sys);

/// Gamma = (k/2) O1 (S(Delta) + S(-Delta)), the damping of rho_x when O2 = O3 = 0.
double damping_rate(const CouplingCoefficients& o, const BathSpec& bath, double delta,
                    double kappa = kRatePrefactor);

/// rho_x(t) = rho_x0 e^(-Gamma t) [cosh(kt) + (Gamma/k) sinh(kt)], k = sqrt(Gamma^2 - Delta^2),
/// for rho_y(0) = 0. rho_x0 defaults to -1.
double analytic_rho_x(double t, double gamma_rate, double delta, double rho_x0 = -1.0);

}  // namespace qsearch
