#pragma once

#include <cstddef>
#include <numbers>
#include <vector>

#include "qsearch/bath.hpp"
#include "qsearch/coupling.hpp"
#include "qsearch/matrix.hpp"
#include "qsearch/ode.hpp"

namespace qsearch {

/// Factor multiplying rate_S in both the tensor and the secular rates.
inline constexpr double kRatePrefactor = 2.0 * std::numbers::pi;
/// Largest retained dimension for the dense tensor (m^4 complex entries).
inline constexpr std::size_t kRedfieldMaxLevels = 40;

/// Energies and density matrices are in the retained eigenbasis.
struct RedfieldTensor {
  std::size_t m = 0;
  std::vector<Complex> r;  // R_abcd at ((a m + b) m + c) m + d
  RealMatrix omegas;       // omega_ab = lambda_a - lambda_b

  Complex operator()(std::size_t a, std::size_t b, std::size_t c, std::size_t d) const {
    return r[((a * m + b) * m + c) * m + d];
  }
  /// L[(ab),(cd)] = -i omega_ab delta_ac delta_bd + R_abcd, so d rho/dt = L rho.
  ComplexMatrix generator() const;
};

struct RedfieldOptions {
  bool force = false;
  double kappa = kRatePrefactor;
};

/// Tensor from the site couplings (all sites see the same bath). Throws ValidityError if
/// g * correlation_time > 1 and !force; InvalidParameter if m exceeds kRedfieldMaxLevels.
RedfieldTensor assemble_redfield(const CouplingCoefficients& coeffs,
                                 const std::vector<double>& energies, const BathSpec& bath,
                                 const RedfieldOptions& opts = {});

struct Trajectory {
  std::vector<double> times;
  std::vector<ComplexMatrix> rho;
};

/// Requires rho0 Hermitian, unit trace and positive semidefinite (1e-10 slack).
Trajectory integrate_master(const RedfieldTensor& tensor, const ComplexMatrix& rho0,
                            const std::vector<double>& times, const OdeOptions& opts = {},
                            OdeStats* stats = nullptr);

/// Stationary state from L rho = 0 with the trace fixed to 1.
ComplexMatrix redfield_steady_state(const RedfieldTensor& tensor);

/// Integrate until ||d rho/dt|| < 1e-10 or t > 20 t_rel_estimate; returns the last state.
ComplexMatrix integrate_to_steady(const RedfieldTensor& tensor, const ComplexMatrix& rho0,
                                  double t_rel_estimate, const OdeOptions& opts = {});

/// |psi><psi| for psi given by its retained-basis components, renormalised. The discarded
/// weight 1 - ||psi||^2 is returned through `defect`.
ComplexMatrix projected_density(const std::vector<Complex>& components, double* defect = nullptr);

}  // namespace qsearch
