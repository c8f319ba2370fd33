#pragma once

#include <cstddef>
#include <optional>
#include <string_view>

#include "qsearch/disorder.hpp"
#include "qsearch/graph.hpp"
#include "qsearch/matrix.hpp"

namespace qsearch {

enum class GammaPolicy { plain, shifted };

std::string_view to_string(GammaPolicy p);
GammaPolicy gamma_policy_from_string(std::string_view name);

/// Hopping rate: plain -> 1/n, shifted -> (1 - sigma)/n. The shifted choice puts the
/// marked node below the rest of the spectrum so the ground state overlaps |w>.
double gamma_policy(std::size_t n, double sigma, GammaPolicy policy);

/// H = -depth |w><w| - gamma A_G + diag(eps). Energies are in units of the oracle depth
/// (default 1). Above kDenseLimit only complete graphs are accepted and the operator
/// stays symbolic: it can feed the two-level reduction but has no matrix.
class SearchHamiltonian {
 public:
  SearchHamiltonian(GraphSpec graph, std::size_t w, double gamma,
                    std::optional<DisorderField> disorder, double oracle_depth = 1.0);

  const GraphSpec& graph() const { return graph_; }
  std::size_t n() const { return graph_.n(); }
  std::size_t marked() const { return w_; }
  double gamma() const { return gamma_; }
  double oracle_depth() const { return depth_; }
  const std::optional<DisorderField>& disorder() const { return disorder_; }
  double eps(std::size_t i) const { return disorder_ ? disorder_->epsilons[i] : 0.0; }

  bool is_dense() const { return matrix_.has_value(); }
  /// Throws ContractViolation for a symbolic operator.
  const RealMatrix& matrix() const;

  /// On the complete graph -gamma A = -gamma n |s><s| + gamma I, so eigenvalues of
  /// matrix() minus this shift are the energies in the projector convention
  /// -|w><w| - gamma n |s><s| + diag(eps). Zero for custom graphs.
  double identity_shift() const { return graph_.kind() == GraphKind::complete ? gamma_ : 0.0; }

 private:
  GraphSpec graph_;
  std::size_t w_;
  double gamma_;
  std::optional<DisorderField> disorder_;
  double depth_;
  std::optional<RealMatrix> matrix_;
};

SearchHamiltonian build_search_hamiltonian(const GraphSpec& graph, std::size_t w, double gamma,
                                           std::optional<DisorderField> disorder = std::nullopt,
                                           double oracle_depth = 1.0);

/// -depth |w><w| - gamma n |s><s| + diag(eps), built independently of the adjacency.
RealMatrix projector_form_matrix(std::size_t n, std::size_t w, double gamma,
                                 const std::optional<DisorderField>& disorder,
                                 double oracle_depth = 1.0);

}  // namespace qsearch
