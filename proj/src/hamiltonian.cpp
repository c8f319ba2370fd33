#include "qsearch/hamiltonian.hpp"

#include <cmath>
#include <string>

#include "qsearch/errors.hpp"

namespace qsearch {

std::string_view to_string(GammaPolicy p) { return p == GammaPolicy::plain ? "plain" : "shifted"; }

GammaPolicy gamma_policy_from_string(std::string_view name) {
  if (name == "plain") return GammaPolicy::plain;
  if (name == "shifted") return GammaPolicy::shifted;
  throw InvalidParameter("unknown gamma policy '" + std::string(name) + "'");
}

double gamma_policy(std::size_t n, double sigma, GammaPolicy policy) {
  if (n < 2) throw InvalidParameter("gamma policy needs n >= 2");
  if (!(sigma >= 0.0)) throw InvalidParameter("sigma must be >= 0");
  if (sigma >= 1.0) throw InvalidParameter("sigma >= 1 is outside the small-disorder regime");
  const double nn = static_cast<double>(n);
  return policy == GammaPolicy::plain ? 1.0 / nn : (1.0 - sigma) / nn;
}

SearchHamiltonian::SearchHamiltonian(GraphSpec graph, std::size_t w, double gamma,
                                     std::optional<DisorderField> disorder, double oracle_depth)
    : graph_(std::move(graph)), w_(w), gamma_(gamma), disorder_(std::move(disorder)),
      depth_(oracle_depth) {
  const std::size_t n = graph_.n();
  if (w_ >= n)
    throw InvalidParameter("marked node " + std::to_string(w_) + " out of range for n=" +
                           std::to_string(n));
  if (!(gamma_ > 0.0) || !std::isfinite(gamma_)) throw InvalidParameter("gamma must be > 0");
  if (disorder_ && disorder_->size() != n)
    throw InvalidParameter("disorder field length does not match the graph");
  if (n > kDenseLimit) {
    if (graph_.kind() != GraphKind::complete)
      throw InvalidParameter("custom graphs above the dense limit are not supported");
    return;
  }
  RealMatrix h(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    auto row = h.row(i);
    for (std::size_t j = 0; j < n; ++j) {
      const double a = graph_.adjacency(i, j);
      if (a != 0.0) row[j] = -gamma_ * a;
    }
    row[i] += eps(i);
  }
  h(w_, w_) -= depth_;
  matrix_ = std::move(h);
}

const RealMatrix& SearchHamiltonian::matrix() const {
  if (!matrix_) throw ContractViolation("symbolic Hamiltonian has no dense matrix");
  return *matrix_;
}

SearchHamiltonian build_search_hamiltonian(const GraphSpec& graph, std::size_t w, double gamma,
                                           std::optional<DisorderField> disorder,
                                           double oracle_depth) {
  return SearchHamiltonian(graph, w, gamma, std::move(disorder), oracle_depth);
}

RealMatrix projector_form_matrix(std::size_t n, std::size_t w, double gamma,
                                 const std::optional<DisorderField>& disorder,
                                 double oracle_depth) {
  if (w >= n) throw InvalidParameter("marked node out of range");
  if (n > kDenseLimit) throw InvalidParameter("projector form above the dense limit");
  // gamma n |s><s| has every entry equal to gamma.
  RealMatrix h(n, n, -gamma);
  for (std::size_t i = 0; i < n; ++i) h(i, i) += disorder ? disorder->epsilons[i] : 0.0;
  h(w, w) -= oracle_depth;
  return h;
}

}  // namespace qsearch
