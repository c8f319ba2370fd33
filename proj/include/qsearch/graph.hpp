#pragma once

#include <cstddef>
#include <optional>
#include <string_view>

#include "qsearch/matrix.hpp"

namespace qsearch {

/// Graphs above this size are never materialised densely.
inline constexpr std::size_t kDenseLimit = 4096;

enum class GraphKind { complete, custom };

std::string_view to_string(GraphKind kind);
GraphKind graph_kind_from_string(std::string_view name);

/// Search graph: node count plus adjacency. Complete graphs store only the tag and
/// size; their adjacency is generated on demand.
class GraphSpec {
 public:
  static GraphSpec complete(std::size_t n);
  /// Throws InvalidParameter unless `adjacency` is square, symmetric, zero-diagonal.
  static GraphSpec custom(RealMatrix adjacency);

  std::size_t n() const { return n_; }
  GraphKind kind() const { return kind_; }

  double adjacency(std::size_t i, std::size_t j) const;
  /// Throws InvalidParameter for n above kDenseLimit.
  RealMatrix dense_adjacency() const;

 private:
  GraphSpec(std::size_t n, GraphKind kind, std::optional<RealMatrix> adjacency)
      : n_(n), kind_(kind), adjacency_(std::move(adjacency)) {}

  std::size_t n_;
  GraphKind kind_;
  std::optional<RealMatrix> adjacency_;
};

GraphSpec build_complete_graph(std::size_t n);

}  // namespace qsearch
