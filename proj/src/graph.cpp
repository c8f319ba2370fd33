#include "qsearch/graph.hpp"

#include <string>

#include "qsearch/errors.hpp"

namespace qsearch {

std::string_view to_string(GraphKind kind) {
  return kind == GraphKind::complete ? "complete" : "custom";
}

GraphKind graph_kind_from_string(std::string_view name) {
  if (name == "complete") return GraphKind::complete;
  if (name == "custom") return GraphKind::custom;
  throw InvalidParameter("unknown graph kind '" + std::string(name) + "'");
}

GraphSpec GraphSpec::complete(std::size_t n) {
  if (n < 2) throw InvalidParameter("graph needs at least 2 nodes, got " + std::to_string(n));
  return GraphSpec(n, GraphKind::complete, std::nullopt);
}

GraphSpec GraphSpec::custom(RealMatrix adjacency) {
  const std::size_t n = adjacency.rows();
  if (n < 2) throw InvalidParameter("graph needs at least 2 nodes, got " + std::to_string(n));
  if (adjacency.cols() != n) throw InvalidParameter("adjacency matrix must be square");
  if (n > kDenseLimit) throw InvalidParameter("custom graph above the dense limit");
  for (std::size_t i = 0; i < n; ++i) {
    if (adjacency(i, i) != 0.0) throw InvalidParameter("adjacency must have a zero diagonal");
    for (std::size_t j = i + 1; j < n; ++j)
      if (adjacency(i, j) != adjacency(j, i))
        throw InvalidParameter("adjacency must be symmetric");
  }
  return GraphSpec(n, GraphKind::custom, std::move(adjacency));
}

double GraphSpec::adjacency(std::size_t i, std::size_t j) const {
  if (kind_ == GraphKind::complete) return i == j ? 0.0 : 1.0;
  return (*adjacency_)(i, j);
}

RealMatrix GraphSpec::dense_adjacency() const {
  if (adjacency_) return *adjacency_;
  if (n_ > kDenseLimit)
    throw InvalidParameter("refusing to materialise a " + std::to_string(n_) +
                           "-node graph (dense limit " + std::to_string(kDenseLimit) + ")");
  RealMatrix a(n_, n_, 1.0);
  for (std::size_t i = 0; i < n_; ++i) a(i, i) = 0.0;
  return a;
}

GraphSpec build_complete_graph(std::size_t n) { return GraphSpec::complete(n); }

}  // namespace qsearch
