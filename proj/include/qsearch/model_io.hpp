#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qsearch/disorder.hpp"
#include "qsearch/graph.hpp"
#include "qsearch/hamiltonian.hpp"

namespace qsearch {

enum class ModelKind { reduced, full };

std::string_view to_string(ModelKind m);

/// The "system" document:
///   {"n", "kind", "adjacency"?, "sigma", "seed" | "seeds", "distribution", "w",
///    "gamma_policy", "eps_w"?, "model"?, "oracle_depth"?}
/// eps_w overrides the drawn energy of the marked site. model defaults to full up to
/// the dense limit and reduced above it.
struct SystemConfig {
  std::size_t n = 0;
  GraphKind kind = GraphKind::complete;
  std::optional<RealMatrix> adjacency;
  double sigma = 0.0;
  std::vector<std::uint64_t> seeds{1};
  bool seeds_given = false;  // seed or seeds present in the document
  Distribution distribution = Distribution::uniform;
  std::size_t w = 0;
  GammaPolicy gamma_policy = GammaPolicy::plain;
  std::optional<double> eps_w;
  ModelKind model = ModelKind::full;
  double oracle_depth = 1.0;
};

/// Throws ConfigError on unknown keys, wrong types or inconsistent values.
SystemConfig system_from_json(const nlohmann::json& j);
nlohmann::json system_to_json(const SystemConfig& s);

GraphSpec make_graph(const SystemConfig& s);
double make_gamma(const SystemConfig& s);
/// Full field for one seed, with the eps_w override applied.
DisorderField make_disorder(const SystemConfig& s, std::uint64_t seed);
/// Energy at the marked site for one seed (no full draw needed).
double marked_energy(const SystemConfig& s, std::uint64_t seed);
SearchHamiltonian make_hamiltonian(const SystemConfig& s, std::uint64_t seed);

}  // namespace qsearch
