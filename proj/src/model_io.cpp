#include "qsearch/model_io.hpp"

#include <cmath>

#include "json_util.hpp"

namespace qsearch {

using nlohmann::json;
using namespace detail;

std::string_view to_string(ModelKind m) { return m == ModelKind::reduced ? "reduced" : "full"; }

SystemConfig system_from_json(const json& j) {
  constexpr std::string_view where = "system";
  check_keys(j,
             {"n", "kind", "adjacency", "sigma", "seed", "seeds", "distribution", "w",
              "gamma_policy", "eps_w", "model", "oracle_depth"},
             where);
  SystemConfig s;
  try {
    if (j.contains("kind")) s.kind = graph_kind_from_string(as_string(j["kind"], "system.kind"));
    if (s.kind == GraphKind::custom) {
      // nested rows, or a flat row-major list of n*n entries
      const json& rows = need(j, "adjacency", where);
      if (!rows.is_array() || rows.empty()) throw ConfigError("system.adjacency must be an array");
      const bool flat = !rows[0].is_array();
      std::size_t m = rows.size();
      if (flat) {
        m = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(rows.size()))));
        if (m * m != rows.size()) throw ConfigError("flat system.adjacency needs n*n entries");
      }
      RealMatrix a(m, m);
      for (std::size_t i = 0; i < m; ++i) {
        if (flat) {
          for (std::size_t k = 0; k < m; ++k) a(i, k) = as_number(rows[i * m + k], "adjacency entry");
          continue;
        }
        if (!rows[i].is_array() || rows[i].size() != m)
          throw ConfigError("system.adjacency must be square");
        for (std::size_t k = 0; k < m; ++k) a(i, k) = as_number(rows[i][k], "adjacency entry");
      }
      s.adjacency = std::move(a);
      s.n = m;
      if (j.contains("n") && as_unsigned(j["n"], "system.n") != m)
        throw ConfigError("system.n disagrees with the adjacency size");
    } else {
      if (j.contains("adjacency")) throw ConfigError("system.adjacency is only valid for kind=custom");
      s.n = as_unsigned(need(j, "n", where), "system.n");
    }
    if (s.n < 2) throw ConfigError("system.n must be >= 2");

    if (j.contains("sigma")) s.sigma = as_number(j["sigma"], "system.sigma");
    if (s.sigma < 0) throw ConfigError("system.sigma must be >= 0");
    if (j.contains("seed") && j.contains("seeds"))
      throw ConfigError("give either system.seed or system.seeds, not both");
    s.seeds_given = j.contains("seed") || j.contains("seeds");
    if (j.contains("seed")) s.seeds = {as_unsigned(j["seed"], "system.seed")};
    if (j.contains("seeds")) {
      const json& v = j["seeds"];
      if (!v.is_array() || v.empty()) throw ConfigError("system.seeds must be a non-empty array");
      s.seeds.clear();
      for (const auto& x : v) s.seeds.push_back(as_unsigned(x, "system.seeds entry"));
    }
    if (j.contains("distribution"))
      s.distribution = distribution_from_string(as_string(j["distribution"], "system.distribution"));
    if (j.contains("w")) s.w = as_unsigned(j["w"], "system.w");
    if (s.w >= s.n) throw ConfigError("system.w out of range");
    if (j.contains("gamma_policy"))
      s.gamma_policy = gamma_policy_from_string(as_string(j["gamma_policy"], "system.gamma_policy"));
    if (j.contains("eps_w")) s.eps_w = as_number(j["eps_w"], "system.eps_w");
    if (j.contains("oracle_depth")) s.oracle_depth = as_number(j["oracle_depth"], "system.oracle_depth");
    if (!(s.oracle_depth > 0)) throw ConfigError("system.oracle_depth must be > 0");

    s.model = s.n > kDenseLimit ? ModelKind::reduced : ModelKind::full;
    if (j.contains("model")) {
      const std::string m = as_string(j["model"], "system.model");
      if (m == "reduced") s.model = ModelKind::reduced;
      else if (m == "full") s.model = ModelKind::full;
      else throw ConfigError("system.model must be 'reduced' or 'full'");
    }
    if (s.model == ModelKind::full && s.n > kDenseLimit)
      throw ConfigError("system.model=full needs n <= " + std::to_string(kDenseLimit));
    if (s.model == ModelKind::reduced && s.kind == GraphKind::custom)
      throw ConfigError("the two-level reduction is defined for complete graphs only");
  } catch (const InvalidParameter& e) {
    throw ConfigError(e.what());
  }
  return s;
}

json system_to_json(const SystemConfig& s) {
  json j;
  j["n"] = s.n;
  j["kind"] = std::string(to_string(s.kind));
  if (s.adjacency) {
    json rows = json::array();
    for (std::size_t i = 0; i < s.n; ++i) {
      json row = json::array();
      for (std::size_t k = 0; k < s.n; ++k) row.push_back((*s.adjacency)(i, k));
      rows.push_back(std::move(row));
    }
    j["adjacency"] = std::move(rows);
  }
  j["sigma"] = s.sigma;
  if (s.seeds.size() == 1) j["seed"] = s.seeds.front();
  else j["seeds"] = s.seeds;
  j["distribution"] = std::string(to_string(s.distribution));
  j["w"] = s.w;
  j["gamma_policy"] = std::string(to_string(s.gamma_policy));
  if (s.eps_w) j["eps_w"] = *s.eps_w;
  j["model"] = std::string(to_string(s.model));
  j["oracle_depth"] = s.oracle_depth;
  return j;
}

GraphSpec make_graph(const SystemConfig& s) {
  if (s.kind == GraphKind::custom) return GraphSpec::custom(*s.adjacency);
  return GraphSpec::complete(s.n);
}

double make_gamma(const SystemConfig& s) { return gamma_policy(s.n, s.sigma, s.gamma_policy); }

DisorderField make_disorder(const SystemConfig& s, std::uint64_t seed) {
  DisorderField f = sample_disorder(s.n, s.sigma, s.distribution, seed);
  if (s.eps_w) f.epsilons[s.w] = *s.eps_w;
  return f;
}

double marked_energy(const SystemConfig& s, std::uint64_t seed) {
  if (s.eps_w) return *s.eps_w;
  return sample_disorder_at(s.w, s.sigma, s.distribution, seed);
}

SearchHamiltonian make_hamiltonian(const SystemConfig& s, std::uint64_t seed) {
  std::optional<DisorderField> field;
  if (s.sigma > 0 || s.eps_w) field = make_disorder(s, seed);
  return build_search_hamiltonian(make_graph(s), s.w, make_gamma(s), std::move(field),
                                  s.oracle_depth);
}

}  // namespace qsearch
