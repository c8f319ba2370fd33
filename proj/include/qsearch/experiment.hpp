#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qsearch/bath.hpp"
#include "qsearch/model_io.hpp"
#include "qsearch/ode.hpp"
#include "qsearch/redfield.hpp"
#include "qsearch/two_level.hpp"
#include "qsearch/unitary.hpp"

namespace qsearch {

inline constexpr const char* kVersion = "1.0.0";

enum class Mode { unitary, redfield, secular, correlation, sweep, validate, spectrum, recipe };
std::string_view to_string(Mode m);
Mode mode_from_string(std::string_view s);

enum class Dynamics { unitary, redfield, secular };
std::string_view to_string(Dynamics d);

struct GridSpec {
  std::optional<double> t_max;
  std::optional<std::size_t> points;
};

struct SweepSpec {
  std::string parameter;  // n, sigma, beta, g, omega_c
  std::vector<double> values;  // +inf allowed for beta
  Dynamics dynamics = Dynamics::secular;
  bool fit = true;
  bool trajectories = false;  // per-point CSVs
};

/// One entry of a recipe: a dynamics run with partial overrides of the parent config.
struct SeriesSpec {
  std::string label;
  Dynamics dynamics = Dynamics::secular;
  nlohmann::json bath_override;  // object or null
  nlohmann::json grid_override;
};

struct OutputSpec {
  std::string path = "out";
  std::string format = "both";  // csv, json, both
};

struct ExperimentConfig {
  Mode mode = Mode::unitary;
  std::optional<SystemConfig> system;
  std::optional<BathSpec> bath;
  GridSpec grid;
  std::optional<SweepSpec> sweep;
  std::vector<SeriesSpec> series;
  OutputSpec output;
  ValidityMargins margins;
  OdeOptions ode;
  std::size_t levels = 2;  // retained levels for full-model Redfield runs
  bool force = false;      // same as --force, recorded in the config
  nlohmann::json raw;      // the document as read, for provenance
};

/// Strict schema; throws ConfigError.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::json bath_to_json(const BathSpec& b);

/// FNV-1a 64 of the canonical config dump without the output block, as 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);

struct RunOptions {
  std::filesystem::path out_dir = "out";
  unsigned workers = 1;
  bool force = false;
};

/// Reduced or full description of one disorder realisation, reduced to the data the
/// open-system code needs.
struct PreparedSystem {
  std::size_t n = 0;
  ModelKind model = ModelKind::reduced;
  double eps_w = 0.0;
  double delta = 0.0;
  std::vector<double> energies;      // retained levels, ascending
  std::vector<Complex> w_overlaps;   // <w|lambda_k>
  std::vector<Complex> s_overlaps;   // <lambda_k|s>
  CouplingCoefficients coupling;
  std::optional<TwoLevelSystem> two_level;
  std::optional<Spectrum> spectrum;
  std::optional<SearchHamiltonian> hamiltonian;
};

PreparedSystem prepare_system(const SystemConfig& s, std::uint64_t seed, std::size_t levels = 2);

struct OpenRunResult {
  Trajectory trajectory;
  std::vector<double> p_w;
  double target = 0.0;           // steady P_w of the Gibbs state
  double t_rel_fit = 0.0;        // NaN when no estimate
  std::string fit_error;
  double t_rel_formula = 0.0;    // 1/(W12 + W21)
  double damping_time = 0.0;     // 1/Gamma
  double p_suc = 0.0;
  double truncation_error = 0.0;
  double projection_defect = 0.0;
  ValidityReport validity;
};

/// Secular or full Redfield run on the prepared system. Default grid: 10 t_rel, with
/// enough points to resolve the Bohr oscillation for Redfield runs.
OpenRunResult run_open(const PreparedSystem& sys, const BathSpec& bath, Dynamics dyn,
                       const GridSpec& grid, const ValidityMargins& margins, const OdeOptions& ode,
                       bool force);

ClosedRunResult run_closed(const PreparedSystem& sys, const GridSpec& grid);

/// Validity policy: Redfield runs hard-fail on the Markov bound, secular runs on either.
void enforce_validity(const ValidityReport& r, Dynamics dyn, bool force);

struct RunReport {
  std::vector<std::filesystem::path> files;
  std::vector<std::string> warnings;
};

/// Executes the configured mode, writing CSV/JSON artifacts under opts.out_dir.
RunReport run(const ExperimentConfig& cfg, const RunOptions& opts);

// Writers
std::string provenance_line(const ExperimentConfig& cfg);
std::string format_number(double x);
void write_csv(const std::filesystem::path& path, const std::string& provenance,
               const std::vector<std::string>& columns, const std::vector<std::vector<double>>& rows);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

nlohmann::json to_json(const ValidityReport& r);
nlohmann::json to_json(const TwoLevelSystem& tl);
nlohmann::json to_json(const Spectrum& s, std::size_t w);

}  // namespace qsearch
