#include "qsearch/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "json_util.hpp"
#include "qsearch/bloch.hpp"
#include "qsearch/coupling.hpp"
#include "qsearch/eigensolver.hpp"
#include "qsearch/errors.hpp"
#include "qsearch/relaxation.hpp"
#include "qsearch/secular.hpp"
#include "qsearch/sweep.hpp"

namespace qsearch {

using nlohmann::json;
using namespace detail;

namespace fs = std::filesystem;

std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::unitary: return "unitary";
    case Mode::redfield: return "redfield";
    case Mode::secular: return "secular";
    case Mode::correlation: return "correlation";
    case Mode::sweep: return "sweep";
    case Mode::validate: return "validate";
    case Mode::spectrum: return "spectrum";
    default: return "recipe";
  }
}

Mode mode_from_string(std::string_view s) {
  for (Mode m : {Mode::unitary, Mode::redfield, Mode::secular, Mode::correlation, Mode::sweep,
                 Mode::validate, Mode::spectrum, Mode::recipe})
    if (to_string(m) == s) return m;
  throw ConfigError("unknown mode '" + std::string(s) + "'");
}

std::string_view to_string(Dynamics d) {
  switch (d) {
    case Dynamics::unitary: return "unitary";
    case Dynamics::redfield: return "redfield";
    default: return "secular";
  }
}

namespace {

Dynamics dynamics_from_string(const std::string& s) {
  if (s == "unitary") return Dynamics::unitary;
  if (s == "redfield") return Dynamics::redfield;
  if (s == "secular") return Dynamics::secular;
  throw ConfigError("unknown dynamics '" + s + "'");
}

double beta_value(const json& v, std::string_view what) {
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
    throw ConfigError(std::string(what) + " must be a number or \"inf\"");
  }
  const double b = as_number(v, what);
  if (!(b > 0)) throw ConfigError(std::string(what) + " must be > 0");
  return b;
}

BathSpec parse_bath(const json& j) {
  check_keys(j, {"beta", "g", "omega_c", "eta", "d"}, "bath");
  BathSpec b;
  b.beta = beta_value(need(j, "beta", "bath"), "bath.beta");
  b.g = as_number(need(j, "g", "bath"), "bath.g");
  b.omega_c = as_number(need(j, "omega_c", "bath"), "bath.omega_c");
  if (j.contains("eta")) b.eta = as_number(j["eta"], "bath.eta");
  if (j.contains("d")) b.d = as_number(j["d"], "bath.d");
  try {
    validate(b);
  } catch (const InvalidParameter& e) {
    throw ConfigError(e.what());
  }
  return b;
}

GridSpec parse_grid(const json& j, std::string_view where) {
  check_keys(j, {"t_max", "points"}, where);
  GridSpec g;
  if (j.contains("t_max")) {
    g.t_max = as_number(j["t_max"], "grid.t_max");
    if (!(*g.t_max > 0)) throw ConfigError("grid.t_max must be > 0");
  }
  if (j.contains("points")) {
    g.points = as_unsigned(j["points"], "grid.points");
    if (*g.points < 2) throw ConfigError("grid.points must be >= 2");
  }
  return g;
}

}  // namespace

json bath_to_json(const BathSpec& b) {
  json j;
  if (b.zero_temperature()) j["beta"] = "inf";
  else j["beta"] = b.beta;
  j["g"] = b.g;
  j["omega_c"] = b.omega_c;
  j["eta"] = b.eta;
  j["d"] = b.d;
  return j;
}

ExperimentConfig parse_config(const json& j) {
  check_keys(j, {"mode", "system", "bath", "grid", "sweep", "series", "output", "validity", "solver", "levels",
                  "force"},
             "config");
  ExperimentConfig c;
  c.raw = j;
  c.mode = mode_from_string(as_string(need(j, "mode", "config"), "mode"));
  if (j.contains("system")) c.system = system_from_json(j["system"]);
  if (j.contains("bath")) c.bath = parse_bath(j["bath"]);
  if (j.contains("grid")) c.grid = parse_grid(j["grid"], "grid");
  if (j.contains("output")) {
    const json& o = j["output"];
    check_keys(o, {"path", "format"}, "output");
    if (o.contains("path")) c.output.path = as_string(o["path"], "output.path");
    if (o.contains("format")) {
      c.output.format = as_string(o["format"], "output.format");
      if (c.output.format != "csv" && c.output.format != "json" && c.output.format != "both")
        throw ConfigError("output.format must be csv, json or both");
    }
  }
  if (j.contains("validity")) {
    const json& v = j["validity"];
    check_keys(v, {"chi_markov", "chi_secular", "beta_star_c"}, "validity");
    if (v.contains("chi_markov")) c.margins.chi_markov = as_number(v["chi_markov"], "validity.chi_markov");
    if (v.contains("chi_secular")) c.margins.chi_secular = as_number(v["chi_secular"], "validity.chi_secular");
    if (v.contains("beta_star_c")) c.margins.beta_star_c = as_number(v["beta_star_c"], "validity.beta_star_c");
  }
  if (j.contains("solver")) {
    const json& s = j["solver"];
    check_keys(s, {"atol", "rtol"}, "solver");
    if (s.contains("atol")) c.ode.atol = as_number(s["atol"], "solver.atol");
    if (s.contains("rtol")) c.ode.rtol = as_number(s["rtol"], "solver.rtol");
    if (!(c.ode.atol > 0 && c.ode.rtol > 0)) throw ConfigError("solver tolerances must be > 0");
  }
  if (j.contains("force")) c.force = as_bool(j["force"], "force");
  if (j.contains("levels")) c.levels = as_unsigned(j["levels"], "levels");
  if (j.contains("sweep")) {
    const json& s = j["sweep"];
    check_keys(s, {"parameter", "values", "dynamics", "fit", "trajectories"}, "sweep");
    SweepSpec sw;
    sw.parameter = as_string(need(s, "parameter", "sweep"), "sweep.parameter");
    if (sw.parameter != "n" && sw.parameter != "sigma" && sw.parameter != "beta" && sw.parameter != "g" &&
        sw.parameter != "omega_c")
      throw ConfigError("sweep.parameter must be one of n, sigma, beta, g, omega_c");
    const json& vals = need(s, "values", "sweep");
    if (!vals.is_array() || vals.empty()) throw ConfigError("sweep.values must be a non-empty array");
    for (const auto& v : vals)
      sw.values.push_back(sw.parameter == "beta" ? beta_value(v, "sweep.values entry")
                                                 : as_number(v, "sweep.values entry"));
    if (s.contains("dynamics")) sw.dynamics = dynamics_from_string(as_string(s["dynamics"], "sweep.dynamics"));
    if (s.contains("fit")) sw.fit = as_bool(s["fit"], "sweep.fit");
    if (s.contains("trajectories")) sw.trajectories = as_bool(s["trajectories"], "sweep.trajectories");
    if (sw.parameter == "n")
      for (double v : sw.values)
        if (v < 2 || v != std::floor(v)) throw ConfigError("sweep over n needs integer values >= 2");
    c.sweep = std::move(sw);
  }
  if (j.contains("series")) {
    const json& arr = j["series"];
    if (!arr.is_array() || arr.empty()) throw ConfigError("series must be a non-empty array");
    for (const auto& e : arr) {
      check_keys(e, {"label", "dynamics", "bath", "grid"}, "series entry");
      SeriesSpec s;
      s.label = as_string(need(e, "label", "series entry"), "series.label");
      if (s.label.empty() || s.label.find_first_of("/\\") != std::string::npos)
        throw ConfigError("series.label must be a plain file stem");
      s.dynamics = dynamics_from_string(as_string(need(e, "dynamics", "series entry"), "series.dynamics"));
      if (e.contains("bath")) {
        require_object(e["bath"], "series.bath");
        s.bath_override = e["bath"];
      }
      if (e.contains("grid")) {
        parse_grid(e["grid"], "series.grid");
        s.grid_override = e["grid"];
      }
      c.series.push_back(std::move(s));
    }
  }

  // mode requirements
  auto need_system = [&] {
    if (!c.system) throw ConfigError("mode " + std::string(to_string(c.mode)) + " needs a system block");
  };
  auto need_bath = [&] {
    if (!c.bath) throw ConfigError("mode " + std::string(to_string(c.mode)) + " needs a bath block");
  };
  switch (c.mode) {
    case Mode::unitary:
    case Mode::spectrum: need_system(); break;
    case Mode::redfield:
    case Mode::secular:
    case Mode::validate: need_system(); need_bath(); break;
    case Mode::correlation: need_bath(); break;
    case Mode::sweep:
      need_system();
      if (!c.sweep) throw ConfigError("mode sweep needs a sweep block");
      if (c.sweep->dynamics != Dynamics::unitary) need_bath();
      break;
    case Mode::recipe:
      need_system();
      if (c.series.empty()) throw ConfigError("mode recipe needs a series list");
      for (const auto& s : c.series)
        if (s.dynamics != Dynamics::unitary && !c.bath && s.bath_override.is_null())
          throw ConfigError("series '" + s.label + "' needs bath parameters");
      break;
  }
  if (c.sweep && c.mode != Mode::sweep) throw ConfigError("sweep block is only valid in mode sweep");
  if (!c.series.empty() && c.mode != Mode::recipe) throw ConfigError("series list is only valid in mode recipe");
  if (c.system && c.levels != 2) {
    if (c.system->model != ModelKind::full || c.levels != c.system->n)
      throw ConfigError("levels must be 2, or n for a full model");
    if (c.levels > kRedfieldMaxLevels)
      throw ConfigError("levels = n is capped at " + std::to_string(kRedfieldMaxLevels));
  }
  return c;
}

ExperimentConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config is not valid JSON: " + std::string(e.what()));
  }
  return parse_config(j);
}

std::string config_hash(const ExperimentConfig& cfg) {
  json j = cfg.raw;
  if (j.is_object()) j.erase("output");
  const std::string s = j.dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string provenance_line(const ExperimentConfig& cfg) {
  return std::string("# qsearch ") + kVersion + " config=" + config_hash(cfg);
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

void write_csv(const fs::path& path, const std::string& provenance, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << provenance << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
  out << '\n';
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << format_number(r[i]);
    out << '\n';
  }
}

void write_json(const fs::path& path, const json& j) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

namespace {

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

}  // namespace

json to_json(const ValidityReport& r) {
  json j;
  j["delta_t"] = number_or_null(r.delta_t);
  j["markov_ratio"] = r.markov_ratio;
  j["secular_ratio"] = number_or_null(r.secular_ratio);
  j["markov_status"] = std::string(to_string(r.markov));
  j["secular_status"] = std::string(to_string(r.secular));
  j["markov_ok"] = r.markov_ok;
  j["secular_ok"] = r.secular_ok;
  j["beta_star"] = number_or_null(r.beta_star);
  j["two_level_ok"] = r.two_level_ok;
  j["notes"] = r.notes;
  return j;
}

json to_json(const TwoLevelSystem& tl) {
  json j;
  j["n"] = tl.n;
  j["eps_w"] = tl.eps_w;
  j["sigma"] = tl.sigma;
  j["gamma_policy"] = std::string(to_string(tl.policy));
  j["delta"] = tl.delta;
  j["energies"] = {tl.energies[0], tl.energies[1]};
  j["h_red"] = {{tl.h_red(0, 0), tl.h_red(0, 1)}, {tl.h_red(1, 0), tl.h_red(1, 1)}};
  j["overlaps"] = {{"w_lambda1", tl.w_overlap(0)},
                   {"w_lambda2", tl.w_overlap(1)},
                   {"sbar_lambda1", tl.sbar_overlap(0)},
                   {"sbar_lambda2", tl.sbar_overlap(1)}};
  return j;
}

json to_json(const Spectrum& s, std::size_t w) {
  json j;
  j["n"] = s.size();
  j["eigenvalues"] = s.values;
  j["gap"] = s.gap;
  j["gap2"] = number_or_null(s.gap2);
  const std::size_t k = std::min<std::size_t>(2, s.size());
  json ov = json::array();
  for (std::size_t i = 0; i < k; ++i) ov.push_back(std::norm(s.vectors(w, i)));
  j["w_weight_lowest"] = ov;  // |<w|lambda_k>|^2
  return j;
}

PreparedSystem prepare_system(const SystemConfig& s, std::uint64_t seed, std::size_t levels) {
  PreparedSystem p;
  p.n = s.n;
  p.model = s.model;
  if (s.model == ModelKind::reduced) {
    p.eps_w = marked_energy(s, seed);
    TwoLevelSystem tl = reduce_two_level(s.n, p.eps_w, s.sigma, s.gamma_policy);
    p.delta = tl.delta;
    p.energies = {tl.energies[0], tl.energies[1]};
    for (std::size_t k = 0; k < 2; ++k) {
      p.w_overlaps.emplace_back(tl.w_overlap(k));
      p.s_overlaps.emplace_back(tl.s_overlap(k));
    }
    p.coupling = coupling_coefficients(tl);
    p.two_level = std::move(tl);
    return p;
  }
  SearchHamiltonian h = make_hamiltonian(s, seed);
  p.eps_w = h.eps(s.w);
  Spectrum spec = eigendecompose(h.matrix());
  const std::size_t m = levels;
  if (m != 2 && m != spec.size()) throw ConfigError("levels must be 2 or n");
  p.delta = spec.gap;
  p.energies.assign(spec.values.begin(), spec.values.begin() + m);
  const double amp = 1.0 / std::sqrt(static_cast<double>(s.n));
  for (std::size_t k = 0; k < m; ++k) {
    p.w_overlaps.push_back(spec.vectors(s.w, k));
    Complex a{};
    for (std::size_t i = 0; i < s.n; ++i) a += std::conj(spec.vectors(i, k)) * amp;
    p.s_overlaps.push_back(a);
  }
  p.coupling = coupling_coefficients(spec, m);
  p.spectrum = std::move(spec);
  p.hamiltonian = std::move(h);
  return p;
}

void enforce_validity(const ValidityReport& r, Dynamics dyn, bool force) {
  if (force || dyn == Dynamics::unitary) return;
  if (!r.markov_ok)
    throw ValidityError("Markov bound fails: g*delta_t = " + format_number(r.markov_ratio) + " >= 1 (use --force)");
  if (dyn == Dynamics::secular && !r.secular_ok)
    throw ValidityError("secular bound fails: g*sqrt(delta_t/Delta) = " + format_number(r.secular_ratio) +
                        " >= 1 (use --force)");
}

namespace {

std::vector<double> gibbs(const std::vector<double>& e, const BathSpec& b) {
  std::vector<double> p(e.size(), 0.0);
  if (b.zero_temperature()) {
    p[0] = 1.0;
    return p;
  }
  double z = 0.0;
  for (std::size_t k = 0; k < e.size(); ++k) z += p[k] = std::exp(-b.beta * (e[k] - e[0]));
  for (auto& x : p) x /= z;
  return p;
}

}  // namespace

OpenRunResult run_open(const PreparedSystem& sys, const BathSpec& bath, Dynamics dyn, const GridSpec& grid,
                       const ValidityMargins& margins, const OdeOptions& ode, bool force) {
  if (dyn == Dynamics::unitary) throw InvalidParameter("run_open needs secular or redfield dynamics");
  OpenRunResult r;
  r.validity = validate_approximations(bath, sys.delta, sys.n, margins);
  enforce_validity(r.validity, dyn, force);
  const SecularRates rates = secular_rates(sys.coupling, bath, sys.delta);
  r.t_rel_formula = rates.t_rel;
  const double gamma = damping_rate(sys.coupling, bath, sys.delta);
  r.damping_time = gamma > 0 ? 1.0 / gamma : INFINITY;
  const auto pg = gibbs(sys.energies, bath);
  r.p_suc = pg[0];
  for (std::size_t k = 0; k < pg.size(); ++k) r.target += pg[k] * std::norm(sys.w_overlaps[k]);

  const double t_max = grid.t_max.value_or(10.0 * rates.t_rel);
  std::size_t points = grid.points.value_or(2000);
  if (!grid.points && dyn == Dynamics::redfield) {
    const double bohr = sys.energies.back() - sys.energies.front();
    const double per = 16.0 * t_max * bohr / (2.0 * std::numbers::pi);
    points = static_cast<std::size_t>(std::clamp(std::ceil(per), 2000.0, 2.0e6));
  }
  const std::vector<double> times = uniform_grid(t_max, points);

  const ComplexMatrix rho0 = projected_density(sys.s_overlaps, &r.projection_defect);
  if (dyn == Dynamics::secular) {
    if (sys.energies.size() != 2) throw ConfigError("secular dynamics is defined for two retained levels");
    r.trajectory = secular_trajectory(rates, times, rho0(0, 0).real());
  } else {
    RedfieldOptions ro;
    ro.force = force;
    const RedfieldTensor tensor = assemble_redfield(sys.coupling, sys.energies, bath, ro);
    r.trajectory = integrate_master(tensor, rho0, times, ode);
  }
  const PopulationSeries ps = solution_population(r.trajectory, sys.w_overlaps);
  r.p_w = ps.p_w;
  r.truncation_error = ps.truncation_error;
  try {
    r.t_rel_fit = extract_relaxation_time(times, r.p_w, r.target);
  } catch (const NumericalError& e) {
    r.t_rel_fit = std::numeric_limits<double>::quiet_NaN();
    r.fit_error = e.what();
  }
  return r;
}

ClosedRunResult run_closed(const PreparedSystem& sys, const GridSpec& grid) {
  const double t_max = grid.t_max.value_or(3.0 * std::numbers::pi / sys.delta);
  const auto times = uniform_grid(t_max, grid.points.value_or(2000));
  if (sys.two_level) return evolve_reduced(*sys.two_level, times);
  return evolve_closed(*sys.hamiltonian, *sys.spectrum, times);
}

namespace {

struct Writer {
  const ExperimentConfig& cfg;
  const RunOptions& opts;
  RunReport& report;

  bool csv() const { return cfg.output.format != "json"; }
  bool js() const { return cfg.output.format != "csv"; }

  void table(const std::string& name, const std::vector<std::string>& cols,
             const std::vector<std::vector<double>>& rows) {
    if (!csv()) return;
    const fs::path p = opts.out_dir / (name + ".csv");
    write_csv(p, provenance_line(cfg), cols, rows);
    report.files.push_back(p);
  }
  void summary(const std::string& name, json j) {
    if (!js()) return;
    j["provenance"] = {{"version", kVersion}, {"config_hash", config_hash(cfg)}};
    const fs::path p = opts.out_dir / (name + ".json");
    write_json(p, j);
    report.files.push_back(p);
  }
};

const std::vector<std::string> kOpenColumns = {"t", "p_w", "rho11", "rho22", "re_rho12", "im_rho12"};

std::vector<std::vector<double>> open_rows(const OpenRunResult& r) {
  std::vector<std::vector<double>> rows;
  rows.reserve(r.p_w.size());
  for (std::size_t i = 0; i < r.p_w.size(); ++i) {
    const auto& rho = r.trajectory.rho[i];
    rows.push_back({r.trajectory.times[i], r.p_w[i], rho(0, 0).real(), rho(1, 1).real(), rho(0, 1).real(),
                    rho(0, 1).imag()});
  }
  return rows;
}

std::vector<std::vector<double>> closed_rows(const ClosedRunResult& r) {
  std::vector<std::vector<double>> rows;
  rows.reserve(r.p_w.size());
  for (std::size_t i = 0; i < r.p_w.size(); ++i) rows.push_back({r.times[i], r.p_w[i]});
  return rows;
}

json system_summary(const PreparedSystem& p, const SystemConfig& s) {
  return {{"n", p.n},
          {"model", std::string(to_string(p.model))},
          {"eps_w", p.eps_w},
          {"delta", p.delta},
          {"sigma", s.sigma},
          {"gamma_policy", std::string(to_string(s.gamma_policy))},
          {"regime", std::string(to_string(regime_classify(s.n, s.sigma)))}};
}

json closed_summary(const ClosedRunResult& r, const PreparedSystem& p, const SystemConfig& s) {
  json j = system_summary(p, s);
  j["t_peak"] = r.t_peak;
  j["p_peak"] = r.p_peak;
  j["repetitions"] = r.repetitions;
  j["t_expected"] = r.t_expected;
  j["max_norm_error"] = r.max_norm_error;
  return j;
}

json open_summary(const OpenRunResult& r, const PreparedSystem& p, const SystemConfig& s) {
  json j = system_summary(p, s);
  j["t_rel_fit"] = number_or_null(r.t_rel_fit);
  if (!r.fit_error.empty()) j["fit_error"] = r.fit_error;
  j["t_rel_formula"] = r.t_rel_formula;
  j["damping_time"] = number_or_null(r.damping_time);
  j["p_suc"] = r.p_suc;
  j["p_w_steady"] = r.target;
  j["truncation_error"] = r.truncation_error;
  j["projection_defect"] = r.projection_defect;
  j["validity"] = to_json(r.validity);
  return j;
}

BathSpec merged_bath(const ExperimentConfig& cfg, const json& over) {
  json b = cfg.raw.contains("bath") ? cfg.raw["bath"] : json::object();
  if (over.is_object())
    for (const auto& [k, v] : over.items()) b[k] = v;
  return parse_bath(b);
}

GridSpec merged_grid(const ExperimentConfig& cfg, const json& over) {
  json g = cfg.raw.contains("grid") ? cfg.raw["grid"] : json::object();
  if (over.is_object())
    for (const auto& [k, v] : over.items()) g[k] = v;
  return parse_grid(g, "grid");
}

std::string forced_note(const ValidityReport& v, Dynamics dyn) {
  if (!v.markov_ok) return "forced past the Markov bound (g*delta_t = " + format_number(v.markov_ratio) + ")";
  if (dyn == Dynamics::secular && !v.secular_ok)
    return "forced past the secular bound (g*sqrt(delta_t/Delta) = " + format_number(v.secular_ratio) + ")";
  return {};
}

}  // namespace

RunReport run(const ExperimentConfig& cfg, const RunOptions& run_opts) {
  RunOptions opts = run_opts;
  opts.force = opts.force || cfg.force;
  RunReport report;
  Writer out{cfg, opts, report};
  const std::uint64_t seed = cfg.system ? cfg.system->seeds.front() : 0;
  if (cfg.system && cfg.system->seeds.size() > 1 && cfg.mode != Mode::sweep)
    report.warnings.push_back("only the first seed is used outside sweep mode");
  if (cfg.bath && correlation_accuracy_warning(*cfg.bath))
    report.warnings.push_back("beta*omega_c < 5: finite-temperature correlation closed form is less accurate");

  switch (cfg.mode) {
    case Mode::unitary: {
      const PreparedSystem p = prepare_system(*cfg.system, seed, 2);
      const ClosedRunResult r = run_closed(p, cfg.grid);
      out.table("unitary", {"t", "p_w"}, closed_rows(r));
      json j = closed_summary(r, p, *cfg.system);
      const ExpectedRuntime e = expected_runtime(cfg.system->n, p.eps_w);
      j["expected_runtime"] = {{"t_single", e.t_single}, {"repetitions", e.repetitions}, {"t_expected", e.t_expected}};
      out.summary("unitary", j);
      break;
    }
    case Mode::redfield:
    case Mode::secular: {
      const Dynamics dyn = cfg.mode == Mode::redfield ? Dynamics::redfield : Dynamics::secular;
      const PreparedSystem p = prepare_system(*cfg.system, seed, cfg.levels);
      const OpenRunResult r = run_open(p, *cfg.bath, dyn, cfg.grid, cfg.margins, cfg.ode, opts.force);
      if (!r.fit_error.empty()) report.warnings.push_back(r.fit_error);
      if (auto w = forced_note(r.validity, dyn); !w.empty()) report.warnings.push_back(w);
      out.table(std::string(to_string(cfg.mode)), kOpenColumns, open_rows(r));
      out.summary(std::string(to_string(cfg.mode)), open_summary(r, p, *cfg.system));
      break;
    }
    case Mode::correlation: {
      const BathSpec& b = *cfg.bath;
      const double t_max = cfg.grid.t_max.value_or(6.0 * correlation_time(b));
      const auto times = uniform_grid(t_max, cfg.grid.points.value_or(2000));
      std::vector<std::vector<double>> rows;
      for (double t : times) {
        const auto f = b.d == 1.0 ? correlation(t, b) : correlation_quadrature(t, b).value;
        rows.push_back({t, f.real(), f.imag(), std::abs(f)});
      }
      out.table("correlation", {"t", "re_f", "im_f", "abs_f"}, rows);
      json j;
      j["bath"] = bath_to_json(b);
      j["correlation_time"] = correlation_time(b);
      if (b.d == 1.0) j["efold_time"] = correlation_efold_time(b);
      j["accuracy_warning"] = correlation_accuracy_warning(b);
      if (cfg.system) {
        const PreparedSystem p = prepare_system(*cfg.system, seed, 2);
        j["validity"] = to_json(validate_approximations(b, p.delta, p.n, cfg.margins));
        j["delta"] = p.delta;
      }
      out.summary("correlation", j);
      break;
    }
    case Mode::validate: {
      const PreparedSystem p = prepare_system(*cfg.system, seed, 2);
      json j = to_json(validate_approximations(*cfg.bath, p.delta, p.n, cfg.margins));
      j["delta"] = p.delta;
      j["n"] = p.n;
      j["bath"] = bath_to_json(*cfg.bath);
      j["margins"] = {{"chi_markov", cfg.margins.chi_markov},
                      {"chi_secular", cfg.margins.chi_secular},
                      {"beta_star_c", cfg.margins.beta_star_c}};
      // the report is the whole point of this mode, so it ignores output.format
      j["provenance"] = {{"version", kVersion}, {"config_hash", config_hash(cfg)}};
      const fs::path path = opts.out_dir / "validate.json";
      write_json(path, j);
      report.files.push_back(path);
      break;
    }
    case Mode::spectrum: {
      const SystemConfig& s = *cfg.system;
      json j;
      if (s.model == ModelKind::full) {
        const PreparedSystem p = prepare_system(s, seed, 2);
        j["spectrum"] = to_json(*p.spectrum, s.w);
        j["identity_shift"] = p.hamiltonian->identity_shift();
        if (s.kind == GraphKind::complete) {
          j["two_level"] = to_json(reduce_two_level(s.n, p.eps_w, s.sigma, s.gamma_policy));
        }
      } else {
        const double eps = marked_energy(s, seed);
        j["two_level"] = to_json(reduce_two_level(s.n, eps, s.sigma, s.gamma_policy));
      }
      j["system"] = system_to_json(s);
      out.summary("spectrum", j);
      if (!out.js()) report.warnings.push_back("spectrum mode writes JSON only");
      break;
    }
    case Mode::sweep: {
      const SweepResult res = sweep(cfg, opts.workers, opts.force);
      report.warnings.insert(report.warnings.end(), res.warnings.begin(), res.warnings.end());
      std::vector<std::vector<double>> rows;
      for (const auto& r : res.rows)
        rows.push_back({r.value, static_cast<double>(r.seed), r.t_rel_fit, r.t_rel_formula, r.p_suc, r.p_peak,
                        double(r.markov_ok), double(r.secular_ok), double(r.two_level_ok)});
      out.table("sweep",
                {cfg.sweep->parameter, "seed", "t_rel_fit", "t_rel_formula", "p_suc", "p_peak", "markov_ok",
                 "secular_ok", "two_level_ok"},
                rows);
      std::vector<std::vector<double>> srows;
      json pts = json::array();
      for (const auto& p : res.points) {
        srows.push_back({p.value, p.median, p.q1, p.q3, static_cast<double>(p.count)});
        pts.push_back({{"value", number_or_null(p.value)},
                       {"median", number_or_null(p.median)},
                       {"iqr", number_or_null(p.q3 - p.q1)},
                       {"q1", number_or_null(p.q1)},
                       {"q3", number_or_null(p.q3)},
                       {"count", p.count}});
      }
      out.table("sweep_summary", {cfg.sweep->parameter, "median", "q1", "q3", "count"}, srows);
      if (cfg.sweep->trajectories && out.csv())
        for (const auto& r : res.rows) {
          std::vector<std::vector<double>> tr;
          for (std::size_t i = 0; i < r.times.size(); ++i) tr.push_back({r.times[i], r.p_w[i]});
          out.table("trajectories/" + cfg.sweep->parameter + "_" + format_number(r.value) + "_seed" +
                        std::to_string(r.seed),
                    {"t", "p_w"}, tr);
        }
      json j;
      j["parameter"] = cfg.sweep->parameter;
      j["dynamics"] = std::string(to_string(cfg.sweep->dynamics));
      j["points"] = pts;
      if (res.fit) j["fit"] = {{"exponent", res.fit->exponent}, {"intercept", res.fit->intercept}, {"r2", res.fit->r2}};
      else j["fit"] = nullptr;
      j["warnings"] = res.warnings;
      out.summary("sweep", j);
      break;
    }
    case Mode::recipe: {
      const PreparedSystem p = prepare_system(*cfg.system, seed, cfg.levels);
      json j;
      j["system"] = system_summary(p, *cfg.system);
      json series = json::object();
      for (const auto& s : cfg.series) {
        const GridSpec grid = merged_grid(cfg, s.grid_override);
        if (s.dynamics == Dynamics::unitary) {
          const ClosedRunResult r = run_closed(p, grid);
          out.table(s.label, {"t", "p_w"}, closed_rows(r));
          series[s.label] = closed_summary(r, p, *cfg.system);
        } else {
          const BathSpec b = merged_bath(cfg, s.bath_override);
          const OpenRunResult r = run_open(p, b, s.dynamics, grid, cfg.margins, cfg.ode, opts.force);
          if (!r.fit_error.empty()) report.warnings.push_back(s.label + ": " + r.fit_error);
          if (auto w = forced_note(r.validity, s.dynamics); !w.empty()) report.warnings.push_back(s.label + ": " + w);
          out.table(s.label, kOpenColumns, open_rows(r));
          json sj = open_summary(r, p, *cfg.system);
          sj["bath"] = bath_to_json(b);
          series[s.label] = sj;
        }
        series[s.label]["dynamics"] = std::string(to_string(s.dynamics));
      }
      j["series"] = series;
      out.summary("recipe", j);
      break;
    }
  }
  return report;
}

}  // namespace qsearch
