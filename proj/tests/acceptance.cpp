// Acceptance gate: `acceptance --criterion N` checks one criterion and prints a single
// PASS/FAIL line. Exit status 0 on pass.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qsearch/bath.hpp"
#include "qsearch/bloch.hpp"
#include "qsearch/coupling.hpp"
#include "qsearch/disorder.hpp"
#include "qsearch/eigensolver.hpp"
#include "qsearch/experiment.hpp"
#include "qsearch/graph.hpp"
#include "qsearch/hamiltonian.hpp"
#include "qsearch/redfield.hpp"
#include "qsearch/relaxation.hpp"
#include "qsearch/secular.hpp"
#include "qsearch/sweep.hpp"
#include "qsearch/two_level.hpp"
#include "qsearch/unitary.hpp"

using namespace qsearch;
using nlohmann::json;
using std::numbers::pi;
namespace fs = std::filesystem;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += (ok ? "" : "[x] ") + what;
  }
};

std::string fmt(const char* f, double a) {
  char b[64];
  std::snprintf(b, sizeof b, f, a);
  return b;
}
std::string num(double x) { return fmt("%.6g", x); }

BathSpec bath(double beta, double g, double wc) {
  BathSpec b;
  b.beta = beta;
  b.g = g;
  b.omega_c = wc;
  return b;
}

SearchHamiltonian single_defect(std::size_t n, double eps) {
  DisorderField d;
  d.epsilons.assign(n, 0.0);
  d.epsilons[0] = eps;
  d.sigma = std::abs(eps);
  return build_search_hamiltonian(build_complete_graph(n), 0, 1.0 / n, d);
}

json load_json(const fs::path& p) {
  std::ifstream in(p);
  return json::parse(in);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string csv_body(const fs::path& p) {
  const std::string s = slurp(p);
  // the first line is the provenance comment
  return s.substr(s.find('\n') + 1);
}

// 1. Closed-system optimality at n = 64.
Outcome criterion1() {
  Outcome o;
  const std::size_t n = 64;
  const auto h = build_search_hamiltonian(build_complete_graph(n), 0, 1.0 / n);
  const Spectrum s = eigendecompose(h.matrix());
  const ClosedRunResult at = evolve_closed(h, s, {0.0, 4 * pi});
  o.require(at.p_w[1] >= 0.95, "P_w(4 pi) = " + num(at.p_w[1]) + " >= 0.95");
  // period: first return to the minimum after the first maximum
  const auto times = uniform_grid(1.5 * pi * std::sqrt(double(n)), 20001);
  const ClosedRunResult r = evolve_closed(h, s, times);
  std::size_t i = 1;
  while (i + 1 < times.size() && !(r.p_w[i] > r.p_w[i - 1] && r.p_w[i] >= r.p_w[i + 1])) ++i;
  while (i + 1 < times.size() && !(r.p_w[i] < r.p_w[i - 1] && r.p_w[i] <= r.p_w[i + 1])) ++i;
  const double y0 = r.p_w[i - 1], y1 = r.p_w[i], y2 = r.p_w[i + 1];
  const double dt = times[1] - times[0];
  const double period = times[i] + 0.5 * dt * (y0 - y2) / (y0 - 2 * y1 + y2);
  const double expected = pi * std::sqrt(double(n));
  o.require(std::abs(period / expected - 1) <= 0.02,
            "period " + num(period) + " vs pi sqrt(n) = " + num(expected) + " (rel " + num(period / expected - 1) + ")");
  return o;
}

// 2. Perturbation theory against the exact oracle.
Outcome criterion2() {
  Outcome o;
  for (std::size_t n : {256u, 1024u})
    for (double eps : {-0.3, -0.1, 0.1, 0.3}) {
      const auto h = single_defect(n, eps);
      const Spectrum s = eigendecompose(h.matrix());
      const double gap_formula = std::sqrt(eps * eps + 4.0 / n);
      const double peak_formula = 1.0 / (1 + n * eps * eps / 4);
      const ClosedRunResult r = evolve_closed(h, s, default_closed_grid(s.gap));
      const double gap_rel = s.gap / gap_formula - 1, peak_rel = r.p_peak / peak_formula - 1;
      const std::string tag = "n=" + std::to_string(n) + " eps=" + num(eps);
      o.require(std::abs(gap_rel) <= 0.05, tag + " gap rel " + num(gap_rel));
      o.require(std::abs(peak_rel) <= 0.10, tag + " peak " + num(r.p_peak) + " vs " + num(peak_formula) + " rel " + num(peak_rel));
    }
  return o;
}

// 3. Redfield integration against the analytic disorder-free solution.
Outcome criterion3() {
  Outcome o;
  json sys = {{"n", 10000}, {"sigma", 0.0}, {"w", 0}, {"gamma_policy", "plain"}, {"model", "reduced"}};
  const PreparedSystem p = prepare_system(system_from_json(sys), 1);
  const BathSpec b = bath(kInf, 0.02, 2.0);
  const double gamma = damping_rate(p.coupling, b, p.delta);
  const double t_end = 5 / gamma;
  const std::size_t points = static_cast<std::size_t>(std::ceil(16 * t_end * p.delta / (2 * pi)));
  const auto times = uniform_grid(t_end, points);
  const RedfieldTensor t = assemble_redfield(p.coupling, p.energies, b);
  const ComplexMatrix rho0 = projected_density(p.s_overlaps);
  OdeOptions ode;  // the defaults (atol 1e-10, rtol 1e-8) leave about 1.1e-6
  ode.rtol = 1e-10;
  ode.atol = 1e-12;
  const Trajectory tr = integrate_master(t, rho0, times, ode);
  const PopulationSeries ps = solution_population(tr, p.w_overlaps);
  const double x0 = to_bloch(rho0).rho_x;
  double worst = 0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double exact = 0.5 * (1 + analytic_rho_x(times[i], gamma, p.delta, x0));
    worst = std::max(worst, std::abs(ps.p_w[i] - exact));
  }
  o.require(worst <= 1e-6, "max |P_w - analytic| over [0, 5/Gamma] = " + num(worst) + " (rtol 1e-10)");
  const ComplexMatrix ss = redfield_steady_state(t);
  Trajectory one;
  one.times = {0.0};
  one.rho = {ss};
  const double steady = solution_population(one, p.w_overlaps).p_w[0];
  o.require(std::abs(steady - 0.5) <= 1e-4, "steady P_w = " + fmt("%.8f", steady));
  return o;
}

// 4. Gibbs fixed point and detailed balance.
Outcome criterion4() {
  Outcome o;
  Rng rng(20240611);
  double worst_sec = 0, worst_red = 0, worst_db = 0;
  for (int k = 0; k < 10; ++k) {
    const double delta = 0.05 + 0.45 * rng.uniform();
    const double x = 0.1 + 4.9 * rng.uniform();
    const double beta = x / delta;
    const std::size_t n = 10000;
    const double eps = -std::sqrt(delta * delta - 4.0 / n);
    const TwoLevelSystem tl = reduce_two_level(n, eps, std::abs(eps), GammaPolicy::plain);
    const CouplingCoefficients c = coupling_coefficients(tl);
    // stay inside the Markov bound
    const BathSpec b = bath(beta, std::min(0.02, 0.5 / beta), 2.0);
    const double gibbs = 1 / (1 + std::exp(-beta * tl.delta));
    const SecularRates r = secular_rates(c, b, tl.delta);
    worst_sec = std::max(worst_sec, std::abs(r.p_suc - gibbs));
    worst_db = std::max(worst_db, std::abs((r.w12 / r.w21) / std::exp(beta * tl.delta) - 1));
    const std::vector<double> e(tl.energies.begin(), tl.energies.end());
    const ComplexMatrix ss = redfield_steady_state(assemble_redfield(c, e, b));
    worst_red = std::max(worst_red, std::abs(ss(0, 0).real() - gibbs));
  }
  o.require(worst_sec <= 1e-4, "secular max |p - Gibbs| = " + num(worst_sec));
  o.require(worst_red <= 1e-4, "Redfield max |rho11 - Gibbs| = " + num(worst_red));
  o.require(worst_db <= 1e-10, "max |W12/W21 e^(-beta Delta) - 1| = " + num(worst_db));
  return o;
}

double fitted_exponent(const json& cfg, unsigned workers, std::string& note) {
  const SweepResult r = sweep(parse_config(cfg), workers, false);
  if (!r.fit) throw std::runtime_error("no fit");
  note = "";
  for (const auto& p : r.points) note += (note.empty() ? "" : ",") + num(p.median);
  return r.fit->exponent;
}

// 5. Scaling of the relaxation time.
Outcome criterion5() {
  Outcome o;
  std::string medians;
  const json bath15 = {{"beta", 15}, {"g", 0.02}, {"omega_c", 2}};
  const json beta_cfg = {{"mode", "sweep"},
                         {"system", {{"n", 1000000}, {"sigma", 0.007}, {"w", 0}, {"gamma_policy", "shifted"}, {"model", "reduced"}}},
                         {"bath", bath15},
                         {"force", true},
                         {"sweep", {{"parameter", "beta"}, {"values", {15, 25, 40}}, {"dynamics", "secular"}}}};
  const double sb = fitted_exponent(beta_cfg, 4, medians);
  o.require(std::abs(sb - 1.0) <= 0.15, "beta slope " + num(sb) + " (medians " + medians + ")");

  const json n_cfg = {{"mode", "sweep"},
                      {"system", {{"n", 10000}, {"sigma", 0.02}, {"w", 0}, {"gamma_policy", "shifted"}, {"model", "reduced"}}},
                      {"bath", bath15},
                      {"force", true},
                      {"sweep", {{"parameter", "n"}, {"values", {10000, 100000, 1000000}}, {"dynamics", "secular"}}}};
  const double sn = fitted_exponent(n_cfg, 4, medians);
  o.require(std::abs(sn - 1.0) <= 0.1, "n slope " + num(sn) + " (medians " + medians + ")");

  const json zt_cfg = {{"mode", "sweep"},
                       {"system", {{"n", 256}, {"sigma", 0.0}, {"w", 0}, {"gamma_policy", "plain"}, {"model", "reduced"}, {"seed", 1}}},
                       {"bath", {{"beta", "inf"}, {"g", 0.02}, {"omega_c", 2}}},
                       {"sweep", {{"parameter", "n"}, {"values", {256, 1024, 4096}}, {"dynamics", "redfield"}}}};
  json zt_reduced = zt_cfg;
  const double sz = fitted_exponent(zt_reduced, 3, medians);
  o.require(std::abs(sz - 0.5) <= 0.1, "zero-T disorder-free n slope " + num(sz) + " (t_rel " + medians + ")");
  return o;
}

// 6. Qualitative shape of the strong-disorder recipe.
Outcome criterion6() {
  Outcome o;
  const ExperimentConfig cfg = parse_config(load_json(fs::path(QSEARCH_SOURCE_DIR) / "configs" / "fig1.json"));
  const fs::path dir = fs::temp_directory_path() / "qsearch_acceptance_6";
  fs::remove_all(dir);
  RunOptions opts;
  opts.out_dir = dir;
  run(cfg, opts);
  const json summary = load_json(dir / "recipe.json");
  const double delta = summary["system"]["delta"];
  auto read = [&](const std::string& label) {
    std::vector<std::pair<double, double>> rows;
    std::istringstream in(csv_body(dir / (label + ".csv")));
    std::string line;
    std::getline(in, line);  // column names
    while (std::getline(in, line)) {
      const auto c = line.find(',');
      const auto c2 = line.find(',', c + 1);
      rows.emplace_back(std::stod(line.substr(0, c)), std::stod(line.substr(c + 1, c2 - c - 1)));
    }
    return rows;
  };
  const auto u = read("unitary");
  double upeak = 0;
  for (const auto& r : u) upeak = std::max(upeak, r.second);
  o.require(upeak <= 0.12, "unitary peak " + num(upeak));
  double crossing[2] = {kInf, kInf};
  int idx = 0;
  for (const char* label : {"beta15", "beta40"}) {
    const auto s = read(label);
    bool mono = true;
    double prev = -1, last = 0;
    for (const auto& r : s) {
      if (r.first > 3 / delta) {
        if (r.second < prev) mono = false;
        prev = r.second;
      }
      if (r.second > 0.5 && crossing[idx] == kInf) crossing[idx] = r.first;
      last = r.second;
    }
    o.require(mono, std::string(label) + " nondecreasing after 3/Delta");
    o.require(last > 0.5, std::string(label) + " final " + num(last) + " > 0.5");
    ++idx;
  }
  o.require(crossing[0] < crossing[1], "0.5 crossing beta=15 at " + num(crossing[0]) + " before beta=40 at " + num(crossing[1]));
  return o;
}

// 7. Bath correlation functions.
Outcome criterion7() {
  Outcome o;
  const BathSpec zero = bath(kInf, 0.02, 2.0), hot = bath(15, 0.02, 2.0);
  double worst_abs = 0, worst_rel = 0;
  for (double t : {0.0, 0.1, 1.0, 10.0}) {
    worst_abs = std::max(worst_abs, std::abs(correlation_zero_T(t, zero) - correlation_quadrature(t, zero).value));
    const auto q = correlation_quadrature(t, hot).value;
    worst_rel = std::max(worst_rel, std::abs(correlation_finite_T(t, hot) - q) / std::abs(q));
  }
  o.require(worst_abs <= 1e-8, "zero-T max abs error " + num(worst_abs));
  o.require(worst_rel <= 1e-6, "finite-T max rel error " + num(worst_rel));
  const double beta = 15;
  std::vector<double> xs, ys;
  for (int i = 0; i <= 60; ++i) {
    const double t = 3 * beta + i * 0.05 * beta;
    xs.push_back(t);
    ys.push_back(std::log(std::abs(correlation_finite_T(t, hot))));
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) mx += xs[i], my += ys[i];
  mx /= xs.size();
  my /= xs.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) sxy += (xs[i] - mx) * (ys[i] - my), sxx += (xs[i] - mx) * (xs[i] - mx);
  const double rate = -sxy / sxx;
  o.require(std::abs(rate / (2 * pi / beta) - 1) <= 0.10,
            "envelope rate on [3 beta, 6 beta] " + num(rate) + " vs 2 pi/beta " + num(2 * pi / beta));
  return o;
}

// 8. Secular against full Redfield, coarse grained.
Outcome criterion8() {
  Outcome o;
  const json sys = {{"n", 10000}, {"sigma", 0.05}, {"w", 0}, {"gamma_policy", "shifted"}, {"eps_w", -0.03}, {"model", "reduced"}};
  const PreparedSystem p = prepare_system(system_from_json(sys), 1);
  const BathSpec b = bath(15, 0.02, 2.0);
  const ValidityMargins margins;
  const OpenRunResult red = run_open(p, b, Dynamics::redfield, {}, margins, {}, false);
  GridSpec same;
  same.t_max = red.trajectory.times.back();
  same.points = red.trajectory.times.size();
  const OpenRunResult sec = run_open(p, b, Dynamics::secular, same, margins, {}, false);
  o.require(red.validity.markov_ok && red.validity.secular_ok,
            "within bounds (g dt " + num(red.validity.markov_ratio) + ", secular " + num(red.validity.secular_ratio) + ")");
  const auto& t = red.trajectory.times;
  const double width = 5 / p.delta;
  double worst = 0;
  for (double start = 3 / p.delta; start + width <= t.back(); start += width) {
    double a = 0, c = 0;
    std::size_t k = 0;
    for (std::size_t i = 0; i < t.size(); ++i)
      if (t[i] >= start && t[i] < start + width) a += red.p_w[i], c += sec.p_w[i], ++k;
    if (k) worst = std::max(worst, std::abs(a - c) / k);
  }
  o.require(worst <= 0.02, "max window-averaged |P_w^Redfield - P_w^secular| = " + num(worst));
  return o;
}

// 9. Validity margins for the strong-disorder parameter set.
Outcome criterion9() {
  Outcome o;
  const double g = 0.02, beta = 15, n = 1e6;
  const BathSpec b = bath(beta, g, 2.0);
  // hand values: delta_t = beta; Delta = sigma - eps_w = 0.011 at leading order
  const double hand_markov = g * beta;
  const double hand_secular = g * std::sqrt(beta / 0.011);
  const double hand_beta_star = std::log(n) / (1 - 0.011);
  const ValidityReport r = validate_approximations(b, 0.011, 1000000);
  o.require(std::abs(r.markov_ratio / 0.3 - 1) <= 0.01, "g dt = " + num(r.markov_ratio) + " vs 0.3");
  o.require(std::abs(r.markov_ratio / hand_markov - 1) <= 0.01, "g dt vs hand " + num(hand_markov));
  o.require(std::abs(r.secular_ratio / hand_secular - 1) <= 0.01,
            "g sqrt(dt/Delta) = " + num(r.secular_ratio) + " vs hand " + num(hand_secular));
  o.require(std::abs(r.secular_ratio / 0.74 - 1) <= 0.01, "vs 0.74");
  o.require(std::abs(r.beta_star / hand_beta_star - 1) <= 0.01, "beta* = " + num(r.beta_star) + " vs hand " + num(hand_beta_star));
  // the same pipeline on the exact two-level gap
  const TwoLevelSystem tl = reduce_two_level(1000000, -0.004, 0.007, GammaPolicy::shifted);
  const ValidityReport e = validate_approximations(b, tl.delta, 1000000);
  o.require(std::abs(e.secular_ratio / (g * std::sqrt(beta / tl.delta)) - 1) <= 1e-12,
            "exact gap " + num(tl.delta) + ": secular " + num(e.secular_ratio));
  return o;
}

// 10. Determinism of every shipped config, and worker-count independence of sweeps.
Outcome criterion10() {
  Outcome o;
  const fs::path configs = fs::path(QSEARCH_SOURCE_DIR) / "configs";
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(configs))
    if (e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  const fs::path root = fs::temp_directory_path() / "qsearch_acceptance_10";
  std::size_t compared = 0;
  for (const auto& f : files) {
    json doc = load_json(f);
    if (!doc.contains("mode")) {
      // configs named after their mode may leave it implicit, as the CLI fills it in
      doc["mode"] = f.stem().string().substr(0, f.stem().string().find('_'));
    }
    const ExperimentConfig cfg = parse_config(doc);
    std::vector<RunReport> reps;
    for (int k = 0; k < 2; ++k) {
      RunOptions opts;
      opts.out_dir = root / f.stem() / std::to_string(k);
      opts.workers = k == 0 ? 1 : 4;
      fs::remove_all(opts.out_dir);
      reps.push_back(run(cfg, opts));
    }
    for (std::size_t i = 0; i < reps[0].files.size(); ++i) {
      const auto& a = reps[0].files[i];
      if (a.extension() != ".csv") continue;
      const fs::path b = root / f.stem() / "1" / fs::relative(a, root / f.stem() / "0");
      ++compared;
      if (csv_body(a) != csv_body(b)) o.require(false, "differs: " + f.filename().string() + " " + a.filename().string());
    }
  }
  o.require(compared > 0, std::to_string(files.size()) + " configs, " + std::to_string(compared) +
                              " CSV files identical across reruns (workers 1 and 4)");
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance gate"};
  int criterion = 0;
  app.add_option("--criterion", criterion, "criterion number 1-10")->required()->check(CLI::Range(1, 10));
  CLI11_PARSE(app, argc, argv);

  static const std::vector<std::pair<std::function<Outcome()>, double>> table = {
      {criterion1, 1},  {criterion2, 30}, {criterion3, 10}, {criterion4, 30}, {criterion5, 300},
      {criterion6, 60}, {criterion7, 30}, {criterion8, 60}, {criterion9, 1},  {criterion10, 0}};
  const auto& [fn, budget] = table[criterion - 1];
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = fn();
  } catch (const std::exception& e) {
    out.pass = false;
    out.detail = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (budget > 0 && secs > budget) out.require(false, "runtime " + num(secs) + " s > " + num(budget) + " s");
  std::printf("ACCEPTANCE %d %s (%.2f s): %s\n", criterion, out.pass ? "PASS" : "FAIL", secs, out.detail.c_str());
  return out.pass ? 0 : 1;
}
