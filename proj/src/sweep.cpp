#include "qsearch/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

#include "qsearch/errors.hpp"

namespace qsearch {

PowerLawFit fit_power_law(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size()) throw InvalidParameter("fit_power_law: size mismatch");
  if (xs.size() < 3) throw DomainError("fit_power_law needs at least 3 points");
  const std::size_t m = xs.size();
  std::vector<double> lx(m), ly(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (!(xs[i] > 0) || !(ys[i] > 0) || !std::isfinite(xs[i]) || !std::isfinite(ys[i]))
      throw DomainError("fit_power_law needs finite positive data");
    lx[i] = std::log(xs[i]);
    ly[i] = std::log(ys[i]);
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < m; ++i) mx += lx[i], my += ly[i];
  mx /= m;
  my /= m;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (sxx == 0) throw DomainError("fit_power_law: all x values equal");
  PowerLawFit f;
  f.exponent = sxy / sxx;
  f.intercept = my - f.exponent * mx;
  f.r2 = syy > 0 ? sxy * sxy / (sxx * syy) : 1.0;
  return f;
}

double quantile(std::vector<double> v, double q) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const double pos = std::clamp(q, 0.0, 1.0) * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

namespace {

struct PointSetup {
  SystemConfig system;
  std::optional<BathSpec> bath;
};

PointSetup apply(const ExperimentConfig& cfg, double value) {
  PointSetup p{*cfg.system, cfg.bath};
  const std::string& par = cfg.sweep->parameter;
  try {
    if (par == "n") {
      p.system.n = static_cast<std::size_t>(value);
      // the config-level model choice is kept unless it becomes impossible
      if (p.system.n > kDenseLimit) p.system.model = ModelKind::reduced;
      if (p.system.w >= p.system.n) throw ConfigError("marked vertex outside the swept graph");
      if (p.system.kind == GraphKind::custom) throw ConfigError("cannot sweep n on a custom graph");
    } else if (par == "sigma") {
      p.system.sigma = value;
    } else {
      if (!p.bath) throw ConfigError("sweep over " + par + " needs a bath block");
      if (par == "beta") p.bath->beta = value;
      else if (par == "g") p.bath->g = value;
      else p.bath->omega_c = value;
      validate(*p.bath);
    }
  } catch (const InvalidParameter& e) {
    throw ConfigError(e.what());
  }
  return p;
}

SweepRow run_point(const ExperimentConfig& cfg, double value, std::uint64_t seed, bool force,
                   std::vector<std::string>& notes) {
  const PointSetup ps = apply(cfg, value);
  const SweepSpec& sw = *cfg.sweep;
  const PreparedSystem p = prepare_system(ps.system, seed, 2);
  SweepRow row;
  row.value = value;
  row.seed = seed;
  if (sw.dynamics == Dynamics::unitary) {
    const ClosedRunResult r = run_closed(p, cfg.grid);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    row.t_rel_fit = nan;
    row.t_rel_formula = nan;
    row.p_suc = nan;
    row.p_peak = r.p_peak;
    if (sw.trajectories) row.times = r.times, row.p_w = r.p_w;
    return row;
  }
  const OpenRunResult r = run_open(p, *ps.bath, sw.dynamics, cfg.grid, cfg.margins, cfg.ode, force);
  row.t_rel_fit = r.t_rel_fit;
  if (!r.fit_error.empty())
    notes.push_back(cfg.sweep->parameter + "=" + format_number(value) + " seed " + std::to_string(seed) +
                    ": " + r.fit_error);
  row.t_rel_formula = r.t_rel_formula;
  row.p_suc = r.p_suc;
  row.p_peak = *std::max_element(r.p_w.begin(), r.p_w.end());
  row.markov_ok = r.validity.markov_ok;
  row.secular_ok = r.validity.secular_ok;
  row.two_level_ok = r.validity.two_level_ok;
  if (sw.trajectories) row.times = r.trajectory.times, row.p_w = r.p_w;
  return row;
}

}  // namespace

SweepResult sweep(const ExperimentConfig& cfg, unsigned workers, bool force) {
  force = force || cfg.force;
  if (!cfg.system || !cfg.sweep) throw ConfigError("sweep needs system and sweep blocks");
  const SweepSpec& sw = *cfg.sweep;
  std::vector<std::uint64_t> seeds = cfg.system->seeds;
  if (!cfg.system->seeds_given) seeds = {1, 2, 3, 4, 5, 6, 7, 8};

  // fail fast on schema problems before spawning anything
  for (double v : sw.values) apply(cfg, v);

  const std::size_t total = sw.values.size() * seeds.size();
  std::vector<SweepRow> rows(total);
  std::vector<std::vector<std::string>> notes(total);
  std::vector<std::exception_ptr> errors(total);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < total;) {
      try {
        rows[i] = run_point(cfg, sw.values[i / seeds.size()], seeds[i % seeds.size()], force, notes[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned k = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(total)));
  if (k == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < k; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  SweepResult res;
  res.rows = std::move(rows);
  for (auto& n : notes) res.warnings.insert(res.warnings.end(), n.begin(), n.end());
  std::vector<double> fx, fy;
  for (std::size_t vi = 0; vi < sw.values.size(); ++vi) {
    std::vector<double> est;
    for (std::size_t si = 0; si < seeds.size(); ++si) {
      const auto& r = res.rows[vi * seeds.size() + si];
      const double y = sw.dynamics == Dynamics::unitary ? r.p_peak : r.t_rel_fit;
      if (std::isfinite(y)) est.push_back(y);
    }
    SweepPoint pt;
    pt.value = sw.values[vi];
    pt.count = est.size();
    pt.median = quantile(est, 0.5);
    pt.q1 = quantile(est, 0.25);
    pt.q3 = quantile(est, 0.75);
    res.points.push_back(pt);
    if (std::isfinite(pt.median) && std::isfinite(pt.value)) {
      fx.push_back(pt.value);
      fy.push_back(pt.median);
    }
  }
  if (sw.fit && sw.dynamics != Dynamics::unitary) {
    try {
      res.fit = fit_power_law(fx, fy);
    } catch (const DomainError& e) {
      res.warnings.push_back(std::string("no power-law fit: ") + e.what());
    }
  }
  return res;
}

}  // namespace qsearch
