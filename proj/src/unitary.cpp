#include "qsearch/unitary.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "qsearch/errors.hpp"

namespace qsearch {

std::vector<double> uniform_grid(double t_max, std::size_t points) {
  if (points < 2) throw InvalidParameter("a time grid needs at least 2 points");
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw InvalidParameter("t_max must be > 0");
  std::vector<double> t(points);
  for (std::size_t i = 0; i < points; ++i)
    t[i] = t_max * static_cast<double>(i) / static_cast<double>(points - 1);
  return t;
}

std::vector<double> default_closed_grid(double delta) {
  return uniform_grid(3.0 * std::numbers::pi / delta, 2000);
}

namespace {

void check_times(const std::vector<double>& times) {
  if (times.empty()) throw InvalidParameter("time grid is empty");
  for (double t : times)
    if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidParameter("time grid has negative or non-finite entries");
}

// Peak = first discrete local maximum within 90% of the global one, refined by a
// parabola through the neighbours and kept only if the exact value is higher.
void find_peak(ClosedRunResult& r, const std::function<double(double)>& p_at) {
  const auto& t = r.times;
  const auto& p = r.p_w;
  const double top = *std::max_element(p.begin(), p.end());
  std::size_t k = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const bool left = i == 0 || p[i] >= p[i - 1];
    const bool right = i + 1 == p.size() || p[i] >= p[i + 1];
    if (left && right && p[i] >= 0.9 * top) {
      k = i;
      break;
    }
  }
  r.t_peak = t[k];
  r.p_peak = p[k];
  if (k > 0 && k + 1 < p.size()) {
    const double t0 = t[k - 1], t1 = t[k], t2 = t[k + 1];
    const double y0 = p[k - 1], y1 = p[k], y2 = p[k + 1];
    const double num = (t1 - t0) * (t1 - t0) * (y1 - y2) - (t1 - t2) * (t1 - t2) * (y1 - y0);
    const double den = (t1 - t0) * (y1 - y2) - (t1 - t2) * (y1 - y0);
    if (den != 0.0) {
      const double tv = t1 - 0.5 * num / den;
      if (tv > t0 && tv < t2) {
        const double pv = p_at(tv);
        if (pv > r.p_peak) {
          r.t_peak = tv;
          r.p_peak = pv;
        }
      }
    }
  }
  r.repetitions = r.p_peak > 0 ? std::max(1.0, 1.0 / r.p_peak) : INFINITY;
  r.t_expected = r.t_peak * r.repetitions;
}

}  // namespace

ClosedRunResult evolve_closed(const SearchHamiltonian& h, const std::vector<double>& times) {
  check_times(times);
  return evolve_closed(h, eigendecompose(h.matrix()), times);
}

ClosedRunResult evolve_closed(const SearchHamiltonian& h, const Spectrum& spec,
                              const std::vector<double>& times) {
  check_times(times);
  const std::size_t n = h.n(), w = h.marked();
  if (spec.size() != n) throw InvalidParameter("spectrum does not match the Hamiltonian");
  const auto& V = spec.vectors;
  // a_k = <lambda_k|s>
  const double amp = 1.0 / std::sqrt(static_cast<double>(n));
  std::vector<Complex> a(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto row = V.row(i);
    for (std::size_t k = 0; k < n; ++k) a[k] += std::conj(row[k]) * amp;
  }
  std::vector<Complex> vw(V.row(w).begin(), V.row(w).end());
  auto p_at = [&](double t) {
    Complex s{};
    for (std::size_t k = 0; k < n; ++k) s += vw[k] * a[k] * std::polar(1.0, -spec.values[k] * t);
    return std::norm(s);
  };

  ClosedRunResult r;
  r.times = times;
  r.p_w.resize(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) r.p_w[i] = p_at(times[i]);

  // full state norm on a subsample of the grid
  const std::size_t samples = std::min<std::size_t>(times.size(), 64);
  std::vector<Complex> c(n);
  for (std::size_t s = 0; s < samples; ++s) {
    const std::size_t idx = samples == 1 ? 0 : s * (times.size() - 1) / (samples - 1);
    for (std::size_t k = 0; k < n; ++k) c[k] = a[k] * std::polar(1.0, -spec.values[k] * times[idx]);
    double nrm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      auto row = V.row(i);
      Complex psi{};
      for (std::size_t k = 0; k < n; ++k) psi += row[k] * c[k];
      nrm += std::norm(psi);
    }
    r.max_norm_error = std::max(r.max_norm_error, std::abs(std::sqrt(nrm) - 1.0));
  }
  find_peak(r, p_at);
  return r;
}

double success_probability_reduced(const TwoLevelSystem& tl, double t) {
  if (tl.policy == GammaPolicy::plain) {
    const double s = std::sin(0.5 * tl.delta * t);
    return s * s / (1.0 + tl.n * tl.eps_w * tl.eps_w / 4.0);
  }
  Complex amp{};
  for (std::size_t k = 0; k < 2; ++k)
    amp += tl.w_overlap(k) * tl.s_overlap(k) * std::polar(1.0, -tl.energies[k] * t);
  return std::norm(amp);
}

ClosedRunResult evolve_reduced(const TwoLevelSystem& tl, const std::vector<double>& times) {
  check_times(times);
  ClosedRunResult r;
  r.times = times;
  r.p_w.resize(times.size());
  auto p_at = [&](double t) { return success_probability_reduced(tl, t); };
  for (std::size_t i = 0; i < times.size(); ++i) r.p_w[i] = p_at(times[i]);
  find_peak(r, p_at);
  return r;
}

std::string_view to_string(Regime r) { return r == Regime::weak ? "weak" : "strong"; }

Regime regime_classify(std::size_t n, double sigma) {
  if (n < 2) throw InvalidParameter("regime_classify needs n >= 2");
  if (!(sigma >= 0.0)) throw InvalidParameter("sigma must be >= 0");
  const double bound = 1.0 / std::sqrt(static_cast<double>(n));
  return sigma <= bound * (1.0 + 1e-12) ? Regime::weak : Regime::strong;
}

ExpectedRuntime expected_runtime(std::size_t n, double eps_w) {
  if (n < 2) throw InvalidParameter("expected_runtime needs n >= 2");
  const double nn = static_cast<double>(n);
  const double delta = std::sqrt(eps_w * eps_w + 4.0 / nn);
  ExpectedRuntime e;
  e.t_single = std::numbers::pi / delta;
  e.repetitions = 1.0 + nn * eps_w * eps_w / 4.0;
  e.t_expected = e.t_single * e.repetitions;
  return e;
}

}  // namespace qsearch
