#include "qsearch/relaxation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qsearch/errors.hpp"

namespace qsearch {

PopulationSeries solution_population(const Trajectory& traj, const std::vector<Complex>& o) {
  PopulationSeries out;
  out.p_w.reserve(traj.rho.size());
  for (const auto& rho : traj.rho) {
    const std::size_t m = rho.rows();
    if (o.size() < m) throw InvalidParameter("overlaps missing for some retained levels");
    double p = 0.0;
    for (std::size_t k = 0; k < m; ++k)
      for (std::size_t l = 0; l < m; ++l) p += (rho(k, l) * o[k] * std::conj(o[l])).real();
    out.p_w.push_back(p);
    out.truncation_error = std::max(out.truncation_error, std::abs(p - rho(0, 0).real()));
  }
  return out;
}

namespace {

struct Line {
  double slope, intercept;
};

Line least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) sx += x[i], sy += y[i];
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw NumericalError("relaxation fit has a degenerate time window");
  const double s = sxy / sxx;
  return {s, my - s * mx};
}

}  // namespace

double extract_relaxation_time(const std::vector<double>& t, const std::vector<double>& p, double target) {
  if (t.size() != p.size() || t.size() < 5) throw InvalidParameter("relaxation fit needs >= 5 matching samples");
  const double end_dev = std::abs(p.back() - target);
  if (end_dev > 0.05 * std::abs(target)) {
    std::ostringstream msg;
    msg << "no relaxation estimate: |P - target| = " << end_dev << " at the window end exceeds 5% of " << target;
    throw NumericalError(msg.str());
  }
  const double t0 = t.front() + 0.4 * (t.back() - t.front());
  std::size_t first = 0;
  while (first < t.size() && t[first] < t0) ++first;

  std::size_t crossings = 0;
  for (std::size_t i = first + 1; i < t.size(); ++i)
    if ((p[i] - target) * (p[i - 1] - target) < 0) ++crossings;

  std::vector<double> xs, ys;
  if (crossings >= 2) {
    // envelope through the local maxima of |P - target|
    for (std::size_t i = std::max<std::size_t>(first, 1); i + 1 < t.size(); ++i) {
      const double a = std::abs(p[i - 1] - target), b = std::abs(p[i] - target), c = std::abs(p[i + 1] - target);
      if (b > 0 && b >= a && b > c) {
        xs.push_back(t[i]);
        ys.push_back(std::log(b));
      }
    }
  } else {
    for (std::size_t i = first; i < t.size(); ++i) {
      const double dev = std::abs(p[i] - target);
      if (dev > 0) {
        xs.push_back(t[i]);
        ys.push_back(std::log(dev));
      }
    }
  }
  if (xs.size() < 2) throw NumericalError("no relaxation estimate: too few usable points in the fit window");
  const Line fit = least_squares(xs, ys);
  if (!(fit.slope < 0)) throw NumericalError("no relaxation estimate: the series does not decay");
  return -1.0 / fit.slope;
}

}  // namespace qsearch
