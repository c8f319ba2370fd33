#include "qsearch/ode.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qsearch/errors.hpp"

namespace qsearch {

namespace {

constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

class Dopri5 {
 public:
  Dopri5(const OdeRhs& f, std::vector<double> y, double t, const OdeOptions& o, OdeStats* st)
      : f_(f), o_(o), st_(st), n_(y.size()), t_(t), y_(std::move(y)) {
    for (auto* v : {&k1_, &k2_, &k3_, &k4_, &k5_, &k6_, &k7_, &tmp_, &ynew_, &r1_, &r2_, &r3_, &r4_, &r5_})
      v->assign(n_, 0.0);
    eval(t_, y_, k1_);
  }

  double t() const { return t_; }
  double t_old() const { return t_old_; }
  const std::vector<double>& y() const { return y_; }

  // One accepted step towards t_end (never beyond it).
  void step(double t_end) {
    if (h_ == 0.0) h_ = o_.h_initial > 0 ? o_.h_initial : initial_step(t_end);
    for (;;) {
      double h = std::min(h_, t_end - t_);
      if (o_.h_max > 0) h = std::min(h, o_.h_max);
      if (h < 1e-14 * std::max(1.0, std::abs(t_)) || !std::isfinite(h)) {
        std::ostringstream msg;
        msg << "step size underflow at t=" << t_ << " (h=" << h << "); the problem is stiff or ill-posed";
        throw NumericalError(msg.str());
      }
      if (++steps_ > o_.max_steps) throw NumericalError("integrator exceeded the maximum number of steps");
      const double err = attempt(h);
      if (err <= 1.0) {
        build_dense(h);
        t_old_ = t_;
        t_ += h;
        if (t_end - t_ <= 1e-13 * std::max(1.0, std::abs(t_end))) t_ = t_end;
        y_.swap(ynew_);
        k1_.swap(k7_);  // FSAL
        double fac = err == 0.0 ? 5.0 : std::min(5.0, std::max(0.2, 0.9 * std::pow(err, -0.2)));
        if (last_rejected_) fac = std::min(fac, 1.0);
        h_ = h * fac;
        last_rejected_ = false;
        if (st_) ++st_->accepted;
        return;
      }
      if (st_) ++st_->rejected;
      last_rejected_ = true;
      h_ = h * std::max(0.2, 0.9 * std::pow(err, -0.2));
    }
  }

  // Continuous extension on [t_old, t].
  void dense(double t, std::vector<double>& out) const {
    const double h = t_ - t_old_;
    const double th = h == 0.0 ? 1.0 : (t - t_old_) / h, th1 = 1.0 - th;
    out.resize(n_);
    for (std::size_t i = 0; i < n_; ++i)
      out[i] = r1_[i] + th * (r2_[i] + th1 * (r3_[i] + th * (r4_[i] + th1 * r5_[i])));
  }

 private:
  void eval(double t, const std::vector<double>& y, std::vector<double>& dy) {
    f_(t, y, dy);
    if (st_) ++st_->evaluations;
  }

  double initial_step(double t_end) {
    // Hairer's starting step heuristic
    double d0 = 0, dd1 = 0;
    for (std::size_t i = 0; i < n_; ++i) {
      const double sc = o_.atol + o_.rtol * std::abs(y_[i]);
      d0 += (y_[i] / sc) * (y_[i] / sc);
      dd1 += (k1_[i] / sc) * (k1_[i] / sc);
    }
    d0 = std::sqrt(d0 / n_);
    dd1 = std::sqrt(dd1 / n_);
    double h0 = (d0 < 1e-5 || dd1 < 1e-5) ? 1e-6 : 0.01 * d0 / dd1;
    h0 = std::min(h0, t_end - t_);
    for (std::size_t i = 0; i < n_; ++i) tmp_[i] = y_[i] + h0 * k1_[i];
    eval(t_ + h0, tmp_, k2_);
    double d2 = 0;
    for (std::size_t i = 0; i < n_; ++i) {
      const double sc = o_.atol + o_.rtol * std::abs(y_[i]);
      d2 += ((k2_[i] - k1_[i]) / sc) * ((k2_[i] - k1_[i]) / sc);
    }
    d2 = std::sqrt(d2 / n_) / h0;
    const double m = std::max(dd1, d2);
    const double h1 = m <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / m, 0.2);
    return std::min(100 * h0, h1);
  }

  double attempt(double h) {
    const double t = t_;
    for (std::size_t i = 0; i < n_; ++i) tmp_[i] = y_[i] + h * a21 * k1_[i];
    eval(t + c2 * h, tmp_, k2_);
    for (std::size_t i = 0; i < n_; ++i) tmp_[i] = y_[i] + h * (a31 * k1_[i] + a32 * k2_[i]);
    eval(t + c3 * h, tmp_, k3_);
    for (std::size_t i = 0; i < n_; ++i)
      tmp_[i] = y_[i] + h * (a41 * k1_[i] + a42 * k2_[i] + a43 * k3_[i]);
    eval(t + c4 * h, tmp_, k4_);
    for (std::size_t i = 0; i < n_; ++i)
      tmp_[i] = y_[i] + h * (a51 * k1_[i] + a52 * k2_[i] + a53 * k3_[i] + a54 * k4_[i]);
    eval(t + c5 * h, tmp_, k5_);
    for (std::size_t i = 0; i < n_; ++i)
      tmp_[i] = y_[i] + h * (a61 * k1_[i] + a62 * k2_[i] + a63 * k3_[i] + a64 * k4_[i] + a65 * k5_[i]);
    eval(t + h, tmp_, k6_);
    for (std::size_t i = 0; i < n_; ++i)
      ynew_[i] = y_[i] + h * (a71 * k1_[i] + a73 * k3_[i] + a74 * k4_[i] + a75 * k5_[i] + a76 * k6_[i]);
    eval(t + h, ynew_, k7_);
    double err = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      const double e = h * (e1 * k1_[i] + e3 * k3_[i] + e4 * k4_[i] + e5 * k5_[i] + e6 * k6_[i] + e7 * k7_[i]);
      const double sc = o_.atol + o_.rtol * std::max(std::abs(y_[i]), std::abs(ynew_[i]));
      err += (e / sc) * (e / sc);
    }
    err = std::sqrt(err / static_cast<double>(n_));
    return std::isfinite(err) ? err : 1e10;
  }

  void build_dense(double h) {
    for (std::size_t i = 0; i < n_; ++i) {
      const double dy = ynew_[i] - y_[i];
      const double bspl = h * k1_[i] - dy;
      r1_[i] = y_[i];
      r2_[i] = dy;
      r3_[i] = bspl;
      r4_[i] = dy - h * k7_[i] - bspl;
      r5_[i] = h * (d1 * k1_[i] + d3 * k3_[i] + d4 * k4_[i] + d5 * k5_[i] + d6 * k6_[i] + d7 * k7_[i]);
    }
  }

  const OdeRhs& f_;
  OdeOptions o_;
  OdeStats* st_;
  std::size_t n_;
  double t_, t_old_ = 0.0, h_ = 0.0;
  std::size_t steps_ = 0;
  bool last_rejected_ = false;
  std::vector<double> y_, k1_, k2_, k3_, k4_, k5_, k6_, k7_, tmp_, ynew_, r1_, r2_, r3_, r4_, r5_;
};

}  // namespace

std::vector<std::vector<double>> integrate_dopri5(const OdeRhs& f, std::vector<double> y0,
                                                  const std::vector<double>& times,
                                                  const OdeOptions& opts, OdeStats* stats) {
  if (times.empty()) throw InvalidParameter("integration needs a non-empty time grid");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] >= times[i - 1])) throw InvalidParameter("time grid must be non-decreasing");
  std::vector<std::vector<double>> out;
  out.reserve(times.size());
  out.push_back(y0);
  if (times.size() == 1) return out;
  Dopri5 s(f, std::move(y0), times.front(), opts, stats);
  std::vector<double> y;
  std::size_t next = 1;
  const double t_end = times.back();
  while (next < times.size()) {
    while (next < times.size() && times[next] <= s.t()) {
      if (times[next] == s.t()) out.push_back(s.y());
      else {
        s.dense(times[next], y);
        out.push_back(y);
      }
      ++next;
    }
    if (next < times.size()) s.step(t_end);
  }
  return out;
}

double integrate_dopri5_until(const OdeRhs& f, std::vector<double>& y, double t0, double t_end,
                              const std::function<bool(double, const std::vector<double>&)>& observe,
                              const OdeOptions& opts, OdeStats* stats) {
  Dopri5 s(f, y, t0, opts, stats);
  while (s.t() < t_end) {
    s.step(t_end);
    if (!observe(s.t(), s.y())) break;
  }
  y = s.y();
  return s.t();
}

}  // namespace qsearch
