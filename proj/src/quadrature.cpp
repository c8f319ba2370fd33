#include "qsearch/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

#include "qsearch/errors.hpp"

namespace qsearch {

namespace {

constexpr double xgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                           0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                           0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                           0.207784955007898467600689403773245, 0.0};
constexpr double wgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                           0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                           0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                           0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for xgk[1], xgk[3], xgk[5] and the centre
constexpr double wg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                          0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b;
  std::complex<double> value;
  double err;
  bool operator<(const Panel& o) const { return err < o.err; }
};

}  // namespace

QuadratureResult gauss_kronrod_15(const ComplexIntegrand& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const std::complex<double> fc = f(c);
  std::complex<double> k = wgk[7] * fc, g = wg[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double dx = h * xgk[j];
    const std::complex<double> s = f(c - dx) + f(c + dx);
    k += wgk[j] * s;
    if (j % 2 == 1) g += wg[j / 2] * s;
  }
  QuadratureResult r;
  r.value = h * k;
  r.error_estimate = std::abs(h * (k - g));
  r.panels = 1;
  return r;
}

QuadratureResult integrate_panels(const ComplexIntegrand& f, double a, double b,
                                  std::size_t panels) {
  if (panels == 0) throw InvalidParameter("need at least one panel");
  QuadratureResult total;
  const double h = (b - a) / static_cast<double>(panels);
  for (std::size_t i = 0; i < panels; ++i) {
    const auto r = gauss_kronrod_15(f, a + h * i, i + 1 == panels ? b : a + h * (i + 1));
    total.value += r.value;
    total.error_estimate += r.error_estimate;
  }
  total.panels = panels;
  return total;
}

QuadratureResult integrate_adaptive(const ComplexIntegrand& f, double a, double b,
                                    double abs_tol, double rel_tol, std::size_t initial_panels,
                                    std::size_t max_panels) {
  if (initial_panels == 0) initial_panels = 1;
  std::priority_queue<Panel> heap;
  std::complex<double> sum = 0.0;
  double err = 0.0;
  const double h = (b - a) / static_cast<double>(initial_panels);
  for (std::size_t i = 0; i < initial_panels; ++i) {
    const double lo = a + h * i, hi = i + 1 == initial_panels ? b : a + h * (i + 1);
    const auto r = gauss_kronrod_15(f, lo, hi);
    heap.push({lo, hi, r.value, r.error_estimate});
    sum += r.value;
    err += r.error_estimate;
  }
  while (err > std::max(abs_tol, rel_tol * std::abs(sum))) {
    if (heap.size() >= max_panels)
      throw NumericalError("adaptive quadrature hit the panel limit");
    const Panel p = heap.top();
    heap.pop();
    const double mid = 0.5 * (p.a + p.b);
    const auto l = gauss_kronrod_15(f, p.a, mid);
    const auto r = gauss_kronrod_15(f, mid, p.b);
    sum += l.value + r.value - p.value;
    err += l.error_estimate + r.error_estimate - p.err;
    heap.push({p.a, mid, l.value, l.error_estimate});
    heap.push({mid, p.b, r.value, r.error_estimate});
  }
  // re-add from the panels to shed the drift of the running sums
  QuadratureResult res;
  res.panels = heap.size();
  std::vector<Panel> all;
  all.reserve(heap.size());
  while (!heap.empty()) {
    all.push_back(heap.top());
    heap.pop();
  }
  std::sort(all.begin(), all.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
  for (const auto& p : all) {
    res.value += p.value;
    res.error_estimate += p.err;
  }
  return res;
}

}  // namespace qsearch
