#include "qsearch/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "qsearch/errors.hpp"

namespace qsearch {

namespace {

template <typename T>
double offdiag_norm2(const Matrix<T>& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += abs2(a(i, j));
  return s;
}

template <typename T>
void jacobi_impl(Matrix<T>& a, std::vector<double>& values, Matrix<T>& v) {
  const std::size_t n = a.rows();
  v = Matrix<T>::identity(n);
  const double scale = frobenius_norm(a);
  const double tol2 = std::pow(1e-12 * std::max(scale, 1e-300), 2);
  constexpr int kMaxSweeps = 100;
  int sweep = 0;
  for (; sweep < kMaxSweeps && offdiag_norm2(a) > tol2; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        const double r = std::abs(a(p, q));
        if (r == 0.0) continue;
        if constexpr (!std::is_same_v<T, double>) {
          // rotate a(p,q) onto the real axis by rephasing basis vector q
          const T ph = a(p, q) / r;
          const T phc = std::conj(ph);
          for (std::size_t k = 0; k < n; ++k) {
            a(k, q) *= phc;
            v(k, q) *= phc;
          }
          for (std::size_t k = 0; k < n; ++k) a(q, k) *= ph;
          a(p, q) = r;
          a(q, p) = r;
        }
        const double app = std::real(a(p, p)), aqq = std::real(a(q, q));
        const double apq = std::real(a(p, q));
        const double theta = (aqq - app) / (2.0 * apq);
        double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        if (theta < 0) t = -t;
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const T akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
          a(p, k) = conj_value(a(k, p));
          a(q, k) = conj_value(a(k, q));
        }
        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = T{};
        a(q, p) = T{};
        for (std::size_t k = 0; k < n; ++k) {
          const T vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
  }
  if (sweep == kMaxSweeps) throw NumericalError("Jacobi eigensolver did not converge");
  values.resize(n);
  for (std::size_t i = 0; i < n; ++i) values[i] = std::real(a(i, i));
}

// Householder reduction to tridiagonal form followed by implicit QL, after the EISPACK
// tred2/tql2 pair. The QL sweep keeps the eigenvectors as rows so the rotations run over
// contiguous memory; tred2 likewise works on the transpose of the transform.
void tred2(RealMatrix& W, std::vector<double>& d, std::vector<double>& e) {
  const std::size_t n = W.rows();
  d.assign(n, 0.0);
  e.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) d[j] = W(j, n - 1);
  for (std::size_t i = n - 1; i > 0; --i) {
    double scale = 0.0, h = 0.0;
    for (std::size_t k = 0; k < i; ++k) scale += std::abs(d[k]);
    if (scale == 0.0) {
      e[i] = d[i - 1];
      for (std::size_t j = 0; j < i; ++j) {
        d[j] = W(j, i - 1);
        W(j, i) = 0.0;
        W(i, j) = 0.0;
      }
    } else {
      for (std::size_t k = 0; k < i; ++k) {
        d[k] /= scale;
        h += d[k] * d[k];
      }
      double f = d[i - 1];
      double g = std::sqrt(h);
      if (f > 0) g = -g;
      e[i] = scale * g;
      h -= f * g;
      d[i - 1] = f - g;
      for (std::size_t j = 0; j < i; ++j) e[j] = 0.0;
      for (std::size_t j = 0; j < i; ++j) {
        f = d[j];
        W(i, j) = f;
        g = e[j] + W(j, j) * f;
        for (std::size_t k = j + 1; k < i; ++k) {
          g += W(j, k) * d[k];
          e[k] += W(j, k) * f;
        }
        e[j] = g;
      }
      f = 0.0;
      for (std::size_t j = 0; j < i; ++j) {
        e[j] /= h;
        f += e[j] * d[j];
      }
      const double hh = f / (h + h);
      for (std::size_t j = 0; j < i; ++j) e[j] -= hh * d[j];
      for (std::size_t j = 0; j < i; ++j) {
        f = d[j];
        g = e[j];
        for (std::size_t k = j; k < i; ++k) W(j, k) -= (f * e[k] + g * d[k]);
        d[j] = W(j, i - 1);
        W(j, i) = 0.0;
      }
    }
    d[i] = h;
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    W(i, n - 1) = W(i, i);
    W(i, i) = 1.0;
    const double h = d[i + 1];
    if (h != 0.0) {
      for (std::size_t k = 0; k <= i; ++k) d[k] = W(i + 1, k) / h;
      for (std::size_t j = 0; j <= i; ++j) {
        double g = 0.0;
        for (std::size_t k = 0; k <= i; ++k) g += W(i + 1, k) * W(j, k);
        for (std::size_t k = 0; k <= i; ++k) W(j, k) -= g * d[k];
      }
    }
    for (std::size_t k = 0; k <= i; ++k) W(i + 1, k) = 0.0;
  }
  for (std::size_t j = 0; j < n; ++j) {
    d[j] = W(j, n - 1);
    W(j, n - 1) = 0.0;
  }
  W(n - 1, n - 1) = 1.0;
  e[0] = 0.0;
}

// Vt holds eigenvectors as rows.
void tql2(RealMatrix& Vt, std::vector<double>& d, std::vector<double>& e) {
  const std::size_t n = Vt.rows();
  for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;
  double f = 0.0, tst1 = 0.0;
  const double eps = std::numeric_limits<double>::epsilon();
  for (std::size_t l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
    std::size_t m = l;
    while (m < n && std::abs(e[m]) > eps * tst1) ++m;
    if (m > l) {
      int iter = 0;
      do {
        if (++iter > 60) throw NumericalError("tridiagonal QL did not converge");
        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const double dl1 = d[l + 1];
        double h = g - d[l];
        for (std::size_t i = l + 2; i < n; ++i) d[i] -= h;
        f += h;
        p = d[m];
        double c = 1.0, c2 = 1.0, c3 = 1.0, s = 0.0, s2 = 0.0;
        const double el1 = e[l + 1];
        for (std::size_t ii = m; ii-- > l;) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[ii];
          h = c * p;
          r = std::hypot(p, e[ii]);
          e[ii + 1] = s * r;
          s = e[ii] / r;
          c = p / r;
          p = c * d[ii] - s * g;
          d[ii + 1] = h + s * (c * g + s * d[ii]);
          auto vi = Vt.row(ii);
          auto vi1 = Vt.row(ii + 1);
          for (std::size_t k = 0; k < n; ++k) {
            const double t = vi1[k];
            vi1[k] = s * vi[k] + c * t;
            vi[k] = c * vi[k] - s * t;
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::abs(e[l]) > eps * tst1);
    }
    d[l] += f;
    e[l] = 0.0;
  }
}

template <typename T>
void check_hermitian(const Matrix<T>& h) {
  if (h.rows() != h.cols() || h.rows() == 0)
    throw ContractViolation("eigendecompose needs a non-empty square matrix");
  const double tol = 1e-10 * std::max(frobenius_norm(h), 1e-300);
  if (!is_hermitian(h, tol)) throw ContractViolation("matrix is not Hermitian");
}

template <typename T>
T phase_of(T x) {
  if constexpr (std::is_same_v<T, double>) return x < 0 ? -1.0 : 1.0;
  else return x / std::abs(x);
}

// Sort, canonicalise clusters and phases, store as complex.
template <typename T>
Spectrum finish(std::vector<double> values, const Matrix<T>& vecs) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  Matrix<T> v(n, n);
  std::vector<double> lam(n);
  for (std::size_t k = 0; k < n; ++k) {
    lam[k] = values[order[k]];
    for (std::size_t i = 0; i < n; ++i) v(i, k) = vecs(i, order[k]);
  }

  double lmax = 1.0;
  for (double x : lam) lmax = std::max(lmax, std::abs(x));
  const double ctol = 1e-10 * lmax;
  for (std::size_t k0 = 0; k0 < n;) {
    std::size_t k1 = k0 + 1;
    while (k1 < n && lam[k1] - lam[k1 - 1] <= ctol) ++k1;
    const std::size_t m = k1 - k0;
    if (m > 1) {
      // rebuild the cluster basis from projected unit vectors, in index order
      Matrix<T> q(n, m);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < m; ++k) q(i, k) = v(i, k0 + k);
      std::vector<std::vector<T>> basis;
      std::vector<T> x(n);
      std::vector<T> coef(m);
      for (std::size_t e = 0; e < n && basis.size() < m; ++e) {
        for (std::size_t k = 0; k < m; ++k) coef[k] = conj_value(q(e, k));
        for (std::size_t i = 0; i < n; ++i) {
          T acc{};
          auto qi = q.row(i);
          for (std::size_t k = 0; k < m; ++k) acc += qi[k] * coef[k];
          x[i] = acc;
        }
        for (int pass = 0; pass < 2; ++pass)
          for (const auto& b : basis) {
            T dot{};
            for (std::size_t i = 0; i < n; ++i) dot += conj_value(b[i]) * x[i];
            for (std::size_t i = 0; i < n; ++i) x[i] -= dot * b[i];
          }
        double nrm = 0.0;
        for (const auto& xi : x) nrm += abs2(xi);
        nrm = std::sqrt(nrm);
        if (nrm < 1e-6) continue;
        for (auto& xi : x) xi /= nrm;
        basis.push_back(x);
      }
      if (basis.size() != m) throw NumericalError("degenerate cluster lost rank");
      for (std::size_t k = 0; k < m; ++k)
        for (std::size_t i = 0; i < n; ++i) v(i, k0 + k) = basis[k][i];
    }
    k0 = k1;
  }

  for (std::size_t k = 0; k < n; ++k) {
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) best = std::max(best, std::abs(v(i, k)));
    std::size_t arg = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (std::abs(v(i, k)) >= best * (1.0 - 1e-9)) {
        arg = i;
        break;
      }
    const T ph = conj_value(phase_of(v(arg, k)));
    for (std::size_t i = 0; i < n; ++i) v(i, k) *= ph;
    if constexpr (!std::is_same_v<T, double>) v(arg, k) = std::abs(v(arg, k));
  }

  Spectrum s;
  s.values = std::move(lam);
  if constexpr (std::is_same_v<T, double>) s.vectors = to_complex(v);
  else s.vectors = std::move(v);
  s.gap = n >= 2 ? s.values[1] - s.values[0] : std::numeric_limits<double>::quiet_NaN();
  s.gap2 = n >= 3 ? s.values[2] - s.values[0] : std::numeric_limits<double>::quiet_NaN();
  return s;
}

}  // namespace

void jacobi_eigen(RealMatrix& a, std::vector<double>& values, RealMatrix& vectors) {
  jacobi_impl(a, values, vectors);
}

void jacobi_eigen(ComplexMatrix& a, std::vector<double>& values, ComplexMatrix& vectors) {
  jacobi_impl(a, values, vectors);
}

void tridiagonal_ql_eigen(const RealMatrix& a, std::vector<double>& values, RealMatrix& vectors) {
  const std::size_t n = a.rows();
  RealMatrix W = a;  // symmetric, so this is also its transpose
  std::vector<double> e;
  if (n == 1) {
    values = {a(0, 0)};
    vectors = RealMatrix::identity(1);
    return;
  }
  tred2(W, values, e);
  tql2(W, values, e);
  vectors = adjoint(W);
}

Spectrum eigendecompose(const RealMatrix& h) {
  check_hermitian(h);
  std::vector<double> values;
  RealMatrix vecs;
  if (h.rows() <= kJacobiLimit) {
    RealMatrix a = h;
    jacobi_eigen(a, values, vecs);
  } else {
    tridiagonal_ql_eigen(h, values, vecs);
  }
  return finish(std::move(values), vecs);
}

Spectrum eigendecompose(const ComplexMatrix& h) {
  check_hermitian(h);
  bool real = true;
  for (const auto& z : h.data()) real = real && z.imag() == 0.0;
  if (real) {
    RealMatrix r(h.rows(), h.cols());
    for (std::size_t i = 0; i < r.data().size(); ++i) r.data()[i] = h.data()[i].real();
    return eigendecompose(r);
  }
  // complex input always goes through Jacobi; none of the search Hamiltonians need it
  ComplexMatrix a = h;
  std::vector<double> values;
  ComplexMatrix vecs;
  jacobi_eigen(a, values, vecs);
  return finish(std::move(values), vecs);
}

}  // namespace qsearch
