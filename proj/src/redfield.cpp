#include "qsearch/redfield.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qsearch/eigensolver.hpp"
#include "qsearch/errors.hpp"

namespace qsearch {

ComplexMatrix RedfieldTensor::generator() const {
  const std::size_t m2 = m * m;
  ComplexMatrix L(m2, m2);
  for (std::size_t ab = 0; ab < m2; ++ab) {
    for (std::size_t cd = 0; cd < m2; ++cd) L(ab, cd) = r[ab * m2 + cd];
    L(ab, ab) += Complex(0.0, -omegas(ab / m, ab % m));
  }
  return L;
}

RedfieldTensor assemble_redfield(const CouplingCoefficients& cc, const std::vector<double>& energies,
                                 const BathSpec& bath, const RedfieldOptions& opts) {
  validate(bath);
  const std::size_t m = cc.m;
  if (m == 0 || energies.size() < m) throw InvalidParameter("need energies for every retained level");
  if (m > kRedfieldMaxLevels)
    throw InvalidParameter("dense Redfield tensor is capped at " + std::to_string(kRedfieldMaxLevels) +
                           " levels");
  const double g_dt = bath.g * correlation_time(bath);
  if (g_dt > 1.0 && !opts.force)
    throw ValidityError("Markov bound violated: g * delta_t = " + std::to_string(g_dt) + " > 1");

  RedfieldTensor t;
  t.m = m;
  t.omegas = RealMatrix(m, m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) t.omegas(a, b) = energies[a] - energies[b];
  RealMatrix S(m, m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) S(a, b) = rate_S(t.omegas(a, b), bath);

  // X_ac = sum_j sum_x A_ax A_xc S(w_cx), Xp_db = sum_j sum_x A_dx A_xb S(w_dx),
  // Y_acdb = sum_j A_ac A_db
  ComplexMatrix X(m, m), Xp(m, m);
  std::vector<Complex> Y(m * m * m * m);
  ComplexMatrix A(m, m);
  for (std::size_t j = 0; j < cc.sites.size(); ++j) {
    const double w = cc.sites[j].weight;
    for (std::size_t x = 0; x < m; ++x)
      for (std::size_t y = 0; y < m; ++y) A(x, y) = cc.a(j, x, y);
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t c = 0; c < m; ++c) {
        Complex sx{}, sp{};
        for (std::size_t x = 0; x < m; ++x) {
          const Complex aa = A(a, x) * A(x, c);
          sx += aa * S(c, x);
          sp += aa * S(a, x);
        }
        X(a, c) += w * sx;
        Xp(a, c) += w * sp;
        const Complex aac = w * A(a, c);
        if (aac == Complex{}) continue;
        Complex* yrow = &Y[(a * m + c) * m * m];
        for (std::size_t d = 0; d < m; ++d)
          for (std::size_t b = 0; b < m; ++b) yrow[d * m + b] += aac * A(d, b);
      }
  }

  t.r.assign(m * m * m * m, Complex{});
  const double k = -0.5 * opts.kappa;
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b)
      for (std::size_t c = 0; c < m; ++c)
        for (std::size_t d = 0; d < m; ++d) {
          const Complex y = Y[((a * m + c) * m + d) * m + b];
          Complex v = -y * (S(c, a) + S(d, b));
          if (b == d) v += X(a, c);
          if (a == c) v += Xp(d, b);
          t.r[((a * m + b) * m + c) * m + d] = k * v;
        }
  return t;
}

namespace {

std::vector<double> pack(const ComplexMatrix& rho) {
  std::vector<double> y(2 * rho.data().size());
  for (std::size_t i = 0; i < rho.data().size(); ++i) {
    y[2 * i] = rho.data()[i].real();
    y[2 * i + 1] = rho.data()[i].imag();
  }
  return y;
}

ComplexMatrix unpack(const std::vector<double>& y, std::size_t m) {
  ComplexMatrix rho(m, m);
  for (std::size_t i = 0; i < m * m; ++i) rho.data()[i] = {y[2 * i], y[2 * i + 1]};
  return rho;
}

OdeRhs make_rhs(const ComplexMatrix& L) {
  return [&L](double, const std::vector<double>& y, std::vector<double>& dy) {
    const std::size_t m2 = L.rows();
    for (std::size_t i = 0; i < m2; ++i) {
      auto row = L.row(i);
      double re = 0.0, im = 0.0;
      for (std::size_t j = 0; j < m2; ++j) {
        const double yr = y[2 * j], yi = y[2 * j + 1];
        re += row[j].real() * yr - row[j].imag() * yi;
        im += row[j].real() * yi + row[j].imag() * yr;
      }
      dy[2 * i] = re;
      dy[2 * i + 1] = im;
    }
  };
}

void check_density(const ComplexMatrix& rho, std::size_t m) {
  if (rho.rows() != m || rho.cols() != m) throw ContractViolation("rho0 has the wrong dimension");
  if (!is_hermitian(rho, 1e-10)) throw ContractViolation("rho0 is not Hermitian");
  Complex tr{};
  for (std::size_t i = 0; i < m; ++i) tr += rho(i, i);
  if (std::abs(tr - 1.0) > 1e-10) throw ContractViolation("rho0 does not have unit trace");
  const Spectrum s = eigendecompose(rho);
  if (s.values.front() < -1e-10) throw ContractViolation("rho0 is not positive semidefinite");
}

}  // namespace

Trajectory integrate_master(const RedfieldTensor& tensor, const ComplexMatrix& rho0,
                            const std::vector<double>& times, const OdeOptions& opts,
                            OdeStats* stats) {
  check_density(rho0, tensor.m);
  const ComplexMatrix L = tensor.generator();
  const auto states = integrate_dopri5(make_rhs(L), pack(rho0), times, opts, stats);
  Trajectory tr;
  tr.times = times;
  tr.rho.reserve(states.size());
  for (const auto& y : states) tr.rho.push_back(unpack(y, tensor.m));
  return tr;
}

ComplexMatrix redfield_steady_state(const RedfieldTensor& tensor) {
  const std::size_t m = tensor.m, m2 = m * m;
  ComplexMatrix L = tensor.generator();
  std::vector<Complex> rhs(m2, Complex{});
  // first population equation is redundant by trace conservation; swap in the trace
  for (std::size_t j = 0; j < m2; ++j) L(0, j) = 0.0;
  for (std::size_t a = 0; a < m; ++a) L(0, a * m + a) = 1.0;
  rhs[0] = 1.0;
  // Gaussian elimination with partial pivoting
  for (std::size_t col = 0; col < m2; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < m2; ++r)
      if (std::abs(L(r, col)) > std::abs(L(piv, col))) piv = r;
    if (std::abs(L(piv, col)) < 1e-300) throw NumericalError("steady state is not unique");
    if (piv != col) {
      for (std::size_t j = 0; j < m2; ++j) std::swap(L(col, j), L(piv, j));
      std::swap(rhs[col], rhs[piv]);
    }
    for (std::size_t r = col + 1; r < m2; ++r) {
      const Complex f = L(r, col) / L(col, col);
      if (f == Complex{}) continue;
      for (std::size_t j = col; j < m2; ++j) L(r, j) -= f * L(col, j);
      rhs[r] -= f * rhs[col];
    }
  }
  std::vector<Complex> x(m2);
  for (std::size_t i = m2; i-- > 0;) {
    Complex s = rhs[i];
    for (std::size_t j = i + 1; j < m2; ++j) s -= L(i, j) * x[j];
    x[i] = s / L(i, i);
  }
  ComplexMatrix rho(m, m);
  for (std::size_t i = 0; i < m2; ++i) rho.data()[i] = x[i];
  return rho;
}

ComplexMatrix integrate_to_steady(const RedfieldTensor& tensor, const ComplexMatrix& rho0,
                                  double t_rel_estimate, const OdeOptions& opts) {
  check_density(rho0, tensor.m);
  const ComplexMatrix L = tensor.generator();
  const OdeRhs f = make_rhs(L);
  std::vector<double> y = pack(rho0), dy(y.size());
  const double t_end = 20.0 * t_rel_estimate;
  integrate_dopri5_until(
      f, y, 0.0, t_end,
      [&](double t, const std::vector<double>& state) {
        f(t, state, dy);
        double nrm = 0.0;
        for (double v : dy) nrm += v * v;
        return std::sqrt(nrm) >= 1e-10;
      },
      opts);
  return unpack(y, tensor.m);
}

ComplexMatrix projected_density(const std::vector<Complex>& comp, double* defect) {
  double nrm = 0.0;
  for (const auto& c : comp) nrm += std::norm(c);
  if (!(nrm > 0.0)) throw InvalidParameter("state has no weight on the retained levels");
  if (defect) *defect = std::max(0.0, 1.0 - nrm);
  const std::size_t m = comp.size();
  ComplexMatrix rho(m, m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) rho(a, b) = comp[a] * std::conj(comp[b]) / nrm;
  return rho;
}

}  // namespace qsearch
