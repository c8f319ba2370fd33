#include "qsearch/coupling.hpp"

#include <cmath>
#include <string>

#include "qsearch/errors.hpp"

namespace qsearch {

double CouplingCoefficients::site_count() const {
  double s = 0.0;
  for (const auto& c : sites) s += c.weight;
  return s;
}

CouplingCoefficients make_coupling(std::size_t m, std::vector<SiteClass> sites) {
  CouplingCoefficients cc;
  cc.m = m;
  cc.sites = std::move(sites);
  cc.lambda = RealMatrix(m, m);
  for (const auto& s : cc.sites) {
    if (s.c.size() != m) throw ContractViolation("site class has the wrong number of levels");
    for (std::size_t k = 0; k < m; ++k) {
      const double pk = std::norm(s.c[k]);
      if (pk == 0.0) continue;
      for (std::size_t l = 0; l < m; ++l) cc.lambda(k, l) += s.weight * pk * std::norm(s.c[l]);
    }
  }
  if (m >= 2) {
    for (std::size_t i = 0; i < cc.sites.size(); ++i) {
      const double wgt = cc.sites[i].weight;
      const Complex a12 = cc.a(i, 0, 1);
      const double d = std::real(cc.a(i, 0, 0) - cc.a(i, 1, 1));
      cc.a12.push_back(a12);
      cc.o1 += wgt * std::norm(a12);
      cc.o2 += wgt * a12.real() * d;
      cc.o3 += wgt * d * d;
    }
  }
  return cc;
}

CouplingCoefficients coupling_coefficients(const TwoLevelSystem& tl) {
  const double rest = std::sqrt(static_cast<double>(tl.n) - 1.0);
  // a node i != w overlaps the reduced space only through |s_wbar>, <s_wbar|i> = 1/sqrt(n-1)
  std::vector<SiteClass> sites(2);
  sites[0].weight = 1.0;
  sites[1].weight = static_cast<double>(tl.n) - 1.0;
  for (std::size_t k = 0; k < 2; ++k) {
    sites[0].c.emplace_back(tl.w_overlap(k));
    sites[1].c.emplace_back(tl.sbar_overlap(k) / rest);
  }
  return make_coupling(2, std::move(sites));
}

CouplingCoefficients coupling_coefficients(const Spectrum& spectrum, std::size_t retained) {
  const std::size_t n = spectrum.size();
  if (retained != 2 && retained != n)
    throw InvalidParameter("retained levels must be 2 or n (got " + std::to_string(retained) + ")");
  if (n < retained || spectrum.vectors.rows() != n)
    throw InvalidParameter("spectrum has no eigenvector data for the requested levels");
  std::vector<SiteClass> sites(n);
  for (std::size_t i = 0; i < n; ++i) {
    sites[i].c.resize(retained);
    for (std::size_t k = 0; k < retained; ++k) sites[i].c[k] = std::conj(spectrum.vectors(i, k));
  }
  return make_coupling(retained, std::move(sites));
}

}  // namespace qsearch
