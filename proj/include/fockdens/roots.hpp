#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "fockdens/algebra.hpp"

namespace fockdens {

template <typename Real>
struct PolyRoot {
  Complex<Real> value;
  int multiplicity = 1;
};

namespace detail {

template <typename Real>
std::vector<Complex<Real>> raw_roots(const std::vector<Complex<Real>>& c) {
  const int deg = static_cast<int>(c.size()) - 1;
  std::vector<Complex<Real>> out;
  if (deg == 1) {
    out.push_back(-c[0] / c[1]);
  } else if (deg == 2) {
    // Cancellation-free quadratic formula.
    const Complex<Real> a = c[2], b = c[1], cc = c[0];
    Complex<Real> disc = std::sqrt(b * b - Real(4) * a * cc);
    if (std::real(std::conj(b) * disc) < Real(0)) disc = -disc;
    const Complex<Real> q = Real(-0.5) * (b + disc);
    if (q == Complex<Real>(0)) {
      out.assign(2, Complex<Real>(0));
    } else {
      out.push_back(q / a);
      out.push_back(cc / q);
    }
  } else if (deg > 2) {
    CMatrix<Real> comp = CMatrix<Real>::Zero(deg, deg);
    for (int k = 0; k < deg; ++k) comp(0, k) = -c[deg - 1 - k] / c[deg];
    for (int k = 1; k < deg; ++k) comp(k, k - 1) = Real(1);
    Eigen::ComplexEigenSolver<CMatrix<Real>> es(comp, false);
    for (int k = 0; k < deg; ++k) out.push_back(es.eigenvalues()(k));
  }
  return out;
}

}  // namespace detail

/// All roots of q with multiplicities. Companion-matrix eigenvalues are
/// polished by Newton steps on q and then grouped: roots closer than
/// cluster_radius * (1 + |root|) form one root whose multiplicity is the
/// cluster size.
template <typename Real>
std::vector<PolyRoot<Real>> poly_roots(const UniPoly<Real>& q, Real cluster_radius = Real(1e-6)) {
  if (q.is_zero()) throw ValidationError("zero polynomial: no isolated roots");
  // Leading coefficients negligible against the scale are treated as a degree drop;
  // the corresponding roots lie beyond any ball of interest.
  std::vector<Complex<Real>> c = q.coefficients();
  const Real s = q.scale();
  while (c.size() > 1 && std::abs(c.back()) <= std::numeric_limits<Real>::epsilon() * s * Real(1e-2))
    c.pop_back();
  const UniPoly<Real> work(c);
  auto raw = detail::raw_roots(c);

  const UniPoly<Real> dq = work.derivative();
  for (auto& r : raw) {
    for (int it = 0; it < 4; ++it) {
      const Complex<Real> f = work(r);
      const Complex<Real> df = dq(r);
      if (df == Complex<Real>(0)) break;
      const Complex<Real> next = r - f / df;
      if (!(std::abs(work(next)) < std::abs(f))) break;
      r = next;
    }
  }

  std::vector<PolyRoot<Real>> out;
  std::vector<bool> used(raw.size(), false);
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (used[i]) continue;
    Complex<Real> sum = raw[i];
    int m = 1;
    used[i] = true;
    for (std::size_t j = i + 1; j < raw.size(); ++j) {
      if (used[j]) continue;
      if (std::abs(raw[j] - raw[i]) <= cluster_radius * (Real(1) + std::abs(raw[i]))) {
        used[j] = true;
        sum += raw[j];
        ++m;
      }
    }
    out.push_back({sum / Real(m), m});
  }
  std::sort(out.begin(), out.end(), [](const PolyRoot<Real>& a, const PolyRoot<Real>& b) {
    if (a.value.real() != b.value.real()) return a.value.real() < b.value.real();
    return a.value.imag() < b.value.imag();
  });
  return out;
}

}  // namespace fockdens
