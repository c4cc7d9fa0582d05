#pragma once

// Complex linear algebra and polynomial primitives. Everything here is
// templated on the real scalar so the same code serves double and long double.

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "fockdens/errors.hpp"

namespace fockdens {

template <typename Real>
using Complex = std::complex<Real>;
template <typename Real>
using CVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
template <typename Real>
using CMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

using cplx = Complex<double>;
using cvec = CVector<double>;
using cmat = CMatrix<double>;

using MultiIndex = std::vector<int>;

inline int total_degree(const MultiIndex& alpha) {
  int d = 0;
  for (int a : alpha) d += a;
  return d;
}

template <typename Real>
bool all_finite(const CVector<Real>& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (!std::isfinite(v[i].real()) || !std::isfinite(v[i].imag())) return false;
  return true;
}

// ---------------------------------------------------------------------------
// HermitianForm
// ---------------------------------------------------------------------------

/// A (1,1)-form stored as its coefficient matrix H, acting on directions by
/// H(v,v) = sum_ij H_ij v_i conj(v_j). Construction symmetrizes the input.
template <typename Real>
class HermitianForm {
 public:
  using Matrix = CMatrix<Real>;
  using Vector = CVector<Real>;

  HermitianForm() = default;
  explicit HermitianForm(const Matrix& m) : m_((m + m.adjoint()) * Real(0.5)) {
    if (m.rows() != m.cols()) throw ValidationError("dimension: Hermitian form must be square");
  }

  static HermitianForm zero(int n) { return HermitianForm(Matrix::Zero(n, n)); }
  static HermitianForm identity(int n) { return HermitianForm(Matrix::Identity(n, n)); }

  /// Rank-one form a ⊗ conj(a), so that H(v,v) = |sum_i a_i v_i|^2.
  static HermitianForm outer(const Vector& a) { return HermitianForm(a * a.adjoint()); }

  int dimension() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  Complex<Real> operator()(int i, int j) const { return m_(i, j); }

  /// Real by construction; the imaginary round-off is discarded.
  Real pairing(const Vector& v) const {
    if (v.size() != m_.rows()) throw ValidationError("dimension: pairing vector length");
    const Vector x = v.conjugate();
    return (x.adjoint() * m_ * x)(0, 0).real();
  }

  Real trace() const { return m_.trace().real(); }

  Eigen::Matrix<Real, Eigen::Dynamic, 1> eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m_, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
  }
  Real min_eigenvalue() const { return eigenvalues().minCoeff(); }
  Real max_eigenvalue() const { return eigenvalues().maxCoeff(); }

  /// Form of the pulled-back direction map: (U^T H conj(U))(v,v) = H(Uv,Uv).
  HermitianForm congruence(const Matrix& u) const {
    return HermitianForm(u.transpose() * m_ * u.conjugate());
  }

  HermitianForm& operator+=(const HermitianForm& o) {
    m_ += o.m_;
    return *this;
  }
  HermitianForm& operator*=(Real s) {
    m_ *= s;
    return *this;
  }
  friend HermitianForm operator+(HermitianForm a, const HermitianForm& b) { return a += b; }
  friend HermitianForm operator-(const HermitianForm& a, const HermitianForm& b) {
    return HermitianForm(Matrix(a.m_ - b.m_));
  }
  friend HermitianForm operator*(Real s, HermitianForm a) { return a *= s; }

 private:
  Matrix m_;
};

using HForm = HermitianForm<double>;

// ---------------------------------------------------------------------------
// Generalized eigenvalues of a Hermitian pencil
// ---------------------------------------------------------------------------

template <typename Real>
struct GenEigResult {
  Real value{};
  CVector<Real> direction;  // unit vector v maximizing A(v,v)/B(v,v)
};

template <typename Real>
struct GenEigExtremes {
  Real min{};
  Real max{};
  CVector<Real> min_direction;
  CVector<Real> max_direction;
  Real condition{};  // spectral condition number of B
};

/// Extreme values of A(v,v)/B(v,v) by Cholesky whitening of B.
template <typename Real>
GenEigExtremes<Real> gen_eig_extremes(const HermitianForm<Real>& a, const HermitianForm<Real>& b,
                                      Real pd_floor = Real(1e-10)) {
  using Matrix = CMatrix<Real>;
  if (a.dimension() != b.dimension()) throw ValidationError("dimension: pencil sizes differ");
  const auto bev = b.eigenvalues();
  if (bev.size() == 0 || bev.minCoeff() <= pd_floor)
    throw NumericalError("indefinite denominator: smallest eigenvalue " +
                         std::to_string(bev.size() ? double(bev.minCoeff()) : 0.0));
  // Pairings act on x = conj(v) as x^* M x.
  Eigen::LLT<Matrix> llt(b.matrix());
  if (llt.info() != Eigen::Success) throw NumericalError("indefinite denominator");
  const Matrix l = llt.matrixL();
  const Matrix linv = l.template triangularView<Eigen::Lower>().solve(
      Matrix::Identity(a.dimension(), a.dimension()));
  Matrix c = linv * a.matrix() * linv.adjoint();
  c = (c + c.adjoint()).eval() * Real(0.5);
  Eigen::SelfAdjointEigenSolver<Matrix> es(c);
  const Eigen::Index last = c.rows() - 1;

  auto to_direction = [&](const CVector<Real>& y) {
    CVector<Real> x = linv.adjoint() * y;
    x.normalize();
    return CVector<Real>(x.conjugate());
  };
  GenEigExtremes<Real> out;
  out.min = es.eigenvalues()(0);
  out.max = es.eigenvalues()(last);
  out.min_direction = to_direction(es.eigenvectors().col(0));
  out.max_direction = to_direction(es.eigenvectors().col(last));
  out.condition = bev.maxCoeff() / bev.minCoeff();
  return out;
}

template <typename Real>
GenEigResult<Real> max_gen_eig(const HermitianForm<Real>& a, const HermitianForm<Real>& b) {
  auto ex = gen_eig_extremes(a, b);
  return {ex.max, ex.max_direction};
}

// ---------------------------------------------------------------------------
// Univariate polynomials
// ---------------------------------------------------------------------------

template <typename Real>
class UniPoly {
 public:
  UniPoly() = default;
  explicit UniPoly(std::vector<Complex<Real>> ascending) : c_(std::move(ascending)) { trim(); }

  static UniPoly from_roots(const std::vector<Complex<Real>>& roots, Complex<Real> lead = Real(1)) {
    UniPoly p({lead});
    for (const auto& r : roots) p = p * UniPoly({-r, Complex<Real>(1)});
    return p;
  }

  /// Degree; -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<Complex<Real>>& coefficients() const { return c_; }

  Complex<Real> operator()(Complex<Real> t) const {
    Complex<Real> acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * t + *it;
    return acc;
  }

  UniPoly derivative() const {
    if (c_.size() <= 1) return UniPoly();
    std::vector<Complex<Real>> d(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * Real(k);
    return UniPoly(std::move(d));
  }

  /// Largest coefficient magnitude; sets the scale for root residuals.
  Real scale() const {
    Real s = 0;
    for (const auto& c : c_) s = std::max(s, std::abs(c));
    return s;
  }

  friend UniPoly operator*(const UniPoly& a, const UniPoly& b) {
    if (a.is_zero() || b.is_zero()) return UniPoly();
    std::vector<Complex<Real>> r(a.c_.size() + b.c_.size() - 1, Complex<Real>(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    return UniPoly(std::move(r));
  }
  friend UniPoly operator+(const UniPoly& a, const UniPoly& b) {
    std::vector<Complex<Real>> r(std::max(a.c_.size(), b.c_.size()), Complex<Real>(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] += b.c_[i];
    return UniPoly(std::move(r));
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == Complex<Real>(0)) c_.pop_back();
  }
  std::vector<Complex<Real>> c_;
};

using UPoly = UniPoly<double>;

// ---------------------------------------------------------------------------
// Multivariate polynomials
// ---------------------------------------------------------------------------

/// Sparse polynomial in n complex variables. Terms are kept in lexicographic
/// multi-index order and zero coefficients are never stored.
template <typename Real>
class MultiPoly {
 public:
  using Terms = std::map<MultiIndex, Complex<Real>>;

  MultiPoly() = default;
  explicit MultiPoly(int n) : n_(n) {
    if (n < 1) throw ValidationError("dimension: polynomial needs n >= 1");
  }

  static MultiPoly constant(int n, Complex<Real> c) {
    MultiPoly p(n);
    p.add_term(MultiIndex(n, 0), c);
    return p;
  }
  /// The coordinate function z_i (0-based).
  static MultiPoly coordinate(int n, int i, Complex<Real> c = Real(1)) {
    MultiPoly p(n);
    MultiIndex a(n, 0);
    a.at(i) = 1;
    p.add_term(a, c);
    return p;
  }
  static MultiPoly monomial(const MultiIndex& alpha, Complex<Real> c = Real(1)) {
    MultiPoly p(static_cast<int>(alpha.size()));
    p.add_term(alpha, c);
    return p;
  }

  void add_term(const MultiIndex& alpha, Complex<Real> c) {
    if (static_cast<int>(alpha.size()) != n_) throw ValidationError("dimension: multi-index length");
    for (int a : alpha)
      if (a < 0) throw ValidationError("negative exponent in multi-index");
    auto [it, inserted] = terms_.try_emplace(alpha, c);
    if (!inserted) it->second += c;
    if (it->second == Complex<Real>(0)) terms_.erase(it);
  }

  int dimension() const { return n_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  int degree() const {
    int d = -1;
    for (const auto& [a, c] : terms_) d = std::max(d, total_degree(a));
    return d;
  }

  friend MultiPoly operator+(const MultiPoly& a, const MultiPoly& b) {
    check_same(a, b);
    MultiPoly r = a;
    for (const auto& [al, c] : b.terms_) r.add_term(al, c);
    return r;
  }
  friend MultiPoly operator-(const MultiPoly& a, const MultiPoly& b) {
    return a + b * Complex<Real>(-1);
  }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
    check_same(a, b);
    MultiPoly r(a.n_);
    for (const auto& [al, ca] : a.terms_)
      for (const auto& [be, cb] : b.terms_) {
        MultiIndex g(al);
        for (int i = 0; i < a.n_; ++i) g[i] += be[i];
        r.add_term(g, ca * cb);
      }
    return r;
  }
  friend MultiPoly operator*(const MultiPoly& a, Complex<Real> s) {
    MultiPoly r(a.n_);
    for (const auto& [al, c] : a.terms_) r.add_term(al, c * s);
    return r;
  }

  friend bool operator==(const MultiPoly& a, const MultiPoly& b) {
    return a.n_ == b.n_ && a.terms_ == b.terms_;
  }

 private:
  static void check_same(const MultiPoly& a, const MultiPoly& b) {
    if (a.n_ != b.n_) throw ValidationError("dimension: polynomial dimensions differ");
  }
  int n_ = 0;
  Terms terms_;
};

using MPoly = MultiPoly<double>;

template <typename Real>
struct PolyValue {
  Complex<Real> value;
  CVector<Real> gradient;
};

/// Value and holomorphic gradient (all first partials) at z.
template <typename Real>
PolyValue<Real> eval_poly(const MultiPoly<Real>& p, const CVector<Real>& z) {
  const int n = p.dimension();
  if (z.size() != n) throw ValidationError("dimension: point has length " + std::to_string(z.size()) +
                                           ", polynomial expects " + std::to_string(n));
  PolyValue<Real> out{Complex<Real>(0), CVector<Real>::Zero(n)};
  int maxdeg = std::max(p.degree(), 0);
  // powers[i][k] = z_i^k
  std::vector<std::vector<Complex<Real>>> pw(n, std::vector<Complex<Real>>(maxdeg + 1));
  for (int i = 0; i < n; ++i) {
    pw[i][0] = Real(1);
    for (int k = 1; k <= maxdeg; ++k) pw[i][k] = pw[i][k - 1] * z[i];
  }
  for (const auto& [alpha, c] : p.terms()) {
    Complex<Real> mono = c;
    for (int i = 0; i < n; ++i) mono *= pw[i][alpha[i]];
    out.value += mono;
    for (int j = 0; j < n; ++j) {
      if (alpha[j] == 0) continue;
      Complex<Real> d = c * Real(alpha[j]);
      for (int i = 0; i < n; ++i) d *= (i == j) ? pw[i][alpha[i] - 1] : pw[i][alpha[i]];
      out.gradient[j] += d;
    }
  }
  return out;
}

/// q(t) = p(a + t v).
template <typename Real>
UniPoly<Real> restrict_to_line(const MultiPoly<Real>& p, const CVector<Real>& a,
                               const CVector<Real>& v) {
  const int n = p.dimension();
  if (a.size() != n || v.size() != n) throw ValidationError("dimension: line and polynomial differ");
  if (v.norm() == Real(0)) throw ValidationError("degenerate direction: v = 0");
  const int maxdeg = std::max(p.degree(), 0);
  // lin_pow[i][k] = (a_i + t v_i)^k
  std::vector<std::vector<UniPoly<Real>>> lp(n, std::vector<UniPoly<Real>>(maxdeg + 1));
  for (int i = 0; i < n; ++i) {
    lp[i][0] = UniPoly<Real>({Complex<Real>(1)});
    const UniPoly<Real> lin({a[i], v[i]});
    for (int k = 1; k <= maxdeg; ++k) lp[i][k] = lp[i][k - 1] * lin;
  }
  UniPoly<Real> q;
  for (const auto& [alpha, c] : p.terms()) {
    UniPoly<Real> term({c});
    for (int i = 0; i < n; ++i)
      if (alpha[i] > 0) term = term * lp[i][alpha[i]];
    q = q + term;
  }
  return q;
}

/// The polynomial z ↦ p(M z).
template <typename Real>
MultiPoly<Real> compose_linear(const MultiPoly<Real>& p, const CMatrix<Real>& m) {
  const int n = p.dimension();
  if (m.rows() != n || m.cols() != n) throw ValidationError("dimension: substitution matrix");
  std::vector<MultiPoly<Real>> rows;
  for (int i = 0; i < n; ++i) {
    MultiPoly<Real> li(n);
    for (int j = 0; j < n; ++j) li = li + MultiPoly<Real>::coordinate(n, j, m(i, j));
    rows.push_back(li);
  }
  MultiPoly<Real> out(n);
  for (const auto& [alpha, c] : p.terms()) {
    MultiPoly<Real> term = MultiPoly<Real>::constant(n, c);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < alpha[i]; ++k) term = term * rows[i];
    out = out + term;
  }
  return out;
}

}  // namespace fockdens
