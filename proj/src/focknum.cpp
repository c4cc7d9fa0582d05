#include "fockdens/focknum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "fockdens/errors.hpp"
#include "fockdens/parallel.hpp"

namespace fockdens {

namespace {

void enumerate(int n, int degree, MultiIndex& cur, int pos, int left, std::vector<MultiIndex>& out) {
  if (pos == n - 1) {
    cur[pos] = left;
    out.push_back(cur);
    return;
  }
  for (int a = left; a >= 0; --a) {
    cur[pos] = a;
    enumerate(n, degree, cur, pos + 1, left - a, out);
  }
}

bool is_diagonal(const cmat& m) {
  const double scale = m.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (i != j && std::abs(m(i, j)) > 1e-14 * scale) return false;
  return true;
}

/// P(S_j + ... + S_{n-1} < t) with S_k ~ Gamma(shape_k, rate_k) independent.
double prob_sum_below(const std::vector<double>& shape, const std::vector<double>& rate, std::size_t j,
                      double t) {
  if (t <= 0.0) return 0.0;
  if (j + 1 == shape.size()) return boost::math::gamma_p(shape[j], rate[j] * t);
  constexpr int kPanels = 24;
  double total = 0.0;
  const double h = t / kPanels;
  for (int p = 0; p < kPanels; ++p) {
    total += boost::math::quadrature::gauss<double, 20>::integrate(
        [&](double s) {
          const double f = rate[j] * boost::math::gamma_p_derivative(shape[j], rate[j] * s);
          return f * prob_sum_below(shape, rate, j + 1, t - s);
        },
        p * h, (p + 1) * h);
  }
  return std::min(1.0, total);
}

cmat gram_rows(const FockBasis& b, const std::vector<cvec>& points, const std::vector<double>& weights) {
  cmat m(points.size(), b.size());
  parallel_for(static_cast<int>(points.size()), [&](int s) {
    m.row(s) = std::sqrt(weights[s]) * b.weighted_values(points[s]).transpose();
  });
  return m;
}

SamplingRatioReport pencil_report(const FockBasis& basis, const cmat& rows, double radius,
                                  double max_leak, int count) {
  SamplingRatioReport rep;
  rep.window_radius = radius;
  rep.degree = basis.degree();
  rep.target_count = count;
  rep.leak = basis.leak(radius);
  if (rep.leak > max_leak)
    throw ValidationError("truncation: top-degree mass outside the window is " +
                          std::to_string(rep.leak) + " > " + std::to_string(max_leak) +
                          "; enlarge the window or lower the degree");
  const int k = basis.size();
  cmat bmat = cmat::Zero(k, k);
  for (int i = 0; i < k; ++i) bmat(i, i) = basis.ball_mass(i, radius);
  const double bmin = bmat.diagonal().real().minCoeff();
  if (!(bmin > 1e-12)) throw NumericalError("window/degree mismatch");
  const cmat a = rows.rows() ? cmat(rows.transpose() * rows.conjugate()) : cmat::Zero(k, k);
  const auto ex = gen_eig_extremes(HForm(a), HForm(bmat), 0.0);
  rep.lower = std::max(0.0, ex.min);
  rep.upper = std::max(rep.lower, ex.max);
  rep.conditioning = ex.condition;
  return rep;
}

}  // namespace

FockBasis::FockBasis(const Weight& w, int degree) : n_(w.dimension()), degree_(degree), weight_(w) {
  if (degree < 0) throw ValidationError("degree must be non-negative");
  const cmat q = w.levi().matrix();
  if (is_diagonal(q)) {
    v_ = cmat::Identity(n_, n_);
    lambda_ = q.diagonal().real();
  } else {
    // Q(z,z) = z^T Q conj(z) = Σ λ_k |(E^T z)_k|^2.
    Eigen::SelfAdjointEigenSolver<cmat> es(q);
    v_ = es.eigenvectors();
    lambda_ = es.eigenvalues();
  }
  MultiIndex cur(n_, 0);
  for (int d = 0; d <= degree; ++d) enumerate(n_, d, cur, 0, d, indices_);
  for (const auto& a : indices_) {
    double s = 0.0;
    for (int k = 0; k < n_; ++k)
      s += std::log(std::numbers::pi) + std::lgamma(a[k] + 1.0) - (a[k] + 1.0) * std::log(2.0 * lambda_[k]);
    log_norm2_.push_back(s);
  }
}

int FockBasis::index_of(const MultiIndex& alpha) const {
  const auto it = std::find(indices_.begin(), indices_.end(), alpha);
  return it == indices_.end() ? -1 : static_cast<int>(it - indices_.begin());
}

namespace {

/// w^α / sqrt(norm2) · exp(shift) for every α, computed as modulus and phase.
cvec monomials(const FockBasis& b, const cvec& z, double shift, double phase) {
  const cvec w = b.coordinates(z);
  const int n = b.dimension();
  std::vector<double> logabs(n);
  std::vector<cplx> unit(n);
  for (int k = 0; k < n; ++k) {
    const double a = std::abs(w[k]);
    logabs[k] = a > 0.0 ? std::log(a) : -std::numeric_limits<double>::infinity();
    unit[k] = a > 0.0 ? w[k] / a : cplx(1.0);
  }
  cvec out(b.size());
  for (int i = 0; i < b.size(); ++i) {
    const auto& al = b.indices()[i];
    double l = shift - 0.5 * b.log_norm2(i);
    cplx ph = std::polar(1.0, phase);
    bool zero = false;
    for (int k = 0; k < n; ++k) {
      if (al[k] == 0) continue;
      if (!std::isfinite(logabs[k])) {
        zero = true;
        break;
      }
      l += al[k] * logabs[k];
      ph *= std::pow(unit[k], al[k]);
    }
    out[i] = zero ? cplx(0.0) : std::exp(l) * ph;
  }
  return out;
}

}  // namespace

cvec FockBasis::values(const cvec& z) const {
  if (z.size() != n_) throw ValidationError("dimension: basis evaluation point");
  const MPoly& h = weight_.pluriharmonic();
  const cplx hz = h.is_zero() ? cplx(0.0) : eval_poly(h, z).value;
  return monomials(*this, z, 2.0 * hz.real(), 2.0 * hz.imag());
}

cvec FockBasis::weighted_values(const cvec& z) const {
  if (z.size() != n_) throw ValidationError("dimension: basis evaluation point");
  const MPoly& h = weight_.pluriharmonic();
  const cplx hz = h.is_zero() ? cplx(0.0) : eval_poly(h, z).value;
  const cvec w = coordinates(z);
  double phi_q = 0.0;
  for (int k = 0; k < n_; ++k) phi_q += lambda_[k] * std::norm(w[k]);
  // e^{2h - φ} = e^{-φ_q} e^{2i Im h}.
  return monomials(*this, z, -phi_q, 2.0 * hz.imag());
}

double FockBasis::ball_mass(int k, double radius) const {
  const auto& al = indices_[k];
  const double t = radius * radius;
  const bool equal = (lambda_.maxCoeff() - lambda_.minCoeff()) <= 1e-12 * lambda_.maxCoeff();
  if (equal) return boost::math::gamma_p(total_degree(al) + n_, 2.0 * lambda_[0] * t);
  std::vector<double> shape(n_), rate(n_);
  for (int i = 0; i < n_; ++i) {
    shape[i] = al[i] + 1.0;
    rate[i] = 2.0 * lambda_[i];
  }
  return prob_sum_below(shape, rate, 0, t);
}

double FockBasis::leak(double radius) const {
  double worst = 0.0;
  for (int k = 0; k < size(); ++k)
    if (total_degree(indices_[k]) == degree_) worst = std::max(worst, 1.0 - ball_mass(k, radius));
  return worst;
}

FockBasis build_basis(const Weight& w, int degree) {
  if (w.kind() != WeightKind::quadratic && w.kind() != WeightKind::euclidean)
    throw ValidationError("basis requires quadratic weight");
  return FockBasis(w, degree);
}

cplx kernel_eval(const FockBasis& b, const cvec& z, const cvec& zeta) {
  return b.values(z).cwiseProduct(b.values(zeta).conjugate()).sum();
}

SamplingRatioReport sampling_ratio_bounds(const Hypersurface& h, const Weight& w, double radius,
                                          int degree, int budget, std::uint64_t seed, double max_leak) {
  if (h.dimension() != w.dimension()) throw ValidationError("dimension: weight and hypersurface differ");
  if (!(radius > 0.0)) throw ValidationError("window radius must be positive");
  const FockBasis basis = build_basis(w, degree);
  const auto set = sample_surface_in_ball(h, cvec::Zero(h.dimension()), radius, budget, seed);
  std::vector<cvec> pts;
  std::vector<double> wts;
  for (const auto& s : set.samples) {
    pts.push_back(s.point);
    wts.push_back(s.area_weight);
  }
  return pencil_report(basis, gram_rows(basis, pts, wts), radius, max_leak,
                       static_cast<int>(pts.size()));
}

SamplingRatioReport sampling_ratio_bounds(const std::vector<cvec>& points, const Weight& w,
                                          double radius, int degree, double max_leak) {
  if (!(radius > 0.0)) throw ValidationError("window radius must be positive");
  const FockBasis basis = build_basis(w, degree);
  std::vector<cvec> pts;
  for (const auto& p : points) {
    if (p.size() != w.dimension()) throw ValidationError("dimension: sequence point");
    if (p.norm() < radius) pts.push_back(p);
  }
  const std::vector<double> wts(pts.size(), 1.0);
  return pencil_report(basis, gram_rows(basis, pts, wts), radius, max_leak,
                       static_cast<int>(pts.size()));
}

SamplingRatioReport sampling_ratio_ambient(const Weight& w, double radius, int degree, double max_leak) {
  const FockBasis basis = build_basis(w, degree);
  const int k = basis.size();
  cmat rows = cmat::Zero(k, k);
  for (int i = 0; i < k; ++i) rows(i, i) = std::sqrt(basis.ball_mass(i, radius));
  return pencil_report(basis, rows, radius, max_leak, 0);
}

ExtensionResult min_norm_extension(const std::vector<ValueSample>& samples, const Weight& w, int degree,
                                   double lambda) {
  if (!(lambda >= 0.0)) throw ValidationError("regularization must be non-negative");
  const FockBasis basis = build_basis(w, degree);
  const int k = basis.size();
  const int m = static_cast<int>(samples.size());
  if (lambda == 0.0 && m < k) throw ValidationError("regularize or reduce degree");

  cmat rows(m, k);
  cvec y(m);
  parallel_for(m, [&](int s) {
    const auto& vs = samples[s];
    if (vs.point.size() != w.dimension()) throw ValidationError("dimension: extension sample");
    const double sw = std::sqrt(vs.area_weight);
    rows.row(s) = sw * basis.weighted_values(vs.point).transpose();
    y[s] = sw * vs.value * std::exp(-w(vs.point));
  });

  ExtensionResult out;
  out.indices = basis.indices();
  out.surface_norm2 = y.squaredNorm();
  if (out.surface_norm2 == 0.0) {
    out.coefficients = cvec::Zero(k);
    return out;
  }
  if (lambda > 0.0) {
    const cmat normal = rows.adjoint() * rows + lambda * cmat::Identity(k, k);
    out.coefficients = normal.ldlt().solve(rows.adjoint() * y);
  } else {
    Eigen::CompleteOrthogonalDecomposition<cmat> cod;
    cod.setThreshold(1e-9);
    cod.compute(rows);
    out.coefficients = cod.solve(y);
  }
  out.residual = (rows * out.coefficients - y).norm() / std::sqrt(out.surface_norm2);
  out.ambient_norm2 = out.coefficients.squaredNorm();
  out.ratio = out.ambient_norm2 / out.surface_norm2;
  return out;
}

std::vector<ValueSample> value_samples(const SurfaceSampleSet& set,
                                       const std::function<cplx(const cvec&)>& f) {
  std::vector<ValueSample> out;
  out.reserve(set.samples.size());
  for (const auto& s : set.samples) out.push_back({s.point, s.area_weight, f(s.point)});
  return out;
}

JensenReport jensen_ratio(const std::vector<cplx>& zeros, const Weight& w, double radius) {
  if (w.dimension() != 1) throw ValidationError("jensen_ratio: weight must be one-dimensional");
  if (!(radius > 1.0)) throw ValidationError("jensen_ratio: R must exceed 1");
  JensenReport rep;
  rep.radius = radius;
  for (const auto& g : zeros) {
    const double a = std::abs(g);
    if (a == 0.0) throw ValidationError("jensen_ratio: zero at the origin");
    if (a < radius) rep.lhs += std::log(radius / std::max(1.0, a));
  }
  // Δφ = 4q, so ∫_{D(0,s)} Δφ = 4πq s^2 and the outer integral gives 2πq R^2.
  const double q = w.levi().matrix()(0, 0).real();
  rep.rhs = 2.0 * std::numbers::pi * q * radius * radius;
  rep.ratio = rep.lhs / rep.rhs;
  return rep;
}

JensenIdentity jensen_identity(const UPoly& f, double radius, int nodes) {
  if (f.degree() < 0) throw ValidationError("zero polynomial");
  if (!(radius > 0.0)) throw ValidationError("jensen_identity: radius must be positive");
  const cplx f0 = f(cplx(0.0));
  if (f0 == cplx(0.0)) throw ValidationError("jensen_identity: f(0) = 0");
  JensenIdentity out;
  for (const auto& r : poly_roots(f)) {
    const double a = std::abs(r.value);
    if (a < radius) out.zero_sum += r.multiplicity * std::log(radius / a);
  }
  double s = 0.0;
  for (int k = 0; k < nodes; ++k)
    s += std::log(std::abs(f(std::polar(radius, 2.0 * std::numbers::pi * k / nodes))));
  out.boundary_mean = s / nodes - std::log(std::abs(f0));
  return out;
}

double local_point_ratio(const FockBasis& b, const cvec& coefficients, const cvec& z,
                         const SurfaceSampleSet& near) {
  const double at = std::norm(b.weighted_values(z).cwiseProduct(coefficients).sum());
  double num = 0.0, area = 0.0;
  for (const auto& s : near.samples) {
    num += s.area_weight * std::norm(b.weighted_values(s.point).cwiseProduct(coefficients).sum());
    area += s.area_weight;
  }
  if (area <= 0.0) throw ValidationError("local_point_ratio: no samples near the point");
  return at / (num / area);
}

}  // namespace fockdens
