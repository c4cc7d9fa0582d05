#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "fockdens/algebra.hpp"
#include "fockdens/hypersurface.hpp"
#include "fockdens/weights.hpp"

namespace fockdens {

/// Orthonormal basis of the polynomials of degree ≤ N in L^2(e^{-2φ} dV) for a
/// quadratic weight φ = Q(z,z) + 2 Re h. With Q = V Λ V^* and w = V^T z,
///   e_α(z) = w^α e^{2h(z)} / sqrt(norm2_α),  norm2_α = Π_k π α_k! / (2λ_k)^{α_k+1}.
class FockBasis {
 public:
  FockBasis(const Weight& w, int degree);

  int dimension() const { return n_; }
  int degree() const { return degree_; }
  int size() const { return static_cast<int>(indices_.size()); }
  const Weight& weight() const { return weight_; }
  /// Multi-indices in the diagonal coordinates w, ordered by degree then lexicographically.
  const std::vector<MultiIndex>& indices() const { return indices_; }
  int index_of(const MultiIndex& alpha) const;
  /// Unitary V with Q = V diag(λ) V^*; identity when Q is already diagonal.
  const cmat& frame() const { return v_; }
  const Eigen::VectorXd& eigenvalues() const { return lambda_; }

  /// ∫ |w^α|^2 e^{-2 Σ λ_k |w_k|^2} dV.
  double norm2(int k) const { return std::exp(log_norm2_[k]); }
  double log_norm2(int k) const { return log_norm2_[k]; }

  cvec coordinates(const cvec& z) const { return v_.transpose() * z; }
  /// (e_α(z))_α.
  cvec values(const cvec& z) const;
  /// (e_α(z) e^{-φ(z)})_α, evaluated in log space.
  cvec weighted_values(const cvec& z) const;

  /// ∫_{B(0,R)} |e_α|^2 e^{-2φ}: the diagonal of the ball Gram (off-diagonal terms vanish).
  double ball_mass(int k, double radius) const;
  /// Largest mass of a top-degree basis element outside B(0,R).
  double leak(double radius) const;

 private:
  int n_ = 0;
  int degree_ = 0;
  Weight weight_;
  cmat v_;
  Eigen::VectorXd lambda_;
  std::vector<MultiIndex> indices_;
  std::vector<double> log_norm2_;
};

FockBasis build_basis(const Weight& w, int degree);

/// K_N(z,ζ) = Σ_α e_α(z) conj(e_α(ζ)).
cplx kernel_eval(const FockBasis& b, const cvec& z, const cvec& zeta);

struct SamplingRatioReport {
  double lower = 0.0;
  double upper = 0.0;
  double window_radius = 0.0;
  int degree = 0;
  double conditioning = 0.0;
  double leak = 0.0;
  int target_count = 0;  // surface samples or sequence points inside the window
};

inline constexpr double kDefaultMaxLeak = 1e-6;

/// Extreme generalized eigenvalues of (A, B): A from ∫_{W∩B(0,R)} |F|^2 e^{-2φ},
/// B from ∫_{B(0,R)} |F|^2 e^{-2φ}, over polynomials of degree ≤ N.
SamplingRatioReport sampling_ratio_bounds(const Hypersurface& h, const Weight& w, double radius,
                                          int degree, int budget, std::uint64_t seed,
                                          double max_leak = kDefaultMaxLeak);
/// Sequence target: A = Σ_{γ ∈ B(0,R)} |F(γ)|^2 e^{-2φ(γ)}.
SamplingRatioReport sampling_ratio_bounds(const std::vector<cvec>& points, const Weight& w,
                                          double radius, int degree,
                                          double max_leak = kDefaultMaxLeak);
/// Target = the ball itself (A = B).
SamplingRatioReport sampling_ratio_ambient(const Weight& w, double radius, int degree,
                                           double max_leak = kDefaultMaxLeak);

struct ValueSample {
  cvec point;
  double area_weight = 0.0;
  cplx value;
};

struct ExtensionResult {
  std::vector<MultiIndex> indices;
  cvec coefficients;      // in the orthonormal basis e_α
  double residual = 0.0;  // relative weighted misfit
  double ambient_norm2 = 0.0;
  double surface_norm2 = 0.0;
  double ratio = 0.0;  // ambient_norm2 / surface_norm2
};

/// Minimum-norm F of degree ≤ N fitting F = f on the samples in weighted least squares;
/// ridge-regularized when lambda > 0.
ExtensionResult min_norm_extension(const std::vector<ValueSample>& samples, const Weight& w, int degree,
                                   double lambda);

std::vector<ValueSample> value_samples(const SurfaceSampleSet& set,
                                       const std::function<cplx(const cvec&)>& f);

struct JensenReport {
  double radius = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
};

/// lhs = ∫_1^R n(0,s)/s ds, rhs = ∫_0^R (∫_{D(0,s)} Δφ)/s ds with the real Laplacian.
JensenReport jensen_ratio(const std::vector<cplx>& zeros, const Weight& w, double radius);

struct JensenIdentity {
  double zero_sum = 0.0;       // Σ_{|γ|<R} log(R/|γ|)
  double boundary_mean = 0.0;  // (1/2π)∫ log|f(Re^{iθ})| dθ - log|f(0)|
};

/// Both sides of Jensen's formula for f = c Π (z - γ_k), trapezoidal on the circle.
JensenIdentity jensen_identity(const UPoly& f, double radius, int nodes = 4096);

/// |F(z)|^2 e^{-2φ(z)} over the area-weighted mean of |F|^2 e^{-2φ} on the samples.
double local_point_ratio(const FockBasis& b, const cvec& coefficients, const cvec& z,
                         const SurfaceSampleSet& near);

}  // namespace fockdens
