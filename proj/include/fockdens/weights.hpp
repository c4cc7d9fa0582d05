#pragma once

#include <vector>

#include "fockdens/algebra.hpp"

namespace fockdens {

enum class WeightKind { euclidean, quadratic };

/// Plurisubharmonic weight phi(z) = Q(z,z) + 2 Re h(z) with Q positive definite
/// and h a holomorphic polynomial (so 2 Re h is pluriharmonic). The euclidean
/// kind is phi(z) = |z|^2.
class Weight {
 public:
  static Weight euclidean(int n);
  /// Throws ValidationError naming "weight.Q" when Q is not positive definite.
  static Weight quadratic(const HForm& q, const MPoly& h);
  static Weight quadratic(const HForm& q) { return quadratic(q, MPoly(q.dimension())); }

  WeightKind kind() const { return kind_; }
  int dimension() const { return q_.dimension(); }
  const HForm& levi() const { return q_; }
  const MPoly& pluriharmonic() const { return h_; }

  double operator()(const cvec& z) const;
  /// Holomorphic gradient d(phi)/dz_i.
  cvec gradient(const cvec& z) const;

  /// The weight z ↦ phi(U z).
  Weight pulled_back(const cmat& u) const;
  /// Same Levi part with a different pluriharmonic part.
  Weight with_pluriharmonic(const MPoly& h) const;

 private:
  Weight(WeightKind k, HForm q, MPoly h) : kind_(k), q_(std::move(q)), h_(std::move(h)) {}
  WeightKind kind_ = WeightKind::euclidean;
  HForm q_;
  MPoly h_;
};

struct ComparabilityReport {
  double c_lower = 0.0;
  double c_upper = 0.0;
  int sample_count = 0;
};

/// Matrix of d^2 phi / dz_i d conj(z_j); constant for this weight family.
HForm levi_form(const Weight& w, const cvec& z);

/// Mean of |x_1|^2 over the ball B(0,r) in C^n with Lebesgue measure: r^2/(n+1).
double ball_mean_coordinate_square(int n, double r);

/// Mean of phi over B(z,r): phi(z) + trace(Q) * r^2/(n+1).
double ball_average_phi(const Weight& w, const cvec& z, double r);

/// Extreme Levi eigenvalues over the sampled region (constants C, C').
ComparabilityReport comparability_bounds(const Weight& w, const std::vector<cvec>& region);

}  // namespace fockdens
