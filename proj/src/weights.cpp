#include "fockdens/weights.hpp"

#include <algorithm>
#include <limits>

namespace fockdens {

Weight Weight::euclidean(int n) {
  if (n < 1) throw ValidationError("dimension: weight needs n >= 1");
  return Weight(WeightKind::euclidean, HForm::identity(n), MPoly(n));
}

Weight Weight::quadratic(const HForm& q, const MPoly& h) {
  if (q.dimension() < 1) throw ValidationError("weight.Q: empty matrix");
  if (h.dimension() != q.dimension())
    throw ValidationError("weight.h: dimension " + std::to_string(h.dimension()) +
                          " does not match weight.Q dimension " + std::to_string(q.dimension()));
  if (!(q.min_eigenvalue() > 1e-10)) throw ValidationError("weight.Q: not positive definite");
  return Weight(WeightKind::quadratic, q, h);
}

double Weight::operator()(const cvec& z) const {
  double v = q_.pairing(z);
  if (!h_.is_zero()) v += 2.0 * eval_poly(h_, z).value.real();
  return v;
}

cvec Weight::gradient(const cvec& z) const {
  if (z.size() != dimension()) throw ValidationError("dimension: weight gradient");
  // d/dz_i sum_kl Q_kl z_k conj(z_l) = sum_l Q_il conj(z_l)
  cvec g = q_.matrix() * z.conjugate();
  if (!h_.is_zero()) g += eval_poly(h_, z).gradient;
  return g;
}

Weight Weight::pulled_back(const cmat& u) const {
  const HForm q = q_.congruence(u);
  const MPoly h = h_.is_zero() ? h_ : compose_linear(h_, u);
  return Weight(WeightKind::quadratic, q, h);
}

Weight Weight::with_pluriharmonic(const MPoly& h) const { return quadratic(q_, h); }

HForm levi_form(const Weight& w, const cvec& z) {
  if (z.size() != w.dimension()) throw ValidationError("dimension: levi_form point");
  return w.levi();
}

double ball_mean_coordinate_square(int n, double r) { return r * r / (n + 1.0); }

double ball_average_phi(const Weight& w, const cvec& z, double r) {
  if (!(r > 0.0)) throw ValidationError("ball_average_phi: radius must be positive");
  // Cross terms average to zero by symmetry; 2 Re h is harmonic.
  return w(z) + w.levi().trace() * ball_mean_coordinate_square(w.dimension(), r);
}

ComparabilityReport comparability_bounds(const Weight& w, const std::vector<cvec>& region) {
  if (region.empty()) throw ValidationError("comparability_bounds: empty region");
  ComparabilityReport rep;
  rep.c_lower = std::numeric_limits<double>::infinity();
  rep.c_upper = 0.0;
  for (const auto& z : region) {
    const auto ev = levi_form(w, z).eigenvalues();
    rep.c_lower = std::min(rep.c_lower, ev.minCoeff());
    rep.c_upper = std::max(rep.c_upper, ev.maxCoeff());
    ++rep.sample_count;
  }
  return rep;
}

}  // namespace fockdens
