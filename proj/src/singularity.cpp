#include "fockdens/singularity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "fockdens/errors.hpp"
#include "fockdens/parallel.hpp"
#include "fockdens/random.hpp"

namespace fockdens {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kOnSurface = 1e-10;
constexpr int kBatches = 32;
constexpr int kInnerDirections = 16;

/// ∫_B |x-ζ|^{2-d} dx along one direction u: (s_out^2 - s_in^2)/2.
double radial_piece(const cvec& offset, const cvec& u, double r) {
  const double b = u.dot(offset).real();  // Re<ζ - z, u>
  const double c = offset.squaredNorm() - r * r;
  const double disc = b * b - c;
  if (disc <= 0.0) return 0.0;
  const double root = std::sqrt(disc);
  const double hi = -b + root;
  if (hi <= 0.0) return 0.0;
  const double lo = std::max(0.0, -b - root);
  return 0.5 * (hi * hi - lo * lo);
}

/// Upper bound on -mean G over the ball, from splitting the integral at |x-ζ| = 1.
double guard_cap(int n, double r) {
  const int d = 2 * n;
  return newton_constant(n) * (0.5 * sphere_area(d) * (r + 1) * (r + 1) + ball_volume(d, r + 1)) /
         ball_volume(d, r);
}

double factorial(int k) { return std::tgamma(k + 1.0); }

}  // namespace

double newton_constant(int n) {
  if (n < 2) throw ValidationError("Newton potential undefined for n=1");
  return 1.0 / (std::pow(std::numbers::pi, n) * std::pow(2.0, n) * (n - 1));
}

double newton_potential(const cvec& z, const cvec& zeta) {
  const int n = static_cast<int>(z.size());
  if (n < 2) throw ValidationError("Newton potential undefined for n=1");
  if (zeta.size() != n) throw ValidationError("dimension: Newton potential arguments");
  const double d = (z - zeta).norm();
  if (d == 0.0) return kNegInf;
  return -newton_constant(n) * std::pow(d, 2.0 - 2.0 * n);
}

Estimate ball_mean_newton(const cvec& z, const cvec& zeta, double r, int directions,
                          std::uint64_t seed) {
  const int n = static_cast<int>(z.size());
  const int d = 2 * n;
  const double c = newton_constant(n);
  Rng rng(seed);
  const cvec offset = zeta - z;
  const int pairs = std::max(1, directions / 2);
  double sum = 0.0, sum2 = 0.0;
  for (int k = 0; k < pairs; ++k) {
    const cvec u = random_unit_vector(rng, n);
    const double v = 0.5 * (radial_piece(offset, u, r) + radial_piece(offset, -u, r));
    sum += v;
    sum2 += v * v;
  }
  const double mean = sum / pairs;
  const double var = pairs > 1 ? std::max(0.0, (sum2 - pairs * mean * mean) / (pairs - 1)) : 0.0;
  const double scale = -c * sphere_area(d) / ball_volume(d, r);
  Estimate e{scale * mean, std::abs(scale) * std::sqrt(var / pairs)};
  if (-e.value > guard_cap(n, r) * (1.0 + 1e-12)) throw NumericalError("quadrature guard");
  return e;
}

Estimate gamma_r(const cvec& z, const cvec& zeta, double r, int budget, std::uint64_t seed) {
  if (!(r > 0.0)) throw ValidationError("gamma_r: radius must be positive");
  const double g = newton_potential(z, zeta);
  if (g == kNegInf) return {kNegInf, 0.0};
  const auto m = ball_mean_newton(z, zeta, r, std::max(2, budget), seed);
  return {g - m.value, m.std_error};
}

const char* route_name(SingularityRoute r) { return r == SingularityRoute::newton ? "newton" : "logT"; }

SingularityValue s_r_newton(const Hypersurface& h, const cvec& z, double r, int budget,
                            std::uint64_t seed) {
  const int n = h.dimension();
  if (n < 2) throw ValidationError("Newton potential undefined for n=1");
  if (z.size() != n) throw ValidationError("dimension: singularity point");
  if (!(r > 0.0)) throw ValidationError("s_r: radius must be positive");
  SingularityValue out;
  out.route = SingularityRoute::newton;

  const auto foot = closest_point(h, z, 2.0 * r + 1.0);
  if (foot.found && foot.distance < kOnSurface) {
    out.value = kNegInf;
    return out;
  }
  std::optional<SamplingFocus> focus;
  if (foot.found && foot.distance < r) focus = SamplingFocus{foot.foot, foot.distance, 0.5};

  const auto set = sample_surface_in_ball(h, z, r, budget, derive_seed(seed, 1), focus, kBatches);
  if (set.samples.empty()) return out;  // W ∩ B(z,r) = ∅

  // ω^{n-1} restricted to W is (n-1)! 2^{n-1} times Lebesgue area.
  const double k = std::numbers::pi * factorial(n - 1) * std::pow(2.0, n - 1);
  std::vector<double> integrand(set.samples.size());
  parallel_for(static_cast<int>(set.samples.size()), [&](int i) {
    const cvec& zeta = set.samples[i].point;
    const auto inner = ball_mean_newton(z, zeta, r, kInnerDirections, derive_seed(seed, 2, i));
    integrand[i] = newton_potential(z, zeta) - inner.value;
  });
  std::vector<double> per(set.batches, 0.0);
  for (std::size_t i = 0; i < set.samples.size(); ++i)
    per[set.samples[i].batch] += set.samples[i].area_weight * set.batches * k * integrand[i];
  const auto e = batch_mean(per);
  out.value = e.value;
  out.quadrature_error = e.std_error;
  return out;
}

SingularityValue s_r_log_modulus(const std::function<double(const cvec&)>& log_modulus, const cvec& z,
                                 double r, int budget, std::uint64_t seed) {
  if (!(r > 0.0)) throw ValidationError("s_r: radius must be positive");
  const int n = static_cast<int>(z.size());
  const int d = 2 * n;
  SingularityValue out;
  out.route = SingularityRoute::logT;
  const double at_z = log_modulus(z);
  if (at_z == kNegInf) {
    out.value = kNegInf;
    return out;
  }

  // Equal-volume radial shells, antithetic directions, independent batches.
  constexpr int kShells = 16;
  const int per_shell = std::max(1, budget / (kBatches * kShells * 2));
  std::vector<double> per(kBatches, 0.0);
  parallel_for(kBatches, [&](int b) {
    Rng rng = make_rng(seed, 0x1067u, static_cast<std::uint64_t>(b));
    double sum = 0.0;
    for (int s = 0; s < kShells; ++s)
      for (int k = 0; k < per_shell; ++k) {
        const double u = (s + uniform01(rng)) / kShells;
        const double rho = r * std::pow(u, 1.0 / d);
        const cvec dir = random_unit_vector(rng, n);
        sum += 0.5 * (log_modulus(z + rho * dir) + log_modulus(z - rho * dir));
      }
    per[b] = sum / (kShells * per_shell);
  });
  const auto mean = batch_mean(per);
  if (!std::isfinite(mean.value)) throw NumericalError("log|T| ball mean not finite");
  out.value = at_z - mean.value;
  out.quadrature_error = mean.std_error;
  return out;
}

SingularityValue s_r_logT(const Hypersurface& h, const cvec& z, double r, int budget,
                          std::uint64_t seed) {
  if (z.size() != h.dimension()) throw ValidationError("dimension: singularity point");
  const auto t = h.eval(z);
  const double g = t.gradient.norm();
  if (t.value == cplx(0.0) || (g > 0.0 && std::abs(t.value) / g < kOnSurface)) {
    SingularityValue out;
    out.value = kNegInf;
    return out;
  }
  return s_r_log_modulus([&](const cvec& x) { return h.log_abs(x); }, z, r, budget, seed);
}

}  // namespace fockdens
