#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "fockdens/algebra.hpp"

namespace fockdens {

using Rng = std::mt19937_64;

/// splitmix64 finalizer; used to derive independent per-cell streams.
inline std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0,
                                 std::uint64_t c = 0) {
  return mix_seed(mix_seed(mix_seed(master ^ mix_seed(a)) ^ mix_seed(b + 0x1234567ULL)) ^
                  mix_seed(c + 0xabcdefULL));
}

inline Rng make_rng(std::uint64_t master, std::uint64_t a = 0, std::uint64_t b = 0,
                    std::uint64_t c = 0) {
  return Rng(derive_seed(master, a, b, c));
}

inline double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

inline cvec complex_gaussian(Rng& rng, int n) {
  std::normal_distribution<double> g;
  cvec v(n);
  for (int i = 0; i < n; ++i) v[i] = cplx(g(rng), g(rng));
  return v;
}

inline cvec random_unit_vector(Rng& rng, int n) {
  cvec v = complex_gaussian(rng, n);
  return v / v.norm();
}

/// Haar-distributed unitary (QR of a complex Gaussian matrix with phase fix).
inline cmat random_unitary(Rng& rng, int n) {
  cmat g(n, n);
  for (int j = 0; j < n; ++j) g.col(j) = complex_gaussian(rng, n);
  Eigen::HouseholderQR<cmat> qr(g);
  cmat q = qr.householderQ() * cmat::Identity(n, n);
  const cmat r = qr.matrixQR();
  for (int j = 0; j < n; ++j) {
    const double a = std::abs(r(j, j));
    if (a > 0) q.col(j) *= r(j, j) / a;
  }
  return q;
}

/// Uniform point in the Euclidean ball of radius r in C^n = R^{2n}.
inline cvec uniform_in_ball(Rng& rng, int n, double r) {
  const cvec dir = random_unit_vector(rng, n);
  return dir * (r * std::pow(uniform01(rng), 1.0 / (2.0 * n)));
}

/// Lebesgue volume of the ball of radius r in R^d.
inline double ball_volume(int d, double r) {
  return std::pow(std::numbers::pi, 0.5 * d) * std::pow(r, d) / std::tgamma(0.5 * d + 1.0);
}

/// Surface area of the unit sphere S^{d-1} in R^d.
inline double sphere_area(int d) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
}

}  // namespace fockdens
