#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fockdens/algebra.hpp"
#include "fockdens/estimate.hpp"
#include "fockdens/roots.hpp"

namespace fockdens {

/// Zero set W = {T = 0} of a polynomial T given as a product of factors.
/// Keeping the factors apart lets line slicing solve each one separately,
/// which stays well conditioned for long products such as lattice patches.
class Hypersurface {
 public:
  explicit Hypersurface(MPoly t, double gradient_floor = 1e-8);
  explicit Hypersurface(std::vector<MPoly> factors, double gradient_floor = 1e-8);

  int dimension() const { return n_; }
  const std::vector<MPoly>& factors() const { return factors_; }
  double gradient_floor() const { return gradient_floor_; }
  int degree() const;

  /// Expanded product; only sensible for short products.
  MPoly expanded() const;

  /// T and its holomorphic gradient (product rule across factors).
  PolyValue<double> eval(const cvec& z) const;
  /// log|T(z)|, -inf on W.
  double log_abs(const cvec& z) const;

  /// Roots t of T(base + t v), merged over factors.
  /// Throws NumericalError "line contained in W" if some factor vanishes on the line.
  std::vector<PolyRoot<double>> line_roots(const cvec& base, const cvec& v) const;

  /// The hypersurface {z : T(U z) = 0} = U^{-1} W.
  Hypersurface pulled_back(const cmat& u) const;
  /// Same zero set, defining function multiplied by a nonzero constant.
  Hypersurface scaled(cplx c) const;

 private:
  int n_ = 0;
  std::vector<MPoly> factors_;
  double gradient_floor_ = 1e-8;
};

struct SurfaceSample {
  cvec point;
  cvec unit_normal;  // conj(grad T)/|grad T|
  double area_weight = 0.0;
  int batch = 0;
};

/// Weighted samples of the surface measure on W ∩ B(center, radius), grouped
/// into independent batches so any integral gets a batch-variance error bar.
struct SurfaceSampleSet {
  std::vector<SurfaceSample> samples;
  int batches = 0;
  cvec center;
  double radius = 0.0;

  /// Estimate of the integral of f over W ∩ B (f: const SurfaceSample& -> double).
  template <typename F>
  Estimate integrate(F&& f) const {
    if (batches <= 0) return {};
    std::vector<double> per(batches, 0.0);
    for (const auto& s : samples) per[s.batch] += s.area_weight * batches * f(s);
    return batch_mean(per);
  }
  Estimate area() const {
    return integrate([](const SurfaceSample&) { return 1.0; });
  }
};

/// Optional concentration of line base points near a point of interest
/// (importance sampling of integrands peaked there).
struct SamplingFocus {
  cvec point;
  double scale = 1.0;
  double fraction = 0.5;
};

/// Surface sampling by complex line slicing. Each batch draws a Haar-random
/// unitary frame and the same number of lines along each frame direction;
/// a hit ζ gets the balance-heuristic weight 1 / sum_k m q_k(ζ) |<v_k, n>|^2.
/// With uniform base points the denominator is m / vol(cross-section) because
/// sum_k |<v_k,n>|^2 = 1. `budget` is the total number of lines.
SurfaceSampleSet sample_surface_in_ball(const Hypersurface& h, const cvec& center, double radius,
                                        int budget, std::uint64_t seed,
                                        const std::optional<SamplingFocus>& focus = std::nullopt,
                                        int batches = 32);

struct ClosestPoint {
  double distance = 0.0;  // +inf when nothing was found within the search radius
  cvec foot;
  bool found = false;
};

ClosestPoint closest_point(const Hypersurface& h, const cvec& z, double search_radius = 1e6);

/// Estimated Euclidean distance from z to W (+inf sentinel when not found).
double distance_estimate(const Hypersurface& h, const cvec& z, double search_radius = 1e6);

struct LineCount {
  int count = 0;          // with multiplicity, strictly inside the ball
  int near_boundary = 0;  // roots within boundary_band of the sphere (either side)
  double boundary_band = 1e-8;
};

LineCount line_intersections_in_ball(const Hypersurface& h, const cvec& base, const cvec& v,
                                     const cvec& center, double radius);

struct FlatnessReport {
  double epsilon_estimate = 0.0;
  double max_graph_constant = 0.0;
  double min_normal_injectivity = 0.0;
  int samples = 0;
  bool heuristic = true;  // sampled estimate, never a proof of uniform flatness
};

FlatnessReport flatness_check(const Hypersurface& h, const cvec& center, double radius, int budget,
                              std::uint64_t seed);

}  // namespace fockdens
