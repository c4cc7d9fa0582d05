#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fockdens/algebra.hpp"
#include "fockdens/estimate.hpp"
#include "fockdens/hypersurface.hpp"
#include "fockdens/weights.hpp"

namespace fockdens {

/// Mass of the (1,1)-matrix ∂∂̄ log|T| per unit Lebesgue (2n-2)-area of W:
/// ∂_i∂̄_j log|T| = (π/2) a_i conj(a_j) / |a|^2 · δ_W with a = ∇T.
/// In n = 1 this is ∫ ∂∂̄ log|z| dA = π/2.
constexpr double lelong_factor() { return 1.5707963267948966; }

enum class UpsilonMethod { surface, slicing };

/// Ball average Υ_W(z,r) together with the per-batch forms it averages, so
/// that any pairing Υ(v,v) carries a batch-variance error bar.
struct UpsilonEstimate {
  HForm form;
  std::vector<HForm> batch_forms;

  Estimate pairing(const cvec& v) const;
  /// Largest standard error over the coordinate directions.
  double max_std_error() const;
};

UpsilonEstimate upsilon(const Hypersurface& h, const cvec& z, double r, UpsilonMethod method,
                        int budget, std::uint64_t seed);

/// Υ(v,v) for a unit direction v from lines parallel to v only:
/// (π/2) / vol(B) · ∫ (#hits in B) d(cross-section).
Estimate upsilon_pairing_slicing(const Hypersurface& h, const cvec& z, double r, const cvec& v,
                                 int budget, std::uint64_t seed);

struct DensityReport {
  cvec center;
  double radius = 0.0;
  HForm upsilon;
  HForm levi_r;
  double density = 0.0;
  cvec max_direction;
  double mc_std_error = 0.0;
};

DensityReport density_at(const Hypersurface& h, const Weight& w, const cvec& z, double r, int budget,
                         std::uint64_t seed, UpsilonMethod method = UpsilonMethod::surface);

struct ScanCell {
  int center_index = 0;
  int radius_index = 0;
  DensityReport report;
};

/// Finite-window estimates of D+ (sup over centers) and D- (inf over centers).
struct ScanReport {
  std::vector<cvec> centers;
  std::vector<double> radii;
  std::vector<ScanCell> cells;  // ordered by (center, radius)
  std::vector<double> sup_over_z;
  std::vector<double> inf_over_z;
  /// Two-point extrapolation D(r) ≈ D∞ + c/r^2 from the two largest radii.
  double sup_trend = 0.0;
  double inf_trend = 0.0;
  std::string trend_summary;
};

ScanReport density_scan(const Hypersurface& h, const Weight& w, const std::vector<cvec>& centers,
                        const std::vector<double>& radii, int budget, std::uint64_t seed);

/// CSV: center coordinates, radius, density, std_error, direction components.
std::string density_csv_header(int n);
std::string density_csv_row(const DensityReport& r);
std::string scan_csv(const ScanReport& s);

}  // namespace fockdens
