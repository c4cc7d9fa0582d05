#pragma once

#include <string>
#include <vector>

#include "fockdens/algebra.hpp"
#include "fockdens/hypersurface.hpp"
#include "fockdens/weights.hpp"

namespace fockdens {

/// Finite set of distinct points in C.
struct Sequence1D {
  std::vector<cplx> points;
  std::string label;

  Sequence1D() = default;
  /// Throws ValidationError on repeated points.
  explicit Sequence1D(std::vector<cplx> pts, std::string label = {});
  std::size_t size() const { return points.size(); }
};

/// Σ = {(γ_j, λ_jk)}: one Λ_j per γ_j, index-aligned.
struct ProductSequence {
  Sequence1D gamma;
  std::vector<Sequence1D> lambdas;

  ProductSequence() = default;
  ProductSequence(Sequence1D g, std::vector<Sequence1D> l);
};

/// Minimum pairwise distance (sort-and-sweep). Needs at least two points.
double separation(const Sequence1D& s);

/// #(Γ ∩ D(z,R)) / ∫_{D(z,R)} Δφ with the real Laplacian, i.e. count / (4 q π R^2).
double density_1d(const Sequence1D& s, const Weight& w, cplx z, double radius);

/// αZ^2 ∩ D(0, R).
Sequence1D lattice_patch(double alpha, double radius, std::string label = {});

/// T = Π_j (z_1 - γ_j) as a factored hypersurface in C^n.
Hypersurface product_hypersurface(const Sequence1D& gamma, int n);

enum class Verdict { satisfied, violated, inconclusive };
const char* verdict_name(Verdict v);

enum class CriterionMode { interp, samp };

struct CriterionRow {
  cvec point;    // grid point (z, w)
  int count = 0;  // #Γ ∩ D(z, r)
  double lhs = 0.0;  // count / (r^2 Δ_z φ), real Laplacian
  double rhs = 0.0;  // det(∂∂̄φ) / (Δ_z φ Δ_w φ)
  double margin = 0.0;  // lhs - rhs
  double lhs_ddbar = 0.0;  // same with Δ read as ∂∂̄
  double rhs_ddbar = 0.0;
};

struct CriterionReport {
  CriterionMode mode = CriterionMode::interp;
  double radius = 0.0;
  double epsilon = 0.0;
  std::vector<CriterionRow> rows;
  double min_margin = 0.0;
  double max_margin = 0.0;
  /// Worst density of each Λ_j over the grid w-coordinates and radii {r, 2r, 4r}:
  /// the maximum for interp, the minimum for samp.
  std::vector<double> lambda_density;
  bool lambda_condition = true;
  bool split_condition = true;
  Verdict verdict = Verdict::inconclusive;
  std::string caveat;
};

CriterionReport product_interp_check(const ProductSequence& ps, const Weight& w, double r, double epsilon,
                                     const std::vector<cvec>& grid);
CriterionReport product_samp_check(const ProductSequence& ps, const Weight& w, double r, double epsilon,
                                   const std::vector<cvec>& grid);

/// Closed-form density of W = Γ × C at x: (π/2) Σ_j π (r^2 - |x_1 - γ_j|^2)_+ / vol(B(x,r))
/// against Q, i.e. times (Q^{-1})_{11} = Q_22 / det Q.
double gamma_cross_c_density(const Sequence1D& gamma, const Weight& w, const cvec& x, double r);

std::string criterion_csv(const CriterionReport& r);

}  // namespace fockdens
