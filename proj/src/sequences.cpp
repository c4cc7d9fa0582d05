#include "fockdens/sequences.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>

#include "fockdens/csv.hpp"
#include "fockdens/density.hpp"
#include "fockdens/errors.hpp"
#include "fockdens/random.hpp"

namespace fockdens {

Sequence1D::Sequence1D(std::vector<cplx> pts, std::string l) : points(std::move(pts)), label(std::move(l)) {
  for (const auto& p : points)
    if (!std::isfinite(p.real()) || !std::isfinite(p.imag()))
      throw ValidationError("sequence " + label + ": non-finite point");
  if (points.size() >= 2 && separation(*this) == 0.0)
    throw ValidationError("sequence " + label + ": repeated point");
}

ProductSequence::ProductSequence(Sequence1D g, std::vector<Sequence1D> l)
    : gamma(std::move(g)), lambdas(std::move(l)) {
  if (lambdas.size() != gamma.size())
    throw ValidationError("product_sequence: " + std::to_string(lambdas.size()) + " lambda blocks for " +
                          std::to_string(gamma.size()) + " gamma points");
}

double separation(const Sequence1D& s) {
  if (s.size() < 2) throw ValidationError("separation needs at least two points");
  std::vector<cplx> p = s.points;
  std::sort(p.begin(), p.end(), [](cplx a, cplx b) {
    return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
  });
  double best = std::numeric_limits<double>::infinity();
  // Active window ordered by imaginary part; points further left than `best` drop out.
  std::set<std::pair<double, std::size_t>> active;
  std::size_t left = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    while (left < i && p[i].real() - p[left].real() > best) {
      active.erase({p[left].imag(), left});
      ++left;
    }
    auto it = active.lower_bound({p[i].imag() - best, 0});
    for (; it != active.end() && it->first <= p[i].imag() + best; ++it)
      best = std::min(best, std::abs(p[i] - p[it->second]));
    active.insert({p[i].imag(), i});
  }
  return best;
}

double density_1d(const Sequence1D& s, const Weight& w, cplx z, double radius) {
  if (w.dimension() != 1) throw ValidationError("density_1d: weight must be one-dimensional");
  if (!(radius > 0.0)) throw ValidationError("density_1d: radius must be positive");
  int count = 0;
  for (const auto& g : s.points)
    if (std::abs(g - z) < radius) ++count;
  const double q = w.levi().matrix()(0, 0).real();
  return count / (4.0 * q * std::numbers::pi * radius * radius);
}

Sequence1D lattice_patch(double alpha, double radius, std::string label) {
  if (!(alpha > 0.0) || !(radius > 0.0)) throw ValidationError("lattice_patch: alpha and radius must be positive");
  const int k = static_cast<int>(std::ceil(radius / alpha));
  std::vector<cplx> pts;
  for (int i = -k; i <= k; ++i)
    for (int j = -k; j <= k; ++j) {
      const cplx p(i * alpha, j * alpha);
      if (std::abs(p) < radius) pts.push_back(p);
    }
  return Sequence1D(std::move(pts), std::move(label));
}

Hypersurface product_hypersurface(const Sequence1D& gamma, int n) {
  if (gamma.size() == 0) throw ValidationError("product_hypersurface: empty sequence");
  std::vector<MPoly> factors;
  for (const auto& g : gamma.points) factors.push_back(MPoly::coordinate(n, 0) - MPoly::constant(n, g));
  return Hypersurface(std::move(factors));
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::satisfied: return "satisfied";
    case Verdict::violated: return "violated";
    default: return "inconclusive";
  }
}

namespace {

struct SplitLevi {
  double q11, q22, det;
};

SplitLevi split_levi(const Weight& w) {
  if (w.dimension() != 2) throw ValidationError("product check: weight must live on C^2");
  const cmat q = w.levi().matrix();
  const double det = (q(0, 0) * q(1, 1) - q(0, 1) * q(1, 0)).real();
  if (!(q(0, 0).real() > 1e-12) || !(q(1, 1).real() > 1e-12) || !(det > 1e-12))
    throw ValidationError("degenerate Levi form");
  return {q(0, 0).real(), q(1, 1).real(), det};
}

CriterionReport product_check(const ProductSequence& ps, const Weight& w, double r, double epsilon,
                              const std::vector<cvec>& grid, CriterionMode mode) {
  if (!(r > 0.0)) throw ValidationError("product check: r must be positive");
  if (!(epsilon >= 0.0)) throw ValidationError("product check: eps must be non-negative");
  if (grid.empty()) throw ValidationError("product check: empty grid");
  const auto lv = split_levi(w);
  const bool interp = mode == CriterionMode::interp;

  CriterionReport rep;
  rep.mode = mode;
  rep.radius = r;
  rep.epsilon = epsilon;

  // (a) each Λ_j against the slice weight φ(γ_j, ·), whose Levi form is Q_22.
  const Weight slice = Weight::quadratic(HForm(cmat::Constant(1, 1, cplx(lv.q22))));
  for (const auto& lam : ps.lambdas) {
    double worst = interp ? 0.0 : std::numeric_limits<double>::infinity();
    for (const auto& g : grid) {
      if (g.size() != 2) throw ValidationError("product check: grid points must be in C^2");
      for (double rad : {r, 2.0 * r, 4.0 * r}) {
        const double d = density_1d(lam, slice, g[1], rad);
        worst = interp ? std::max(worst, d) : std::min(worst, d);
      }
    }
    rep.lambda_density.push_back(worst);
    rep.lambda_condition = rep.lambda_condition && (interp ? worst <= 1.0 - epsilon : worst >= 1.0 + epsilon);
  }

  // (b) the split-density inequality at every grid point.
  rep.min_margin = std::numeric_limits<double>::infinity();
  rep.max_margin = -std::numeric_limits<double>::infinity();
  bool strict = true, tied = false;
  for (const auto& g : grid) {
    CriterionRow row;
    row.point = g;
    for (const auto& gamma : ps.gamma.points)
      if (std::abs(gamma - g[0]) < r) ++row.count;
    row.lhs = row.count / (r * r * 4.0 * lv.q11);
    row.rhs = lv.det / (16.0 * lv.q11 * lv.q22);
    row.margin = row.lhs - row.rhs;
    row.lhs_ddbar = row.count / (r * r * lv.q11);
    row.rhs_ddbar = lv.det / (lv.q11 * lv.q22);
    const double signed_margin = interp ? -row.margin : row.margin;
    const double tol = 1e-12 * std::max(row.lhs, row.rhs);
    if (signed_margin < -tol) strict = false;
    if (std::abs(signed_margin) <= tol) tied = true;
    rep.min_margin = std::min(rep.min_margin, row.margin);
    rep.max_margin = std::max(rep.max_margin, row.margin);
    rep.rows.push_back(std::move(row));
  }
  rep.split_condition = strict && !tied;

  if (!strict || !rep.lambda_condition)
    rep.verdict = Verdict::violated;
  else if (tied)
    rep.verdict = Verdict::inconclusive;
  else
    rep.verdict = Verdict::satisfied;

  rep.caveat = interp
                   ? "sufficient condition only: 'violated' does not mean the sequence fails to be "
                     "interpolating; finite grid and radii {r,2r,4r}"
                   : "sufficient condition only: 'violated' does not mean the sequence fails to be "
                     "sampling; finite grid and radii {r,2r,4r}";
  return rep;
}

}  // namespace

CriterionReport product_interp_check(const ProductSequence& ps, const Weight& w, double r, double epsilon,
                                     const std::vector<cvec>& grid) {
  return product_check(ps, w, r, epsilon, grid, CriterionMode::interp);
}

CriterionReport product_samp_check(const ProductSequence& ps, const Weight& w, double r, double epsilon,
                                   const std::vector<cvec>& grid) {
  return product_check(ps, w, r, epsilon, grid, CriterionMode::samp);
}

double gamma_cross_c_density(const Sequence1D& gamma, const Weight& w, const cvec& x, double r) {
  if (x.size() != 2) throw ValidationError("gamma_cross_c_density: point must be in C^2");
  if (!(r > 0.0)) throw ValidationError("gamma_cross_c_density: r must be positive");
  const auto lv = split_levi(w);
  double area = 0.0;
  for (const auto& g : gamma.points)
    area += std::numbers::pi * std::max(0.0, r * r - std::norm(x[0] - g));
  return lelong_factor() * area / ball_volume(4, r) * lv.q22 / lv.det;
}

std::string criterion_csv(const CriterionReport& r) {
  std::string out = "# mode=" + std::string(r.mode == CriterionMode::interp ? "interp" : "samp") +
                    " r=" + csv::num(r.radius) + " eps=" + csv::num(r.epsilon) +
                    " verdict=" + verdict_name(r.verdict) + "\n";
  out += "# Laplacians read as real Laplacians (4 d^2/dz dzbar); *_ddbar columns use d^2/dz dzbar\n";
  out += "# " + r.caveat + "\n";
  for (std::size_t j = 0; j < r.lambda_density.size(); ++j)
    out += "# lambda_" + std::to_string(j) + "_density=" + csv::num(r.lambda_density[j]) + "\n";
  out += "z_re,z_im,w_re,w_im,count,lhs,rhs,lhs_minus_rhs,lhs_ddbar,rhs_ddbar,std_error\n";
  for (const auto& row : r.rows) {
    out += csv::join({csv::num(row.point[0].real()), csv::num(row.point[0].imag()),
                      csv::num(row.point[1].real()), csv::num(row.point[1].imag()),
                      std::to_string(row.count), csv::num(row.lhs), csv::num(row.rhs),
                      csv::num(row.margin), csv::num(row.lhs_ddbar), csv::num(row.rhs_ddbar), "0"}) +
           "\n";
  }
  return out;
}

}  // namespace fockdens
