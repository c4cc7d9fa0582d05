#include "fockdens/hypersurface.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "fockdens/parallel.hpp"
#include "fockdens/random.hpp"

namespace fockdens {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

Hypersurface::Hypersurface(MPoly t, double gradient_floor)
    : Hypersurface(std::vector<MPoly>{std::move(t)}, gradient_floor) {}

Hypersurface::Hypersurface(std::vector<MPoly> factors, double gradient_floor)
    : factors_(std::move(factors)), gradient_floor_(gradient_floor) {
  if (factors_.empty()) throw ValidationError("hypersurface: no defining polynomial");
  n_ = factors_.front().dimension();
  for (const auto& f : factors_) {
    if (f.dimension() != n_) throw ValidationError("dimension: hypersurface factors differ");
    if (f.is_zero()) throw ValidationError("hypersurface: T is identically zero");
  }
  if (!(gradient_floor_ > 0.0)) throw ValidationError("hypersurface.gradient_floor must be positive");
}

int Hypersurface::degree() const {
  int d = 0;
  for (const auto& f : factors_) d += f.degree();
  return d;
}

MPoly Hypersurface::expanded() const {
  MPoly p = factors_.front();
  for (std::size_t k = 1; k < factors_.size(); ++k) p = p * factors_[k];
  return p;
}

PolyValue<double> Hypersurface::eval(const cvec& z) const {
  PolyValue<double> out{cplx(1.0), cvec::Zero(n_)};
  for (const auto& f : factors_) {
    const auto fv = eval_poly(f, z);
    out.gradient = out.gradient * fv.value + out.value * fv.gradient;
    out.value *= fv.value;
  }
  return out;
}

double Hypersurface::log_abs(const cvec& z) const {
  double s = 0.0;
  for (const auto& f : factors_) {
    const double a = std::abs(eval_poly(f, z).value);
    if (a == 0.0) return -kInf;
    s += std::log(a);
  }
  return s;
}

std::vector<PolyRoot<double>> Hypersurface::line_roots(const cvec& base, const cvec& v) const {
  std::vector<PolyRoot<double>> all;
  for (const auto& f : factors_) {
    const UPoly q = restrict_to_line(f, base, v);
    if (q.is_zero()) throw NumericalError("line contained in W");
    if (q.degree() == 0) continue;
    const auto r = poly_roots(q);
    all.insert(all.end(), r.begin(), r.end());
  }
  return all;
}

Hypersurface Hypersurface::pulled_back(const cmat& u) const {
  std::vector<MPoly> f;
  for (const auto& p : factors_) f.push_back(compose_linear(p, u));
  return Hypersurface(std::move(f), gradient_floor_);
}

Hypersurface Hypersurface::scaled(cplx c) const {
  if (c == cplx(0.0)) throw ValidationError("hypersurface: scaling by zero");
  std::vector<MPoly> f = factors_;
  f.front() = f.front() * c;
  return Hypersurface(std::move(f), gradient_floor_);
}

// ---------------------------------------------------------------------------
// Surface sampling
// ---------------------------------------------------------------------------

namespace {

/// Base-point law in one cross-section: mixture of uniform on the disc |y| < r
/// and a radial law around y_c with |y - y_c|^2 having density ∝ 1/(s^2 + u).
struct CrossSectionLaw {
  int dim_real = 0;  // 2n - 2
  double radius = 0.0;
  double uniform_density = 0.0;
  bool focused = false;
  double fraction = 0.0;
  double scale2 = 0.0;
  double umax = 0.0;
  double log_norm = 0.0;
  cvec center;

  double focus_density(const cvec& y) const {
    const double u = (y - center).squaredNorm();
    if (u > umax) return 0.0;
    const double pu = 1.0 / ((scale2 + u) * log_norm);
    if (dim_real == 2) return pu / std::numbers::pi;
    return 2.0 * pu * std::pow(u, 1.0 - 0.5 * dim_real) / sphere_area(dim_real);
  }

  double density(const cvec& y) const {
    const double uni = (y.squaredNorm() < radius * radius) ? uniform_density : 0.0;
    if (!focused) return uni;
    return (1.0 - fraction) * uni + fraction * focus_density(y);
  }

  cvec draw(Rng& rng) const {
    const int m = dim_real / 2;
    if (focused && uniform01(rng) < fraction) {
      const double u = scale2 * (std::pow(1.0 + umax / scale2, uniform01(rng)) - 1.0);
      return center + random_unit_vector(rng, m) * std::sqrt(u);
    }
    return uniform_in_ball(rng, m, radius);
  }
};

cmat drop_column(const cmat& u, int j) {
  const int n = static_cast<int>(u.cols());
  cmat e(u.rows(), n - 1);
  for (int k = 0, c = 0; k < n; ++k)
    if (k != j) e.col(c++) = u.col(k);
  return e;
}

}  // namespace

SurfaceSampleSet sample_surface_in_ball(const Hypersurface& h, const cvec& center, double radius,
                                        int budget, std::uint64_t seed,
                                        const std::optional<SamplingFocus>& focus, int batches) {
  const int n = h.dimension();
  if (center.size() != n) throw ValidationError("dimension: sampling center");
  if (!(radius > 0.0)) throw ValidationError("sample_surface_in_ball: radius must be positive");
  if (budget < 1) throw ValidationError("sample_surface_in_ball: budget must be >= 1");

  SurfaceSampleSet out;
  out.center = center;
  out.radius = radius;

  if (n == 1) {
    // The single "line" is C itself: every zero in the disc is found exactly.
    out.batches = 1;
    const auto roots = h.line_roots(center, cvec::Ones(1));
    for (const auto& r : roots) {
      cvec p(1);
      p[0] = center[0] + r.value;
      if (std::abs(r.value) >= radius) continue;
      // The normal is a phase here; the full product gradient can overflow for many factors.
      out.samples.push_back({p, cvec::Ones(1), double(r.multiplicity), 0});
    }
    return out;
  }

  batches = std::max(2, std::min(batches, budget));
  const int per_dir = std::max(1, budget / (batches * n));
  out.batches = batches;
  const int dreal = 2 * n - 2;
  const double section = ball_volume(dreal, radius);

  std::vector<std::vector<SurfaceSample>> per_batch(batches);
  parallel_for(batches, [&](int b) {
    Rng rng = make_rng(seed, 0x5u, static_cast<std::uint64_t>(b));
    const cmat u = random_unitary(rng, n);
    std::vector<cmat> sections(n);
    std::vector<CrossSectionLaw> laws(n);
    for (int j = 0; j < n; ++j) {
      sections[j] = drop_column(u, j);
      auto& law = laws[j];
      law.dim_real = dreal;
      law.radius = radius;
      law.uniform_density = 1.0 / section;
      if (focus) {
        law.focused = true;
        law.fraction = focus->fraction;
        law.scale2 = std::max(focus->scale * focus->scale, 1e-300);
        law.umax = 4.0 * radius * radius;
        law.log_norm = std::log1p(law.umax / law.scale2);
        law.center = sections[j].adjoint() * (focus->point - center);
      }
    }
    auto& mine = per_batch[b];
    for (int j = 0; j < n; ++j) {
      const cvec v = u.col(j);
      for (int l = 0; l < per_dir; ++l) {
        const cvec y = laws[j].draw(rng);
        if (y.squaredNorm() >= radius * radius) continue;  // line misses the ball
        const cvec base = center + sections[j] * y;
        std::vector<PolyRoot<double>> roots;
        try {
          roots = h.line_roots(base, v);
        } catch (const NumericalError&) {
          continue;  // line inside W: a null event for random lines
        }
        for (const auto& r : roots) {
          const cvec p = base + r.value * v;
          if ((p - center).norm() >= radius) continue;
          const auto tv = h.eval(p);
          const double g = tv.gradient.norm();
          if (g < h.gradient_floor()) throw NumericalError("singular gradient on W");
          const cvec a = tv.gradient / g;
          double denom = 0.0;
          for (int k = 0; k < n; ++k) {
            const double cosk = std::norm(cplx(u.col(k).cwiseProduct(a).sum()));
            if (cosk == 0.0) continue;
            const cvec yk = sections[k].adjoint() * (p - center);
            denom += per_dir * laws[k].density(yk) * cosk;
          }
          if (!(denom > 0.0)) continue;
          mine.push_back({p, cvec(a.conjugate()), r.multiplicity / denom / batches, b});
        }
      }
    }
  });
  for (auto& v : per_batch) out.samples.insert(out.samples.end(), v.begin(), v.end());
  return out;
}

// ---------------------------------------------------------------------------
// Distance and foot points
// ---------------------------------------------------------------------------

namespace {

/// Newton projection onto W along conj(grad T). Returns false if it stalls.
bool project_to_surface(const Hypersurface& h, cvec& w) {
  for (int it = 0; it < 60; ++it) {
    const auto tv = h.eval(w);
    const double g2 = tv.gradient.squaredNorm();
    if (g2 < h.gradient_floor() * h.gradient_floor()) throw NumericalError("singular gradient");
    const double g = std::sqrt(g2);
    if (std::abs(tv.value) / g <= 1e-14 * (1.0 + w.norm())) return true;
    w -= tv.value * tv.gradient.conjugate() / g2;
    if (!all_finite(w)) return false;
  }
  const auto tv = h.eval(w);
  return std::abs(tv.value) <= 1e-10;
}

/// Moves a point of W towards the foot point of z: alternate the tangential
/// correction with a reprojection until z - w is normal to W.
bool refine_foot(const Hypersurface& h, const cvec& z, cvec& w) {
  if (!project_to_surface(h, w)) return false;
  for (int it = 0; it < 200; ++it) {
    const auto tv = h.eval(w);
    const double g = tv.gradient.norm();
    const cvec nrm = tv.gradient.conjugate() / g;
    const cvec d = z - w;
    const cvec tangential = d - nrm.dot(d) * nrm;  // dot() conjugates its first argument
    if (tangential.norm() <= 1e-13 * (1.0 + d.norm())) return true;
    cvec trial = w + tangential;
    if (!project_to_surface(h, trial)) return false;
    // Guard against overshoot on strongly curved patches.
    if ((z - trial).norm() > (z - w).norm()) {
      trial = w + 0.5 * tangential;
      if (!project_to_surface(h, trial)) return false;
      if ((z - trial).norm() > (z - w).norm()) return true;
    }
    w = trial;
  }
  return true;
}

}  // namespace

ClosestPoint closest_point(const Hypersurface& h, const cvec& z, double search_radius) {
  const int n = h.dimension();
  if (z.size() != n) throw ValidationError("dimension: distance query point");
  ClosestPoint best;
  best.distance = kInf;

  const auto tz = h.eval(z);
  if (tz.value == cplx(0.0)) return {0.0, z, true};
  const double g = tz.gradient.norm();
  if (g > 0.0 && std::abs(tz.value) / g <= 1e-14) return {std::abs(tz.value) / g, z, true};

  std::vector<cvec> seeds;
  seeds.push_back(z);
  std::vector<cvec> dirs;
  if (g > 0.0) dirs.push_back(tz.gradient.conjugate() / g);
  for (int i = 0; i < n; ++i) dirs.push_back(cvec::Unit(n, i));
  for (const auto& v : dirs) {
    try {
      const auto roots = h.line_roots(z, v);
      const PolyRoot<double>* nearest = nullptr;
      for (const auto& r : roots)
        if (!nearest || std::abs(r.value) < std::abs(nearest->value)) nearest = &r;
      if (nearest && std::abs(nearest->value) < search_radius) seeds.push_back(z + nearest->value * v);
    } catch (const NumericalError&) {
      // z lies on W along this line only if T(z)=0, handled above.
    }
  }

  for (auto w : seeds) {
    if (!refine_foot(h, z, w)) continue;
    const double d = (z - w).norm();
    if (d < best.distance && d <= search_radius) {
      best = {d, w, true};
    }
  }
  return best;
}

double distance_estimate(const Hypersurface& h, const cvec& z, double search_radius) {
  return closest_point(h, z, search_radius).distance;
}

LineCount line_intersections_in_ball(const Hypersurface& h, const cvec& base, const cvec& v,
                                     const cvec& center, double radius) {
  if (v.norm() == 0.0) throw ValidationError("degenerate direction: v = 0");
  LineCount lc;
  for (const auto& r : h.line_roots(base, v)) {
    const double d = (base + r.value * v - center).norm();
    if (std::abs(d - radius) <= lc.boundary_band) ++lc.near_boundary;
    if (d < radius) lc.count += r.multiplicity;
  }
  return lc;
}

// ---------------------------------------------------------------------------
// Flatness diagnostics
// ---------------------------------------------------------------------------

FlatnessReport flatness_check(const Hypersurface& h, const cvec& center, double radius, int budget,
                              std::uint64_t seed) {
  if (budget < 100) throw ValidationError("flatness_check: budget must be >= 100");
  const int n = h.dimension();
  auto set = sample_surface_in_ball(h, center, radius, 8 * budget, seed);
  if (set.samples.empty()) throw ValidationError("empty region: no surface points found");
  auto& pts = set.samples;
  if (static_cast<int>(pts.size()) > budget) pts.resize(budget);

  FlatnessReport rep;
  rep.samples = static_cast<int>(pts.size());
  Rng rng = make_rng(seed, 0xf1a7u);
  const double step = std::min(1e-3, 0.01 * radius);

  for (const auto& s : pts) {
    if (n < 2) break;
    // Orthonormal tangent frame: complement of the unit normal.
    cmat frame = cmat::Identity(n, n);
    frame.col(0) = s.unit_normal;
    Eigen::HouseholderQR<cmat> qr(frame);
    const cmat q = qr.householderQ() * cmat::Identity(n, n);
    std::vector<cvec> tangents;
    for (int k = 1; k < n; ++k) tangents.push_back(q.col(k));
    cvec mix = cvec::Zero(n);
    for (const auto& t : tangents) mix += t * std::polar(1.0, 2.0 * std::numbers::pi * uniform01(rng));
    tangents.push_back(mix / mix.norm());
    for (const auto& t : tangents) {
      const cvec foot = s.point + step * t;
      double best = kInf;
      try {
        for (const auto& r : h.line_roots(foot, s.unit_normal)) best = std::min(best, std::abs(r.value));
      } catch (const NumericalError&) {
        best = 0.0;  // W contains the normal line through foot: graph offset 0
      }
      if (std::isfinite(best)) rep.max_graph_constant = std::max(rep.max_graph_constant, best / (step * step));
    }
  }

  // Pairwise reach bound |d|^2 / (2 |<d, n_p>|) and the closest pair of
  // samples on different local sheets.
  double reach = radius;
  double sheet_gap = radius;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (i == j) continue;
      const cvec d = pts[j].point - pts[i].point;
      const double dn = d.norm();
      if (dn == 0.0) continue;
      const double normal_part = std::abs(pts[i].unit_normal.dot(d));
      if (normal_part > 0.0) reach = std::min(reach, dn * dn / (2.0 * normal_part));
      if (normal_part > 0.5 * dn) sheet_gap = std::min(sheet_gap, dn);
    }
  }
  rep.epsilon_estimate = reach;
  rep.min_normal_injectivity = sheet_gap;
  return rep;
}

}  // namespace fockdens
