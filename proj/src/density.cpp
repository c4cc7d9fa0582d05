#include "fockdens/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "fockdens/csv.hpp"
#include "fockdens/parallel.hpp"
#include "fockdens/random.hpp"

namespace fockdens {

Estimate UpsilonEstimate::pairing(const cvec& v) const {
  if (batch_forms.empty()) return {form.pairing(v), 0.0};
  std::vector<double> per;
  per.reserve(batch_forms.size());
  for (const auto& f : batch_forms) per.push_back(f.pairing(v));
  return batch_mean(per);
}

double UpsilonEstimate::max_std_error() const {
  double e = 0.0;
  for (int i = 0; i < form.dimension(); ++i)
    e = std::max(e, pairing(cvec::Unit(form.dimension(), i)).std_error);
  return e;
}

namespace {

/// Orthonormal basis of the complement of the unit vector v (columns).
cmat complement_basis(const cvec& v) {
  const int n = static_cast<int>(v.size());
  cmat m = cmat::Identity(n, n);
  m.col(0) = v;
  Eigen::HouseholderQR<cmat> qr(m);
  const cmat q = qr.householderQ() * cmat::Identity(n, n);
  return q.rightCols(n - 1);
}

/// Per-batch estimates of Υ(v,v) from `lines` lines parallel to v.
std::vector<double> slice_batches(const Hypersurface& h, const cvec& z, double r, const cvec& v,
                                  int batches, int lines, std::uint64_t seed) {
  const int n = h.dimension();
  const double scale = lelong_factor() * ball_volume(2 * n - 2, r) / ball_volume(2 * n, r);
  std::vector<double> per(batches, 0.0);
  if (n == 1) {
    const double c = line_intersections_in_ball(h, z, v, z, r).count;
    std::fill(per.begin(), per.end(), scale * c);
    return per;
  }
  const cmat section = complement_basis(v);
  parallel_for(batches, [&](int b) {
    Rng rng = make_rng(seed, 0x51ceu, static_cast<std::uint64_t>(b));
    long hits = 0;
    for (int l = 0; l < lines; ++l) {
      const cvec y = uniform_in_ball(rng, n - 1, r);
      hits += line_intersections_in_ball(h, z + section * y, v, z, r).count;
    }
    per[b] = scale * static_cast<double>(hits) / lines;
  });
  return per;
}

constexpr int kBatches = 32;

}  // namespace

Estimate upsilon_pairing_slicing(const Hypersurface& h, const cvec& z, double r, const cvec& v,
                                 int budget, std::uint64_t seed) {
  if (!(r > 0.0)) throw ValidationError("upsilon: radius must be positive");
  if (v.size() != h.dimension() || v.norm() == 0.0) throw ValidationError("degenerate direction");
  const int lines = std::max(1, budget / kBatches);
  return batch_mean(slice_batches(h, z, r, v / v.norm(), kBatches, lines, seed));
}

UpsilonEstimate upsilon(const Hypersurface& h, const cvec& z, double r, UpsilonMethod method,
                        int budget, std::uint64_t seed) {
  const int n = h.dimension();
  if (z.size() != n) throw ValidationError("dimension: upsilon center");
  if (!(r > 0.0)) throw ValidationError("upsilon: radius must be positive");
  UpsilonEstimate out;

  if (method == UpsilonMethod::surface) {
    const auto set = sample_surface_in_ball(h, z, r, budget, seed);
    const double scale = lelong_factor() / ball_volume(2 * n, r);
    const int nb = std::max(1, set.batches);
    std::vector<cmat> per(nb, cmat::Zero(n, n));
    for (const auto& s : set.samples) {
      const cvec a = s.unit_normal.conjugate();
      per[s.batch] += (s.area_weight * nb * scale) * (a * a.adjoint());
    }
    cmat mean = cmat::Zero(n, n);
    for (const auto& m : per) {
      out.batch_forms.emplace_back(m);
      mean += m;
    }
    out.form = HForm(cmat(mean / nb));
    if (nb == 1) out.batch_forms.clear();
    return out;
  }

  // Slicing: Υ(w,w) along a random unitary frame and its polarization pairs.
  Rng rng = make_rng(seed, 0xf4a3u);
  const cmat u = (n == 1) ? cmat::Identity(1, 1) : random_unitary(rng, n);
  struct Dir {
    cvec v;
    int i, j, kind;  // kind 0: diagonal, 1: +real, 2: -real, 3: +imag, 4: -imag
  };
  std::vector<Dir> dirs;
  const double s = 1.0 / std::sqrt(2.0);
  const cplx I(0.0, 1.0);
  for (int i = 0; i < n; ++i) dirs.push_back({u.col(i), i, i, 0});
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      dirs.push_back({cvec(s * (u.col(i) + u.col(j))), i, j, 1});
      dirs.push_back({cvec(s * (u.col(i) - u.col(j))), i, j, 2});
      dirs.push_back({cvec(s * (u.col(i) + I * u.col(j))), i, j, 3});
      dirs.push_back({cvec(s * (u.col(i) - I * u.col(j))), i, j, 4});
    }
  const int lines = std::max(1, budget / (kBatches * static_cast<int>(dirs.size())));
  std::vector<std::vector<double>> vals;
  for (std::size_t d = 0; d < dirs.size(); ++d)
    vals.push_back(slice_batches(h, z, r, dirs[d].v, kBatches, lines, derive_seed(seed, d)));

  for (int b = 0; b < kBatches; ++b) {
    cmat hp = cmat::Zero(n, n);  // form in frame coordinates
    for (std::size_t d = 0; d < dirs.size(); ++d) {
      const auto& dir = dirs[d];
      const double p = vals[d][b];
      switch (dir.kind) {
        case 0: hp(dir.i, dir.i) += p; break;
        case 1: hp(dir.i, dir.j) += 0.5 * p; break;
        case 2: hp(dir.i, dir.j) -= 0.5 * p; break;
        case 3: hp(dir.i, dir.j) += 0.5 * I * p; break;
        case 4: hp(dir.i, dir.j) -= 0.5 * I * p; break;
      }
    }
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) hp(j, i) = std::conj(hp(i, j));
    // H'(c,c) = H(Uc,Uc), hence H = conj(U) H' U^T.
    out.batch_forms.push_back(HForm(hp).congruence(u.adjoint()));
  }
  cmat mean = cmat::Zero(n, n);
  for (const auto& f : out.batch_forms) mean += f.matrix();
  out.form = HForm(cmat(mean / double(kBatches)));
  if (n == 1) out.batch_forms.clear();
  return out;
}

DensityReport density_at(const Hypersurface& h, const Weight& w, const cvec& z, double r, int budget,
                         std::uint64_t seed, UpsilonMethod method) {
  if (w.dimension() != h.dimension()) throw ValidationError("dimension: weight and hypersurface differ");
  DensityReport rep;
  rep.center = z;
  rep.radius = r;
  const auto ups = upsilon(h, z, r, method, budget, seed);
  rep.upsilon = ups.form;
  // Quadratic weights have constant Levi form, so i∂∂̄φ_r = Q exactly.
  rep.levi_r = levi_form(w, z);
  const auto ge = max_gen_eig(rep.upsilon, rep.levi_r);
  rep.density = std::max(0.0, ge.value);
  rep.max_direction = ge.direction;
  const double q = rep.levi_r.pairing(ge.direction);
  rep.mc_std_error = ups.pairing(ge.direction).std_error / q;
  return rep;
}

ScanReport density_scan(const Hypersurface& h, const Weight& w, const std::vector<cvec>& centers,
                        const std::vector<double>& radii, int budget, std::uint64_t seed) {
  if (centers.empty()) throw ValidationError("density_scan: no centers");
  if (radii.empty()) throw ValidationError("density_scan: no radii");
  for (std::size_t i = 1; i < radii.size(); ++i)
    if (!(radii[i] > radii[i - 1])) throw ValidationError("density_scan: radii must be ascending");

  ScanReport s;
  s.centers = centers;
  s.radii = radii;
  s.sup_over_z.assign(radii.size(), 0.0);
  s.inf_over_z.assign(radii.size(), std::numeric_limits<double>::infinity());
  for (std::size_t c = 0; c < centers.size(); ++c)
    for (std::size_t k = 0; k < radii.size(); ++k) {
      ScanCell cell{static_cast<int>(c), static_cast<int>(k),
                    density_at(h, w, centers[c], radii[k], budget, derive_seed(seed, c, k))};
      s.sup_over_z[k] = std::max(s.sup_over_z[k], cell.report.density);
      s.inf_over_z[k] = std::min(s.inf_over_z[k], cell.report.density);
      s.cells.push_back(std::move(cell));
    }

  auto extrapolate = [&](const std::vector<double>& d) {
    const std::size_t m = d.size();
    if (m < 2) return d.back();
    const double r1 = radii[m - 2] * radii[m - 2], r2 = radii[m - 1] * radii[m - 1];
    return (r2 * d[m - 1] - r1 * d[m - 2]) / (r2 - r1);
  };
  s.sup_trend = extrapolate(s.sup_over_z);
  s.inf_trend = extrapolate(s.inf_over_z);

  auto monotone = [](const std::vector<double>& d) -> std::string {
    bool up = true, down = true;
    for (std::size_t i = 1; i < d.size(); ++i) {
      up = up && d[i] > d[i - 1];
      down = down && d[i] < d[i - 1];
    }
    if (d.size() < 2) return "single radius";
    return down ? "decreasing" : up ? "increasing" : "non-monotone";
  };
  s.trend_summary = "finite-window estimate (not a limit): sup_z D " + monotone(s.sup_over_z) +
                    " in r, extrapolated " + csv::num(s.sup_trend) + "; inf_z D " +
                    monotone(s.inf_over_z) + " in r, extrapolated " + csv::num(s.inf_trend);
  return s;
}

std::string density_csv_header(int n) {
  std::vector<std::string> h;
  for (int i = 1; i <= n; ++i) {
    h.push_back("center_re_" + std::to_string(i));
    h.push_back("center_im_" + std::to_string(i));
  }
  h.insert(h.end(), {"radius", "density", "std_error"});
  for (int i = 1; i <= n; ++i) {
    h.push_back("dir_re_" + std::to_string(i));
    h.push_back("dir_im_" + std::to_string(i));
  }
  return csv::join(h);
}

std::string density_csv_row(const DensityReport& r) {
  std::vector<std::string> c;
  for (Eigen::Index i = 0; i < r.center.size(); ++i) {
    c.push_back(csv::num(r.center[i].real()));
    c.push_back(csv::num(r.center[i].imag()));
  }
  c.push_back(csv::num(r.radius));
  c.push_back(csv::num(r.density));
  c.push_back(csv::num(r.mc_std_error));
  for (Eigen::Index i = 0; i < r.max_direction.size(); ++i) {
    c.push_back(csv::num(r.max_direction[i].real()));
    c.push_back(csv::num(r.max_direction[i].imag()));
  }
  return csv::join(c);
}

std::string scan_csv(const ScanReport& s) {
  std::string out = density_csv_header(s.centers.empty() ? 1 : int(s.centers.front().size())) + "\n";
  for (const auto& cell : s.cells) out += density_csv_row(cell.report) + "\n";
  return out;
}

}  // namespace fockdens
