#include "fockdens/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "fockdens/csv.hpp"
#include "fockdens/density.hpp"
#include "fockdens/errors.hpp"
#include "fockdens/focknum.hpp"
#include "fockdens/random.hpp"
#include "fockdens/scene.hpp"
#include "fockdens/sequences.hpp"
#include "fockdens/singularity.hpp"

namespace fockdens {

namespace {

double parse_real(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ValidationError("not a number: '" + s + "'");
  }
  if (used != s.size()) throw ValidationError("not a number: '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

struct Common {
  std::string scene_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> budget;

  void attach(CLI::App* app) {
    app->add_option("--scene", scene_path, "scene JSON file")->required();
    app->add_option("--out", out_dir, "directory for the CSV report");
    app->add_option("--seed", seed, "master seed (default: scene defaults, 42)");
    app->add_option("--budget", budget, "Monte Carlo budget (default: scene defaults)");
  }
};

std::string point_cells(const cvec& z) {
  std::vector<std::string> c;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    c.push_back(csv::num(z[i].real()));
    c.push_back(csv::num(z[i].imag()));
  }
  return csv::join(c);
}

std::string point_header(int n, const std::string& prefix) {
  std::vector<std::string> h;
  for (int i = 1; i <= n; ++i) {
    h.push_back(prefix + "_re_" + std::to_string(i));
    h.push_back(prefix + "_im_" + std::to_string(i));
  }
  return csv::join(h);
}

const Hypersurface& need_hypersurface(const Scene& s) {
  if (!s.hypersurface) throw ValidationError("scene: this command needs a hypersurface");
  return *s.hypersurface;
}

const Sequence1D& need_sequence(const Scene& s, const std::string& name) {
  if (s.sequences.empty()) throw ValidationError("scene: this command needs a sequence");
  if (name.empty()) {
    if (s.sequences.size() != 1) throw ValidationError("--sequence: scene has several sequences, pick one");
    return s.sequences.begin()->second;
  }
  const auto it = s.sequences.find(name);
  if (it == s.sequences.end()) throw ValidationError("--sequence: no sequence named '" + name + "'");
  return it->second;
}

cvec need_point(const std::string& text, int n, const std::string& flag) {
  const cvec z = parse_complex_list(text);
  if (z.size() != n)
    throw ValidationError(flag + ": expected " + std::to_string(n) + " components, got " + std::to_string(z.size()));
  return z;
}

}  // namespace

cvec parse_complex_list(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.empty()) throw ValidationError("empty point");
  cvec z(parts.size());
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const auto ri = split(parts[i], ':');
    if (ri.size() == 1)
      z[i] = cplx(parse_real(ri[0]), 0.0);
    else if (ri.size() == 2)
      z[i] = cplx(parse_real(ri[0]), parse_real(ri[1]));
    else
      throw ValidationError("bad complex component '" + parts[i] + "' (use re or re:im)");
  }
  return z;
}

std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& p : split(text, ',')) out.push_back(parse_real(p));
  if (out.empty()) throw ValidationError("empty list");
  return out;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"fockdens: density, singularity and sampling diagnostics for hypersurfaces in Fock spaces"};
  app.require_subcommand(1);

  Common common;
  std::string center, radii_text, method = "surface", points_file, point, target, alphas, monomial, seq_name,
                      mode = "interp", grid_file;
  std::vector<std::string> centers;
  double radius = 0.0, lambda = 0.0, max_leak = kDefaultMaxLeak, eps = 0.1;
  int degree = 0;

  auto* density = app.add_subcommand("density", "density D(W,z,r) at one center");
  common.attach(density);
  density->add_option("--center", center, "center, e.g. 0,0 or 1:2,0")->required();
  density->add_option("--radius", radius)->required();
  density->add_option("--method", method, "surface | slicing");

  auto* scan = app.add_subcommand("density-scan", "finite-window D+ / D- estimates over centers and radii");
  common.attach(scan);
  scan->add_option("--center", centers, "center (repeatable)");
  scan->add_option("--centers-file", points_file, "file with one center per line");
  scan->add_option("--radii", radii_text, "ascending radii, e.g. 2,4,8")->required();

  auto* sing = app.add_subcommand("singularity", "s_r by the Newton and/or log|T| routes");
  common.attach(sing);
  sing->add_option("--points", points_file, "file with one point per line");
  sing->add_option("--point", point, "single point");
  sing->add_option("--radius", radius)->required();
  sing->add_option("--method", method, "newton | logT | both");

  auto* flat = app.add_subcommand("flatness", "heuristic uniform-flatness diagnostics");
  common.attach(flat);
  flat->add_option("--center", center)->required();
  flat->add_option("--radius", radius)->required();

  auto* ratio = app.add_subcommand("sampling-ratio", "generalized eigenvalue bounds (m, M)");
  common.attach(ratio);
  ratio->add_option("--radius", radius, "window radius R")->required();
  ratio->add_option("--degree", degree, "truncation degree N")->required();
  ratio->add_option("--target", target, "hypersurface | ambient | seq:<name> | lattice");
  ratio->add_option("--alphas", alphas, "lattice spacings for --target lattice, e.g. 0.5,0.8");
  ratio->add_option("--max-leak", max_leak, "allowed top-degree mass outside the window");

  auto* extend = app.add_subcommand("extend", "minimum-norm extension of a monomial from W");
  common.attach(extend);
  extend->add_option("--degree", degree)->required();
  extend->add_option("--radius", radius, "radius of the sampled patch of W")->required();
  extend->add_option("--monomial", monomial, "exponents of f = z^a, e.g. 3,0")->required();
  extend->add_option("--lambda", lambda, "ridge regularization");

  auto* jensen = app.add_subcommand("jensen", "Jensen determinacy ratio for a sequence in C");
  common.attach(jensen);
  jensen->add_option("--sequence", seq_name);
  jensen->add_option("--radius", radius)->required();

  auto* product = app.add_subcommand("product-check", "split-density criteria for product sequences");
  common.attach(product);
  product->add_option("--mode", mode, "interp | samp");
  product->add_option("--r", radius)->required();
  product->add_option("--eps", eps);
  product->add_option("--grid", grid_file, "file with grid points in C^2");

  auto* seqd = app.add_subcommand("seq-density", "one-dimensional density of a sequence");
  common.attach(seqd);
  seqd->add_option("--sequence", seq_name);
  seqd->add_option("--center", center, "center in C (re or re:im)");
  seqd->add_option("--radii", radii_text)->required();

  std::vector<std::string> argv_store{"fockdens"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return 2;
  }

  try {
    const Scene scene = parse_scene(common.scene_path);
    const int n = scene.dimension;
    const std::uint64_t seed = common.seed.value_or(scene.defaults.seed);
    const int budget = common.budget.value_or(scene.defaults.budget);
    if (budget < 1) throw ValidationError("--budget must be positive");
    std::string name;
    std::string report;

    if (density->parsed()) {
      name = "density";
      UpsilonMethod m;
      if (method == "surface") m = UpsilonMethod::surface;
      else if (method == "slicing") m = UpsilonMethod::slicing;
      else throw ValidationError("--method: expected surface or slicing");
      const auto rep = density_at(need_hypersurface(scene), scene.weight, need_point(center, n, "--center"),
                                  radius, budget, seed, m);
      report = density_csv_header(n) + "\n" + density_csv_row(rep) + "\n";
    } else if (scan->parsed()) {
      name = "density-scan";
      std::vector<cvec> cs;
      for (const auto& c : centers) cs.push_back(need_point(c, n, "--center"));
      if (!points_file.empty())
        for (auto& p : read_points_file(points_file, n)) cs.push_back(p);
      const auto s = density_scan(need_hypersurface(scene), scene.weight, cs, parse_real_list(radii_text), budget, seed);
      report = scan_csv(s);
      for (std::size_t k = 0; k < s.radii.size(); ++k)
        report += "# r=" + csv::num(s.radii[k]) + " sup_z=" + csv::num(s.sup_over_z[k]) +
                  " inf_z=" + csv::num(s.inf_over_z[k]) + "\n";
      report += "# " + s.trend_summary + "\n";
    } else if (sing->parsed()) {
      name = "singularity";
      const auto& h = need_hypersurface(scene);
      std::vector<cvec> pts;
      if (!point.empty()) pts.push_back(need_point(point, n, "--point"));
      if (!points_file.empty())
        for (auto& p : read_points_file(points_file, n)) pts.push_back(p);
      if (pts.empty()) throw ValidationError("singularity: give --point or --points");
      const bool newton = method == "newton" || method == "both";
      const bool logt = method == "logT" || method == "both";
      if (!newton && !logt) throw ValidationError("--method: expected newton, logT or both");
      report = point_header(n, "point") + ",route,value,error\n";
      for (std::size_t i = 0; i < pts.size(); ++i) {
        std::vector<SingularityValue> vals;
        if (newton) vals.push_back(s_r_newton(h, pts[i], radius, budget, derive_seed(seed, i, 1)));
        if (logt) vals.push_back(s_r_logT(h, pts[i], radius, budget, derive_seed(seed, i, 2)));
        for (const auto& v : vals)
          report += point_cells(pts[i]) + "," + route_name(v.route) + "," + csv::num(v.value) + "," +
                    csv::num(v.quadrature_error) + "\n";
      }
    } else if (flat->parsed()) {
      name = "flatness";
      const auto f = flatness_check(need_hypersurface(scene), need_point(center, n, "--center"), radius, budget, seed);
      report = "epsilon_estimate,max_graph_constant,min_normal_injectivity,samples,heuristic\n" +
               csv::join({csv::num(f.epsilon_estimate), csv::num(f.max_graph_constant),
                          csv::num(f.min_normal_injectivity), std::to_string(f.samples), f.heuristic ? "1" : "0"}) +
               "\n";
    } else if (ratio->parsed()) {
      name = "sampling-ratio";
      report = "parameter,lower,upper,lower_error,upper_error,conditioning,leak,target_count\n";
      auto row = [&](const std::string& param, const SamplingRatioReport& r, double le, double ue) {
        report += csv::join({param, csv::num(r.lower), csv::num(r.upper), csv::num(le), csv::num(ue),
                             csv::num(r.conditioning), csv::num(r.leak), std::to_string(r.target_count)}) +
                  "\n";
      };
      if (target.empty()) target = scene.hypersurface ? "hypersurface" : "ambient";
      if (target == "hypersurface") {
        // Two independent surface samplings; their spread is the error column.
        const auto& h = need_hypersurface(scene);
        const auto a = sampling_ratio_bounds(h, scene.weight, radius, degree, budget, derive_seed(seed, 1), max_leak);
        const auto b = sampling_ratio_bounds(h, scene.weight, radius, degree, budget, derive_seed(seed, 2), max_leak);
        SamplingRatioReport mean = a;
        mean.lower = 0.5 * (a.lower + b.lower);
        mean.upper = 0.5 * (a.upper + b.upper);
        row("hypersurface", mean, 0.5 * std::abs(a.lower - b.lower), 0.5 * std::abs(a.upper - b.upper));
      } else if (target == "ambient") {
        row("ambient", sampling_ratio_ambient(scene.weight, radius, degree, max_leak), 0.0, 0.0);
      } else if (target == "lattice") {
        if (n != 1) throw ValidationError("--target lattice needs a one-dimensional scene");
        if (alphas.empty()) throw ValidationError("--target lattice needs --alphas");
        for (double a : parse_real_list(alphas)) {
          std::vector<cvec> pts;
          for (const auto& p : lattice_patch(a, radius).points) pts.push_back(cvec::Constant(1, p));
          row(csv::num(a), sampling_ratio_bounds(pts, scene.weight, radius, degree, max_leak), 0.0, 0.0);
        }
      } else if (target.rfind("seq:", 0) == 0) {
        if (n != 1) throw ValidationError("--target seq: needs a one-dimensional scene");
        const auto& s = need_sequence(scene, target.substr(4));
        std::vector<cvec> pts;
        for (const auto& p : s.points) pts.push_back(cvec::Constant(1, p));
        row(target, sampling_ratio_bounds(pts, scene.weight, radius, degree, max_leak), 0.0, 0.0);
      } else {
        throw ValidationError("--target: expected hypersurface, ambient, lattice or seq:<name>");
      }
    } else if (extend->parsed()) {
      name = "extend";
      const auto& h = need_hypersurface(scene);
      MultiIndex alpha;
      for (double a : parse_real_list(monomial)) {
        if (a < 0 || a != std::floor(a)) throw ValidationError("--monomial: exponents must be non-negative integers");
        alpha.push_back(static_cast<int>(a));
      }
      if (static_cast<int>(alpha.size()) != n) throw ValidationError("--monomial: need one exponent per variable");
      const auto set = sample_surface_in_ball(h, cvec::Zero(n), radius, budget, seed);
      const auto vs = value_samples(set, [&](const cvec& z) {
        cplx v(1.0);
        for (int i = 0; i < n; ++i) v *= std::pow(z[i], alpha[i]);
        return v;
      });
      const auto e = min_norm_extension(vs, scene.weight, degree, lambda);
      report = "# ambient_norm2=" + csv::num(e.ambient_norm2) + " surface_norm2=" + csv::num(e.surface_norm2) +
               " ratio=" + csv::num(e.ratio) + " residual=" + csv::num(e.residual) +
               " samples=" + std::to_string(vs.size()) + "\n";
      report += "# coefficients in the orthonormal basis e_alpha of the weight's diagonal coordinates\n";
      report += "alpha,re,im\n";
      for (std::size_t k = 0; k < e.indices.size(); ++k) {
        std::string a;
        for (std::size_t i = 0; i < e.indices[k].size(); ++i) a += (i ? " " : "") + std::to_string(e.indices[k][i]);
        report += a + "," + csv::num(e.coefficients[k].real()) + "," + csv::num(e.coefficients[k].imag()) + "\n";
      }
    } else if (jensen->parsed()) {
      name = "jensen";
      if (n != 1) throw ValidationError("jensen: needs a one-dimensional scene");
      const auto& s = need_sequence(scene, seq_name);
      const auto j = jensen_ratio(s.points, scene.weight, radius);
      report = "# Laplacian read as the real Laplacian; no threshold is asserted\n";
      report += "radius,zeros,lhs,rhs,ratio,std_error\n" +
                csv::join({csv::num(j.radius), std::to_string(s.size()), csv::num(j.lhs), csv::num(j.rhs),
                           csv::num(j.ratio), "0"}) +
                "\n";
    } else if (product->parsed()) {
      name = "product-check";
      if (!scene.product_sequence) throw ValidationError("scene: product-check needs product_sequence");
      const auto& ps = *scene.product_sequence;
      std::vector<cvec> grid;
      if (!grid_file.empty()) {
        grid = read_points_file(grid_file, 2);
      } else {
        // Square grids of step r around Γ (in z) and around each Λ_j (in w).
        auto extent = [&](const std::vector<const Sequence1D*>& seqs) {
          double e = 0.0;
          for (const auto* s : seqs)
            for (const auto& p : s->points) e = std::max({e, std::abs(p.real()), std::abs(p.imag())});
          return e + radius;
        };
        std::vector<const Sequence1D*> ls;
        for (const auto& l : ps.lambdas) ls.push_back(&l);
        const double ez = extent({&ps.gamma}), ew = extent(ls);
        const int kz = static_cast<int>(std::ceil(ez / radius)), kw = static_cast<int>(std::ceil(ew / radius));
        for (int a = -kz; a <= kz; ++a)
          for (int b = -kz; b <= kz; ++b)
            for (int c = -kw; c <= kw; ++c)
              for (int d = -kw; d <= kw; ++d) {
                cvec g(2);
                g << cplx(a * radius, b * radius), cplx(c * radius, d * radius);
                grid.push_back(g);
              }
      }
      CriterionReport r;
      if (mode == "interp") r = product_interp_check(ps, scene.weight, radius, eps, grid);
      else if (mode == "samp") r = product_samp_check(ps, scene.weight, radius, eps, grid);
      else throw ValidationError("--mode: expected interp or samp");
      report = criterion_csv(r);
    } else if (seqd->parsed()) {
      name = "seq-density";
      if (n != 1) throw ValidationError("seq-density: needs a one-dimensional scene");
      const auto& s = need_sequence(scene, seq_name);
      const cplx c = center.empty() ? cplx(0.0) : need_point(center, 1, "--center")[0];
      report = "# real-Laplacian convention: count / (4 q pi R^2)\n";
      report += "center_re,center_im,radius,count,density,std_error\n";
      for (double rad : parse_real_list(radii_text)) {
        int count = 0;
        for (const auto& p : s.points)
          if (std::abs(p - c) < rad) ++count;
        report += csv::join({csv::num(c.real()), csv::num(c.imag()), csv::num(rad), std::to_string(count),
                             csv::num(density_1d(s, scene.weight, c, rad)), "0"}) +
                  "\n";
      }
    }

    out << report;
    if (!common.out_dir.empty()) {
      std::filesystem::create_directories(common.out_dir);
      const auto path = std::filesystem::path(common.out_dir) / (name + ".csv");
      std::ofstream f(path);
      if (!f) throw ValidationError("--out: cannot write " + path.string());
      f << report;
    }
    return 0;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace fockdens
