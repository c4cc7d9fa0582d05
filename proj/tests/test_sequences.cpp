#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "fockdens/density.hpp"
#include "fockdens/random.hpp"
#include "fockdens/sequences.hpp"

using namespace fockdens;

namespace {

constexpr double kPi = std::numbers::pi;

cvec vec2(cplx a, cplx b) {
  cvec v(2);
  v << a, b;
  return v;
}

Weight q_weight(cplx a, cplx b, cplx c, cplx d) {
  cmat m(2, 2);
  m << a, b, c, d;
  return Weight::quadratic(HForm(m));
}

std::vector<cvec> grid_around(double extent, int steps) {
  std::vector<cvec> g;
  for (int a = -steps; a <= steps; ++a)
    for (int b = -steps; b <= steps; ++b) g.push_back(vec2(cplx(extent * a / steps, 0.0), cplx(0.0, extent * b / steps)));
  return g;
}

ProductSequence with_lambdas(const Sequence1D& gamma, const Sequence1D& lambda) {
  return ProductSequence(gamma, std::vector<Sequence1D>(gamma.size(), lambda));
}

}  // namespace

TEST_CASE("Sequence1D validation") {
  CHECK_THROWS_AS(Sequence1D({1.0, 2.0, 1.0}), ValidationError);
  CHECK_THROWS_AS(Sequence1D({cplx(std::nan(""), 0.0)}), ValidationError);
  CHECK_THROWS_AS(ProductSequence(Sequence1D({0.0, 1.0}), {Sequence1D({0.0})}), ValidationError);
}

TEST_CASE("separation") {
  CHECK(separation(Sequence1D({0.0, 1.0, 3.0})) == doctest::Approx(1.0));
  CHECK(separation(lattice_patch(0.7, 5.0)) == doctest::Approx(0.7).epsilon(1e-12));
  CHECK_THROWS_AS(separation(Sequence1D({0.0})), ValidationError);

  Rng rng(6);
  std::vector<cplx> pts;
  for (int k = 0; k < 500; ++k) pts.push_back(complex_gaussian(rng, 1)[0] * 10.0);
  double brute = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) brute = std::min(brute, std::abs(pts[i] - pts[j]));
  CHECK(separation(Sequence1D(pts)) == brute);
}

TEST_CASE("density_1d") {
  const Weight w = Weight::euclidean(1);
  CHECK(density_1d(Sequence1D(), w, 0.0, 3.0) == 0.0);

  const double alpha = 0.5, radius = 20 * alpha;
  const double coarse = density_1d(lattice_patch(alpha, 2 * radius), w, 0.0, radius);
  const double fine = density_1d(lattice_patch(alpha / 2, 2 * radius), w, 0.0, radius);
  CHECK(fine / coarse == doctest::Approx(4.0).epsilon(0.1));

  // Denominator ∫_{D(z,R)} Δ|z|^2 = 4πR^2, by radial quadrature of Δφ = 4.
  const double r = 2.5;
  const double denom = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      [](double rho) { return 4.0 * 2.0 * kPi * rho; }, 0.0, r);
  CHECK(density_1d(Sequence1D({0.1}), w, 0.0, r) == doctest::Approx(1.0 / denom).epsilon(1e-12));
  // weight q|z|^2 scales the denominator by q
  const Weight w3 = Weight::quadratic(HForm(cmat::Constant(1, 1, cplx(3.0))));
  CHECK(density_1d(Sequence1D({0.1}), w3, 0.0, r) == doctest::Approx(1.0 / (3.0 * denom)).epsilon(1e-12));
}

TEST_CASE("split weight has a constant right-hand side") {
  const auto grid = grid_around(2.0, 3);
  const auto rep = product_interp_check(with_lambdas(lattice_patch(1.0, 3.0), lattice_patch(2.0, 12.0)),
                                        q_weight(2.0, 0.0, 0.0, 3.0), 1.0, 0.1, grid);
  REQUIRE(rep.rows.size() == grid.size());
  for (const auto& row : rep.rows) {
    CHECK(row.rhs == doctest::Approx(1.0 / 16.0).epsilon(1e-14));  // det/(4Q11 · 4Q22)
    CHECK(row.rhs_ddbar == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("the coupled weight violates the split inequality for Gamma = {0}") {
  const Weight w = q_weight(2.0, 1.0, 1.0, 1.0);
  const ProductSequence ps = with_lambdas(Sequence1D({0.0}), lattice_patch(3.0, 20.0));
  const auto rep = product_interp_check(ps, w, 1.0, 0.1, grid_around(1.0, 2));
  CHECK(rep.lambda_condition);
  CHECK_FALSE(rep.split_condition);
  CHECK(rep.verdict == Verdict::violated);
  CHECK(rep.caveat.find("sufficient condition only") != std::string::npos);
  CHECK(rep.caveat.find("does not mean") != std::string::npos);
  // at the origin: lhs = 1/(r^2 · 4 · 2), rhs = 1/(16 · 2 · 1)
  const auto& origin = *std::find_if(rep.rows.begin(), rep.rows.end(), [](const auto& r) { return r.point.norm() == 0.0; });
  CHECK(origin.lhs == doctest::Approx(1.0 / 8.0));
  CHECK(origin.rhs == doctest::Approx(1.0 / 32.0));
  CHECK(criterion_csv(rep).find("does not mean") != std::string::npos);

  CHECK_THROWS_WITH_AS(q_weight(1.0, 1.0, 1.0, 1.0), doctest::Contains("weight.Q"), ValidationError);
  CHECK_THROWS_AS(product_interp_check(ps, Weight::euclidean(3), 1.0, 0.1, grid_around(1.0, 1)), ValidationError);
}

TEST_CASE("empty Gamma") {
  const ProductSequence ps;
  const auto grid = grid_around(1.0, 2);
  const auto i = product_interp_check(ps, Weight::euclidean(2), 1.0, 0.1, grid);
  CHECK(i.verdict == Verdict::satisfied);
  for (const auto& row : i.rows) CHECK(row.lhs == 0.0);
  CHECK(product_samp_check(ps, Weight::euclidean(2), 1.0, 0.1, grid).verdict == Verdict::violated);
}

TEST_CASE("sampling verdict flips as the lattice gets denser") {
  const Weight w = Weight::euclidean(2);
  const auto grid = grid_around(1.0, 2);
  const Sequence1D dense_lambda = lattice_patch(0.3, 8.0);
  std::vector<Verdict> seen;
  for (double alpha : {4.0, 2.0, 1.0, 0.5, 0.25}) {
    const auto ps = with_lambdas(lattice_patch(alpha, 4.0), dense_lambda);
    const auto s = product_samp_check(ps, w, 1.0, 0.1, grid);
    const auto i = product_interp_check(ps, w, 1.0, 0.1, grid);
    CHECK_FALSE((s.verdict == Verdict::satisfied && i.verdict == Verdict::satisfied));
    seen.push_back(s.verdict);
  }
  CHECK(seen.front() == Verdict::violated);
  CHECK(seen.back() == Verdict::satisfied);
  // once satisfied, stays satisfied
  for (std::size_t k = 1; k < seen.size(); ++k)
    if (seen[k - 1] == Verdict::satisfied) CHECK(seen[k] == Verdict::satisfied);
}

TEST_CASE("adding points to Gamma never lowers a margin") {
  const Weight w = q_weight(2.0, 1.0, 1.0, 1.0);
  const auto grid = grid_around(2.0, 3);
  Rng rng(9);
  std::vector<cplx> pts;
  const Sequence1D lambda = lattice_patch(1.0, 10.0);
  std::vector<double> prev;
  for (int step = 0; step < 6; ++step) {
    pts.push_back(complex_gaussian(rng, 1)[0] * 1.5);
    const Sequence1D g(pts);
    const auto rep = product_samp_check(with_lambdas(g, lambda), w, 1.0, 0.0, grid);
    const auto rep_i = product_interp_check(with_lambdas(g, lambda), w, 1.0, 0.0, grid);
    for (std::size_t k = 0; k < rep.rows.size(); ++k) CHECK(rep.rows[k].margin == rep_i.rows[k].margin);
    if (!prev.empty())
      for (std::size_t k = 0; k < rep.rows.size(); ++k) CHECK(rep.rows[k].margin >= prev[k]);
    prev.clear();
    for (const auto& row : rep.rows) prev.push_back(row.margin);
  }
}

TEST_CASE("gamma_cross_c_density") {
  const Weight e = Weight::euclidean(2);
  // one line through the center: (π/2) π r^2 / (π^2 r^4 / 2) = 1/r^2
  CHECK(gamma_cross_c_density(Sequence1D({0.3}), e, vec2(0.3, 1.0), 2.0) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(gamma_cross_c_density(Sequence1D({5.0}), e, vec2(0.0, 0.0), 2.0) == 0.0);
  // Q = [[2,1],[1,1]]: Q_22 / det = 1
  CHECK(gamma_cross_c_density(Sequence1D({0.0}), q_weight(2.0, 1.0, 1.0, 1.0), vec2(0.0, 0.0), 1.0) ==
        doctest::Approx(1.0).epsilon(1e-14));
  CHECK(gamma_cross_c_density(Sequence1D({0.0}), q_weight(3.0, 1.0, 1.0, 1.0), vec2(0.0, 0.0), 1.0) ==
        doctest::Approx(0.5).epsilon(1e-14));

  const Sequence1D g({0.0, 0.8});
  const cvec x = vec2(0.2, 0.5);
  const auto d = density_at(product_hypersurface(g, 2), e, x, 1.0, 20000, 3);
  CHECK(std::abs(d.density - gamma_cross_c_density(g, e, x, 1.0)) <= 3.0 * d.mc_std_error);
}
