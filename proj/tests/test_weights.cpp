#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fockdens/random.hpp"
#include "fockdens/weights.hpp"

using namespace fockdens;

namespace {

const cplx I(0.0, 1.0);

cmat mat2(cplx a, cplx b, cplx c, cplx d) {
  cmat m(2, 2);
  m << a, b, c, d;
  return m;
}

cvec vec2(cplx a, cplx b) {
  cvec v(2);
  v << a, b;
  return v;
}

bool same_matrix(const cmat& a, const cmat& b, double tol) { return (a - b).cwiseAbs().maxCoeff() <= tol; }

}  // namespace

TEST_CASE("levi_form examples") {
  CHECK(same_matrix(levi_form(Weight::euclidean(3), cvec::Ones(3)).matrix(), cmat::Identity(3, 3), 0.0));

  MPoly h = MPoly::coordinate(2, 0) * MPoly::coordinate(2, 1) * cplx(0.3, 1.0);
  const Weight w = Weight::quadratic(HForm(mat2(2, 0, 0, 3)), h);
  CHECK(same_matrix(levi_form(w, vec2(1.0, I)).matrix(), mat2(2, 0, 0, 3), 0.0));
}

TEST_CASE("weight |z|^2 + |z+w|^2 has Levi form [[2,1],[1,1]]") {
  // Expand |z|^2 + |z+w|^2 directly and compare with the quadratic form.
  const Weight w = Weight::quadratic(HForm(mat2(2, 1, 1, 1)));
  Rng rng(1);
  for (int k = 0; k < 20; ++k) {
    const cvec z = complex_gaussian(rng, 2);
    const double direct = std::norm(z[0]) + std::norm(z[0] + z[1]);
    CHECK(w(z) == doctest::Approx(direct).epsilon(1e-12));
  }
  // Real Laplacian in each variable by finite differences: Δ_{z_i} φ = 4 Q_ii.
  const cvec z0 = vec2(0.3, -0.2);
  const double h = 1e-4;
  for (int i = 0; i < 2; ++i) {
    const cvec ex = cvec::Unit(2, i) * h, ey = cvec::Unit(2, i) * (I * h);
    const double lap = (w(cvec(z0 + ex)) + w(cvec(z0 - ex)) + w(cvec(z0 + ey)) + w(cvec(z0 - ey)) - 4 * w(z0)) / (h * h);
    CHECK(lap == doctest::Approx(4.0 * w.levi().matrix()(i, i).real()).epsilon(1e-5));
  }
}

TEST_CASE("ball_average_phi examples") {
  CHECK(ball_average_phi(Weight::euclidean(1), cvec::Zero(1), 1.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK_THROWS_AS(ball_average_phi(Weight::euclidean(1), cvec::Zero(1), 0.0), ValidationError);
  CHECK_THROWS_AS(ball_average_phi(Weight::euclidean(1), cvec::Zero(1), -1.0), ValidationError);

  // Pluriharmonic part averages to its center value.
  const MPoly h = MPoly::coordinate(2, 0);
  const Weight w = Weight::quadratic(HForm(cmat(cmat::Identity(2, 2) * 1e-3)), h);
  const cvec z = vec2(cplx(0.7, 0.1), cplx(-0.4, 2.0));
  const double r = 1.5;
  CHECK(ball_average_phi(w, z, r) - w.levi().trace() * r * r / 3.0 ==
        doctest::Approx(w(z)).epsilon(1e-12));
}

TEST_CASE("ball_average_phi against Monte Carlo") {
  const Weight w = Weight::euclidean(2);
  const cvec z = vec2(1.0, 1.0);
  const double r = 2.0;
  Rng rng(99);
  const int samples = 1000000;
  double sum = 0.0;
  for (int k = 0; k < samples; ++k) sum += w(cvec(z + uniform_in_ball(rng, 2, r)));
  const double mc_kappa = (sum / samples - w(z)) / 2.0;
  const double kappa = ball_mean_coordinate_square(2, r);
  CHECK(std::abs(mc_kappa - kappa) / kappa <= 1e-2);
  CHECK(ball_average_phi(w, z, r) == doctest::Approx(w(z) + 2.0 * kappa).epsilon(1e-14));
}

TEST_CASE("comparability_bounds examples") {
  std::vector<cvec> region{cvec::Zero(2), vec2(1.0, 2.0)};
  auto c = comparability_bounds(Weight::euclidean(2), region);
  CHECK(c.c_lower == doctest::Approx(1.0));
  CHECK(c.c_upper == doctest::Approx(1.0));
  c = comparability_bounds(Weight::quadratic(HForm(mat2(2, 0, 0, 3))), region);
  CHECK(c.c_lower == doctest::Approx(2.0));
  CHECK(c.c_upper == doctest::Approx(3.0));
  c = comparability_bounds(Weight::quadratic(HForm(mat2(2, 1, 1, 1))), region);
  CHECK(c.c_lower == doctest::Approx((3.0 - std::sqrt(5.0)) / 2.0).epsilon(1e-12));
  CHECK(c.c_upper == doctest::Approx((3.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-12));
  CHECK(c.sample_count == 2);
}

TEST_CASE("quadratic weight validation") {
  CHECK_THROWS_WITH_AS(Weight::quadratic(HForm(mat2(1, 0, 0, -1))), doctest::Contains("weight.Q"), ValidationError);
  CHECK_THROWS_WITH_AS(Weight::quadratic(HForm(mat2(1, 0, 0, 1)), MPoly(3)), doctest::Contains("weight.h"),
                       ValidationError);
}

TEST_CASE("Levi form is constant and pluriharmonic parts leave averages' offsets unchanged") {
  Rng rng(7);
  const Weight base = Weight::quadratic(HForm(mat2(2, cplx(0.5, 0.2), cplx(0.5, -0.2), 1.5)));
  MPoly h = MPoly::coordinate(2, 0) * MPoly::coordinate(2, 0) * cplx(0.4, -0.3) + MPoly::coordinate(2, 1) * 2.0;
  const Weight shifted = base.with_pluriharmonic(h);
  const cmat q0 = levi_form(base, cvec::Zero(2)).matrix();
  for (int k = 0; k < 100; ++k) {
    const cvec z = complex_gaussian(rng, 2) * 3.0;
    CHECK(levi_form(base, z).matrix() == q0);
    const double r = 0.5 + uniform01(rng);
    const double a = ball_average_phi(base, z, r) - base(z);
    const double b = ball_average_phi(shifted, z, r) - shifted(z);
    CHECK(std::abs(a - b) <= 1e-9);
  }
}

TEST_CASE("|phi_r - phi| is bounded by c_upper r^2") {
  const Weight w = Weight::quadratic(HForm(mat2(2, 1, 1, 1)));
  std::vector<cvec> grid;
  for (int a = -3; a <= 3; ++a)
    for (int b = -3; b <= 3; ++b) grid.push_back(vec2(cplx(a, 0.5 * b), cplx(0.3 * a, b)));
  const auto c = comparability_bounds(w, grid);
  for (const auto& z : grid)
    for (double r : {0.5, 1.0, 4.0}) CHECK(std::abs(ball_average_phi(w, z, r) - w(z)) <= c.c_upper * r * r);
}

TEST_CASE("pulled_back weight is phi composed with U") {
  Rng rng(2);
  const Weight w = Weight::quadratic(HForm(mat2(2, 1, 1, 1)), MPoly::coordinate(2, 1) * cplx(0.0, 1.0));
  const cmat u = random_unitary(rng, 2);
  const Weight p = w.pulled_back(u);
  for (int k = 0; k < 10; ++k) {
    const cvec z = complex_gaussian(rng, 2);
    CHECK(p(z) == doctest::Approx(w(cvec(u * z))).epsilon(1e-12));
  }
}
