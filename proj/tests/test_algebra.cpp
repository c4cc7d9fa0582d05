#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "fockdens/algebra.hpp"
#include "fockdens/random.hpp"
#include "fockdens/roots.hpp"

using namespace fockdens;

namespace {

const cplx I(0.0, 1.0);

MPoly random_poly(Rng& rng, int n, int degree) {
  MPoly p(n);
  for (int k = 0; k < 12; ++k) {
    MultiIndex a(n, 0);
    int left = static_cast<int>(uniform01(rng) * (degree + 1));
    for (int i = 0; i < n && left > 0; ++i) {
      const int e = (i == n - 1) ? left : static_cast<int>(uniform01(rng) * (left + 1));
      a[i] = e;
      left -= e;
    }
    p.add_term(a, complex_gaussian(rng, 1)[0]);
  }
  return p;
}

cvec vec2(cplx a, cplx b) {
  cvec v(2);
  v << a, b;
  return v;
}

/// Multisets of complex numbers agree within tol after greedy matching.
bool same_roots(std::vector<cplx> a, std::vector<cplx> b, double tol) {
  if (a.size() != b.size()) return false;
  for (const auto& x : a) {
    auto it = std::min_element(b.begin(), b.end(),
                               [&](cplx p, cplx q) { return std::abs(p - x) < std::abs(q - x); });
    if (std::abs(*it - x) > tol) return false;
    b.erase(it);
  }
  return true;
}

}  // namespace

TEST_CASE("eval_poly on hand-computed monomials") {
  const MPoly z1 = MPoly::coordinate(2, 0), z2 = MPoly::coordinate(2, 1);
  auto v = eval_poly(z2, vec2(3.0, 5.0));
  CHECK(std::abs(v.value - cplx(5.0)) < 1e-15);
  CHECK(std::abs(v.gradient[0]) < 1e-15);
  CHECK(std::abs(v.gradient[1] - cplx(1.0)) < 1e-15);

  v = eval_poly(z1 * z2, vec2(I, 2.0));
  CHECK(std::abs(v.value - 2.0 * I) < 1e-15);
  CHECK(std::abs(v.gradient[0] - cplx(2.0)) < 1e-15);
  CHECK(std::abs(v.gradient[1] - I) < 1e-15);

  CHECK_THROWS_WITH_AS(eval_poly(z1, cvec(cvec::Zero(3))), doctest::Contains("dimension"), ValidationError);
}

TEST_CASE("gradient agrees with central differences") {
  Rng rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const MPoly p = random_poly(rng, 2, 4);
    const cvec z = complex_gaussian(rng, 2);
    const auto v = eval_poly(p, z);
    const double h = 1e-5;
    for (int i = 0; i < 2; ++i) {
      const cvec e = cvec::Unit(2, i) * h;
      const cplx fd = (eval_poly(p, cvec(z + e)).value - eval_poly(p, cvec(z - e)).value) / (2.0 * h);
      CHECK(std::abs(fd - v.gradient[i]) <= 1e-6 * std::max(1.0, std::abs(v.gradient[i])));
    }
  }
}

TEST_CASE("MultiPoly stores no zeros and has degree -1 when empty") {
  MPoly p(2);
  CHECK(p.degree() == -1);
  p.add_term({1, 0}, 2.0);
  p.add_term({1, 0}, -2.0);
  CHECK(p.terms().empty());
  CHECK(p.is_zero());
  const MPoly q = MPoly::coordinate(2, 0) * MPoly::coordinate(2, 1) + MPoly::constant(2, 1.0);
  CHECK(q.degree() == 2);
  CHECK((q - q).is_zero());
}

TEST_CASE("restrict_to_line") {
  const MPoly z1 = MPoly::coordinate(2, 0), z2 = MPoly::coordinate(2, 1);
  auto q = restrict_to_line(z2, cvec(cvec::Zero(2)), cvec(cvec::Unit(2, 1)));
  REQUIRE(q.degree() == 1);
  CHECK(std::abs(q.coefficients()[0]) < 1e-15);
  CHECK(std::abs(q.coefficients()[1] - cplx(1.0)) < 1e-15);

  q = restrict_to_line(z1 * z1 + z2 * z2, vec2(1.0, 0.0), vec2(0.0, 1.0));
  REQUIRE(q.degree() == 2);
  CHECK(std::abs(q.coefficients()[0] - cplx(1.0)) < 1e-15);
  CHECK(std::abs(q.coefficients()[1]) < 1e-15);
  CHECK(std::abs(q.coefficients()[2] - cplx(1.0)) < 1e-15);

  CHECK_THROWS_WITH_AS(restrict_to_line(z2, cvec(cvec::Zero(2)), cvec(cvec::Zero(2))),
                       doctest::Contains("degenerate direction"), ValidationError);

  Rng rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    const MPoly p = random_poly(rng, 3, 5);
    const cvec a = complex_gaussian(rng, 3), v = complex_gaussian(rng, 3);
    const auto r = restrict_to_line(p, a, v);
    CHECK(r.degree() <= p.degree());
    for (int k = 0; k < 20; ++k) {
      const cplx t = complex_gaussian(rng, 1)[0];
      const cplx direct = eval_poly(p, cvec(a + t * v)).value;
      CHECK(std::abs(r(t) - direct) <= 1e-10 * (1.0 + std::abs(direct)));
    }
  }
}

TEST_CASE("compose_linear is evaluation at M z") {
  Rng rng(3);
  const MPoly p = random_poly(rng, 2, 4);
  const cmat m = random_unitary(rng, 2) * 1.3;
  const MPoly q = compose_linear(p, m);
  for (int k = 0; k < 10; ++k) {
    const cvec z = complex_gaussian(rng, 2);
    const cplx a = eval_poly(q, z).value, b = eval_poly(p, cvec(m * z)).value;
    CHECK(std::abs(a - b) <= 1e-11 * (1.0 + std::abs(b)));
  }
}

TEST_CASE("poly_roots examples") {
  auto r = poly_roots(UPoly({1.0, 0.0, 1.0}));
  REQUIRE(r.size() == 2);
  CHECK(same_roots({r[0].value, r[1].value}, {I, -I}, 1e-12));
  CHECK(r[0].multiplicity == 1);

  r = poly_roots(UPoly({4.0, -4.0, 1.0}));
  REQUIRE(r.size() == 1);
  CHECK(std::abs(r[0].value - cplx(2.0)) < 1e-6);
  CHECK(r[0].multiplicity == 2);

  CHECK_THROWS_WITH_AS(poly_roots(UPoly()), doctest::Contains("zero polynomial"), ValidationError);
}

TEST_CASE("poly_roots inverts from_roots up to degree 12") {
  Rng rng(8);
  for (int deg = 1; deg <= 12; ++deg) {
    std::vector<cplx> roots;
    for (int k = 0; k < deg; ++k) roots.push_back(complex_gaussian(rng, 1)[0]);
    const auto q = UPoly::from_roots(roots, cplx(0.7, -0.2));
    std::vector<cplx> got;
    int total = 0;
    for (const auto& r : poly_roots(q)) {
      total += r.multiplicity;
      for (int m = 0; m < r.multiplicity; ++m) got.push_back(r.value);
      CHECK(std::abs(q(r.value)) <= 1e-8 * q.scale());
    }
    CHECK(total == deg);
    CHECK(same_roots(got, roots, 1e-6));
  }
}

TEST_CASE("max_gen_eig examples") {
  const HForm b = HForm(cmat(cvec(vec2(1.0, 2.0)).asDiagonal()));
  const HForm a = HForm(cmat(cvec(vec2(3.0, 1.0)).asDiagonal()));
  const auto r = max_gen_eig(a, b);
  CHECK(r.value == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(std::abs(r.direction[0]) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(max_gen_eig(b, b).value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(max_gen_eig(HForm::zero(2), b).value) < 1e-14);
  CHECK_THROWS_WITH_AS(max_gen_eig(a, HForm::zero(2)), doctest::Contains("indefinite denominator"), NumericalError);
}

TEST_CASE("Hermitian pairing is real and direction realizes the maximum") {
  Rng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    cmat g(3, 3);
    for (int j = 0; j < 3; ++j) g.col(j) = complex_gaussian(rng, 3);
    const HForm h(g);
    const cvec v = complex_gaussian(rng, 3);
    cplx raw = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) raw += h.matrix()(i, j) * v[i] * std::conj(v[j]);
    CHECK(std::abs(raw.imag()) <= 1e-12 * (1.0 + std::abs(raw)));
    CHECK(raw.real() == doctest::Approx(h.pairing(v)).epsilon(1e-12));

    const HForm a = HForm::outer(complex_gaussian(rng, 3)) + HForm::outer(complex_gaussian(rng, 3));
    const HForm b = HForm(cmat(g * g.adjoint() + cmat::Identity(3, 3)));
    const auto r = max_gen_eig(a, b);
    CHECK(a.pairing(r.direction) / b.pairing(r.direction) == doctest::Approx(r.value).epsilon(1e-10));
  }
}

TEST_CASE("max_gen_eig invariances") {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    cmat g(3, 3), k(3, 3);
    for (int j = 0; j < 3; ++j) {
      g.col(j) = complex_gaussian(rng, 3);
      k.col(j) = complex_gaussian(rng, 3);
    }
    const HForm a(cmat(g * g.adjoint()));
    const HForm b(cmat(k * k.adjoint() + cmat::Identity(3, 3)));
    const double ref = max_gen_eig(a, b).value;
    HForm a2 = a, b2 = b;
    a2 *= 3.7;
    b2 *= 3.7;
    CHECK(max_gen_eig(a2, b2).value == doctest::Approx(ref).epsilon(1e-10));
    const cmat u = random_unitary(rng, 3);
    CHECK(max_gen_eig(a.congruence(u), b.congruence(u)).value == doctest::Approx(ref).epsilon(1e-9));
  }
}
