#include "doctest.h"

#include "crk/bernstein.hpp"

#include <cmath>
#include <random>

using namespace crk;

namespace {

BPoly random_poly(int n, std::mt19937& gen) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  BPoly p(n);
  for (double& c : p.coeffs()) c = d(gen);
  return p;
}

Bary random_point(std::mt19937& gen) {
  std::uniform_real_distribution<double> d(0.0, 1.0);
  double x = d(gen), y = d(gen);
  if (x + y > 1.0) {
    x = 1.0 - x;
    y = 1.0 - y;
  }
  return {1.0 - x - y, x, y};
}

}  // namespace

TEST_CASE("index layout") {
  CHECK(bdim(0) == 1);
  CHECK(bdim(3) == 10);
  CHECK(bindex(0, 0) == 0);
  CHECK(bindex(1, 0) == 1);
  CHECK(bindex(0, 1) == 2);
  CHECK(bindex(0, 3) == 9);
}

TEST_CASE("constants and linear forms") {
  const Bary l{0.2, 0.3, 0.5};
  CHECK(BPoly::constant(4, 2.5).eval(l) == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(BPoly::linear(1.0, 2.0, 3.0).eval(l) == doctest::Approx(0.2 + 0.6 + 1.5));
  CHECK(BPoly::lambda(2).eval(l) == 0.5);
}

TEST_CASE("product, elevation and sums are pointwise") {
  std::mt19937 gen(3);
  for (int n = 0; n <= 4; ++n)
    for (int m = 0; m <= 3; ++m) {
      const BPoly p = random_poly(n, gen), q = random_poly(m, gen);
      const BPoly pq = p * q;
      const BPoly pe = p.elevate(n + 2);
      CHECK(pq.degree() == n + m);
      for (int t = 0; t < 5; ++t) {
        const Bary l = random_point(gen);
        CHECK(pq.eval(l) == doctest::Approx(p.eval(l) * q.eval(l)).epsilon(1e-13));
        CHECK(pe.eval(l) == doctest::Approx(p.eval(l)).epsilon(1e-13));
        CHECK((p + p).eval(l) == doctest::Approx(2.0 * p.eval(l)).epsilon(1e-13));
      }
    }
  CHECK_THROWS(BPoly(2) + BPoly(3));
}

TEST_CASE("derivatives give the physical gradient on the reference triangle") {
  std::mt19937 gen(5);
  const BPoly p = random_poly(5, gen);
  const BPoly d0 = p.deriv(0), d1 = p.deriv(1), d2 = p.deriv(2);
  for (int t = 0; t < 10; ++t) {
    const Bary l = random_point(gen);
    const double h = 1e-6;
    auto at = [&](double x, double y) { return p.eval({1.0 - x - y, x, y}); };
    const double fx = (at(l[1] + h, l[2]) - at(l[1] - h, l[2])) / (2 * h);
    const double fy = (at(l[1], l[2] + h) - at(l[1], l[2] - h)) / (2 * h);
    // grad l0 = (-1,-1), grad l1 = (1,0), grad l2 = (0,1)
    CHECK(d1.eval(l) - d0.eval(l) == doctest::Approx(fx).epsilon(1e-7));
    CHECK(d2.eval(l) - d0.eval(l) == doctest::Approx(fy).epsilon(1e-7));
  }
}

TEST_CASE("euler identity for homogeneous forms") {
  std::mt19937 gen(9);
  const BPoly p = random_poly(4, gen);
  const Bary l = random_point(gen);
  const double lhs = l[0] * p.deriv(0).eval(l) + l[1] * p.deriv(1).eval(l) +
                     l[2] * p.deriv(2).eval(l);
  CHECK(lhs == doctest::Approx(4.0 * p.eval(l)).epsilon(1e-13));
}

TEST_CASE("interpolation and degree reduction") {
  std::mt19937 gen(11);
  const BPoly p = random_poly(3, gen);
  std::vector<double> vals;
  for (const Bary& l : bernstein_lattice(3)) vals.push_back(p.eval(l));
  const BPoly q = bernstein_interpolate(3, vals);
  for (int i = 0; i < bdim(3); ++i) CHECK(q[i] == doctest::Approx(p[i]).epsilon(1e-12));

  double err = 1.0;
  const BPoly r = reduce_degree(p.elevate(6), 3, &err);
  CHECK(err <= 1e-13);
  for (int i = 0; i < bdim(3); ++i) CHECK(std::abs(r[i] - p[i]) <= 1e-12);

  const BPoly genuine = random_poly(4, gen);
  reduce_degree(genuine, 3, &err);
  CHECK(err > 1e-6);
}

TEST_CASE("jacobi composition matches scalar evaluation") {
  std::mt19937 gen(13);
  const BPoly s = BPoly::linear(1.0, 1.0, 1.0);
  // 1 - 2 l1 written homogeneously
  const BPoly t = BPoly::linear(1.0, -1.0, 1.0);
  for (int n = 0; n <= 6; ++n) {
    const JacobiParams jp{n, 1.0, 2.0 * 2 + 3.0};
    const BPoly p = jacobi_compose(jp, t, s);
    CHECK(p.degree() == n);
    for (int k = 0; k < 5; ++k) {
      const Bary l = random_point(gen);
      CHECK(p.eval(l) == doctest::Approx(jacobi_eval(jp, 1.0 - 2.0 * l[1])).epsilon(1e-12));
    }
  }
  // triangle orthogonal polynomial through the collapsed factor
  const BPoly sx = BPoly::linear(1.0, 0.0, 1.0);
  const BPoly tx = BPoly::linear(-1.0, 0.0, 1.0);
  const BPoly tri = jacobi_compose({2, 1.0, 7.0}, t, s) * jacobi_compose({2, 1.0, 1.0}, tx, sx);
  for (int k = 0; k < 5; ++k) {
    const Bary l = random_point(gen);
    CHECK(tri.eval(l) == doctest::Approx(tri_ortho_eval({2, 2}, l[1], l[2])).epsilon(1e-12));
  }
}
