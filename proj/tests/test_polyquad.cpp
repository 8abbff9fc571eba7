#include "doctest.h"

#include "crk/polyquad.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

using namespace crk;

namespace {

// Generalized binomial via Gamma, used by the explicit Jacobi sum below.
double gbinom(double n, double k) {
  return std::tgamma(n + 1.0) / (std::tgamma(k + 1.0) * std::tgamma(n - k + 1.0));
}

// Explicit finite sum for P_n^{(a,b)}, independent of the recurrence.
double jacobi_sum(int n, double a, double b, double x) {
  double s = 0.0;
  for (int k = 0; k <= n; ++k)
    s += gbinom(n + a, n - k) * gbinom(n + b, k) * std::pow(0.5 * (x - 1.0), k) *
         std::pow(0.5 * (x + 1.0), n - k);
  return s;
}

double factorial(int n) { return std::tgamma(n + 1.0); }

// Exact integral of x^i y^j over the reference triangle.
double tri_monomial(int i, int j) {
  return factorial(i) * factorial(j) / factorial(i + j + 2);
}

double integrate_tri(const TriangleRule& r, auto f) {
  double s = 0.0;
  for (std::size_t q = 0; q < r.points.size(); ++q)
    s += r.weights[q] * f(r.points[q][1], r.points[q][2]);
  return s;
}

double integrate_edge(const EdgeRule& r, auto f) {
  double s = 0.0;
  for (std::size_t q = 0; q < r.points.size(); ++q) s += r.weights[q] * f(r.points[q]);
  return s;
}

double bubble(double x, double y) { return (1.0 - x - y) * x * y; }

}  // namespace

TEST_CASE("jacobi low degree values") {
  CHECK(jacobi_eval({0, 0.7, 2.5}, 0.3) == 1.0);
  CHECK(jacobi_eval({1, 1.0, 1.0}, 0.5) == doctest::Approx(1.0).epsilon(1e-15));
  // P_2^{(1,1)}(x) = 3(5x^2 - 1)/4
  for (double x : {-1.0, -0.4, 0.0, 0.25, 1.0})
    CHECK(jacobi_eval({2, 1.0, 1.0}, x) ==
          doctest::Approx(0.75 * (5.0 * x * x - 1.0)).epsilon(1e-14));
}

TEST_CASE("jacobi recurrence matches explicit expansion") {
  const double params[][2] = {{0, 0}, {1, 1}, {1, 3}, {1, 7}, {-0.5, 0.5}, {2.5, 0}};
  for (auto& ab : params)
    for (int n = 0; n <= 4; ++n)
      for (double x = -1.0; x <= 1.0; x += 0.125) {
        const double ref = jacobi_sum(n, ab[0], ab[1], x);
        CHECK(std::abs(jacobi_eval({n, ab[0], ab[1]}, x) - ref) <=
              1e-13 * std::max(1.0, std::abs(ref)));
      }
}

TEST_CASE("jacobi rejects invalid parameters") {
  CHECK_THROWS_AS(jacobi_eval({1, -1.0, 0.0}, 0.0), std::domain_error);
  CHECK_THROWS_AS(jacobi_eval({1, 0.0, -2.0}, 0.0), std::domain_error);
  CHECK_THROWS_AS(jacobi_eval({-1, 0.0, 0.0}, 0.0), std::domain_error);
}

TEST_CASE("jacobi derivative") {
  for (double x : {-0.9, 0.1, 0.8}) {
    const double h = 1e-6;
    const JacobiParams p{5, 1.0, 2.0};
    const double fd = (jacobi_eval(p, x + h) - jacobi_eval(p, x - h)) / (2 * h);
    CHECK(jacobi_derivative(p, x) == doctest::Approx(fd).epsilon(1e-7));
  }
}

TEST_CASE("P^(1,1) squared norms") {
  const EdgeRule& r = quad_edge(16);
  for (int j = 0; j <= 8; ++j) {
    const double v = 2.0 * integrate_edge(r, [&](double t) {
      const double p = jacobi_eval({j, 1.0, 1.0}, 2.0 * t - 1.0);
      return p * p;
    });
    CHECK(std::abs(v - 4.0 * (j + 1) / (j + 2)) <= 1e-12);
  }
  const EdgeRule& r2 = quad_edge(2);
  const double v1 = 2.0 * integrate_edge(r2, [](double t) {
    const double p = jacobi_eval({1, 1.0, 1.0}, 2.0 * t - 1.0);
    return p * p;
  });
  CHECK(v1 == doctest::Approx(8.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("gauss jacobi integrates the weight exactly") {
  std::vector<double> x, w;
  gauss_jacobi(6, 1.0, 0.0, x, w);
  double s = 0.0, m = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    s += w[i];
    m += w[i] * std::pow(x[i], 7);
  }
  CHECK(s == doctest::Approx(2.0).epsilon(1e-14));
  // int_{-1}^1 (1-x) x^7 dx = -int x^8 = -2/9
  CHECK(m == doctest::Approx(-2.0 / 9.0).epsilon(1e-13));
}

TEST_CASE("tri ortho basics") {
  CHECK(tri_ortho_eval({0, 0}, 0.2, 0.3) == 1.0);
  CHECK(tri_ortho_eval({0, 0}, 1.0, 0.0) == 1.0);
  // at x = 1 the collapsed factor is (2y - 1 + x)^a2 * const: finite
  CHECK(std::isfinite(tri_ortho_eval({2, 3}, 1.0, 0.0)));
  // homogeneous form agrees with the division form away from x = 1
  const double x = 0.3, y = 0.45;
  const double direct = jacobi_eval({1, 1.0, 7.0}, 1.0 - 2.0 * x) * std::pow(1.0 - x, 2) *
                        jacobi_eval({2, 1.0, 1.0}, 2.0 * y / (1.0 - x) - 1.0);
  CHECK(tri_ortho_eval({1, 2}, x, y) == doctest::Approx(direct).epsilon(1e-14));
  CHECK_THROWS_AS(tri_ortho_eval({-1, 0}, 0.1, 0.1), std::domain_error);
}

TEST_CASE("tri ortho weighted orthogonality") {
  const auto idx = tri_ortho_indices(6);
  CHECK(idx.size() == 28);
  const TriangleRule& r = quad_triangle(15);
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < i; ++j) {
      const double v = integrate_tri(r, [&](double x, double y) {
        return bubble(x, y) * tri_ortho_eval(idx[i], x, y) * tri_ortho_eval(idx[j], x, y);
      });
      CHECK(std::abs(v) <= 1e-12);
    }
  // low-degree rule from the quadrature examples: degree 2k with k = 3
  const double v = integrate_tri(quad_triangle(6), [](double x, double y) {
    return tri_ortho_eval({1, 0}, x, y) * tri_ortho_eval({0, 1}, x, y) * bubble(x, y);
  });
  CHECK(std::abs(v) <= 1e-13);
}

TEST_CASE("tri ortho normalization constant") {
  // P_{(1,0)} = 2 - 6x and int_T x^a y^b (1-x-y)^c = a! b! c! / (a+b+c+2)!
  // give 4/120 - 24/360 + 36/840 = 1/105.
  const double c10 = integrate_tri(quad_triangle(20), [](double x, double y) {
    const double p = tri_ortho_eval({1, 0}, x, y);
    return bubble(x, y) * p * p;
  });
  CHECK(c10 > 0.0);
  CHECK(c10 == doctest::Approx(1.0 / 105.0).epsilon(1e-13));
}

TEST_CASE("triangle rule exactness") {
  CHECK(integrate_tri(quad_triangle(0), [](double, double) { return 1.0; }) ==
        doctest::Approx(0.5).epsilon(1e-15));
  CHECK(integrate_tri(quad_triangle(3), [](double x, double y) { return x * y; }) ==
        doctest::Approx(1.0 / 24.0).epsilon(1e-14));
  std::mt19937 gen(42);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  for (int d = 0; d <= 14; ++d) {
    const TriangleRule& r = quad_triangle(d);
    double sum_w = 0.0;
    for (double w : r.weights) sum_w += w;
    CHECK(sum_w == doctest::Approx(0.5).epsilon(1e-14));
    std::vector<std::array<double, 3>> terms;
    double exact = 0.0, scale = 0.0;
    for (int i = 0; i <= d; ++i)
      for (int j = 0; i + j <= d; ++j) {
        const double c = coef(gen);
        terms.push_back({c, double(i), double(j)});
        exact += c * tri_monomial(i, j);
        scale += std::abs(c) * tri_monomial(i, j);
      }
    const double got = integrate_tri(r, [&](double x, double y) {
      double s = 0.0;
      for (auto& t : terms) s += t[0] * std::pow(x, t[1]) * std::pow(y, t[2]);
      return s;
    });
    CHECK(std::abs(got - exact) <= 1e-13 * scale);
    for (const Bary& b : r.points) {
      CHECK(b[0] > 0.0);
      CHECK(b[1] > 0.0);
      CHECK(b[2] > 0.0);
    }
  }
}

TEST_CASE("edge rule exactness") {
  CHECK(integrate_edge(quad_edge(1), [](double) { return 1.0; }) ==
        doctest::Approx(1.0).epsilon(1e-15));
  CHECK(integrate_edge(quad_edge(5), [](double t) { return std::pow(t, 5); }) ==
        doctest::Approx(1.0 / 6.0).epsilon(1e-14));
  for (int k = 1; k <= 7; k += 2) {
    const double v = integrate_edge(quad_edge(2 * k), [&](double t) {
      const double p = jacobi_eval({k, 0.0, 0.0}, 1.0 - 2.0 * t);
      return p * p;
    });
    CHECK(v == doctest::Approx(1.0 / (2 * k + 1)).epsilon(1e-13));
  }
  std::mt19937 gen(7);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  for (int d = 0; d <= 20; ++d) {
    std::vector<double> c(d + 1);
    double exact = 0.0, scale = 0.0;
    for (int i = 0; i <= d; ++i) {
      c[i] = coef(gen);
      exact += c[i] / (i + 1);
      scale += std::abs(c[i]) / (i + 1);
    }
    const double got = integrate_edge(quad_edge(d), [&](double t) {
      double s = 0.0;
      for (int i = d; i >= 0; --i) s = s * t + c[i];
      return s;
    });
    CHECK(std::abs(got - exact) <= 1e-13 * scale);
  }
  CHECK_THROWS(quad_edge(-1));
}
