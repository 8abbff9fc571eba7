#include "doctest.h"

#include "crk/assembly.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <random>
#include <sstream>

using namespace crk;

namespace {

MeshPtr random_mesh(int rounds, unsigned seed) {
  std::mt19937 gen(seed);
  MeshPtr m = make_lshape_initial();
  std::bernoulli_distribution pick(0.3);
  for (int r = 0; r < rounds; ++r) {
    std::vector<int> marked;
    for (int K = 0; K < m->num_triangles(); ++K)
      if (pick(gen)) marked.push_back(K);
    if (marked.empty()) marked.push_back(0);
    m = refine_nvb(m, marked).fine;
  }
  return m;
}

CRFunction random_cr(const SpacePtr& sp, std::mt19937& gen) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  CRFunction f = zero_function(sp);
  for (int i = 0; i < sp->dim(); ++i) f.coef[i] = u(gen);
  return f;
}

// direct quadrature of the broken Dirichlet form
double broken_form(const PiecewisePoly& u, const PiecewisePoly& v) {
  const Triangulation& m = *u.mesh();
  const TriangleRule& r = quad_triangle(u.degree() + v.degree());
  double s = 0.0;
  for (int K = 0; K < m.num_triangles(); ++K)
    for (std::size_t q = 0; q < r.points.size(); ++q)
      s += 2.0 * m.area(K) * r.weights[q] * u.grad(K, r.points[q]).dot(v.grad(K, r.points[q]));
  return s;
}

// exact integral of a Bernstein polynomial: every B_g^n integrates to 2|K|/((n+1)(n+2))
double bernstein_integral(const BPoly& p, double area) {
  double s = 0.0;
  for (int i = 0; i < bdim(p.degree()); ++i) s += p[i];
  return s * 2.0 * area / ((p.degree() + 1.0) * (p.degree() + 2.0));
}

}  // namespace

TEST_CASE("stiffness on the unit square is symmetric positive definite") {
  const SpacePtr sp = std::make_shared<CRSpace>(make_unit_square(), 3, true);
  const Eigen::MatrixXd a(assemble_stiffness(*sp));
  REQUIRE(a.rows() == 5);
  CHECK((a - a.transpose()).cwiseAbs().maxCoeff() <= 1e-13 * a.cwiseAbs().maxCoeff());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  CHECK(es.eigenvalues().minCoeff() > 1e-8);
}

TEST_CASE("lowest order element matrix by hand") {
  // b_{E,0} = 1 - 2 lambda_E, so the element matrix is 4|K| grad l_i . grad l_j
  const MeshPtr m = random_mesh(2, 5);
  const CRSpace sp(m, 1, false);
  for (int K = 0; K < m->num_triangles(); ++K) {
    const Eigen::MatrixXd a = local_stiffness(sp, K);
    const auto g = m->grad_lambda(K);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        CHECK(a(i, j) == doctest::Approx(4.0 * m->area(K) * g[i].dot(g[j])).epsilon(1e-13));
  }
}

TEST_CASE("matrix form agrees with elementwise quadrature") {
  std::mt19937 gen(17);
  for (int k : {1, 3, 5}) {
    const SpacePtr sp = std::make_shared<CRSpace>(random_mesh(2, 9), k, true);
    const SparseMatrix a = assemble_stiffness(*sp);
    CHECK(Eigen::MatrixXd(a - SparseMatrix(a.transpose())).cwiseAbs().maxCoeff() < 1e-12);
    for (int t = 0; t < 3; ++t) {
      const CRFunction u = random_cr(sp, gen), v = random_cr(sp, gen);
      const double direct = broken_form(to_piecewise(u), to_piecewise(v));
      CHECK(u.coef.dot(a * v.coef) == doctest::Approx(direct).epsilon(1e-11));
    }
  }
}

TEST_CASE("conforming functions carry their exact seminorm") {
  // v = x(1-x)y(1-y) on the unit square: |v|_1^2 = 2 * (1/3) * (1/30)
  const MeshPtr m = refine_uniform(make_unit_square()).fine;
  const SpacePtr sp = std::make_shared<CRSpace>(m, 5, true);
  const auto v = interpolate_function(
      m, 5, [](const Point& x) { return x.x() * (1 - x.x()) * x.y() * (1 - x.y()); });
  const CRFunction c = from_moments(sp, v);
  const SparseMatrix a = assemble_stiffness(*sp);
  CHECK(c.coef.dot(a * c.coef) == doctest::Approx(1.0 / 45.0).epsilon(1e-12));
}

TEST_CASE("load vector") {
  const MeshPtr m = random_mesh(2, 2);
  const CRSpace sp1(m, 1, false);
  CHECK(assemble_load(sp1, [](const Point&) { return 0.0; }).cwiseAbs().maxCoeff() == 0.0);
  const Eigen::VectorXd one = assemble_load(sp1, [](const Point&) { return 1.0; });
  for (int E = 0; E < m->num_edges(); ++E) {
    double w = 0.0;
    for (int K : m->edge_triangles(E)) w += m->area(K);
    CHECK(one[sp1.edge_dof(E, 0)] == doctest::Approx(w / 3.0).epsilon(1e-13));
  }

  std::mt19937 gen(4);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k : {3, 5}) {
    const CRSpace sp(m, k, false);
    PiecewisePoly f(sp.mesh(), k);
    for (int K = 0; K < m->num_triangles(); ++K) {
      BPoly p(k);
      for (int i = 0; i < bdim(k); ++i) p[i] = u(gen);
      f.set_poly(K, p);
    }
    const Eigen::VectorXd b = assemble_load(sp, f);
    const Eigen::VectorXd bq = assemble_load(sp, [&](const Point& x) {
      for (int K = 0; K < m->num_triangles(); ++K) {
        const Bary l = m->to_bary(K, x);
        if (l[0] > -1e-12 && l[1] > -1e-12 && l[2] > -1e-12) return f.eval(K, l);
      }
      return 0.0;
    });
    Eigen::VectorXd oracle = Eigen::VectorXd::Zero(sp.dim());
    for (int K = 0; K < m->num_triangles(); ++K) {
      const ReferenceElement& ref = sp.reference(K);
      const auto dofs = sp.local_dofs(K);
      for (int a = 0; a < ref.size(); ++a)
        oracle[dofs[a]] += bernstein_integral(f.poly(K) * ref.basis()[a], m->area(K));
    }
    CHECK((b - oracle).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((bq - oracle).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("PCG against dense factorization") {
  std::mt19937 gen(20);
  std::normal_distribution<double> nd;
  Eigen::MatrixXd g(20, 20);
  for (int i = 0; i < 20; ++i)
    for (int j = 0; j < 20; ++j) g(i, j) = nd(gen);
  const Eigen::MatrixXd spd = g * g.transpose() + Eigen::MatrixXd::Identity(20, 20);
  Eigen::VectorXd b(20);
  for (int i = 0; i < 20; ++i) b[i] = nd(gen);
  const Eigen::VectorXd exact = spd.llt().solve(b);
  SolveReport rep;
  const Eigen::VectorXd x = solve_spd(spd.sparseView(), b, 1e-12, &rep);
  CHECK((x - exact).norm() / exact.norm() < 1e-8);
  CHECK(rep.residual <= 1e-12);

  SparseMatrix d(4, 4);
  for (int i = 0; i < 4; ++i) d.insert(i, i) = i + 1.0;
  const Eigen::VectorXd y = solve_spd(d, Eigen::VectorXd::Ones(4), 1e-10, &rep);
  CHECK(rep.iterations <= 1);
  CHECK(y[3] == doctest::Approx(0.25));

  SparseMatrix bad(2, 2);
  bad.insert(0, 0) = 1.0;
  bad.insert(1, 1) = -1.0;
  bad.insert(0, 1) = 3.0;
  bad.insert(1, 0) = 3.0;
  CHECK_THROWS_AS(solve_spd(bad, Eigen::VectorXd::Ones(2), 1e-14, nullptr, nullptr, 1), SolverError);
}

TEST_CASE("discrete solution satisfies the Galerkin equations") {
  std::mt19937 gen(3);
  const SpacePtr sp = std::make_shared<CRSpace>(random_mesh(3, 1), 3, true);
  const SparseMatrix a = assemble_stiffness(*sp);
  const auto f = [](const Point& x) { return std::sin(3 * x.x()) + x.y(); };
  const Eigen::VectorXd b = assemble_load(*sp, f);
  const Eigen::VectorXd u = solve_spd(a, b);
  const PiecewisePoly uh = to_piecewise({sp, u});
  for (int t = 0; t < 10; ++t) {
    const CRFunction v = random_cr(sp, gen);
    const double lhs = broken_form(uh, to_piecewise(v));
    CHECK(std::abs(lhs - b.dot(v.coef)) <= 1e-8 * b.norm() * v.coef.norm());
  }
}

TEST_CASE("matrix dump") {
  SparseMatrix d(2, 2);
  d.insert(0, 1) = 0.5;
  std::ostringstream os;
  write_matrix(os, d);
  CHECK(os.str() == "0 1 0.5\n");
}
