#include "crk/assembly.hpp"

#include <Eigen/IterativeLinearSolvers>

#include <cstdio>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <ostream>

namespace crk {

namespace {

// int_T d_i b_a d_j b_b over the reference triangle (area 1/2), d_i the
// barycentric partial derivative; the physical gradient is sum_i d_i b grad l_i.
struct GradTables {
  Eigen::MatrixXd m[3][3];
};

const GradTables& grad_tables(int k, int mask) {
  static std::map<std::pair<int, int>, std::unique_ptr<GradTables>> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto& slot = cache[{k, mask}];
  if (slot) return *slot;
  const ReferenceElement& ref = ReferenceElement::get(k, mask);
  const int n = ref.size();
  const TriangleRule& r = quad_triangle(2 * (k - 1));
  const int nq = int(r.points.size());
  Eigen::MatrixXd d[3];
  for (int i = 0; i < 3; ++i) {
    d[i].resize(nq, n);
    for (int a = 0; a < n; ++a) {
      const BPoly da = ref.basis()[a].deriv(i);
      for (int q = 0; q < nq; ++q) d[i](q, a) = da.eval(r.points[q]);
    }
  }
  const Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(r.weights.data(), nq);
  slot = std::make_unique<GradTables>();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) slot->m[i][j] = d[i].transpose() * w.asDiagonal() * d[j];
  return *slot;
}

// basis values at the nodes of a triangle rule
const Eigen::MatrixXd& basis_at(int k, int mask, int degree) {
  static std::map<std::tuple<int, int, int>, Eigen::MatrixXd> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find({k, mask, degree});
  if (it != cache.end()) return it->second;
  const ReferenceElement& ref = ReferenceElement::get(k, mask);
  const TriangleRule& r = quad_triangle(degree);
  Eigen::MatrixXd v(r.points.size(), ref.size());
  for (int a = 0; a < ref.size(); ++a)
    for (std::size_t q = 0; q < r.points.size(); ++q) v(q, a) = ref.basis()[a].eval(r.points[q]);
  return cache.emplace(std::make_tuple(k, mask, degree), std::move(v)).first->second;
}

}  // namespace

Eigen::MatrixXd local_stiffness(const CRSpace& space, int K) {
  const Triangulation& m = *space.mesh();
  const GradTables& t = grad_tables(space.k(), m.orientation_mask(K));
  const auto g = m.grad_lambda(K);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(t.m[0][0].rows(), t.m[0][0].cols());
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a += g[i].dot(g[j]) * t.m[i][j];
  return 2.0 * m.area(K) * a;
}

SparseMatrix assemble_stiffness(const CRSpace& space) {
  const Triangulation& m = *space.mesh();
  std::vector<Eigen::Triplet<double>> trip;
  const int nloc = 3 * space.k() + space.num_volume_moments();
  trip.reserve(std::size_t(m.num_triangles()) * nloc * nloc);
  for (int K = 0; K < m.num_triangles(); ++K) {
    const Eigen::MatrixXd a = local_stiffness(space, K);
    const auto dofs = space.local_dofs(K);
    for (int r = 0; r < nloc; ++r) {
      if (dofs[r] < 0) continue;
      for (int c = 0; c < nloc; ++c)
        if (dofs[c] >= 0) trip.emplace_back(dofs[r], dofs[c], a(r, c));
    }
  }
  SparseMatrix out(space.dim(), space.dim());
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

Eigen::VectorXd assemble_load(const CRSpace& space, const ScalarField& f, int degree) {
  const Triangulation& m = *space.mesh();
  if (degree < 0) degree = 2 * space.k() + 2;
  const TriangleRule& r = quad_triangle(degree);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(space.dim());
  Eigen::VectorXd fw(r.points.size());
  for (int K = 0; K < m.num_triangles(); ++K) {
    for (std::size_t q = 0; q < r.points.size(); ++q)
      fw[q] = r.weights[q] * f(m.map(K, r.points[q]));
    const Eigen::VectorXd loc =
        2.0 * m.area(K) * basis_at(space.k(), m.orientation_mask(K), degree).transpose() * fw;
    const auto dofs = space.local_dofs(K);
    for (std::size_t i = 0; i < dofs.size(); ++i)
      if (dofs[i] >= 0) b[dofs[i]] += loc[i];
  }
  return b;
}

Eigen::VectorXd assemble_load(const CRSpace& space, const PiecewisePoly& f) {
  const Triangulation& m = *space.mesh();
  if (f.mesh() != space.mesh()) throw std::invalid_argument("assemble_load: mesh mismatch");
  const int degree = f.degree() + space.k();
  const TriangleRule& r = quad_triangle(degree);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(space.dim());
  Eigen::VectorXd fw(r.points.size());
  for (int K = 0; K < m.num_triangles(); ++K) {
    const BPoly p = f.poly(K);
    for (std::size_t q = 0; q < r.points.size(); ++q) fw[q] = r.weights[q] * p.eval(r.points[q]);
    const Eigen::VectorXd loc =
        2.0 * m.area(K) * basis_at(space.k(), m.orientation_mask(K), degree).transpose() * fw;
    const auto dofs = space.local_dofs(K);
    for (std::size_t i = 0; i < dofs.size(); ++i)
      if (dofs[i] >= 0) b[dofs[i]] += loc[i];
  }
  return b;
}

Eigen::VectorXd solve_spd(const SparseMatrix& a, const Eigen::VectorXd& b, double tol,
                          SolveReport* report, const Eigen::VectorXd* guess, int max_iter) {
  SolveReport rep;
  if (b.size() == 0 || b.norm() == 0.0) {
    if (report) *report = rep;
    return Eigen::VectorXd::Zero(b.size());
  }
  Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper,
                           Eigen::DiagonalPreconditioner<double>>
      cg;
  cg.setTolerance(tol);
  cg.setMaxIterations(max_iter > 0 ? max_iter : 10 * int(b.size()));
  cg.compute(a);
  const Eigen::VectorXd x = guess ? cg.solveWithGuess(b, *guess) : Eigen::VectorXd(cg.solve(b));
  rep.iterations = int(cg.iterations());
  rep.residual = (a * x - b).norm() / b.norm();
  if (report) *report = rep;
  if (cg.info() != Eigen::Success && rep.residual > tol)
    throw SolverError("CG did not converge", rep);
  return x;
}

void write_matrix(std::ostream& os, const SparseMatrix& a) {
  char buf[96];
  for (int r = 0; r < a.outerSize(); ++r)
    for (SparseMatrix::InnerIterator it(a, r); it; ++it) {
      std::snprintf(buf, sizeof buf, "%d %d %.17g\n", int(it.row()), int(it.col()), it.value());
      os << buf;
    }
}

}  // namespace crk
