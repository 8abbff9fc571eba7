#include "crk/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace crk {

namespace {

// physical gradient of v|_K as two Bernstein polynomials of degree d-1
struct GradPoly {
  BPoly x, y;
};

GradPoly grad_poly(const PiecewisePoly& v, int K) {
  const BPoly p = v.poly(K);
  const auto g = v.mesh()->grad_lambda(K);
  GradPoly out{BPoly(std::max(p.degree() - 1, 0)), BPoly(std::max(p.degree() - 1, 0))};
  for (int i = 0; i < 3; ++i) {
    const BPoly d = p.deriv(i);
    out.x += g[i].x() * d;
    out.y += g[i].y() * d;
  }
  return out;
}

BPoly laplacian_poly(const PiecewisePoly& v, int K) {
  const BPoly p = v.poly(K);
  const auto g = v.mesh()->grad_lambda(K);
  BPoly out(std::max(p.degree() - 2, 0));
  if (p.degree() < 2) return out;
  for (int i = 0; i < 3; ++i) {
    const BPoly d = p.deriv(i);
    for (int j = 0; j < 3; ++j) out += g[i].dot(g[j]) * d.deriv(j);
  }
  return out;
}

}  // namespace

EdgeJumps edge_jumps(const PiecewisePoly& v) {
  const Triangulation& m = *v.mesh();
  std::vector<GradPoly> gp;
  gp.reserve(m.num_triangles());
  for (int K = 0; K < m.num_triangles(); ++K) gp.push_back(grad_poly(v, K));
  const EdgeRule& r = quad_edge(std::max(2 * (v.degree() - 1), 1));
  EdgeJumps out{std::vector<double>(m.num_edges(), 0.0), std::vector<double>(m.num_edges(), 0.0)};
  for (int E = 0; E < m.num_edges(); ++E) {
    const Point n = m.normal(E), t = m.tangent(E);
    const int L = m.left(E), R = m.right(E);
    double sn = 0.0, st = 0.0;
    for (std::size_t q = 0; q < r.points.size(); ++q) {
      const Bary bl = edge_bary(m, L, E, r.points[q]);
      Point j(gp[L].x.eval(bl), gp[L].y.eval(bl));
      if (R >= 0) {
        const Bary br = edge_bary(m, R, E, r.points[q]);
        j -= Point(gp[R].x.eval(br), gp[R].y.eval(br));
      }
      sn += r.weights[q] * std::pow(j.dot(n), 2);
      st += r.weights[q] * std::pow(j.dot(t), 2);
    }
    out.normal2[E] = m.edge_length(E) * sn;
    out.tangential2[E] = m.edge_length(E) * st;
  }
  return out;
}

LocalEstimate estimate(const PiecewisePoly& v, const ScalarField& f, int degree) {
  const Triangulation& m = *v.mesh();
  if (degree < 0) degree = 2 * v.degree() + 2;
  const TriangleRule& r = quad_triangle(degree);
  const EdgeJumps ej = edge_jumps(v);
  const int nt = m.num_triangles();
  LocalEstimate est{std::vector<double>(nt), std::vector<double>(nt), std::vector<double>(nt)};
  for (int K = 0; K < nt; ++K) {
    const BPoly lap = laplacian_poly(v, K);
    double vol = 0.0;
    for (std::size_t q = 0; q < r.points.size(); ++q)
      vol += r.weights[q] * std::pow(f(m.map(K, r.points[q])) + lap.eval(r.points[q]), 2);
    vol *= 2.0 * m.area(K);
    double sn = 0.0, st = 0.0;
    for (int i = 0; i < 3; ++i) {
      const int E = m.tri_edge(K, i);
      if (!m.is_boundary_edge(E)) sn += ej.normal2[E];
      st += ej.tangential2[E];
    }
    const double a = m.area(K), sa = std::sqrt(a);
    est.mu2[K] = a * vol + sa * sn;
    est.nu2[K] = sa * st;
    est.eta2[K] = est.mu2[K] + est.nu2[K];
  }
  return est;
}

LocalEstimate estimate(const CRFunction& v, const ScalarField& f, int degree) {
  return estimate(to_piecewise(v), f, degree);
}

EstimatorNorms estimate_restricted(const LocalEstimate& est, const SubmeshSelection& s) {
  if (s.size() != int(est.eta2.size()))
    throw std::invalid_argument("estimate_restricted: selection size mismatch");
  double e = 0.0, mu = 0.0, nu = 0.0;
  for (int K = 0; K < s.size(); ++K) {
    if (!s.contains(K)) continue;
    e += est.eta2[K];
    mu += est.mu2[K];
    nu += est.nu2[K];
  }
  return {std::sqrt(e), std::sqrt(mu), std::sqrt(nu)};
}

EstimatorNorms estimate_total(const LocalEstimate& est) {
  return estimate_restricted(est, SubmeshSelection(int(est.eta2.size()), true));
}

void write_estimate(std::ostream& os, const LocalEstimate& est) {
  os << "tri_id,mu2,nu2,eta2\n";
  char buf[128];
  for (std::size_t K = 0; K < est.eta2.size(); ++K) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g\n", K, est.mu2[K], est.nu2[K],
                  est.eta2[K]);
    os << buf;
  }
}

}  // namespace crk
