#include "crk/polyquad.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace crk {

namespace {

void check_params(const JacobiParams& p) {
  if (p.n < 0) throw std::domain_error("jacobi: negative degree");
  if (p.a <= -1.0 || p.b <= -1.0)
    throw std::domain_error("jacobi: parameters must exceed -1");
}

// P_q = (aq*x - bq) P_{q-1} - cq P_{q-2}, q >= 2.
struct Rec {
  double aq, bq, cq;
};

Rec recurrence(int q, double a, double b) {
  const double t = 2.0 * q + a + b;
  const double den = 2.0 * q * (q + a + b) * (t - 2.0);
  Rec r;
  r.aq = (t - 1.0) * t * (t - 2.0) / den;
  r.bq = (t - 1.0) * (b * b - a * a) / den;
  r.cq = 2.0 * (q + a - 1.0) * (q + b - 1.0) * t / den;
  return r;
}

}  // namespace

double jacobi_eval(const JacobiParams& p, double x) {
  return jacobi_homogeneous(p, x, 1.0);
}

double jacobi_homogeneous(const JacobiParams& p, double t, double s) {
  check_params(p);
  if (p.n == 0) return 1.0;
  double prev = 1.0;
  double cur = 0.5 * ((p.a + p.b + 2.0) * t + (p.a - p.b) * s);
  for (int q = 2; q <= p.n; ++q) {
    const Rec r = recurrence(q, p.a, p.b);
    const double next = (r.aq * t - r.bq * s) * cur - r.cq * s * s * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double jacobi_derivative(const JacobiParams& p, double x) {
  check_params(p);
  if (p.n == 0) return 0.0;
  return 0.5 * (p.n + p.a + p.b + 1.0) *
         jacobi_eval({p.n - 1, p.a + 1.0, p.b + 1.0}, x);
}

std::vector<TriOrthoIndex> tri_ortho_indices(int n) {
  std::vector<TriOrthoIndex> out;
  for (int d = 0; d <= n; ++d)
    for (int a2 = 0; a2 <= d; ++a2) out.push_back({d - a2, a2});
  return out;
}

double tri_ortho_eval(TriOrthoIndex idx, double x, double y) {
  if (idx.a1 < 0 || idx.a2 < 0)
    throw std::domain_error("tri_ortho_eval: negative multi-index");
  const double first =
      jacobi_eval({idx.a1, 1.0, 2.0 * idx.a2 + 3.0}, 1.0 - 2.0 * x);
  // (1-x)^a2 P_a2^{(1,1)}(2y/(1-x) - 1) = s^a2 P_a2(t/s), t = 2y - (1-x), s = 1-x
  const double s = 1.0 - x;
  const double second = jacobi_homogeneous({idx.a2, 1.0, 1.0}, 2.0 * y - s, s);
  return first * second;
}

void gauss_jacobi(int npts, double a, double b, std::vector<double>& x,
                  std::vector<double>& w) {
  if (npts < 1) throw std::invalid_argument("gauss_jacobi: need >= 1 point");
  check_params({npts, a, b});
  // Golub-Welsch for the initial guess, then Newton polish on P_n.
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(npts, npts);
  for (int i = 0; i < npts; ++i) {
    const double n = i;
    const double t = 2.0 * n + a + b;
    double diag;
    if (i == 0)
      diag = (b - a) / (a + b + 2.0);
    else
      diag = (b * b - a * a) / (t * (t + 2.0));
    jac(i, i) = diag;
    if (i + 1 < npts) {
      const double m = n + 1.0;
      const double tm = 2.0 * m + a + b;
      double off = 4.0 * m * (m + a) * (m + b) * (m + a + b) /
                   (tm * tm * (tm + 1.0) * (tm - 1.0));
      off = std::sqrt(off);
      jac(i, i + 1) = off;
      jac(i + 1, i) = off;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
  x.assign(npts, 0.0);
  w.assign(npts, 0.0);
  const JacobiParams pn{npts, a, b};
  const double logc = std::lgamma(npts + a + 1.0) + std::lgamma(npts + b + 1.0) -
                      std::lgamma(npts + a + b + 1.0) -
                      std::lgamma(npts + 1.0) + (a + b + 1.0) * std::log(2.0);
  const double c = std::exp(logc);
  for (int i = 0; i < npts; ++i) {
    double xi = es.eigenvalues()(i);
    for (int it = 0; it < 10; ++it) {
      const double dx = jacobi_eval(pn, xi) / jacobi_derivative(pn, xi);
      xi -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double d = jacobi_derivative(pn, xi);
    x[i] = xi;
    w[i] = c / ((1.0 - xi * xi) * d * d);
  }
}

namespace {

TriangleRule build_triangle_rule(int degree) {
  const int n = (degree + 2 + 1) / 2;  // ceil((degree+2)/2)
  std::vector<double> xu, wu, xv, wv;
  gauss_jacobi(n, 1.0, 0.0, xu, wu);
  gauss_jacobi(n, 0.0, 0.0, xv, wv);
  TriangleRule r;
  r.degree = degree;
  for (int i = 0; i < n; ++i) {
    const double u = 0.5 * (1.0 + xu[i]);
    for (int j = 0; j < n; ++j) {
      const double v = 0.5 * (1.0 + xv[j]);
      const double x = u;
      const double y = v * (1.0 - u);
      r.points.push_back({1.0 - x - y, x, y});
      // du dv (1-u) = (dxi/2)(deta/2)((1-xi)/2)
      r.weights.push_back(wu[i] * wv[j] / 8.0);
    }
  }
  return r;
}

EdgeRule build_edge_rule(int degree) {
  const int n = std::max(1, (degree + 2) / 2);  // 2n-1 >= degree
  std::vector<double> x, w;
  gauss_jacobi(n, 0.0, 0.0, x, w);
  EdgeRule r;
  r.degree = degree;
  for (int i = 0; i < n; ++i) {
    r.points.push_back(0.5 * (1.0 + x[i]));
    r.weights.push_back(0.5 * w[i]);
  }
  return r;
}

template <class Rule, class Builder>
const Rule& cached(std::map<int, std::unique_ptr<Rule>>& cache, std::mutex& mtx,
                   int degree, Builder build) {
  if (degree < 0) throw std::invalid_argument("quadrature degree must be >= 0");
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(degree);
  if (it == cache.end())
    it = cache.emplace(degree, std::make_unique<Rule>(build(degree))).first;
  return *it->second;
}

}  // namespace

const TriangleRule& quad_triangle(int degree) {
  static std::map<int, std::unique_ptr<TriangleRule>> cache;
  static std::mutex mtx;
  return cached(cache, mtx, degree, build_triangle_rule);
}

const EdgeRule& quad_edge(int degree) {
  static std::map<int, std::unique_ptr<EdgeRule>> cache;
  static std::mutex mtx;
  return cached(cache, mtx, degree, build_edge_rule);
}

}  // namespace crk
