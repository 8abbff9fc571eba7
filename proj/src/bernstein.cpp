#include "crk/bernstein.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace crk {

namespace {

struct Multi {
  int a0, a1, a2;
};

std::vector<Multi> multi_indices(int n) {
  std::vector<Multi> out;
  out.reserve(bdim(n));
  for (int m = 0; m <= n; ++m)
    for (int i2 = 0; i2 <= m; ++i2) out.push_back({n - m, m - i2, i2});
  return out;
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// n! / (a0! a1! a2!)
double multinomial(int n, const Multi& a) {
  return factorial(n) / (factorial(a.a0) * factorial(a.a1) * factorial(a.a2));
}

struct DegreeTables {
  std::vector<Multi> idx;
  std::vector<double> mult;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu;
};

constexpr int kMaxDegree = 24;

DegreeTables build_tables(int n) {
  DegreeTables t;
  t.idx = multi_indices(n);
  for (const Multi& a : t.idx) t.mult.push_back(multinomial(n, a));
  const int d = bdim(n);
  Eigen::MatrixXd v(d, d);
  for (int i = 0; i < d; ++i) {
    const Multi& x = t.idx[i];
    const Bary l = n == 0 ? Bary{1.0, 0.0, 0.0}
                          : Bary{double(x.a0) / n, double(x.a1) / n, double(x.a2) / n};
    for (int j = 0; j < d; ++j) {
      const Multi& a = t.idx[j];
      v(i, j) = t.mult[j] * std::pow(l[0], a.a0) * std::pow(l[1], a.a1) *
                std::pow(l[2], a.a2);
    }
  }
  t.lu.compute(v);
  return t;
}

const DegreeTables& tables(int n) {
  static const std::vector<DegreeTables> all = [] {
    std::vector<DegreeTables> v;
    for (int n = 0; n <= kMaxDegree; ++n) v.push_back(build_tables(n));
    return v;
  }();
  if (n < 0 || n > kMaxDegree) throw std::invalid_argument("BPoly: degree out of supported range");
  return all[n];
}

void check_same_degree(const BPoly& a, const BPoly& b) {
  if (a.degree() != b.degree())
    throw std::invalid_argument("BPoly: degree mismatch in addition");
}

}  // namespace

BPoly::BPoly(int degree) : n_(degree), c_(bdim(degree), 0.0) {
  if (degree < 0) throw std::invalid_argument("BPoly: negative degree");
}

BPoly::BPoly(int degree, std::vector<double> coeffs) : n_(degree), c_(std::move(coeffs)) {
  if (degree < 0 || int(c_.size()) != bdim(degree))
    throw std::invalid_argument("BPoly: coefficient count does not match degree");
}

BPoly BPoly::constant(int degree, double v) {
  BPoly p(degree);
  std::fill(p.c_.begin(), p.c_.end(), v);
  return p;
}

BPoly BPoly::linear(double a0, double a1, double a2) {
  return BPoly(1, {a0, a1, a2});
}

BPoly BPoly::lambda(int i) {
  return linear(i == 0 ? 1.0 : 0.0, i == 1 ? 1.0 : 0.0, i == 2 ? 1.0 : 0.0);
}

double BPoly::eval(const Bary& l) const {
  const DegreeTables& t = tables(n_);
  double p0[kMaxDegree + 1], p1[kMaxDegree + 1], p2[kMaxDegree + 1];
  p0[0] = p1[0] = p2[0] = 1.0;
  for (int i = 1; i <= n_; ++i) {
    p0[i] = p0[i - 1] * l[0];
    p1[i] = p1[i - 1] * l[1];
    p2[i] = p2[i - 1] * l[2];
  }
  double s = 0.0;
  for (int j = 0; j < int(c_.size()); ++j) {
    const Multi& a = t.idx[j];
    s += c_[j] * t.mult[j] * p0[a.a0] * p1[a.a1] * p2[a.a2];
  }
  return s;
}

BPoly BPoly::elevate(int m) const {
  if (m < n_) throw std::invalid_argument("BPoly::elevate: target below degree");
  BPoly cur = *this;
  while (cur.n_ < m) {
    const int n1 = cur.n_ + 1;
    BPoly next(n1);
    const auto idx = multi_indices(n1);
    for (int j = 0; j < int(idx.size()); ++j) {
      const Multi& g = idx[j];
      double v = 0.0;
      if (g.a0 > 0) v += g.a0 * cur.c_[bindex(g.a1, g.a2)];
      if (g.a1 > 0) v += g.a1 * cur.c_[bindex(g.a1 - 1, g.a2)];
      if (g.a2 > 0) v += g.a2 * cur.c_[bindex(g.a1, g.a2 - 1)];
      next.c_[j] = v / n1;
    }
    cur = std::move(next);
  }
  return cur;
}

BPoly BPoly::deriv(int i) const {
  if (n_ == 0) return BPoly(0);
  BPoly d(n_ - 1);
  const auto idx = multi_indices(n_ - 1);
  for (int j = 0; j < int(idx.size()); ++j) {
    const Multi& b = idx[j];
    const int i1 = b.a1 + (i == 1 ? 1 : 0);
    const int i2 = b.a2 + (i == 2 ? 1 : 0);
    d.c_[j] = n_ * c_[bindex(i1, i2)];
  }
  return d;
}

BPoly& BPoly::operator+=(const BPoly& o) {
  check_same_degree(*this, o);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

BPoly& BPoly::operator-=(const BPoly& o) {
  check_same_degree(*this, o);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

BPoly& BPoly::operator*=(double s) {
  for (double& v : c_) v *= s;
  return *this;
}

BPoly operator+(BPoly a, const BPoly& b) { return a += b; }
BPoly operator-(BPoly a, const BPoly& b) { return a -= b; }
BPoly operator*(double s, BPoly a) { return a *= s; }

BPoly operator*(const BPoly& a, const BPoly& b) {
  const int n = a.degree(), m = b.degree();
  const DegreeTables& ta = tables(n);
  const DegreeTables& tb = tables(m);
  const DegreeTables& tc = tables(n + m);
  BPoly c(n + m);
  for (int i = 0; i < bdim(n); ++i) {
    if (a[i] == 0.0) continue;
    const Multi& x = ta.idx[i];
    for (int j = 0; j < bdim(m); ++j) {
      const Multi& y = tb.idx[j];
      c[bindex(x.a1 + y.a1, x.a2 + y.a2)] += a[i] * b[j] * ta.mult[i] * tb.mult[j];
    }
  }
  for (int k = 0; k < bdim(n + m); ++k) c[k] /= tc.mult[k];
  return c;
}

std::vector<Bary> bernstein_lattice(int n) {
  std::vector<Bary> out;
  for (const Multi& a : multi_indices(n)) {
    if (n == 0)
      out.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
    else
      out.push_back({double(a.a0) / n, double(a.a1) / n, double(a.a2) / n});
  }
  return out;
}

BPoly bernstein_interpolate(int n, const std::vector<double>& values) {
  if (int(values.size()) != bdim(n))
    throw std::invalid_argument("bernstein_interpolate: wrong number of values");
  const Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(values.data(), values.size());
  const Eigen::VectorXd sol = tables(n).lu.solve(rhs);
  return BPoly(n, std::vector<double>(sol.data(), sol.data() + sol.size()));
}

BPoly reduce_degree(const BPoly& p, int m, double* err) {
  if (p.degree() <= m) {
    if (err) *err = 0.0;
    return p.elevate(m);
  }
  std::vector<double> vals;
  for (const Bary& l : bernstein_lattice(m)) vals.push_back(p.eval(l));
  BPoly r = bernstein_interpolate(m, vals);
  if (err) {
    const BPoly back = r.elevate(p.degree());
    double e = 0.0;
    for (int i = 0; i < bdim(p.degree()); ++i) e = std::max(e, std::abs(back[i] - p[i]));
    *err = e;
  }
  return r;
}

BPoly jacobi_compose(const JacobiParams& p, const BPoly& t, const BPoly& s) {
  if (p.n < 0) throw std::domain_error("jacobi_compose: negative degree");
  if (t.degree() != 1 || s.degree() != 1)
    throw std::invalid_argument("jacobi_compose: t and s must be linear forms");
  BPoly prev = BPoly::constant(0, 1.0);
  if (p.n == 0) return prev;
  BPoly cur = 0.5 * ((p.a + p.b + 2.0) * t + (p.a - p.b) * s);
  const BPoly s2 = s * s;
  for (int q = 2; q <= p.n; ++q) {
    const double tt = 2.0 * q + p.a + p.b;
    const double den = 2.0 * q * (q + p.a + p.b) * (tt - 2.0);
    const double aq = (tt - 1.0) * tt * (tt - 2.0) / den;
    const double bq = (tt - 1.0) * (p.b * p.b - p.a * p.a) / den;
    const double cq = 2.0 * (q + p.a - 1.0) * (q + p.b - 1.0) * tt / den;
    BPoly next = (aq * t - bq * s) * cur - cq * (s2 * prev);
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

}  // namespace crk
