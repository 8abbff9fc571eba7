#pragma once

#include "crk/polyquad.hpp"

#include <vector>

namespace crk {

/// Number of Bernstein coefficients of a bivariate polynomial of degree n.
inline int bdim(int n) { return (n + 1) * (n + 2) / 2; }

/// Position of the multi-index (n - i1 - i2, i1, i2) in the coefficient array.
inline int bindex(int i1, int i2) {
  const int m = i1 + i2;
  return m * (m + 1) / 2 + i2;
}

/// Polynomial on a triangle written in the Bernstein basis
/// B_a = n!/(a0! a1! a2!) l0^a0 l1^a1 l2^a2 of the barycentric coordinates.
/// All operations treat it as a homogeneous form of degree n in (l0, l1, l2).
class BPoly {
 public:
  BPoly() = default;
  explicit BPoly(int degree);
  BPoly(int degree, std::vector<double> coeffs);

  static BPoly constant(int degree, double v);
  /// a0 l0 + a1 l1 + a2 l2
  static BPoly linear(double a0, double a1, double a2);
  /// Barycentric coordinate l_i.
  static BPoly lambda(int i);

  [[nodiscard]] int degree() const { return n_; }
  [[nodiscard]] const std::vector<double>& coeffs() const { return c_; }
  std::vector<double>& coeffs() { return c_; }
  double& operator[](int i) { return c_[i]; }
  double operator[](int i) const { return c_[i]; }

  [[nodiscard]] double eval(const Bary& l) const;

  /// Exact degree raising to m >= degree().
  [[nodiscard]] BPoly elevate(int m) const;

  /// Partial derivative with respect to l_i of the homogeneous form.
  [[nodiscard]] BPoly deriv(int i) const;

  BPoly& operator+=(const BPoly& o);
  BPoly& operator-=(const BPoly& o);
  BPoly& operator*=(double s);

 private:
  int n_ = 0;
  std::vector<double> c_;
};

BPoly operator+(BPoly a, const BPoly& b);
BPoly operator-(BPoly a, const BPoly& b);
BPoly operator*(double s, BPoly a);
BPoly operator*(const BPoly& a, const BPoly& b);

/// Lattice points a/n in barycentric coordinates, in coefficient order.
std::vector<Bary> bernstein_lattice(int n);

/// Degree-n polynomial interpolating the given values at bernstein_lattice(n).
BPoly bernstein_interpolate(int n, const std::vector<double>& values);

/// Best degree-m representation of p, obtained by interpolation on the
/// degree-m lattice. If err is given it receives the max coefficient deviation
/// between p and the result raised back to p.degree() (0 when p has degree <= m).
BPoly reduce_degree(const BPoly& p, int m, double* err = nullptr);

/// Composes the homogenized Jacobi polynomial s^n P_n^{(a,b)}(t/s) with the
/// linear forms t and s; the result has degree n.
BPoly jacobi_compose(const JacobiParams& p, const BPoly& t, const BPoly& s);

}  // namespace crk
