#pragma once

#include <array>
#include <vector>

namespace crk {

/// Degree and parameters of a Jacobi polynomial P_n^{(a,b)}.
struct JacobiParams {
  int n = 0;
  double a = 0.0;
  double b = 0.0;
};

/// Evaluates P_n^{(a,b)}(x) with the three-term recurrence.
/// Throws std::domain_error for n < 0 or a, b <= -1.
double jacobi_eval(const JacobiParams& p, double x);

/// Derivative d/dx P_n^{(a,b)}(x).
double jacobi_derivative(const JacobiParams& p, double x);

/// Homogenized Jacobi polynomial s^n P_n^{(a,b)}(t/s), evaluated without
/// dividing by s. Equals P_n^{(a,b)}(t) for s = 1.
double jacobi_homogeneous(const JacobiParams& p, double t, double s);

/// Multi-index of the triangle orthogonal polynomials P^{(1,1,1)}_{T,alpha}.
struct TriOrthoIndex {
  int a1 = 0;
  int a2 = 0;
  [[nodiscard]] int degree() const { return a1 + a2; }
};

/// All multi-indices of total degree <= n, ordered by total degree, then a2.
std::vector<TriOrthoIndex> tri_ortho_indices(int n);

/// Number of multi-indices of total degree <= n, i.e. dim P_n in 2D.
inline int dim_p2(int n) { return n < 0 ? 0 : (n + 1) * (n + 2) / 2; }

/// P^{(1,1,1)}_{T,alpha}(x, y) on the reference triangle conv{(0,0),(1,0),(0,1)}.
/// The collapsed factor is evaluated in homogeneous form, so x = 1 is regular.
double tri_ortho_eval(TriOrthoIndex idx, double x, double y);

/// Barycentric coordinates (l0, l1, l2); reference coordinates are x = l1, y = l2.
using Bary = std::array<double, 3>;

struct TriangleRule {
  std::vector<Bary> points;
  std::vector<double> weights;  // sum to 1/2
  int degree = 0;
};

struct EdgeRule {
  std::vector<double> points;   // parameter in (0,1)
  std::vector<double> weights;  // sum to 1
  int degree = 0;
};

/// Gauss-Jacobi nodes and weights on [-1,1] for the weight (1-x)^a (1+x)^b.
void gauss_jacobi(int npts, double a, double b, std::vector<double>& x,
                  std::vector<double>& w);

/// Collapsed (Duffy) tensor rule on the reference triangle, exact for total
/// degree <= degree. Uses ceil((degree+2)/2) points per direction.
const TriangleRule& quad_triangle(int degree);

/// Gauss-Legendre rule on [0,1], exact through the given degree.
const EdgeRule& quad_edge(int degree);

}  // namespace crk
