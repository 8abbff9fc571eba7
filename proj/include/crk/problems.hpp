#pragma once

#include "crk/assembly.hpp"
#include "crk/crspace.hpp"

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace crk {

using VectorField = std::function<Point(const Point&)>;

/// -lap u = f with homogeneous Dirichlet data on the domain of `initial_mesh`.
struct Problem {
  std::string name;
  MeshPtr initial_mesh;
  ScalarField f;
  ScalarField u;     // empty when unknown
  VectorField grad;  // empty when unknown
};

/// Corner singularity on (-1,1)^2 \ [0,1)^2:
/// u = r^{2/3} sin(2/3 (a - pi/2)) (x^2 - 1)(y^2 - 1), a in [pi/2, 2pi].
/// u(0) = 0; grad u and f throw std::domain_error at the origin.
Problem lshape_problem();
/// u = sin(pi x) sin(pi y) on the unit square.
Problem square_smooth_problem();
/// Looks up a problem by the CLI tag ("lshape", "square-smooth").
Problem problem_by_name(const std::string& name);

/// Polar angle of x measured from the x1-axis in [pi/2, 2pi]; the branch cut
/// lies inside the removed quadrant.
double lshape_angle(const Point& x);

/// ||grad u - grad_T u_h||_{L2} with a triangle rule of the given degree
/// (default 2k+4).
double h1_error(const CRFunction& uh, const Problem& p, int degree = -1);
double h1_error(const PiecewisePoly& uh, const VectorField& grad, int degree);

/// Broken seminorm ||grad_T v||_{L2} of a piecewise polynomial, exact.
double broken_seminorm(const PiecewisePoly& v);

struct RateFit {
  std::vector<std::pair<double, double>> series;  // (ndof, value)
  int window = 0;
  double slope = 0.0;
};

/// Least-squares slope of log(value) over log(ndof) over the last `window`
/// points. Throws std::invalid_argument for window < 4 or too few points.
RateFit fit_rate(const std::vector<std::pair<double, double>>& series, int window);

/// Number of trailing points whose ndof is within a factor `span` of the last
/// one, at least 4 (or the whole series when shorter).
int trailing_window(const std::vector<std::pair<double, double>>& series, double span = 10.0);

}  // namespace crk
