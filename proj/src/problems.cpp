#include "crk/problems.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace crk {

namespace {

constexpr double pi = std::numbers::pi;

// singular factor s = r^{2/3} sin(2/3 (a - pi/2)) and its gradient
struct Singular {
  double s;
  Point grad;
};

Singular singular(const Point& x) {
  const double r = x.norm();
  if (r == 0.0) throw std::domain_error("lshape: singular point at the origin");
  const double a = lshape_angle(x);
  const double phi = 2.0 / 3.0 * (a - pi / 2);
  const double dr = 2.0 / 3.0 * std::pow(r, -1.0 / 3.0) * std::sin(phi);
  const double da = 2.0 / 3.0 * std::pow(r, -1.0 / 3.0) * std::cos(phi);  // (1/r) d/da
  const Point er(std::cos(a), std::sin(a)), ea(-std::sin(a), std::cos(a));
  return {std::pow(r, 2.0 / 3.0) * std::sin(phi), dr * er + da * ea};
}

}  // namespace

double lshape_angle(const Point& x) {
  double a = std::atan2(x.y(), x.x());
  if (a < pi / 2) a += 2 * pi;
  return a;
}

Problem lshape_problem() {
  Problem p;
  p.name = "lshape";
  p.initial_mesh = make_lshape_initial();
  p.u = [](const Point& x) {
    if (x.norm() == 0.0) return 0.0;
    const double r = x.norm(), a = lshape_angle(x);
    return std::pow(r, 2.0 / 3.0) * std::sin(2.0 / 3.0 * (a - pi / 2)) * (x.x() * x.x() - 1) *
           (x.y() * x.y() - 1);
  };
  p.grad = [](const Point& x) {
    const Singular s = singular(x);
    const double px = x.x() * x.x() - 1, py = x.y() * x.y() - 1;
    const Point gp(2 * x.x() * py, 2 * x.y() * px);
    return Point(px * py * s.grad + s.s * gp);
  };
  // s is harmonic, so -lap(s q) = -(2 grad s . grad q + s lap q)
  p.f = [](const Point& x) {
    const Singular s = singular(x);
    const double px = x.x() * x.x() - 1, py = x.y() * x.y() - 1;
    const Point gp(2 * x.x() * py, 2 * x.y() * px);
    return -(2 * s.grad.dot(gp) + s.s * 2 * (px + py));
  };
  return p;
}

Problem square_smooth_problem() {
  Problem p;
  p.name = "square-smooth";
  p.initial_mesh = make_unit_square();
  p.u = [](const Point& x) { return std::sin(pi * x.x()) * std::sin(pi * x.y()); };
  p.grad = [](const Point& x) {
    return Point(pi * std::cos(pi * x.x()) * std::sin(pi * x.y()),
                 pi * std::sin(pi * x.x()) * std::cos(pi * x.y()));
  };
  p.f = [](const Point& x) { return 2 * pi * pi * std::sin(pi * x.x()) * std::sin(pi * x.y()); };
  return p;
}

Problem problem_by_name(const std::string& name) {
  if (name == "lshape") return lshape_problem();
  if (name == "square-smooth") return square_smooth_problem();
  throw std::invalid_argument("unknown problem '" + name + "'");
}

double h1_error(const PiecewisePoly& uh, const VectorField& grad, int degree) {
  if (!grad) throw std::invalid_argument("h1_error: problem has no exact gradient");
  const Triangulation& m = *uh.mesh();
  const TriangleRule& r = quad_triangle(degree);
  double s = 0.0;
  for (int K = 0; K < m.num_triangles(); ++K) {
    const BPoly p = uh.poly(K);
    const auto g = m.grad_lambda(K);
    const BPoly d[3] = {p.deriv(0), p.deriv(1), p.deriv(2)};
    double sk = 0.0;
    for (std::size_t q = 0; q < r.points.size(); ++q) {
      Point gh(0.0, 0.0);
      for (int i = 0; i < 3; ++i) gh += d[i].eval(r.points[q]) * g[i];
      sk += r.weights[q] * (grad(m.map(K, r.points[q])) - gh).squaredNorm();
    }
    s += 2.0 * m.area(K) * sk;
  }
  return std::sqrt(s);
}

double h1_error(const CRFunction& uh, const Problem& p, int degree) {
  if (degree < 0) degree = 2 * uh.space->k() + 4;
  return h1_error(to_piecewise(uh), p.grad, degree);
}

double broken_seminorm(const PiecewisePoly& v) {
  return h1_error(v, [](const Point&) { return Point(0.0, 0.0); },
                  std::max(2 * (v.degree() - 1), 0));
}

RateFit fit_rate(const std::vector<std::pair<double, double>>& series, int window) {
  if (window < 4) throw std::invalid_argument("fit_rate: window must hold at least 4 points");
  if (int(series.size()) < window) throw std::invalid_argument("fit_rate: not enough points");
  RateFit out{series, window, 0.0};
  const std::size_t first = series.size() - window;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = first; i < series.size(); ++i) {
    mx += std::log(series[i].first);
    my += std::log(series[i].second);
  }
  mx /= window;
  my /= window;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = first; i < series.size(); ++i) {
    const double dx = std::log(series[i].first) - mx;
    sxy += dx * (std::log(series[i].second) - my);
    sxx += dx * dx;
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_rate: degenerate ndof range");
  out.slope = sxy / sxx;
  return out;
}

int trailing_window(const std::vector<std::pair<double, double>>& series, double span) {
  const int n = int(series.size());
  if (n == 0) return 0;
  const double last = series.back().first;
  int w = 0;
  while (w < n && series[n - 1 - w].first * span >= last) ++w;
  return std::min(n, std::max(w, 4));
}

}  // namespace crk
