#include "crk/crspace.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace crk {

void require_odd_degree(int k) {
  if (k < 1 || k % 2 == 0) throw std::invalid_argument("k must be odd");
}

namespace {

double gamma_j(int j) { return (2.0 * j + 3.0) * (j + 2.0) / (8.0 * j + 8.0); }

double c_j(int k, int j) {
  if (j == k - 1) return 1.0 / (2.0 * k + 1.0);
  return (1.0 + (j % 2 == 0 ? 1.0 : -1.0)) * (k + 1.0) / (2.0 * j + 4.0);
}

Bary local_edge_bary(int i, bool forward, double t) {
  Bary l{0.0, 0.0, 0.0};
  const int a = (i + 1) % 3, b = (i + 2) % 3;
  l[forward ? a : b] = 1.0 - t;
  l[forward ? b : a] = t;
  return l;
}

BPoly ones() { return BPoly::linear(1.0, 1.0, 1.0); }

// P_{T,alpha} in barycentric form; reference x = l1, y = l2.
BPoly tri_ortho_poly(TriOrthoIndex a) {
  const BPoly first = jacobi_compose({a.a1, 1.0, 2.0 * a.a2 + 3.0}, BPoly::linear(1, -1, 1), ones());
  const BPoly second = jacobi_compose({a.a2, 1.0, 1.0}, BPoly::linear(-1, 0, 1), BPoly::linear(1, 0, 1));
  return first * second;
}

}  // namespace

double edge_dual_weight(int k, int j, double t) {
  const double s = 1.0 - 2.0 * t;
  return 2.0 * gamma_j(j) *
         (jacobi_eval({j, 1.0, 1.0}, s) - c_j(k, j) * jacobi_eval({k - 1, 1.0, 1.0}, s));
}

double tri_ortho_norm(TriOrthoIndex alpha) {
  static std::map<std::pair<int, int>, double> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  const auto key = std::make_pair(alpha.a1, alpha.a2);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  const TriangleRule& r = quad_triangle(2 * alpha.degree() + 3 + 2);
  double c = 0.0;
  for (std::size_t q = 0; q < r.points.size(); ++q) {
    const Bary& l = r.points[q];
    const double p = tri_ortho_eval(alpha, l[1], l[2]);
    c += r.weights[q] * l[0] * l[1] * l[2] * p * p;
  }
  if (!(c > 0.0)) throw std::logic_error("tri_ortho_norm: nonpositive norm");
  cache.emplace(key, c);
  return c;
}

ReferenceElement::ReferenceElement(int k, int mask) : k_(k) {
  require_odd_degree(k);
  const BPoly s = ones();
  for (int i = 0; i < 3; ++i) {
    const bool fwd = (mask >> i) & 1;
    const int z0 = fwd ? (i + 1) % 3 : (i + 2) % 3;
    const int z1 = fwd ? (i + 2) % 3 : (i + 1) % 3;
    const BPoly bubble = 4.0 * (BPoly::lambda(z0) * BPoly::lambda(z1));
    const BPoly targ = 2.0 * BPoly::lambda(z0) - s;
    for (int j = 0; j + 1 < k; ++j) {
      basis_.push_back((bubble * jacobi_compose({j, 1.0, 1.0}, targ, s)).elevate(k));
      dofs_.push_back({LocalDof::Edge, i, j, -1});
    }
    basis_.push_back(jacobi_compose({k, 0.0, 0.0}, s - 2.0 * BPoly::lambda(i), s));
    dofs_.push_back({LocalDof::Edge, i, k - 1, -1});
  }
  const auto alphas = tri_ortho_indices(k - 3);
  const BPoly wk = BPoly::lambda(0) * BPoly::lambda(1) * BPoly::lambda(2);
  for (int a = 0; a < int(alphas.size()); ++a) {
    basis_.push_back((wk * tri_ortho_poly(alphas[a])).elevate(k));
    dofs_.push_back({LocalDof::Volume, -1, -1, a});
  }

  const int n = size();
  to_bern_.resize(bdim(k), n);
  for (int c = 0; c < n; ++c)
    for (int r = 0; r < bdim(k); ++r) to_bern_(r, c) = basis_[c][r];

  fmat_.resize(n, n);
  const EdgeRule& er = quad_edge(2 * k);
  const TriangleRule& tr = quad_triangle(2 * k);
  for (int r = 0; r < n; ++r) {
    const LocalDof& d = dofs_[r];
    for (int c = 0; c < n; ++c) {
      double v = 0.0;
      if (d.kind == LocalDof::Edge) {
        const bool fwd = (mask >> d.edge) & 1;
        for (std::size_t q = 0; q < er.points.size(); ++q) {
          const double t = er.points[q];
          v += er.weights[q] * edge_dual_weight(k, d.j, t) *
               basis_[c].eval(local_edge_bary(d.edge, fwd, t));
        }
      } else {
        const TriOrthoIndex a = alphas[d.alpha];
        for (std::size_t q = 0; q < tr.points.size(); ++q) {
          const Bary& l = tr.points[q];
          v += tr.weights[q] * tri_ortho_eval(a, l[1], l[2]) * basis_[c].eval(l);
        }
        v /= tri_ortho_norm(a);
      }
      fmat_(r, c) = v;
    }
  }
}

const ReferenceElement& ReferenceElement::get(int k, int mask) {
  static std::map<std::pair<int, int>, std::unique_ptr<ReferenceElement>> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  const auto key = std::make_pair(k, mask);
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, std::unique_ptr<ReferenceElement>(new ReferenceElement(k, mask))).first;
  return *it->second;
}

Bary edge_bary(const Triangulation& m, int K, int E, double t) {
  const int i = m.local_edge(K, E);
  return local_edge_bary(i, m.edge_forward(K, i), t);
}

// ---------------------------------------------------------------------------

PiecewisePoly::PiecewisePoly(MeshPtr mesh, int degree)
    : mesh_(std::move(mesh)), d_(degree), c_(std::size_t(mesh_->num_triangles()) * bdim(degree), 0.0) {}

BPoly PiecewisePoly::poly(int K) const {
  const double* b = block(K);
  return BPoly(d_, std::vector<double>(b, b + block_size()));
}

void PiecewisePoly::set_poly(int K, const BPoly& p) {
  if (p.degree() != d_) throw std::invalid_argument("PiecewisePoly::set_poly: degree mismatch");
  std::copy(p.coeffs().begin(), p.coeffs().end(), block(K));
}

double PiecewisePoly::eval(int K, const Bary& l) const { return poly(K).eval(l); }

Point PiecewisePoly::grad(int K, const Bary& l) const {
  const BPoly p = poly(K);
  const auto g = mesh_->grad_lambda(K);
  Point out(0.0, 0.0);
  for (int i = 0; i < 3; ++i) out += p.deriv(i).eval(l) * g[i];
  return out;
}

double PiecewisePoly::laplacian(int K, const Bary& l) const {
  const BPoly p = poly(K);
  const auto g = mesh_->grad_lambda(K);
  double s = 0.0;
  for (int i = 0; i < 3; ++i) {
    const BPoly di = p.deriv(i);
    for (int j = 0; j < 3; ++j) s += di.deriv(j).eval(l) * g[i].dot(g[j]);
  }
  return s;
}

double PiecewisePoly::trace(int K, int E, double t) const {
  return eval(K, edge_bary(*mesh_, K, E, t));
}

PiecewisePoly PiecewisePoly::elevate(int degree) const {
  if (degree == d_) return *this;
  PiecewisePoly out(mesh_, degree);
  for (int K = 0; K < mesh_->num_triangles(); ++K) out.set_poly(K, poly(K).elevate(degree));
  return out;
}

PiecewisePoly PiecewisePoly::reduce(int degree, double* err) const {
  if (degree >= d_) {
    if (err) *err = 0.0;
    return elevate(degree);
  }
  PiecewisePoly out(mesh_, degree);
  double e = 0.0;
  for (int K = 0; K < mesh_->num_triangles(); ++K) {
    double eK = 0.0;
    out.set_poly(K, reduce_degree(poly(K), degree, &eK));
    e = std::max(e, eK);
  }
  if (err) *err = e;
  return out;
}

void PiecewisePoly::check_compatible(const PiecewisePoly& o) const {
  if (mesh_ != o.mesh_) throw std::invalid_argument("PiecewisePoly: different meshes");
  if (d_ != o.d_) throw std::invalid_argument("PiecewisePoly: different degrees");
}

PiecewisePoly& PiecewisePoly::operator+=(const PiecewisePoly& o) {
  check_compatible(o);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

PiecewisePoly& PiecewisePoly::operator-=(const PiecewisePoly& o) {
  check_compatible(o);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

PiecewisePoly& PiecewisePoly::operator*=(double s) {
  for (double& v : c_) v *= s;
  return *this;
}

double PiecewisePoly::coeff_norm() const {
  double m = 0.0;
  for (double v : c_) m = std::max(m, std::abs(v));
  return m;
}

PiecewisePoly operator+(PiecewisePoly a, const PiecewisePoly& b) { return a += b; }
PiecewisePoly operator-(PiecewisePoly a, const PiecewisePoly& b) { return a -= b; }
PiecewisePoly operator*(double s, PiecewisePoly a) { return a *= s; }

PiecewisePoly interpolate_function(const MeshPtr& mesh, int degree,
                                   const std::function<double(const Point&)>& f) {
  PiecewisePoly out(mesh, degree);
  const auto lattice = bernstein_lattice(degree);
  std::vector<double> vals(lattice.size());
  for (int K = 0; K < mesh->num_triangles(); ++K) {
    for (std::size_t i = 0; i < lattice.size(); ++i) vals[i] = f(mesh->map(K, lattice[i]));
    out.set_poly(K, bernstein_interpolate(degree, vals));
  }
  return out;
}

double jump(const PiecewisePoly& u, int E, double t) {
  const Triangulation& m = *u.mesh();
  const double l = u.trace(m.left(E), E, t);
  if (m.is_boundary_edge(E)) return l;
  return l - u.trace(m.right(E), E, t);
}

double mean(const PiecewisePoly& u, int E, double t) {
  const Triangulation& m = *u.mesh();
  const double l = u.trace(m.left(E), E, t);
  if (m.is_boundary_edge(E)) return l;
  return 0.5 * (l + u.trace(m.right(E), E, t));
}

Point jump_grad(const PiecewisePoly& u, int E, double t) {
  const Triangulation& m = *u.mesh();
  const int L = m.left(E);
  const Point gl = u.grad(L, edge_bary(m, L, E, t));
  if (m.is_boundary_edge(E)) return gl;
  const int R = m.right(E);
  return gl - u.grad(R, edge_bary(m, R, E, t));
}

// ---------------------------------------------------------------------------

CRSpace::CRSpace(MeshPtr mesh, int k, bool homogeneous)
    : mesh_(std::move(mesh)), k_(k), homogeneous_(homogeneous), nvol_(dim_p2(k - 3)) {
  require_odd_degree(k);
  edge_first_.assign(mesh_->num_edges(), -1);
  int n = 0;
  for (int E = 0; E < mesh_->num_edges(); ++E) {
    if (homogeneous_ && mesh_->is_boundary_edge(E)) continue;
    edge_first_[E] = n;
    n += k_;
  }
  vol_first_ = n;
  ndof_ = n + nvol_ * mesh_->num_triangles();
}

int CRSpace::edge_dof(int E, int j) const {
  const int f = edge_first_[E];
  return f < 0 ? -1 : f + j;
}

int CRSpace::volume_dof(int K, int alpha) const { return vol_first_ + K * nvol_ + alpha; }

std::vector<int> CRSpace::local_dofs(int K) const {
  std::vector<int> out;
  out.reserve(3 * k_ + nvol_);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < k_; ++j) out.push_back(edge_dof(mesh_->tri_edge(K, i), j));
  for (int a = 0; a < nvol_; ++a) out.push_back(volume_dof(K, a));
  return out;
}

const ReferenceElement& CRSpace::reference(int K) const {
  return ReferenceElement::get(k_, mesh_->orientation_mask(K));
}

CRFunction zero_function(const SpacePtr& space) {
  return {space, Eigen::VectorXd::Zero(space->dim())};
}

Eigen::VectorXd local_coefficients(const CRFunction& f, int K) {
  const auto dofs = f.space->local_dofs(K);
  Eigen::VectorXd c(dofs.size());
  for (std::size_t i = 0; i < dofs.size(); ++i) c[i] = dofs[i] < 0 ? 0.0 : f.coef[dofs[i]];
  return c;
}

PiecewisePoly to_piecewise(const CRFunction& f) {
  const CRSpace& sp = *f.space;
  PiecewisePoly out(sp.mesh(), sp.k());
  for (int K = 0; K < sp.mesh()->num_triangles(); ++K) {
    const Eigen::VectorXd b = sp.reference(K).to_bernstein() * local_coefficients(f, K);
    std::copy(b.data(), b.data() + b.size(), out.block(K));
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

void check_source(const Triangulation& m, const PiecewisePoly& u, FineSource src) {
  if (src.pair) {
    if (src.pair->coarse.get() != &m || src.pair->fine != u.mesh())
      throw std::invalid_argument("functional: refinement pair does not match the meshes");
  } else if (u.mesh().get() != &m) {
    throw std::invalid_argument("functional: function lives on a different mesh");
  }
}

}  // namespace

double triangle_moment(const Triangulation& m, int K, const PiecewisePoly& u,
                       const std::function<double(const Bary&)>& w, int dw, FineSource src) {
  check_source(m, u, src);
  const TriangleRule& r = quad_triangle(dw + u.degree());
  double s = 0.0;
  if (!src.pair) {
    const BPoly p = u.poly(K);
    for (std::size_t q = 0; q < r.points.size(); ++q)
      s += r.weights[q] * w(r.points[q]) * p.eval(r.points[q]);
    return 2.0 * m.area(K) * s;
  }
  const Triangulation& f = *src.pair->fine;
  for (int Kh : src.pair->rel.succ[K]) {
    const BPoly p = u.poly(Kh);
    double sh = 0.0;
    for (std::size_t q = 0; q < r.points.size(); ++q) {
      const Bary lc = m.to_bary(K, f.map(Kh, r.points[q]));
      sh += r.weights[q] * w(lc) * p.eval(r.points[q]);
    }
    s += 2.0 * f.area(Kh) * sh;
  }
  return s;
}

double edge_moment(const Triangulation& m, int E, const PiecewisePoly& u,
                   const std::function<double(double)>& w, int dw, Side side, FineSource src) {
  check_source(m, u, src);
  const int K = (side == Side::Right && !m.is_boundary_edge(E)) ? m.right(E) : m.left(E);
  const EdgeRule& r = quad_edge(dw + u.degree());
  double s = 0.0;
  if (!src.pair) {
    const BPoly p = u.poly(K);
    for (std::size_t q = 0; q < r.points.size(); ++q)
      s += r.weights[q] * w(r.points[q]) * p.eval(edge_bary(m, K, E, r.points[q]));
    return s;
  }
  const Triangulation& f = *src.pair->fine;
  const Point z0 = m.vertex(m.edge(E)[0]);
  const Point z1 = m.vertex(m.edge(E)[1]);
  const double len2 = (z1 - z0).squaredNorm();
  for (int Eh : src.pair->rel.edge_succ[E]) {
    int Kh = -1;
    for (int cand : f.edge_triangles(Eh))
      if (src.pair->rel.parent[cand] == K) Kh = cand;
    if (Kh < 0) throw std::logic_error("edge_moment: no successor on the requested side");
    const BPoly p = u.poly(Kh);
    const double frac = std::sqrt(f.edge_length(Eh) * f.edge_length(Eh) / len2);
    for (std::size_t q = 0; q < r.points.size(); ++q) {
      const Bary lf = edge_bary(f, Kh, Eh, r.points[q]);
      const double t = (f.map(Kh, lf) - z0).dot(z1 - z0) / len2;
      s += frac * r.weights[q] * w(t) * p.eval(lf);
    }
  }
  return s;
}

double functional_edge(const Triangulation& m, int k, int E, int j, const PiecewisePoly& u,
                       Side side, FineSource src) {
  if (j < 0 || j >= k) throw std::out_of_range("functional_edge: moment index out of range");
  return edge_moment(m, E, u, [k, j](double t) { return edge_dual_weight(k, j, t); }, k - 1,
                     side, src);
}

double functional_volume(const Triangulation& m, int k, int K, int alpha, const PiecewisePoly& u,
                         FineSource src) {
  const auto alphas = tri_ortho_indices(k - 3);
  if (alpha < 0 || alpha >= int(alphas.size()))
    throw std::out_of_range("functional_volume: multi-index out of range");
  const TriOrthoIndex a = alphas[alpha];
  const double mom = triangle_moment(
      m, K, u, [a](const Bary& l) { return tri_ortho_eval(a, l[1], l[2]); }, a.degree(), src);
  // pull back to the reference triangle of area 1/2
  return mom / (2.0 * m.area(K) * tri_ortho_norm(a));
}

double vertex_moment(const Triangulation& m, int k, int K, int z, const PiecewisePoly& u,
                     FineSource src) {
  const int iz = m.local_vertex(K, z);
  const double scale = -0.5 * (k + 2.0) * (k + 1.0) / m.area(K);
  const JacobiParams jp{k, 0.0, 2.0};
  return scale * triangle_moment(
                     m, K, u, [&](const Bary& l) { return jacobi_eval(jp, 1.0 - 2.0 * l[iz]); },
                     k, src);
}

double functional_vertex(const Triangulation& m, int k, const SubmeshSelection& s, int z,
                         const PiecewisePoly& u, FineSource src) {
  const auto tris = triangles_at(m, s, z);
  if (tris.empty()) throw std::invalid_argument("functional_vertex: vertex not in the submesh");
  double sum = 0.0;
  for (int K : tris) sum += vertex_moment(m, k, K, z, u, src);
  return sum / double(tris.size());
}

double cr_jump_defect(const Triangulation& m, int k, const PiecewisePoly& u, FineSource src) {
  double worst = 0.0;
  for (int E = 0; E < m.num_edges(); ++E) {
    if (m.is_boundary_edge(E)) continue;
    for (int q = 0; q < k; ++q) {
      auto w = [q](double t) { return jacobi_eval({q, 0.0, 0.0}, 1.0 - 2.0 * t); };
      const double d = edge_moment(m, E, u, w, q, Side::Left, src) -
                       edge_moment(m, E, u, w, q, Side::Right, src);
      worst = std::max(worst, std::abs(d));
    }
  }
  return worst / std::max(1.0, u.coeff_norm());
}

void require_cr(const Triangulation& m, int k, const PiecewisePoly& u, FineSource src, double tol) {
  const double d = cr_jump_defect(m, k, u, src);
  if (d > tol) {
    std::ostringstream os;
    os << "jump moments do not vanish (defect " << d << ")";
    throw std::domain_error(os.str());
  }
}

CRFunction interpolate_cr(const SpacePtr& space, const PiecewisePoly& u,
                          const std::optional<SubmeshSelection>& s, FineSource src) {
  const Triangulation& m = *space->mesh();
  const int k = space->k();
  require_cr(m, k, u, src);
  const SubmeshSelection sel = s ? *s : SubmeshSelection(m.num_triangles(), true);
  CRFunction out = zero_function(space);
  for (int E : edges_of(m, sel)) {
    if (space->edge_dof(E, 0) < 0) continue;
    for (int j = 0; j < k; ++j)
      out.coef[space->edge_dof(E, j)] = functional_edge(m, k, E, j, u, Side::Auto, src);
  }
  const int nvol = space->num_volume_moments();
  if (nvol == 0) return out;
  for (int K : sel.list()) {
    const ReferenceElement& ref = space->reference(K);
    const Eigen::VectorXd loc = local_coefficients(out, K);
    for (int a = 0; a < nvol; ++a) {
      double v = functional_volume(m, k, K, a, u, src);
      for (int e = 0; e < 3 * k; ++e) v -= ref.functional_matrix()(ref.volume_index(a), e) * loc[e];
      out.coef[space->volume_dof(K, a)] = v;
    }
  }
  return out;
}

CRFunction from_moments(const SpacePtr& space, const PiecewisePoly& u) {
  if (u.mesh() != space->mesh()) throw std::invalid_argument("from_moments: mesh mismatch");
  return interpolate_cr(space, u);
}

void write_function(std::ostream& os, const CRFunction& f) {
  char buf[64];
  os << f.space->k() << ' ' << f.coef.size() << '\n';
  for (Eigen::Index i = 0; i < f.coef.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g\n", f.coef[i]);
    os << buf;
  }
}

Eigen::VectorXd read_function(std::istream& is, int* k) {
  int kk = 0;
  long n = 0;
  if (!(is >> kk >> n) || n < 0) throw std::runtime_error("read_function: bad header");
  Eigen::VectorXd c(n);
  for (long i = 0; i < n; ++i)
    if (!(is >> c[i])) throw std::runtime_error("read_function: truncated coefficient list");
  if (k) *k = kk;
  return c;
}

}  // namespace crk
