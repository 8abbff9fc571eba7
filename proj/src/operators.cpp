#include "crk/operators.hpp"

#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace crk {

namespace {

void check_input(const CRSpace& sp, const PiecewisePoly& u, FineSource src) {
  if (src.pair) {
    if (src.pair->coarse != sp.mesh() || src.pair->fine != u.mesh())
      throw std::invalid_argument("operator: refinement pair does not match");
  } else if (u.mesh() != sp.mesh()) {
    throw std::invalid_argument("operator: input lives on a different mesh");
  }
}

void gate(const CRSpace& sp, const PiecewisePoly& u, FineSource src) {
  check_input(sp, u, src);
  require_cr(*sp.mesh(), sp.k(), u, src);
}

// u minus the expansion of f, at the larger of the two degrees
PiecewisePoly minus(const PiecewisePoly& u, const CRFunction& f) {
  const int d = std::max(u.degree(), f.space->k());
  return u.elevate(d) - to_piecewise(f).elevate(d);
}

CRFunction nc_impl(const SpacePtr& sp, const PiecewisePoly& u, const std::vector<int>& edges,
                   FineSource src) {
  const Triangulation& m = *sp->mesh();
  const int k = sp->k();
  CRFunction out = zero_function(sp);
  auto one = [&](int E) {
    if (sp->edge_dof(E, 0) < 0) return;
    out.coef[sp->edge_dof(E, k - 1)] = functional_edge(m, k, E, k - 1, u, Side::Auto, src);
  };
  if (edges.empty())
    for (int E = 0; E < m.num_edges(); ++E) one(E);
  else
    for (int E : edges) one(E);
  return out;
}

CRFunction c_impl(const SpacePtr& sp, const PiecewisePoly& u, FineSource src) {
  const Triangulation& m = *sp->mesh();
  const int k = sp->k();
  CRFunction out = zero_function(sp);
  for (int E = 0; E < m.num_edges(); ++E) {
    if (sp->edge_dof(E, 0) < 0) continue;
    for (int j = 0; j + 1 < k; ++j)
      out.coef[sp->edge_dof(E, j)] = functional_edge(m, k, E, j, u, Side::Auto, src);
  }
  return out;
}

CRFunction vol_impl(const SpacePtr& sp, const PiecewisePoly& u, FineSource src) {
  const Triangulation& m = *sp->mesh();
  CRFunction out = zero_function(sp);
  for (int K = 0; K < m.num_triangles(); ++K)
    for (int a = 0; a < sp->num_volume_moments(); ++a)
      out.coef[sp->volume_dof(K, a)] = functional_volume(m, sp->k(), K, a, u, src);
  return out;
}

// volume part of Pi^T(u - e), e a combination of conforming edge bubbles
void subtract_volume(const CRSpace& sp, CRFunction& out, const CRFunction& e) {
  const Triangulation& m = *sp.mesh();
  const int k = sp.k();
  for (int K = 0; K < m.num_triangles(); ++K) {
    const ReferenceElement& ref = sp.reference(K);
    const Eigen::VectorXd loc = local_coefficients(e, K);
    for (int a = 0; a < sp.num_volume_moments(); ++a) {
      double s = 0.0;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j + 1 < k; ++j)
          s += ref.functional_matrix()(ref.volume_index(a), ref.edge_index(i, j)) *
               loc[ref.edge_index(i, j)];
      out.coef[sp.volume_dof(K, a)] -= s;
    }
  }
}

CRFunction dot_impl(const SpacePtr& sp, const PiecewisePoly& u, FineSource src) {
  const CRFunction c = c_impl(sp, u, src);
  CRFunction out = vol_impl(sp, u, src);
  subtract_volume(*sp, out, c);
  out.coef += c.coef;
  return out;
}

std::vector<int> vertex_set(const CRSpace& sp, const SubmeshSelection& s) {
  std::vector<int> out;
  for (int z : vertices_of(*sp.mesh(), s))
    if (!sp.homogeneous() || !sp.mesh()->is_boundary_vertex(z)) out.push_back(z);
  return out;
}

void add_psi(const CRSpace& sp, const SubmeshSelection& s, int z, double c, CRFunction& out) {
  for (int E : edge_spider(*sp.mesh(), s, z)) {
    const int d = sp.edge_dof(E, sp.k() - 1);
    if (d >= 0) out.coef[d] += 0.5 * c;
  }
}

CRFunction vertex_impl(const SpacePtr& sp, const SubmeshSelection& s, const PiecewisePoly& u,
                       FineSource src) {
  CRFunction out = zero_function(sp);
  for (int z : vertex_set(*sp, s))
    add_psi(*sp, s, z, functional_vertex(*sp->mesh(), sp->k(), s, z, u, src), out);
  return out;
}

// edges of T outside E(S); this contains E(T \ S^{1/2}) and adds the edges
// shared by two triangles of S^{1/2} \ S, without which constants are lost there
std::vector<int> outer_edges(const Triangulation& m, const SubmeshSelection& s) {
  std::vector<bool> inner(m.num_edges(), false);
  for (int E : edges_of(m, s)) inner[E] = true;
  std::vector<int> out;
  for (int E = 0; E < m.num_edges(); ++E)
    if (!inner[E]) out.push_back(E);
  return out;
}

// local Phi_E on a triangle whose local edge i carries E
const BPoly& phi_local(int k, int i, bool forward) {
  static std::map<std::tuple<int, int, bool>, BPoly> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  const auto key = std::make_tuple(k, i, forward);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  const int z0 = forward ? (i + 1) % 3 : (i + 2) % 3;
  const int z1 = forward ? (i + 2) % 3 : (i + 1) % 3;
  const BPoly s = BPoly::linear(1.0, 1.0, 1.0);
  const BPoly w = BPoly::lambda(z0) * BPoly::lambda(z1);
  BPoly p = w * jacobi_compose({k - 1, 1.0, 1.0}, 2.0 * BPoly::lambda(z0) - s, s);
  p = phi_scale(k) * p.elevate(k + 1);
  return cache.emplace(key, std::move(p)).first->second;
}

PiecewisePoly phi_impl(const SpacePtr& sp, const PiecewisePoly& u) {
  const Triangulation& m = *sp->mesh();
  const int k = sp->k();
  PiecewisePoly out(sp->mesh(), k + 1);
  for (int E = 0; E < m.num_edges(); ++E) {
    if (sp->edge_dof(E, 0) < 0) continue;
    const double c = functional_edge(m, k, E, k - 1, u);
    if (c == 0.0) continue;
    for (int K : m.edge_triangles(E)) {
      const int i = m.local_edge(K, E);
      BPoly p = out.poly(K);
      p += c * phi_local(k, i, m.edge_forward(K, i));
      out.set_poly(K, p);
    }
  }
  return out;
}

}  // namespace

CRFunction pi_edge_nc(const SpacePtr& space, const PiecewisePoly& u, const std::vector<int>& edges,
                      FineSource src) {
  gate(*space, u, src);
  return nc_impl(space, u, edges, src);
}

CRFunction pi_edge_c(const SpacePtr& space, const PiecewisePoly& u, FineSource src) {
  gate(*space, u, src);
  return c_impl(space, u, src);
}

CRFunction pi_edge(const SpacePtr& space, const PiecewisePoly& u, FineSource src) {
  gate(*space, u, src);
  CRFunction out = c_impl(space, u, src);
  out.coef += nc_impl(space, u, {}, src).coef;
  return out;
}

CRFunction pi_vol(const SpacePtr& space, const PiecewisePoly& u, FineSource src) {
  gate(*space, u, src);
  return vol_impl(space, u, src);
}

CRFunction pi_dot(const SpacePtr& space, const PiecewisePoly& u, FineSource src) {
  gate(*space, u, src);
  return dot_impl(space, u, src);
}

CRFunction psi_vertex(const SpacePtr& space, const SubmeshSelection& s, int z) {
  if (triangles_at(*space->mesh(), s, z).empty())
    throw std::invalid_argument("psi_vertex: vertex not in the submesh");
  CRFunction out = zero_function(space);
  add_psi(*space, s, z, 1.0, out);
  return out;
}

CRFunction pi_vertex(const SpacePtr& space, const SubmeshSelection& s, const PiecewisePoly& u,
                     FineSource src) {
  gate(*space, u, src);
  return vertex_impl(space, s, u, src);
}

CRFunction partially_conforming(const SpacePtr& space, const SubmeshSelection& s,
                                const PiecewisePoly& u, FineSource src) {
  gate(*space, u, src);
  CRFunction out = vertex_impl(space, s, u, src);
  const auto outer = outer_edges(*space->mesh(), s);
  if (!outer.empty()) out.coef += nc_impl(space, u, outer, src).coef;
  out.coef += dot_impl(space, u, src).coef;
  return out;
}

CRFunction partially_conforming_nested(const SpacePtr& space, const SubmeshSelection& s,
                                       const PiecewisePoly& u) {
  gate(*space, u, {});
  const CRFunction v = vertex_impl(space, s, u, {});
  const PiecewisePoly r1 = minus(u, v);
  const auto outer = outer_edges(*space->mesh(), s);
  const CRFunction n = outer.empty() ? zero_function(space) : nc_impl(space, r1, outer, {});
  const CRFunction d = dot_impl(space, minus(r1, n), {});
  CRFunction out = v;
  out.coef += n.coef + d.coef;
  return out;
}

double phi_scale(int k) {
  require_odd_degree(k);
  const EdgeRule& r = quad_edge(2 * k + 2);
  double f = 0.0;
  for (std::size_t q = 0; q < r.points.size(); ++q) {
    const double t = r.points[q];
    f += r.weights[q] * edge_dual_weight(k, k - 1, t) * t * (1.0 - t) *
         jacobi_eval({k - 1, 1.0, 1.0}, 1.0 - 2.0 * t);
  }
  if (!(f > 0.0)) throw std::logic_error("phi_scale: nonpositive normalization");
  return 1.0 / f;
}

PiecewisePoly phi_edge(const MeshPtr& mesh, int k, int E) {
  PiecewisePoly out(mesh, k + 1);
  for (int K : mesh->edge_triangles(E)) {
    const int i = mesh->local_edge(K, E);
    out.set_poly(K, phi_local(k, i, mesh->edge_forward(K, i)));
  }
  return out;
}

PiecewisePoly pi_phi(const SpacePtr& space, const PiecewisePoly& u) {
  gate(*space, u, {});
  return phi_impl(space, u);
}

PiecewisePoly companion(const SpacePtr& space, const PiecewisePoly& u) {
  gate(*space, u, {});
  const int k = space->k();
  if (u.degree() > k + 1) throw std::invalid_argument("companion: input degree above k+1");
  const SubmeshSelection all(space->mesh()->num_triangles(), true);
  const CRFunction v = vertex_impl(space, all, u, {});
  const PiecewisePoly phi = phi_impl(space, minus(u, v));
  const CRFunction d = dot_impl(space, u.elevate(k + 1) - phi, {});
  return to_piecewise(v).elevate(k + 1) + phi + to_piecewise(d).elevate(k + 1);
}

PiecewisePoly restrict_to_fine(const RefinedMesh& pair, const PiecewisePoly& u) {
  if (u.mesh() != pair.coarse) throw std::invalid_argument("restrict_to_fine: mesh mismatch");
  const Triangulation& c = *pair.coarse;
  const Triangulation& f = *pair.fine;
  const int d = u.degree();
  PiecewisePoly out(pair.fine, d);
  const auto lattice = bernstein_lattice(d);
  std::vector<double> vals(lattice.size());
  for (int Kh = 0; Kh < f.num_triangles(); ++Kh) {
    const int K = pair.rel.parent[Kh];
    if (pair.rel.succ[K].size() == 1 && f.triangle(Kh) == c.triangle(K)) {
      out.set_poly(Kh, u.poly(K));
      continue;
    }
    const BPoly p = u.poly(K);
    for (std::size_t i = 0; i < lattice.size(); ++i)
      vals[i] = p.eval(c.to_bary(K, f.map(Kh, lattice[i])));
    out.set_poly(Kh, bernstein_interpolate(d, vals));
  }
  return out;
}

CRFunction fine_right_inverse(const RefinedMesh& pair, const SpacePtr& fine_space,
                              const CRFunction& u) {
  if (u.space->mesh() != pair.coarse || fine_space->mesh() != pair.fine)
    throw std::invalid_argument("fine_right_inverse: spaces do not match the pair");
  const PiecewisePoly j = companion(u.space, to_piecewise(u));
  return interpolate_cr(fine_space, restrict_to_fine(pair, j));
}

CRFunction intersect_map(const RefinedMesh& pair, const SpacePtr& coarse_space,
                         const SpacePtr& fine_space, const CRFunction& v) {
  if (coarse_space->mesh() != pair.coarse || fine_space->mesh() != pair.fine ||
      v.space->mesh() != pair.fine)
    throw std::invalid_argument("intersect_map: incompatible refinement pair");
  const CRFunction w = partially_conforming(fine_space, pair.rel.fine_new, to_piecewise(v));
  return partially_conforming(coarse_space, pair.rel.refined, to_piecewise(w), {&pair});
}

}  // namespace crk
