#include "verify.hpp"

#include "crk/operators.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace crk::cli {

namespace {

double max_abs(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

CRFunction random_cr(const SpacePtr& sp, std::mt19937& gen) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  CRFunction f = zero_function(sp);
  for (int i = 0; i < sp->dim(); ++i) f.coef[i] = u(gen);
  return f;
}

// conforming: no nonconforming edge bubbles, plus vertex functions
CRFunction random_conforming(const SpacePtr& sp, std::mt19937& gen) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  CRFunction f = random_cr(sp, gen);
  const Triangulation& m = *sp->mesh();
  for (int E = 0; E < m.num_edges(); ++E)
    if (sp->edge_dof(E, 0) >= 0) f.coef[sp->edge_dof(E, sp->k() - 1)] = 0.0;
  const SubmeshSelection all(m.num_triangles(), true);
  for (int z = 0; z < m.num_vertices(); ++z)
    if (!m.is_boundary_vertex(z)) f.coef += u(gen) * psi_vertex(sp, all, z).coef;
  return f;
}

// F_{E,j}(b_i) = delta, F_{E,j}(b_{K,a}) = 0, F_{K,a}(b_{K',a'}) = delta
double biduality(const SpacePtr& sp) {
  const Triangulation& m = *sp->mesh();
  const int k = sp->k();
  double worst = 0.0;
  for (int i = 0; i < sp->dim(); ++i) {
    CRFunction b = zero_function(sp);
    b.coef[i] = 1.0;
    const PiecewisePoly bp = to_piecewise(b);
    for (int E = 0; E < m.num_edges(); ++E)
      for (int j = 0; j < k; ++j) {
        const double want = sp->edge_dof(E, j) == i ? 1.0 : 0.0;
        worst = std::max(worst, std::abs(functional_edge(m, k, E, j, bp) - want));
      }
    if (sp->num_volume_moments() == 0 || i < sp->volume_dof(0, 0)) continue;
    for (int K = 0; K < m.num_triangles(); ++K)
      for (int a = 0; a < sp->num_volume_moments(); ++a) {
        const double want = sp->volume_dof(K, a) == i ? 1.0 : 0.0;
        worst = std::max(worst, std::abs(functional_volume(m, k, K, a, bp) - want));
      }
  }
  return worst;
}

double global_poly(const Point& x, const std::vector<double>& c, int d) {
  double s = 0.0;
  int n = 0;
  for (int a = 0; a <= d; ++a)
    for (int b = 0; a + b <= d; ++b) s += c[n++] * std::pow(x.x(), a) * std::pow(x.y(), b);
  return s;
}

// F(I u) = F(u) for a continuous polynomial u of degree k+2
double moment_preservation(const SpacePtr& sp, std::mt19937& gen) {
  const Triangulation& m = *sp->mesh();
  const int k = sp->k();
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> c(dim_p2(k + 2));
  for (double& x : c) x = u(gen);
  const PiecewisePoly up = interpolate_function(sp->mesh(), k + 2, [&](const Point& x) {
    return global_poly(x, c, k + 2);
  });
  const PiecewisePoly ip = to_piecewise(interpolate_cr(sp, up));
  double worst = 0.0;
  for (int E = 0; E < m.num_edges(); ++E)
    for (int j = 0; j < k; ++j)
      worst = std::max(worst, std::abs(functional_edge(m, k, E, j, ip) - functional_edge(m, k, E, j, up)));
  for (int K = 0; K < m.num_triangles(); ++K)
    for (int a = 0; a < sp->num_volume_moments(); ++a)
      worst = std::max(worst, std::abs(functional_volume(m, k, K, a, ip) -
                                       functional_volume(m, k, K, a, up)));
  return worst;
}

void mesh_checks(std::vector<Check>& out, const std::string& tag, const MeshPtr& m, int k,
                 std::mt19937& gen) {
  const SpacePtr full = std::make_shared<CRSpace>(m, k, false);
  const SpacePtr hom = std::make_shared<CRSpace>(m, k, true);
  out.push_back({"identity", "biduality " + tag, k, biduality(full), 1e-11});

  const CRFunction v = random_cr(full, gen);
  out.push_back({"identity", "I projection " + tag, k,
                 max_abs(interpolate_cr(full, to_piecewise(v)).coef - v.coef), 1e-11});
  out.push_back({"identity", "I moment preservation " + tag, k, moment_preservation(full, gen), 1e-11});

  const PiecewisePoly c = to_piecewise(random_conforming(hom, gen));
  out.push_back({"identity", "J identity on S_k0 " + tag, k,
                 (companion(hom, c) - c.elevate(k + 1)).coeff_norm(), 1e-10});
  const CRFunction w = random_cr(hom, gen);
  out.push_back({"identity", "I J = Id " + tag, k,
                 max_abs(interpolate_cr(hom, companion(hom, to_piecewise(w))).coef - w.coef), 1e-10});
}

// far_count accumulates the triangles outside R^1/2 that were compared
void pair_checks(std::vector<Check>& out, const std::string& tag, const RefinedMesh& r, int k,
                 std::mt19937& gen, int& far_count) {
  const SpacePtr coarse = std::make_shared<CRSpace>(r.coarse, k, true);
  const SpacePtr fine = std::make_shared<CRSpace>(r.fine, k, true);
  const CRFunction v = random_cr(fine, gen);
  const CRFunction p = intersect_map(r, coarse, fine, v);
  const PiecewisePoly pf = restrict_to_fine(r, to_piecewise(p));
  const PiecewisePoly vp = to_piecewise(v);

  double far = 0.0;
  const SubmeshSelection outside = layer_half(*r.coarse, r.rel.refined).complement();
  far_count += outside.count();
  for (int K : outside.list()) {
    const int Kh = r.rel.succ[K][0];
    for (int i = 0; i < vp.block_size(); ++i)
      far = std::max(far, std::abs(pf.block(Kh)[i] - vp.block(Kh)[i]));
  }
  out.push_back({"identity", "P-hat identity outside R^1/2 " + tag, k, far, 1e-10});

  double gate = cr_jump_defect(*r.coarse, k, to_piecewise(p));
  gate = std::max(gate, cr_jump_defect(*r.fine, k, pf));
  for (int E = 0; E < r.fine->num_edges(); ++E)
    if (r.fine->is_boundary_edge(E))
      for (int j = 0; j < k; ++j) gate = std::max(gate, std::abs(functional_edge(*r.fine, k, E, j, pf)));
  out.push_back({"identity", "P-hat lies in both spaces " + tag, k, gate, 1e-10});

  const CRFunction u = random_cr(coarse, gen);
  const PiecewisePoly us = to_piecewise(fine_right_inverse(r, fine, u));
  out.push_back({"identity", "fine right inverse " + tag, k,
                 max_abs(interpolate_cr(coarse, us, std::nullopt, {&r}).coef - u.coef), 1e-10});
}

void orthogonality_checks(std::vector<Check>& out, int k) {
  // the nonconforming edge bubble against Bernstein polynomials of degree k-2
  const TriangleRule& r = quad_triangle(2 * k);
  double worst = 0.0;
  if (k >= 3) {
    const ReferenceElement& ref = ReferenceElement::get(k, 0);
    for (int i = 0; i < 3; ++i) {
      const BPoly& b = ref.basis()[ref.edge_index(i, k - 1)];
      for (int a = 0; a < bdim(k - 2); ++a) {
        BPoly q(k - 2);
        q[a] = 1.0;
        double s = 0.0;
        for (std::size_t n = 0; n < r.points.size(); ++n)
          s += r.weights[n] * b.eval(r.points[n]) * q.eval(r.points[n]);
        worst = std::max(worst, std::abs(s));
      }
    }
  }
  out.push_back({"orthogonality", "b_E,k-1 against P_k-2", k, worst, 1e-12});

  // W_T-weighted orthogonality of P_T,alpha up to degree k
  const auto idx = tri_ortho_indices(k);
  const TriangleRule& rr = quad_triangle(2 * k + 3);
  worst = 0.0;
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = 0; b < a; ++b) {
      double s = 0.0;
      for (std::size_t n = 0; n < rr.points.size(); ++n) {
        const Bary& l = rr.points[n];
        s += rr.weights[n] * l[0] * l[1] * l[2] * tri_ortho_eval(idx[a], l[1], l[2]) *
             tri_ortho_eval(idx[b], l[1], l[2]);
      }
      worst = std::max(worst, std::abs(s));
    }
  out.push_back({"orthogonality", "weighted P_T,alpha pairwise", k, worst, 1e-12});
}

void jacobi_norm_checks(std::vector<Check>& out) {
  const EdgeRule& r = quad_edge(16);
  double worst = 0.0;
  for (int j = 0; j <= 8; ++j) {
    double s = 0.0;
    for (std::size_t n = 0; n < r.points.size(); ++n)
      s += 2.0 * r.weights[n] * std::pow(jacobi_eval({j, 1.0, 1.0}, 2.0 * r.points[n] - 1.0), 2);
    worst = std::max(worst, std::abs(s - 4.0 * (j + 1) / (j + 2)));
  }
  out.push_back({"orthogonality", "||P_j^(1,1)||^2 = 4(j+1)/(j+2), j <= 8", 0, worst, 1e-12});
}

void vertex_checks(std::vector<Check>& out, int k, std::mt19937& gen) {
  const MeshPtr m = make_lshape_initial();
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    PiecewisePoly p(m, k);
    const int K = trial % m->num_triangles();
    BPoly q(k);
    for (int i = 0; i < bdim(k); ++i) q[i] = u(gen);
    p.set_poly(K, q);
    for (int i = 0; i < 3; ++i) {
      Bary l{0.0, 0.0, 0.0};
      l[i] = 1.0;
      const double want = q.eval(l);
      const double got = vertex_moment(*m, k, K, m->triangle(K)[i], p);
      worst = std::max(worst, std::abs(got - want) / std::max(std::abs(want), 1e-300));
    }
  }
  out.push_back({"vertex", "(g_K^z, p) = p(z), 20 random p", k, worst, 1e-10});
}

}  // namespace

std::vector<Check> verify_suite(const std::vector<int>& ks, unsigned seed) {
  for (int k : ks) require_odd_degree(k);
  std::vector<Check> out;
  const MeshPtr coarse = make_lshape_initial();
  std::mt19937 gen(seed);
  std::vector<int> marked;
  std::bernoulli_distribution pick(0.5);
  for (int K = 0; K < coarse->num_triangles(); ++K)
    if (pick(gen)) marked.push_back(K);
  if (marked.empty()) marked.push_back(int(seed % coarse->num_triangles()));
  const RefinedMesh r = refine_nvb(coarse, marked);
  // on six triangles R^1/2 usually covers the mesh; a second pair one
  // uniform level up has triangles outside it
  const MeshPtr level1 = refine_uniform(coarse).fine;
  const RefinedMesh r1 =
      refine_nvb(level1, {int(gen() % unsigned(level1->num_triangles()))});
  for (int k : ks) {
    std::mt19937 g(seed * 7919u + unsigned(k));
    mesh_checks(out, "coarse", coarse, k, g);
    mesh_checks(out, "fine", r.fine, k, g);
    int far_count = 0;
    pair_checks(out, "pair 0", r, k, g, far_count);
    pair_checks(out, "pair 1", r1, k, g, far_count);
    out.push_back({"identity", "P-hat check covers triangles outside R^1/2", k,
                   far_count > 0 ? 0.0 : 1.0, 0.0});
    orthogonality_checks(out, k);
    vertex_checks(out, k, g);
  }
  jacobi_norm_checks(out);
  return out;
}

}  // namespace crk::cli
