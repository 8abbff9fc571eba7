#pragma once

#include "crk/bernstein.hpp"
#include "crk/mesh.hpp"

#include <Eigen/Core>

#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <vector>

namespace crk {

/// Checks that k is odd and positive; throws std::invalid_argument otherwise.
void require_odd_degree(int k);

/// Which trace of a broken function to use on an edge.
enum class Side { Auto, Left, Right };

/// Local degree of freedom on a triangle: either moment j of local edge i or
/// the volume moment with multi-index alpha.
struct LocalDof {
  enum Kind { Edge, Volume } kind;
  int edge = -1;   // local edge index
  int j = -1;      // edge moment index, 0..k-1
  int alpha = -1;  // position in tri_ortho_indices(k-3)
};

/// Local basis of CR_k on a triangle, in barycentric coordinates of the
/// triangle. It depends only on k and on which local edges run forward.
class ReferenceElement {
 public:
  static const ReferenceElement& get(int k, int mask);

  [[nodiscard]] int k() const { return k_; }
  [[nodiscard]] int size() const { return int(basis_.size()); }
  [[nodiscard]] const std::vector<BPoly>& basis() const { return basis_; }
  [[nodiscard]] const std::vector<LocalDof>& dofs() const { return dofs_; }
  /// Bernstein coefficients (rows) of each local basis function (columns).
  [[nodiscard]] const Eigen::MatrixXd& to_bernstein() const { return to_bern_; }
  /// Local functional i applied to local basis function j.
  [[nodiscard]] const Eigen::MatrixXd& functional_matrix() const { return fmat_; }
  [[nodiscard]] int edge_index(int edge, int j) const { return edge * k_ + j; }
  [[nodiscard]] int volume_index(int alpha) const { return 3 * k_ + alpha; }

 private:
  ReferenceElement(int k, int mask);
  int k_;
  std::vector<BPoly> basis_;
  std::vector<LocalDof> dofs_;
  Eigen::MatrixXd to_bern_;
  Eigen::MatrixXd fmat_;
};

/// Barycentric coordinates on K of the point of edge E at parameter t, where
/// t runs from z0 (t = 0) to z1 (t = 1).
Bary edge_bary(const Triangulation& m, int K, int E, double t);

/// Broken polynomial of degree d: one Bernstein block per triangle, written in
/// the barycentric coordinates of that triangle.
class PiecewisePoly {
 public:
  PiecewisePoly() = default;
  PiecewisePoly(MeshPtr mesh, int degree);

  [[nodiscard]] const MeshPtr& mesh() const { return mesh_; }
  [[nodiscard]] int degree() const { return d_; }
  [[nodiscard]] int block_size() const { return bdim(d_); }
  [[nodiscard]] BPoly poly(int K) const;
  void set_poly(int K, const BPoly& p);
  double* block(int K) { return c_.data() + std::size_t(K) * block_size(); }
  [[nodiscard]] const double* block(int K) const { return c_.data() + std::size_t(K) * block_size(); }
  [[nodiscard]] const std::vector<double>& coeffs() const { return c_; }

  [[nodiscard]] double eval(int K, const Bary& l) const;
  [[nodiscard]] Point grad(int K, const Bary& l) const;
  [[nodiscard]] double laplacian(int K, const Bary& l) const;
  /// Trace of the restriction to K on edge E at parameter t.
  [[nodiscard]] double trace(int K, int E, double t) const;

  [[nodiscard]] PiecewisePoly elevate(int degree) const;
  /// Degree reduction; err receives the max deviation of the Bernstein coefficients.
  [[nodiscard]] PiecewisePoly reduce(int degree, double* err = nullptr) const;

  PiecewisePoly& operator+=(const PiecewisePoly& o);
  PiecewisePoly& operator-=(const PiecewisePoly& o);
  PiecewisePoly& operator*=(double s);

  /// Max absolute Bernstein coefficient; bounds the sup norm from above.
  [[nodiscard]] double coeff_norm() const;

 private:
  void check_compatible(const PiecewisePoly& o) const;
  MeshPtr mesh_;
  int d_ = 0;
  std::vector<double> c_;
};

PiecewisePoly operator+(PiecewisePoly a, const PiecewisePoly& b);
PiecewisePoly operator-(PiecewisePoly a, const PiecewisePoly& b);
PiecewisePoly operator*(double s, PiecewisePoly a);

/// Interpolates a function given on physical points into a degree-d broken polynomial.
PiecewisePoly interpolate_function(const MeshPtr& mesh, int degree,
                                   const std::function<double(const Point&)>& f);

/// Jump and mean over E at edge parameter t; boundary edges return the K_L trace.
double jump(const PiecewisePoly& u, int E, double t);
double mean(const PiecewisePoly& u, int E, double t);
Point jump_grad(const PiecewisePoly& u, int E, double t);

/// CR_k(T) or CR_{k,0}(T) on a fixed mesh.
class CRSpace {
 public:
  CRSpace(MeshPtr mesh, int k, bool homogeneous);

  [[nodiscard]] const MeshPtr& mesh() const { return mesh_; }
  [[nodiscard]] int k() const { return k_; }
  [[nodiscard]] bool homogeneous() const { return homogeneous_; }
  [[nodiscard]] int dim() const { return ndof_; }
  [[nodiscard]] int num_volume_moments() const { return nvol_; }
  /// Global DOF of moment j on edge E, or -1 if the edge has no DOFs.
  [[nodiscard]] int edge_dof(int E, int j) const;
  [[nodiscard]] int volume_dof(int K, int alpha) const;
  /// Global DOFs of the local basis of K in ReferenceElement order (-1 = absent).
  [[nodiscard]] std::vector<int> local_dofs(int K) const;
  [[nodiscard]] const ReferenceElement& reference(int K) const;

 private:
  MeshPtr mesh_;
  int k_;
  bool homogeneous_;
  int nvol_;
  int ndof_ = 0;
  std::vector<int> edge_first_;
  int vol_first_ = 0;
};

using SpacePtr = std::shared_ptr<const CRSpace>;

struct CRFunction {
  SpacePtr space;
  Eigen::VectorXd coef;
};

CRFunction zero_function(const SpacePtr& space);
PiecewisePoly to_piecewise(const CRFunction& f);
/// Coefficients of f in the local basis of K (0 where a DOF is absent).
Eigen::VectorXd local_coefficients(const CRFunction& f, int K);

/// Coarse-mesh functionals may be applied to a broken polynomial living on the
/// fine mesh of a refinement; integrals then run over the successors.
struct FineSource {
  const RefinedMesh* pair = nullptr;
};

/// F_{E,j}(u): weighted edge moment with the dual function g_{E,j}.
double functional_edge(const Triangulation& m, int k, int E, int j, const PiecewisePoly& u,
                       Side side = Side::Auto, FineSource src = {});
/// F_{K,alpha}(u): scale-free volume moment against P_{K,alpha}.
double functional_volume(const Triangulation& m, int k, int K, int alpha, const PiecewisePoly& u,
                         FineSource src = {});
/// (g_K^z, u)_{L^2(K)}; returns u|_K(z) for u polynomial of degree <= k on K.
double vertex_moment(const Triangulation& m, int k, int K, int z, const PiecewisePoly& u,
                     FineSource src = {});
/// F_{S,z}(u): average of the vertex moments over the triangles of S at z.
double functional_vertex(const Triangulation& m, int k, const SubmeshSelection& s, int z,
                         const PiecewisePoly& u, FineSource src = {});

/// g_{E,j} as a function of the edge parameter, scaled by |E|.
double edge_dual_weight(int k, int j, double t);
/// C_alpha = int_T W_T P_{T,alpha}^2 on the reference triangle.
double tri_ortho_norm(TriOrthoIndex alpha);

/// Generic integral of w(l) * u over triangle K of m, where l are the
/// barycentric coordinates of K and w is a polynomial of degree dw.
double triangle_moment(const Triangulation& m, int K, const PiecewisePoly& u,
                       const std::function<double(const Bary&)>& w, int dw, FineSource src = {});
/// Integral of w(t) * u over edge E divided by |E|, using the trace from side.
double edge_moment(const Triangulation& m, int E, const PiecewisePoly& u,
                   const std::function<double(double)>& w, int dw, Side side, FineSource src = {});

/// Max over interior edges of m and q in the Legendre basis of P_{k-1}(E) of
/// |E|^{-1} |int_E q [u]|, relative to max(1, coeff_norm(u)).
double cr_jump_defect(const Triangulation& m, int k, const PiecewisePoly& u, FineSource src = {});
/// Throws std::domain_error if cr_jump_defect exceeds tol.
void require_cr(const Triangulation& m, int k, const PiecewisePoly& u, FineSource src = {},
                double tol = 1e-8);

/// The cascade Pi^E u + Pi^S_vol (u - Pi^E u) restricted to S (all triangles
/// when s is empty). Homogeneous spaces drop boundary edges.
CRFunction interpolate_cr(const SpacePtr& space, const PiecewisePoly& u,
                          const std::optional<SubmeshSelection>& s = std::nullopt,
                          FineSource src = {});
/// Coefficients of u in the CR basis; u must be a CR function of the mesh.
CRFunction from_moments(const SpacePtr& space, const PiecewisePoly& u);

void write_function(std::ostream& os, const CRFunction& f);
Eigen::VectorXd read_function(std::istream& is, int* k = nullptr);

}  // namespace crk
