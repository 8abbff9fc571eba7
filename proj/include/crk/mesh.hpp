#pragma once

#include "crk/polyquad.hpp"

#include <Eigen/Core>

#include <array>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace crk {

using Point = Eigen::Vector2d;

/// Conforming triangulation with oriented edges.
///
/// Triangles are stored counter-clockwise. Local edge i of a triangle is the
/// edge opposite local vertex i, i.e. (v[i+1], v[i+2]). The refinement edge is
/// given by its local index. Interior edges run from the smaller to the larger
/// vertex index; boundary edges are oriented so that n_E = (-t_2, t_1) points
/// out of the domain. n_E points into K_R; boundary edges only have K_L.
class Triangulation {
 public:
  Triangulation(std::vector<Point> vertices, std::vector<std::array<int, 3>> triangles,
                std::vector<int> refedge, std::vector<int> generation = {});

  [[nodiscard]] int num_vertices() const { return int(vertices_.size()); }
  [[nodiscard]] int num_triangles() const { return int(triangles_.size()); }
  [[nodiscard]] int num_edges() const { return int(edges_.size()); }

  [[nodiscard]] const Point& vertex(int z) const { return vertices_[z]; }
  [[nodiscard]] const std::array<int, 3>& triangle(int K) const { return triangles_[K]; }
  [[nodiscard]] int refedge(int K) const { return refedge_[K]; }
  [[nodiscard]] int generation(int K) const { return generation_[K]; }
  [[nodiscard]] const std::array<int, 2>& edge(int E) const { return edges_[E]; }

  /// Global edge of local edge i of K.
  [[nodiscard]] int tri_edge(int K, int i) const { return tri_edges_[K][i]; }
  /// True when the global orientation of local edge i runs v[i+1] -> v[i+2].
  [[nodiscard]] bool edge_forward(int K, int i) const;
  /// Bit i set when local edge i is forward.
  [[nodiscard]] int orientation_mask(int K) const;
  [[nodiscard]] int local_edge(int K, int E) const;
  [[nodiscard]] int local_vertex(int K, int z) const;

  [[nodiscard]] int left(int E) const { return edge_tris_[E][0]; }
  [[nodiscard]] int right(int E) const { return edge_tris_[E][1]; }  // -1 on boundary
  [[nodiscard]] bool is_boundary_edge(int E) const { return edge_tris_[E][1] < 0; }
  [[nodiscard]] bool is_boundary_vertex(int z) const { return boundary_vertex_[z]; }
  [[nodiscard]] int num_interior_edges() const;

  [[nodiscard]] double area(int K) const { return area_[K]; }
  [[nodiscard]] double diameter(int K) const;
  [[nodiscard]] double inradius(int K) const;
  [[nodiscard]] double edge_length(int E) const;
  [[nodiscard]] Point tangent(int E) const;
  [[nodiscard]] Point normal(int E) const;
  [[nodiscard]] Point midpoint(int E) const;
  [[nodiscard]] Point barycenter(int K) const;

  /// Gradients of the barycentric coordinates of K (constant on K).
  [[nodiscard]] std::array<Point, 3> grad_lambda(int K) const;
  [[nodiscard]] Point map(int K, const Bary& l) const;
  [[nodiscard]] Bary to_bary(int K, const Point& x) const;

  /// Triangles containing vertex z, ascending.
  [[nodiscard]] const std::vector<int>& vertex_triangles(int z) const { return vtris_[z]; }
  /// Triangles containing edge E (K_L first).
  [[nodiscard]] std::vector<int> edge_triangles(int E) const;

  /// Returns an empty string for a conforming mesh, otherwise the first defect.
  [[nodiscard]] std::string check_conformity() const;

 private:
  std::vector<Point> vertices_;
  std::vector<std::array<int, 3>> triangles_;
  std::vector<int> refedge_;
  std::vector<int> generation_;
  std::vector<std::array<int, 2>> edges_;
  std::vector<std::array<int, 3>> tri_edges_;
  std::vector<std::array<int, 2>> edge_tris_;
  std::vector<bool> boundary_vertex_;
  std::vector<double> area_;
  std::vector<std::vector<int>> vtris_;
};

using MeshPtr = std::shared_ptr<const Triangulation>;

/// Subset of the triangles of a mesh.
class SubmeshSelection {
 public:
  SubmeshSelection() = default;
  explicit SubmeshSelection(int ntri, bool all = false) : in_(ntri, all) {}
  static SubmeshSelection from_list(int ntri, const std::vector<int>& tris);

  [[nodiscard]] int size() const { return int(in_.size()); }
  [[nodiscard]] bool contains(int K) const { return in_[K]; }
  void insert(int K) { in_[K] = true; }
  void erase(int K) { in_[K] = false; }
  [[nodiscard]] int count() const;
  [[nodiscard]] bool empty() const { return count() == 0; }
  [[nodiscard]] std::vector<int> list() const;
  [[nodiscard]] SubmeshSelection complement() const;
  bool operator==(const SubmeshSelection& o) const { return in_ == o.in_; }

 private:
  std::vector<bool> in_;
};

/// S plus all triangles sharing an edge with S.
SubmeshSelection layer_half(const Triangulation& m, const SubmeshSelection& s);
/// S plus all triangles sharing a vertex with S.
SubmeshSelection layer_one(const Triangulation& m, const SubmeshSelection& s);

SubmeshSelection patch_triangle(const Triangulation& m, int K);
SubmeshSelection patch_edge(const Triangulation& m, int E);
SubmeshSelection patch_vertex(const Triangulation& m, int z);

/// Edges of S that have z as an endpoint, ascending.
std::vector<int> edge_spider(const Triangulation& m, const SubmeshSelection& s, int z);
/// Edges and vertices touched by S, ascending.
std::vector<int> edges_of(const Triangulation& m, const SubmeshSelection& s);
std::vector<int> vertices_of(const Triangulation& m, const SubmeshSelection& s);
/// Edges shared by S and its complement.
std::vector<int> interface_edges(const Triangulation& m, const SubmeshSelection& s);

/// Triangles S_z of S containing z, ascending.
std::vector<int> triangles_at(const Triangulation& m, const SubmeshSelection& s, int z);

/// Coarse/fine relation produced by one call of refine_nvb.
struct RefinementRelation {
  std::vector<int> parent;                 // fine triangle -> coarse triangle
  std::vector<std::vector<int>> succ;      // coarse triangle -> fine triangles
  std::vector<int> edge_parent;            // fine edge -> coarse edge, -1 if new
  std::vector<std::vector<int>> edge_succ; // coarse edge -> fine edges
  SubmeshSelection refined;                // R on the coarse mesh
  SubmeshSelection fine_new;               // R-hat on the fine mesh
};

struct RefinedMesh {
  MeshPtr coarse;
  MeshPtr fine;
  RefinementRelation rel;
};

/// Newest vertex bisection of every marked triangle plus the closure needed
/// for conformity. Unrefined triangles keep their vertex order and index
/// positions relative to each other; vertex indices of the coarse mesh persist.
RefinedMesh refine_nvb(const MeshPtr& m, const std::vector<int>& marked);

/// Bisects every triangle once or twice so that all edges are halved.
RefinedMesh refine_uniform(const MeshPtr& m);

/// Initial mesh of the L-shaped domain (-1,1)^2 \ [0,1)^2: three unit squares,
/// each split by the diagonal through the reentrant corner.
MeshPtr make_lshape_initial();
/// Unit square split into two triangles by the diagonal (0,0)-(1,1).
MeshPtr make_unit_square();

void write_mesh(std::ostream& os, const Triangulation& m);
MeshPtr read_mesh(std::istream& is);

}  // namespace crk
