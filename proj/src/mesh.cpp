#include "crk/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <utility>

namespace crk {

namespace {

std::uint64_t pair_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (std::uint64_t(std::uint32_t(a)) << 32) | std::uint32_t(b);
}

double cross(const Point& a, const Point& b) { return a.x() * b.y() - a.y() * b.x(); }

}  // namespace

Triangulation::Triangulation(std::vector<Point> vertices,
                             std::vector<std::array<int, 3>> triangles,
                             std::vector<int> refedge, std::vector<int> generation)
    : vertices_(std::move(vertices)),
      triangles_(std::move(triangles)),
      refedge_(std::move(refedge)),
      generation_(std::move(generation)) {
  const int nt = num_triangles();
  const int nv = num_vertices();
  if (int(refedge_.size()) != nt)
    throw std::invalid_argument("Triangulation: refinement edge count mismatch");
  if (generation_.empty()) generation_.assign(nt, 0);
  if (int(generation_.size()) != nt)
    throw std::invalid_argument("Triangulation: generation count mismatch");

  area_.resize(nt);
  vtris_.assign(nv, {});
  tri_edges_.resize(nt);
  std::unordered_map<std::uint64_t, int> lookup;
  lookup.reserve(3 * nt);
  std::vector<std::array<int, 2>> inc;  // incident triangles, -1 = none
  std::vector<std::array<int, 2>> first_dir;

  for (int K = 0; K < nt; ++K) {
    const auto& v = triangles_[K];
    for (int i = 0; i < 3; ++i)
      if (v[i] < 0 || v[i] >= nv) throw std::invalid_argument("Triangulation: bad vertex index");
    if (refedge_[K] < 0 || refedge_[K] > 2)
      throw std::invalid_argument("Triangulation: refinement edge index out of range");
    const double a = 0.5 * cross(vertices_[v[1]] - vertices_[v[0]], vertices_[v[2]] - vertices_[v[0]]);
    if (!(a > 0.0)) throw std::invalid_argument("Triangulation: triangle not counter-clockwise");
    area_[K] = a;
    for (int i = 0; i < 3; ++i) vtris_[v[i]].push_back(K);
    for (int i = 0; i < 3; ++i) {
      const int p = v[(i + 1) % 3], q = v[(i + 2) % 3];
      auto [it, fresh] = lookup.emplace(pair_key(p, q), int(inc.size()));
      if (fresh) {
        inc.push_back({K, -1});
        first_dir.push_back({p, q});
      } else {
        auto& slot = inc[it->second];
        if (slot[1] >= 0) throw std::invalid_argument("Triangulation: edge shared by more than two triangles");
        if (first_dir[it->second][0] == p)
          throw std::invalid_argument("Triangulation: inconsistent orientation across an edge");
        slot[1] = K;
      }
      tri_edges_[K][i] = it->second;
    }
  }

  const int ne = int(inc.size());
  edges_.resize(ne);
  edge_tris_.resize(ne);
  boundary_vertex_.assign(nv, false);
  for (int E = 0; E < ne; ++E) {
    const auto [p, q] = first_dir[E];  // CCW order inside inc[E][0]
    if (inc[E][1] < 0) {
      edges_[E] = {q, p};
      edge_tris_[E] = {inc[E][0], -1};
      boundary_vertex_[p] = boundary_vertex_[q] = true;
    } else {
      edges_[E] = {std::min(p, q), std::max(p, q)};
      // n_E points into the triangle that traverses z0 -> z1 counter-clockwise
      const bool first_is_right = (p == edges_[E][0]);
      edge_tris_[E] = first_is_right ? std::array<int, 2>{inc[E][1], inc[E][0]}
                                     : std::array<int, 2>{inc[E][0], inc[E][1]};
    }
  }
}

bool Triangulation::edge_forward(int K, int i) const {
  return edges_[tri_edges_[K][i]][0] == triangles_[K][(i + 1) % 3];
}

int Triangulation::orientation_mask(int K) const {
  int m = 0;
  for (int i = 0; i < 3; ++i)
    if (edge_forward(K, i)) m |= 1 << i;
  return m;
}

int Triangulation::local_edge(int K, int E) const {
  for (int i = 0; i < 3; ++i)
    if (tri_edges_[K][i] == E) return i;
  throw std::invalid_argument("local_edge: edge not in triangle");
}

int Triangulation::local_vertex(int K, int z) const {
  for (int i = 0; i < 3; ++i)
    if (triangles_[K][i] == z) return i;
  throw std::invalid_argument("local_vertex: vertex not in triangle");
}

int Triangulation::num_interior_edges() const {
  int n = 0;
  for (const auto& t : edge_tris_) n += t[1] >= 0;
  return n;
}

double Triangulation::diameter(int K) const {
  const auto& v = triangles_[K];
  double h = 0.0;
  for (int i = 0; i < 3; ++i)
    h = std::max(h, (vertices_[v[i]] - vertices_[v[(i + 1) % 3]]).norm());
  return h;
}

double Triangulation::inradius(int K) const {
  const auto& v = triangles_[K];
  double perim = 0.0;
  for (int i = 0; i < 3; ++i) perim += (vertices_[v[i]] - vertices_[v[(i + 1) % 3]]).norm();
  return 2.0 * area_[K] / perim;
}

double Triangulation::edge_length(int E) const {
  return (vertices_[edges_[E][1]] - vertices_[edges_[E][0]]).norm();
}

Point Triangulation::tangent(int E) const {
  return (vertices_[edges_[E][1]] - vertices_[edges_[E][0]]) / edge_length(E);
}

Point Triangulation::normal(int E) const {
  const Point t = tangent(E);
  return {-t.y(), t.x()};
}

Point Triangulation::midpoint(int E) const {
  return 0.5 * (vertices_[edges_[E][0]] + vertices_[edges_[E][1]]);
}

Point Triangulation::barycenter(int K) const {
  const auto& v = triangles_[K];
  return (vertices_[v[0]] + vertices_[v[1]] + vertices_[v[2]]) / 3.0;
}

std::array<Point, 3> Triangulation::grad_lambda(int K) const {
  const auto& v = triangles_[K];
  std::array<Point, 3> g;
  for (int i = 0; i < 3; ++i) {
    const Point d = vertices_[v[(i + 2) % 3]] - vertices_[v[(i + 1) % 3]];
    g[i] = Point(-d.y(), d.x()) / (2.0 * area_[K]);
  }
  return g;
}

Point Triangulation::map(int K, const Bary& l) const {
  const auto& v = triangles_[K];
  return l[0] * vertices_[v[0]] + l[1] * vertices_[v[1]] + l[2] * vertices_[v[2]];
}

Bary Triangulation::to_bary(int K, const Point& x) const {
  const auto& v = triangles_[K];
  const Point d = x - vertices_[v[0]];
  const Point e1 = vertices_[v[1]] - vertices_[v[0]];
  const Point e2 = vertices_[v[2]] - vertices_[v[0]];
  const double det = cross(e1, e2);
  const double l1 = cross(d, e2) / det;
  const double l2 = cross(e1, d) / det;
  return {1.0 - l1 - l2, l1, l2};
}

std::vector<int> Triangulation::edge_triangles(int E) const {
  if (edge_tris_[E][1] < 0) return {edge_tris_[E][0]};
  return {edge_tris_[E][0], edge_tris_[E][1]};
}

std::string Triangulation::check_conformity() const {
  // Edges with more than two triangles and clockwise triangles are rejected by
  // the constructor. Bisection only creates midpoints, so a hanging vertex is
  // a vertex sitting exactly at the midpoint of an edge.
  struct Hash {
    std::size_t operator()(const std::pair<double, double>& p) const {
      return std::hash<double>()(p.first) * 31 + std::hash<double>()(p.second);
    }
  };
  std::unordered_map<std::pair<double, double>, int, Hash> at;
  for (int z = 0; z < num_vertices(); ++z)
    at.emplace(std::make_pair(vertices_[z].x(), vertices_[z].y()), z);
  for (int E = 0; E < num_edges(); ++E) {
    const Point c = midpoint(E);
    auto it = at.find({c.x(), c.y()});
    if (it != at.end()) {
      std::ostringstream os;
      os << "hanging vertex " << it->second << " on edge " << E;
      return os.str();
    }
  }
  return {};
}

SubmeshSelection SubmeshSelection::from_list(int ntri, const std::vector<int>& tris) {
  SubmeshSelection s(ntri);
  for (int K : tris) s.insert(K);
  return s;
}

int SubmeshSelection::count() const { return int(std::count(in_.begin(), in_.end(), true)); }

std::vector<int> SubmeshSelection::list() const {
  std::vector<int> out;
  for (int K = 0; K < size(); ++K)
    if (in_[K]) out.push_back(K);
  return out;
}

SubmeshSelection SubmeshSelection::complement() const {
  SubmeshSelection s(size());
  for (int K = 0; K < size(); ++K)
    if (!in_[K]) s.insert(K);
  return s;
}

SubmeshSelection layer_half(const Triangulation& m, const SubmeshSelection& s) {
  SubmeshSelection out = s;
  for (int K : s.list())
    for (int i = 0; i < 3; ++i)
      for (int K2 : m.edge_triangles(m.tri_edge(K, i))) out.insert(K2);
  return out;
}

SubmeshSelection layer_one(const Triangulation& m, const SubmeshSelection& s) {
  SubmeshSelection out = s;
  for (int K : s.list())
    for (int z : m.triangle(K))
      for (int K2 : m.vertex_triangles(z)) out.insert(K2);
  return out;
}

SubmeshSelection patch_triangle(const Triangulation& m, int K) {
  return layer_one(m, SubmeshSelection::from_list(m.num_triangles(), {K}));
}

SubmeshSelection patch_edge(const Triangulation& m, int E) {
  return SubmeshSelection::from_list(m.num_triangles(), m.edge_triangles(E));
}

SubmeshSelection patch_vertex(const Triangulation& m, int z) {
  return SubmeshSelection::from_list(m.num_triangles(), m.vertex_triangles(z));
}

std::vector<int> edges_of(const Triangulation& m, const SubmeshSelection& s) {
  std::vector<int> out;
  for (int K : s.list())
    for (int i = 0; i < 3; ++i) out.push_back(m.tri_edge(K, i));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<int> vertices_of(const Triangulation& m, const SubmeshSelection& s) {
  std::vector<int> out;
  for (int K : s.list())
    for (int z : m.triangle(K)) out.push_back(z);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<int> edge_spider(const Triangulation& m, const SubmeshSelection& s, int z) {
  std::vector<int> out;
  for (int K : m.vertex_triangles(z)) {
    if (!s.contains(K)) continue;
    for (int i = 0; i < 3; ++i) {
      const int E = m.tri_edge(K, i);
      if (m.edge(E)[0] == z || m.edge(E)[1] == z) out.push_back(E);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<int> interface_edges(const Triangulation& m, const SubmeshSelection& s) {
  std::vector<int> out;
  for (int E = 0; E < m.num_edges(); ++E) {
    if (m.is_boundary_edge(E)) continue;
    if (s.contains(m.left(E)) != s.contains(m.right(E))) out.push_back(E);
  }
  return out;
}

std::vector<int> triangles_at(const Triangulation& m, const SubmeshSelection& s, int z) {
  std::vector<int> out;
  for (int K : m.vertex_triangles(z))
    if (s.contains(K)) out.push_back(K);
  return out;
}

namespace {

RefinedMesh refine_marked_edges(const MeshPtr& mp, std::vector<char> emark) {
  const Triangulation& m = *mp;
  const int nt = m.num_triangles();

  // closure: a triangle with any marked edge must bisect its refinement edge
  std::vector<int> work;
  for (int K = 0; K < nt; ++K) work.push_back(K);
  while (!work.empty()) {
    const int K = work.back();
    work.pop_back();
    const int r = m.tri_edge(K, m.refedge(K));
    if (emark[r]) continue;
    bool any = false;
    for (int i = 0; i < 3; ++i) any = any || emark[m.tri_edge(K, i)];
    if (!any) continue;
    emark[r] = 1;
    for (int K2 : m.edge_triangles(r))
      if (K2 != K) work.push_back(K2);
  }

  std::vector<Point> verts;
  for (int z = 0; z < m.num_vertices(); ++z) verts.push_back(m.vertex(z));
  std::vector<int> mid(m.num_edges(), -1);
  for (int E = 0; E < m.num_edges(); ++E)
    if (emark[E]) {
      mid[E] = int(verts.size());
      verts.push_back(m.midpoint(E));
    }

  std::vector<std::array<int, 3>> tris;
  std::vector<int> ref, gen, parent;
  auto emit = [&](std::array<int, 3> t, int g, int K) {
    tris.push_back(t);
    ref.push_back(0);
    gen.push_back(g);
    parent.push_back(K);
  };

  for (int K = 0; K < nt; ++K) {
    const auto& v = m.triangle(K);
    const int r = m.refedge(K);
    if (!emark[m.tri_edge(K, r)]) {
      tris.push_back(v);
      ref.push_back(r);
      gen.push_back(m.generation(K));
      parent.push_back(K);
      continue;
    }
    const int g = m.generation(K) + 1;
    const int a = v[r], b = v[(r + 1) % 3], c = v[(r + 2) % 3];
    const int md = mid[m.tri_edge(K, r)];
    // children (md, a, b) and (md, c, a); their refinement edges are (a,b) and (c,a)
    const int eab = m.tri_edge(K, (r + 2) % 3);
    const int eca = m.tri_edge(K, (r + 1) % 3);
    if (emark[eab]) {
      const int m2 = mid[eab];
      emit({m2, md, a}, g + 1, K);
      emit({m2, b, md}, g + 1, K);
    } else {
      emit({md, a, b}, g, K);
    }
    if (emark[eca]) {
      const int m2 = mid[eca];
      emit({m2, md, c}, g + 1, K);
      emit({m2, a, md}, g + 1, K);
    } else {
      emit({md, c, a}, g, K);
    }
  }

  auto fine = std::make_shared<Triangulation>(std::move(verts), std::move(tris), std::move(ref),
                                              std::move(gen));
  RefinedMesh out;
  out.coarse = mp;
  out.fine = fine;
  RefinementRelation& rel = out.rel;
  rel.parent = std::move(parent);
  rel.succ.assign(nt, {});
  for (int Kh = 0; Kh < fine->num_triangles(); ++Kh) rel.succ[rel.parent[Kh]].push_back(Kh);
  rel.refined = SubmeshSelection(nt);
  rel.fine_new = SubmeshSelection(fine->num_triangles());
  for (int K = 0; K < nt; ++K)
    if (rel.succ[K].size() > 1) {
      rel.refined.insert(K);
      for (int Kh : rel.succ[K]) rel.fine_new.insert(Kh);
    }

  std::unordered_map<std::uint64_t, int> flook;
  for (int E = 0; E < fine->num_edges(); ++E)
    flook.emplace(pair_key(fine->edge(E)[0], fine->edge(E)[1]), E);
  rel.edge_parent.assign(fine->num_edges(), -1);
  rel.edge_succ.assign(m.num_edges(), {});
  for (int E = 0; E < m.num_edges(); ++E) {
    const int z0 = m.edge(E)[0], z1 = m.edge(E)[1];
    if (emark[E])
      rel.edge_succ[E] = {flook.at(pair_key(z0, mid[E])), flook.at(pair_key(mid[E], z1))};
    else
      rel.edge_succ[E] = {flook.at(pair_key(z0, z1))};
    for (int Eh : rel.edge_succ[E]) rel.edge_parent[Eh] = E;
  }
  return out;
}

}  // namespace

RefinedMesh refine_nvb(const MeshPtr& m, const std::vector<int>& marked) {
  std::vector<char> emark(m->num_edges(), 0);
  for (int K : marked) {
    if (K < 0 || K >= m->num_triangles())
      throw std::invalid_argument("refine_nvb: marked triangle out of range");
    emark[m->tri_edge(K, m->refedge(K))] = 1;
  }
  return refine_marked_edges(m, std::move(emark));
}

RefinedMesh refine_uniform(const MeshPtr& m) {
  return refine_marked_edges(m, std::vector<char>(m->num_edges(), 1));
}

MeshPtr make_lshape_initial() {
  std::vector<Point> v = {{-1, 1}, {0, 1}, {-1, 0}, {0, 0}, {-1, -1}, {0, -1}, {1, -1}, {1, 0}};
  std::vector<std::array<int, 3>> t = {{3, 1, 0}, {3, 0, 2}, {3, 2, 4},
                                       {3, 4, 5}, {3, 5, 6}, {3, 6, 7}};
  // refinement edge = hypotenuse, opposite the right angle
  std::vector<int> r = {1, 2, 1, 2, 1, 2};
  return std::make_shared<Triangulation>(std::move(v), std::move(t), std::move(r));
}

MeshPtr make_unit_square() {
  std::vector<Point> v = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  std::vector<std::array<int, 3>> t = {{0, 1, 2}, {0, 2, 3}};
  std::vector<int> r = {1, 2};
  return std::make_shared<Triangulation>(std::move(v), std::move(t), std::move(r));
}

void write_mesh(std::ostream& os, const Triangulation& m) {
  char buf[128];
  os << m.num_triangles() << ' ' << m.num_vertices() << ' ' << m.num_edges() << '\n';
  for (int z = 0; z < m.num_vertices(); ++z) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g\n", m.vertex(z).x(), m.vertex(z).y());
    os << buf;
  }
  for (int K = 0; K < m.num_triangles(); ++K) {
    const auto& v = m.triangle(K);
    os << v[0] << ' ' << v[1] << ' ' << v[2] << ' ' << m.refedge(K) << '\n';
  }
}

MeshPtr read_mesh(std::istream& is) {
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(is, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    lines.push_back(line);
  }
  if (lines.empty()) throw std::runtime_error("read_mesh: empty input");
  std::istringstream head(lines[0]);
  int nt = -1, nv = -1, ne = -1;
  if (!(head >> nt >> nv >> ne) || nt < 0 || nv < 0)
    throw std::runtime_error("read_mesh: bad header");
  if (int(lines.size()) != 1 + nt + nv) throw std::runtime_error("read_mesh: line count mismatch");
  std::vector<Point> v(nv);
  for (int z = 0; z < nv; ++z) {
    std::istringstream ls(lines[1 + z]);
    double x, y;
    if (!(ls >> x >> y)) throw std::runtime_error("read_mesh: bad vertex line");
    v[z] = {x, y};
  }
  std::vector<std::array<int, 3>> t(nt);
  std::vector<int> r(nt);
  for (int K = 0; K < nt; ++K) {
    std::istringstream ls(lines[1 + nv + K]);
    if (!(ls >> t[K][0] >> t[K][1] >> t[K][2] >> r[K]))
      throw std::runtime_error("read_mesh: bad triangle line");
  }
  auto m = std::make_shared<Triangulation>(std::move(v), std::move(t), std::move(r));
  if (m->num_edges() != ne) throw std::runtime_error("read_mesh: edge count mismatch");
  return m;
}

}  // namespace crk
