#include "ebem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

namespace ebem {

ElementFrame element_frame(const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 e1 = b - a, e2 = c - a;
  const Vec3 cr = e1.cross(e2);
  const double area = 0.5 * cr.norm();
  const double longest = std::max({e1.norm(), e2.norm(), (c - b).norm()});
  if (!(area > 1e-12 * longest * longest)) throw DegenerateElement("degenerate triangle");
  ElementFrame f;
  f.n = cr.normalized();
  f.area = area;
  f.t1 = e1.normalized();
  f.t2 = f.n.cross(f.t1);
  f.centroid = (a + b + c) / 3.0;
  return f;
}

SurfaceMesh::SurfaceMesh(std::vector<Vec3> vertices, std::vector<std::array<int, 3>> triangles,
                         std::vector<int> labels)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles)), labels_(std::move(labels)) {
  if (triangles_.empty()) throw DomainError("mesh has no triangles");
  if (labels_.empty()) labels_.assign(triangles_.size(), 0);
  if (labels_.size() != triangles_.size()) throw DomainError("one label per triangle expected");
  const int nv = static_cast<int>(vertices_.size());
  frames_.reserve(triangles_.size());
  grads_.reserve(triangles_.size());
  std::map<std::pair<int, int>, int> edge_id;
  for (std::size_t e = 0; e < triangles_.size(); ++e) {
    const auto& t = triangles_[e];
    for (int k = 0; k < 3; ++k)
      if (t[k] < 0 || t[k] >= nv) throw DomainError("triangle references a missing vertex");
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) throw DegenerateElement("repeated vertex in triangle");
    const ElementFrame f = element_frame(vertices_[t[0]], vertices_[t[1]], vertices_[t[2]]);
    frames_.push_back(f);
    total_area_ += f.area;
    std::array<Vec3, 3> g;
    for (int k = 0; k < 3; ++k) {
      // edge opposite vertex k, counterclockwise about n
      const Vec3 opp = vertices_[t[(k + 2) % 3]] - vertices_[t[(k + 1) % 3]];
      g[k] = f.n.cross(opp) / (2.0 * f.area);
    }
    grads_.push_back(g);
    for (int k = 0; k < 3; ++k) {
      const int a = t[k], b = t[(k + 1) % 3];
      h_ = std::max(h_, (vertices_[a] - vertices_[b]).norm());
      const auto key = std::minmax(a, b);
      auto [it, fresh] = edge_id.try_emplace({key.first, key.second}, static_cast<int>(edges_.size()));
      if (fresh) edges_.push_back({key.first, key.second, {}, {}});
      Edge& ed = edges_[it->second];
      ed.triangles.push_back(static_cast<int>(e));
      ed.sense.push_back(a < b ? 1 : -1);
    }
  }
  closed_ = std::all_of(edges_.begin(), edges_.end(), [](const Edge& ed) {
    return ed.triangles.size() == 2 && ed.sense[0] + ed.sense[1] == 0;
  });
}

quad::Triangle SurfaceMesh::geometry(int e) const {
  const auto& t = triangles_[e];
  return {vertices_[t[0]], vertices_[t[1]], vertices_[t[2]]};
}

const ElementFrame& element_frame(const SurfaceMesh& mesh, int elem) {
  if (elem < 0 || elem >= static_cast<int>(mesh.num_triangles())) throw DomainError("element index out of range");
  return mesh.frame(elem);
}

// ---------------------------------------------------------------------------

namespace {

std::string next_line(std::istream& in, int& lineno) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("msh: unexpected end of file after line " + std::to_string(lineno));
  ++lineno;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

void expect(const std::string& got, const std::string& want, int lineno) {
  if (got != want) throw ParseError("msh line " + std::to_string(lineno) + ": expected " + want);
}

}  // namespace

SurfaceMesh parse_msh(std::istream& in) {
  int lineno = 0;
  bool have_format = false, have_nodes = false, have_elements = false;
  std::unordered_map<long, Vec3> nodes;
  std::vector<long> node_order;
  std::vector<std::array<long, 3>> tris;
  std::vector<int> labels;
  std::string line;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line == "$MeshFormat") {
      std::istringstream ss(next_line(in, lineno));
      std::string version;
      int type = -1, size = -1;
      ss >> version >> type >> size;
      if (version != "2.2" || type != 0 || size != 8)
        throw ParseError("msh: only ASCII format 2.2 0 8 is supported");
      expect(next_line(in, lineno), "$EndMeshFormat", lineno);
      have_format = true;
    } else if (line == "$Nodes") {
      long count = -1;
      std::istringstream(next_line(in, lineno)) >> count;
      if (count < 0) throw ParseError("msh line " + std::to_string(lineno) + ": bad node count");
      for (long k = 0; k < count; ++k) {
        std::istringstream ss(next_line(in, lineno));
        long id;
        double x, y, z;
        if (!(ss >> id >> x >> y >> z)) throw ParseError("msh line " + std::to_string(lineno) + ": bad node");
        if (!nodes.emplace(id, Vec3(x, y, z)).second)
          throw ParseError("msh line " + std::to_string(lineno) + ": duplicate node id");
        node_order.push_back(id);
      }
      expect(next_line(in, lineno), "$EndNodes", lineno);
      have_nodes = true;
    } else if (line == "$Elements") {
      long count = -1;
      std::istringstream(next_line(in, lineno)) >> count;
      if (count < 0) throw ParseError("msh line " + std::to_string(lineno) + ": bad element count");
      for (long k = 0; k < count; ++k) {
        std::istringstream ss(next_line(in, lineno));
        long id;
        int type, ntags;
        if (!(ss >> id >> type >> ntags) || ntags < 0)
          throw ParseError("msh line " + std::to_string(lineno) + ": bad element");
        std::vector<int> tags(ntags);
        for (int& t : tags)
          if (!(ss >> t)) throw ParseError("msh line " + std::to_string(lineno) + ": bad element tags");
        if (type == 15 || type == 1) continue;  // points and lines of the CAD skeleton
        if (type != 2) throw ParseError("msh: unsupported element type " + std::to_string(type));
        std::array<long, 3> t;
        for (long& v : t)
          if (!(ss >> v)) throw ParseError("msh line " + std::to_string(lineno) + ": bad triangle");
        tris.push_back(t);
        labels.push_back(ntags > 0 ? tags[0] : 0);
      }
      expect(next_line(in, lineno), "$EndElements", lineno);
      have_elements = true;
    } else if (line[0] == '$') {
      // unknown section: skip to its end marker
      const std::string end = "$End" + line.substr(1);
      std::string l;
      do l = next_line(in, lineno);
      while (l != end);
    } else {
      throw ParseError("msh line " + std::to_string(lineno) + ": unexpected content");
    }
  }
  if (!have_format) throw ParseError("msh: missing $MeshFormat");
  if (!have_nodes || !have_elements) throw ParseError("msh: missing $Nodes or $Elements");
  if (tris.empty()) throw ParseError("msh: no triangles");

  // keep referenced nodes in file order
  std::unordered_map<long, int> index;
  for (const auto& t : tris)
    for (long v : t) {
      if (!nodes.count(v)) throw ParseError("msh: triangle references unknown node " + std::to_string(v));
      index[v] = -1;
    }
  std::vector<Vec3> verts;
  for (long id : node_order)
    if (auto it = index.find(id); it != index.end()) {
      it->second = static_cast<int>(verts.size());
      verts.push_back(nodes[id]);
    }
  std::vector<std::array<int, 3>> out;
  out.reserve(tris.size());
  for (const auto& t : tris) out.push_back({index[t[0]], index[t[1]], index[t[2]]});
  return SurfaceMesh(std::move(verts), std::move(out), std::move(labels));
}

SurfaceMesh load_msh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return parse_msh(in);
}

// ---------------------------------------------------------------------------

Vec3 project_unit_sphere(const Vec3& x) { return x.normalized(); }

SurfaceMesh refine(const SurfaceMesh& mesh, const Projector& projector) {
  if (!mesh.closed()) throw DomainError("refine: mesh is not closed and oriented");
  std::vector<Vec3> verts = mesh.vertices();
  std::map<std::pair<int, int>, int> mid;
  auto midpoint = [&](int a, int b) {
    const auto key = std::minmax(a, b);
    auto [it, fresh] = mid.try_emplace({key.first, key.second}, static_cast<int>(verts.size()));
    if (fresh) {
      Vec3 m = 0.5 * (verts[a] + verts[b]);
      if (projector) m = projector(m);
      verts.push_back(m);
    }
    return it->second;
  };
  std::vector<std::array<int, 3>> tris;
  std::vector<int> labels;
  tris.reserve(4 * mesh.num_triangles());
  for (std::size_t e = 0; e < mesh.num_triangles(); ++e) {
    const auto [a, b, c] = mesh.triangle(static_cast<int>(e));
    const int ab = midpoint(a, b), bc = midpoint(b, c), ca = midpoint(c, a);
    tris.push_back({a, ab, ca});
    tris.push_back({ab, b, bc});
    tris.push_back({ca, bc, c});
    tris.push_back({ab, bc, ca});
    for (int k = 0; k < 4; ++k) labels.push_back(mesh.labels()[e]);
  }
  return SurfaceMesh(std::move(verts), std::move(tris), std::move(labels));
}

SurfaceMesh icosahedron() {
  const double p = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> v = {{-1, p, 0}, {1, p, 0}, {-1, -p, 0}, {1, -p, 0}, {0, -1, p}, {0, 1, p},
                         {0, -1, -p}, {0, 1, -p}, {p, 0, -1}, {p, 0, 1}, {-p, 0, -1}, {-p, 0, 1}};
  for (auto& x : v) x.normalize();
  std::vector<std::array<int, 3>> t = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                                       {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                                       {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                                       {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  return SurfaceMesh(std::move(v), std::move(t));
}

SurfaceMesh icosphere(int level) {
  if (level < 0) throw DomainError("icosphere: negative level");
  SurfaceMesh m = icosahedron();
  for (int k = 0; k < level; ++k) m = refine(m, project_unit_sphere);
  return m;
}

SurfaceMesh cube(int n, double half) {
  if (n < 1) throw DomainError("cube: need at least one square per face edge");
  if (!(half > 0)) throw DomainError("cube: half width must be positive");
  std::map<std::array<int, 3>, int> index;
  std::vector<Vec3> verts;
  auto vertex = [&](const std::array<int, 3>& g) {
    auto [it, fresh] = index.try_emplace(g, static_cast<int>(verts.size()));
    if (fresh) verts.push_back(Vec3(g[0], g[1], g[2]) * (2.0 * half / n) - Vec3::Constant(half));
    return it->second;
  };
  std::vector<std::array<int, 3>> tris;
  for (int axis = 0; axis < 3; ++axis)
    for (int side = 0; side < 2; ++side) {
      const int u = (axis + 1) % 3, w = (axis + 2) % 3;  // e_u x e_w = e_axis
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          auto at = [&](int a, int b) {
            std::array<int, 3> g{};
            g[axis] = side * n;
            g[u] = a;
            g[w] = b;
            return vertex(g);
          };
          const int p00 = at(i, j), p10 = at(i + 1, j), p11 = at(i + 1, j + 1), p01 = at(i, j + 1);
          if (side == 1) {
            tris.push_back({p00, p10, p11});
            tris.push_back({p00, p11, p01});
          } else {
            tris.push_back({p00, p11, p10});
            tris.push_back({p00, p01, p11});
          }
        }
    }
  return SurfaceMesh(std::move(verts), std::move(tris));
}

// ---------------------------------------------------------------------------

EvalGrid classify_points(const SurfaceMesh& mesh, const std::vector<Vec3>& pts) {
  if (!mesh.closed()) throw DomainError("classify_points: mesh is not closed and oriented");
  EvalGrid g;
  g.points = pts;
  for (const Vec3& x : pts) {
    double omega = 0, dist = 1e300;
    for (std::size_t e = 0; e < mesh.num_triangles(); ++e) {
      const quad::Triangle t = mesh.geometry(static_cast<int>(e));
      dist = std::min(dist, t.distance(x));
      // Van Oosterom-Strackee
      const Vec3 a = t.a - x, b = t.b - x, c = t.c - x;
      const double la = a.norm(), lb = b.norm(), lc = c.norm();
      const double num = a.dot(b.cross(c));
      const double den = la * lb * lc + a.dot(b) * lc + b.dot(c) * la + c.dot(a) * lb;
      omega += 2.0 * std::atan2(num, den);
    }
    const double w = omega / (4 * pi);
    if (dist <= 1e-10 * mesh.h() || std::abs(w - 0.5) < 0.25)
      throw DomainError("classify_points: point lies on the surface");
    g.tags.push_back(w > 0.5 ? PointTag::Interior : PointTag::Exterior);
    g.distance.push_back(dist);
  }
  return g;
}

// ---------------------------------------------------------------------------

Curve2D::Curve2D(std::vector<std::vector<Vec2>> loops) {
  if (loops.empty()) throw DomainError("curve has no loops");
  for (const auto& loop : loops) {
    if (loop.size() < 3) throw DomainError("curve loop needs at least three vertices");
    const int start = static_cast<int>(vertices_.size());
    const int n = static_cast<int>(loop.size());
    loop_start_.push_back(start);
    loop_size_.push_back(n);
    double s = 0;
    for (int k = 0; k < n; ++k) {
      vertices_.push_back(loop[k]);
      arclength_.push_back(s);
      const Vec2 d = loop[(k + 1) % n] - loop[k];
      const double len = d.norm();
      if (!(len > 0)) throw DegenerateElement("zero-length curve segment");
      Segment seg;
      seg.a = start + k;
      seg.b = start + (k + 1) % n;
      seg.length = len;
      seg.tau = d / len;
      seg.n = Vec2(seg.tau.y(), -seg.tau.x());
      seg.midpoint = 0.5 * (loop[k] + loop[(k + 1) % n]);
      segments_.push_back(seg);
      s += len;
      h_ = std::max(h_, len);
    }
    length_ += s;
  }
}

double Curve2D::signed_area(int l) const {
  double a = 0;
  const int s = loop_start_[l], n = loop_size_[l];
  for (int k = 0; k < n; ++k) {
    const Vec2& p = vertices_[s + k];
    const Vec2& q = vertices_[s + (k + 1) % n];
    a += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * a;
}

Curve2D regular_polygon(int n, double radius, const Vec2& centre) {
  if (n < 3) throw DomainError("polygon needs at least three vertices");
  if (!(radius > 0)) throw DomainError("polygon radius must be positive");
  std::vector<Vec2> v(n);
  for (int k = 0; k < n; ++k) {
    const double t = 2 * pi * k / n;
    v[k] = centre + radius * Vec2(std::cos(t), std::sin(t));
  }
  return Curve2D({v});
}

}  // namespace ebem
