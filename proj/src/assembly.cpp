#include "ebem/assembly.hpp"

#include <algorithm>

namespace ebem {

std::vector<ElementData> element_data(const SurfaceMesh& mesh) {
  std::vector<ElementData> out(mesh.num_triangles());
  for (std::size_t e = 0; e < mesh.num_triangles(); ++e) {
    ElementData& d = out[e];
    const auto& t = mesh.triangle(e);
    const ElementFrame& f = mesh.frame(e);
    d.vid = t;
    for (int k = 0; k < 3; ++k) d.v[k] = mesh.vertex(t[k]);
    d.n = f.n;
    d.area = f.area;
    d.centroid = f.centroid;
    d.grad = mesh.p1_gradients(e);
    for (int a = 0; a < 3; ++a) {
      d.curl[a] = d.n.cross(d.grad[a]);
      for (int c = 0; c < 3; ++c) {
        // (M lambda_a e_c)_i = (grad lambda_a)_i n_c - (grad lambda_a)_c n_i
        d.m[a][c] = d.grad[a] * d.n[c] - d.grad[a][c] * d.n;
      }
      d.radius = std::max(d.radius, (d.v[a] - d.centroid).norm());
      d.diam = std::max(d.diam, (d.v[a] - d.v[(a + 1) % 3]).norm());
    }
  }
  return out;
}

namespace {

template <class Rule>
void tensor(const Rule& a, std::vector<Vec3>& bary, std::vector<double>& w) {
  for (std::size_t q = 0; q < a.size(); ++q) {
    bary.push_back(a.barycentric(q));
    w.push_back(a.weights[q]);
  }
}

}  // namespace

PairRules::PairRules(const AssemblyOptions& opt) : separation_(opt.separation) {
  auto build = [](const quad::TriangleRule& r, std::vector<RefPoint>& out) {
    std::vector<Vec3> b;
    std::vector<double> w;
    tensor(r, b, w);
    for (std::size_t i = 0; i < b.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) out.push_back({b[i], b[j], w[i] * w[j]});
  };
  // above the tabulated degrees the collapsed rule is cheaper than the symmetrised one
  build(opt.far_degree <= 6 ? quad::gauss_triangle(opt.far_degree) : quad::collapsed_rule(opt.far_degree / 2 + 1),
        far_);
  build(quad::collapsed_rule(opt.near_order), near_);
  build(quad::collapsed_rule(opt.close_order), close_);
  for (auto kind : {quad::PairKind::Vertex, quad::PairKind::Edge, quad::PairKind::Identical}) {
    const quad::PairRule& r = quad::sauter_schwab(kind, opt.ss_order);
    auto& out = touching_[static_cast<int>(kind)];
    const bool self = kind == quad::PairKind::Identical;
    for (std::size_t q = 0; q < r.size(); ++q) {
      const Vec2& s = r.test[q];
      const Vec2& t = r.trial[q];
      const Vec3 ls(1 - s.x() - s.y(), s.x(), s.y()), lt(1 - t.x() - t.y(), t.x(), t.y());
      // self pairs get the swapped copy too so the rule is symmetric in x <-> y
      out.push_back({ls, lt, self ? 0.5 * r.w[q] : r.w[q]});
      if (self) out.push_back({lt, ls, 0.5 * r.w[q]});
    }
  }
}

void PairRules::points(const std::vector<ElementData>& el, int e, int f, std::vector<PairPoint>& out) const {
  out.clear();
  const ElementData& a = el[e];
  const ElementData& b = el[f];
  const double jac = 4.0 * a.area * b.area;
  std::array<int, 3> pa, pb;
  // touching rules are generated for (min, max) and mirrored, so (e, f) and
  // (f, e) see transposed node sets
  const bool swap = e > f;
  const auto kind = swap ? quad::classify_pair(b.vid, a.vid, pb, pa) : quad::classify_pair(a.vid, b.vid, pa, pb);
  if (kind != quad::PairKind::Separated) {
    for (const RefPoint& p : touching_[static_cast<int>(kind)]) {
      PairPoint q;
      const Vec3& px = swap ? p.ly : p.lx;
      const Vec3& py = swap ? p.lx : p.ly;
      for (int k = 0; k < 3; ++k) {
        q.lx[pa[k]] = px[k];
        q.ly[pb[k]] = py[k];
      }
      q.w = p.w * jac;
      out.push_back(q);
    }
    return;
  }
  const double diam = std::max(a.diam, b.diam);
  double dist = (a.centroid - b.centroid).norm() - a.radius - b.radius;
  if (dist <= separation_ * diam) {
    // vertex-to-panel distances; misses edge-edge minima, which is harmless here
    const quad::Triangle ta{a.v[0], a.v[1], a.v[2]}, tb{b.v[0], b.v[1], b.v[2]};
    dist = 1e300;
    for (int k = 0; k < 3; ++k) dist = std::min({dist, tb.distance(a.v[k]), ta.distance(b.v[k])});
  }
  const std::vector<RefPoint>& rule =
      dist > separation_ * diam ? far_ : (dist > 0.5 * separation_ * diam ? near_ : close_);
  out.reserve(rule.size());
  for (const RefPoint& p : rule) out.push_back({p.lx, p.ly, p.w * jac});
}

std::vector<std::vector<int>> vertex_colouring(const SurfaceMesh& mesh) {
  std::vector<std::vector<int>> colours;
  std::vector<std::vector<char>> used;  // used[c][vertex]
  for (std::size_t e = 0; e < mesh.num_triangles(); ++e) {
    const auto& t = mesh.triangle(e);
    std::size_t c = 0;
    for (; c < colours.size(); ++c)
      if (!used[c][t[0]] && !used[c][t[1]] && !used[c][t[2]]) break;
    if (c == colours.size()) {
      colours.emplace_back();
      used.emplace_back(mesh.num_vertices(), 0);
    }
    colours[c].push_back(static_cast<int>(e));
    for (int k = 0; k < 3; ++k) used[c][t[k]] = 1;
  }
  return colours;
}

}  // namespace ebem
