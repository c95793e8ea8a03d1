#include "ebem/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

namespace ebem::quad {

namespace {

Rule1D build_gauss_legendre(int n) {
  Rule1D r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute derivative at the converged root
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    if (n == 1) dp = 1.0;
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.x[n - 1 - i] = 0.5 * (x + 1.0);
    r.w[n - 1 - i] = 0.5 * w;
  }
  return r;
}

void add_orbit3(TriangleRule& r, double a, double w) {
  // (a, a, 1-2a) and permutations; weight w refers to area-1 normalisation
  const double b = 1.0 - 2.0 * a;
  const double ww = 0.5 * w;
  r.points.push_back({a, a});
  r.points.push_back({b, a});
  r.points.push_back({a, b});
  for (int k = 0; k < 3; ++k) r.weights.push_back(ww);
}

void add_orbit6(TriangleRule& r, double a, double b, double w) {
  const double c = 1.0 - a - b;
  const double ww = 0.5 * w;
  const double bary[6][3] = {{a, b, c}, {a, c, b}, {b, a, c}, {b, c, a}, {c, a, b}, {c, b, a}};
  for (const auto& l : bary) {
    r.points.push_back({l[1], l[2]});
    r.weights.push_back(ww);
  }
}

TriangleRule tabulated(int degree) {
  TriangleRule r;
  switch (degree) {
    case 1:
      r.points = {{1.0 / 3.0, 1.0 / 3.0}};
      r.weights = {0.5};
      r.degree = 1;
      break;
    case 2:
      add_orbit3(r, 1.0 / 6.0, 1.0 / 3.0);
      r.degree = 2;
      break;
    case 3:
    case 4:
      add_orbit3(r, 0.445948490915965, 0.223381589678011);
      add_orbit3(r, 0.091576213509771, 0.109951743655322);
      r.degree = 4;
      break;
    case 5:
      r.points.push_back({1.0 / 3.0, 1.0 / 3.0});
      r.weights.push_back(0.5 * 0.225);
      add_orbit3(r, 0.470142064105115, 0.132394152788506);
      add_orbit3(r, 0.101286507323456, 0.125939180544827);
      r.degree = 5;
      break;
    case 6:
      add_orbit3(r, 0.249286745170910, 0.116786275726379);
      add_orbit3(r, 0.063089014491502, 0.050844906370207);
      add_orbit6(r, 0.053145049844817, 0.310352451033784, 0.082851075618374);
      r.degree = 6;
      break;
    default:
      break;
  }
  return r;
}

TriangleRule build_collapsed(int n) {
  const Rule1D& g = gauss_legendre(n);
  TriangleRule r;
  r.degree = 2 * n - 2;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double u = g.x[i], v = g.x[j];
      r.points.push_back({u * (1.0 - v), u * v});
      r.weights.push_back(g.w[i] * g.w[j] * u);
    }
  return r;
}

TriangleRule symmetrised_collapsed(int degree) {
  const int n = (degree + 3) / 2;
  const TriangleRule base = build_collapsed(n);
  TriangleRule r;
  r.degree = degree;
  for (std::size_t q = 0; q < base.size(); ++q) {
    const Vec3 l = base.barycentric(q);
    const int perm[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    for (const auto& p : perm) {
      r.points.push_back({l[p[1]], l[p[2]]});
      r.weights.push_back(base.weights[q] / 6.0);
    }
  }
  return r;
}

}  // namespace

const Rule1D& gauss_legendre(int n) {
  static const std::vector<Rule1D> rules = [] {
    std::vector<Rule1D> v(65);
    for (int k = 1; k <= 64; ++k) v[k] = build_gauss_legendre(k);
    return v;
  }();
  if (n < 1 || n > 64) throw DomainError("gauss_legendre: order out of range [1,64]");
  return rules[n];
}

const TriangleRule& gauss_triangle(int degree) {
  static const std::vector<TriangleRule> rules = [] {
    std::vector<TriangleRule> v(21);
    for (int d = 1; d <= 20; ++d) v[d] = d <= 6 ? tabulated(d) : symmetrised_collapsed(d);
    return v;
  }();
  if (degree < 1 || degree > 20) throw DomainError("gauss_triangle: unsupported degree");
  return rules[degree];
}

const TriangleRule& collapsed_rule(int n) {
  static const std::vector<TriangleRule> rules = [] {
    std::vector<TriangleRule> v(33);
    for (int k = 1; k <= 32; ++k) v[k] = build_collapsed(k);
    return v;
  }();
  if (n < 1 || n > 32) throw DomainError("collapsed_rule: order out of range [1,32]");
  return rules[n];
}

Vec3 Triangle::closest_point(const Vec3& p) const {
  // Ericson, Real-Time Collision Detection, 5.1.5
  const Vec3 ab = b - a, ac = c - a, ap = p - a;
  const double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0 && d2 <= 0) return a;
  const Vec3 bp = p - b;
  const double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0 && d4 <= d3) return b;
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0 && d1 >= 0 && d3 <= 0) return a + (d1 / (d1 - d3)) * ab;
  const Vec3 cp = p - c;
  const double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0 && d5 <= d6) return c;
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0 && d2 >= 0 && d6 <= 0) return a + (d2 / (d2 - d6)) * ac;
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0 && (d4 - d3) >= 0 && (d5 - d6) >= 0)
    return b + ((d4 - d3) / ((d4 - d3) + (d5 - d6))) * (c - b);
  const double denom = 1.0 / (va + vb + vc);
  return a + ab * (vb * denom) + ac * (vc * denom);
}

cplx integrate(const ScalarFn& f, const Triangle& t, const TriangleRule& rule) {
  const double jac = 2.0 * t.area();
  cplx sum = 0.0;
  for (std::size_t q = 0; q < rule.size(); ++q) sum += rule.weights[q] * f(t.map(rule.points[q]));
  return jac * sum;
}

void visit_duffy(const Triangle& t, const Vec3& p, int order,
                 const std::function<void(const Vec2&, double)>& visit) {
  const double area = t.area();
  const double diam = t.diameter();
  // reference coordinates of p
  const Vec3 e1 = t.b - t.a, e2 = t.c - t.a;
  Eigen::Matrix2d g;
  g << e1.dot(e1), e1.dot(e2), e1.dot(e2), e2.dot(e2);
  const Vec2 rhs(e1.dot(p - t.a), e2.dot(p - t.a));
  const Vec2 P = g.ldlt().solve(rhs);
  const double tol = 1e-12;
  if ((t.map(P) - p).norm() > 1e-10 * diam || P.x() < -tol || P.y() < -tol ||
      P.x() + P.y() > 1.0 + tol)
    throw DomainError("duffy_singular: singular point outside the triangle");

  const Rule1D& gl = gauss_legendre(order);
  const std::array<Vec2, 3> V = {Vec2(0, 0), Vec2(1, 0), Vec2(0, 1)};
  for (int k = 0; k < 3; ++k) {
    const Vec2& Q1 = V[k];
    const Vec2& Q2 = V[(k + 1) % 3];
    const double ref_area = 0.5 * std::abs((Q1 - P).x() * (Q2 - P).y() - (Q1 - P).y() * (Q2 - P).x());
    if (ref_area < 1e-14) continue;
    // wide angles at p slow the angular direction down, so cut them into
    // pieces of at most pi/4 (measured on the physical triangle)
    const Vec3 a1 = t.map(Q1) - p, a2 = t.map(Q2) - p;
    const double angle = std::atan2(a1.cross(a2).norm(), a1.dot(a2));
    const int pieces = std::max(1, static_cast<int>(std::ceil(angle / (0.25 * pi) - 1e-12)));
    const double phys2 = 2.0 * area * (ref_area / 0.5) / pieces;
    for (int m = 0; m < pieces; ++m) {
      const Vec2 R1 = Q1 + (double(m) / pieces) * (Q2 - Q1);
      const Vec2 R2 = Q1 + (double(m + 1) / pieces) * (Q2 - Q1);
      for (std::size_t i = 0; i < gl.size(); ++i) {
        const double u = gl.x[i];
        for (std::size_t j = 0; j < gl.size(); ++j) {
          const double v = gl.x[j];
          const Vec2 r = P + u * (R1 - P) + u * v * (R2 - R1);
          visit(r, gl.w[i] * gl.w[j] * u * phys2);
        }
      }
    }
  }
}

cplx duffy_singular(const ScalarFn& f, const Triangle& t, const Vec3& p, int order) {
  cplx sum = 0.0;
  visit_duffy(t, p, order, [&](const Vec2& r, double w) { sum += w * f(t.map(r)); });
  return sum;
}

namespace {

void near_rec(const Triangle& parent, double parent_area, const std::array<Vec2, 3>& v,
              const Vec3& target, const NearSingularOptions& opt, int depth,
              const TriangleRule& leaf, const std::function<void(const Vec2&, double)>& visit) {
  const Triangle sub{parent.map(v[0]), parent.map(v[1]), parent.map(v[2])};
  const double d = sub.distance(target);
  if (d < opt.eta * sub.diameter() && depth < opt.max_depth) {
    const Vec2 m01 = 0.5 * (v[0] + v[1]), m12 = 0.5 * (v[1] + v[2]), m20 = 0.5 * (v[2] + v[0]);
    near_rec(parent, parent_area, {v[0], m01, m20}, target, opt, depth + 1, leaf, visit);
    near_rec(parent, parent_area, {m01, v[1], m12}, target, opt, depth + 1, leaf, visit);
    near_rec(parent, parent_area, {m20, m12, v[2]}, target, opt, depth + 1, leaf, visit);
    near_rec(parent, parent_area, {m12, m20, m01}, target, opt, depth + 1, leaf, visit);
    return;
  }
  const Vec2 d1 = v[1] - v[0], d2 = v[2] - v[0];
  const double ref_area = 0.5 * std::abs(d1.x() * d2.y() - d1.y() * d2.x());
  const double phys2 = 2.0 * parent_area * (ref_area / 0.5);
  for (std::size_t q = 0; q < leaf.size(); ++q) {
    const Vec2& s = leaf.points[q];
    visit(v[0] + s.x() * d1 + s.y() * d2, leaf.weights[q] * phys2);
  }
}

}  // namespace

void visit_near_singular(const Triangle& t, const Vec3& target, const NearSingularOptions& opt,
                         const std::function<void(const Vec2&, double)>& visit) {
  const double diam = t.diameter();
  if (t.distance(target) <= 1e-14 * diam)
    throw DomainError("near_singular: target lies on the triangle");
  // collapsed leaves: n^2 points instead of 6 n^2 for the symmetrised rule
  const TriangleRule& leaf = collapsed_rule(opt.degree / 2 + 1);
  near_rec(t, t.area(), {Vec2(0, 0), Vec2(1, 0), Vec2(0, 1)}, target, opt, 0, leaf, visit);
}

cplx near_singular(const ScalarFn& f, const Triangle& t, const Vec3& target,
                   const NearSingularOptions& opt) {
  cplx sum = 0.0;
  visit_near_singular(t, target, opt, [&](const Vec2& r, double w) { sum += w * f(t.map(r)); });
  return sum;
}

namespace {

// Points are produced on {0 <= y <= x <= 1} and mapped to the unit triangle
// by (s, t) = (x - y, y).
PairRule build_sauter_schwab(PairKind kind, int n) {
  const Rule1D& g = gauss_legendre(n);
  PairRule r;
  auto push = [&](double x1, double y1, double x2, double y2, double w) {
    r.test.push_back({x1 - y1, y1});
    r.trial.push_back({x2 - y2, y2});
    r.w.push_back(w);
  };
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          const double xi = g.x[a], e1 = g.x[b], e2 = g.x[c], e3 = g.x[d];
          const double w0 = g.w[a] * g.w[b] * g.w[c] * g.w[d];
          const double xi3 = xi * xi * xi;
          switch (kind) {
            case PairKind::Identical: {
              const double w = w0 * xi3 * e1 * e1 * e2;
              push(xi, xi * (1 - e1 + e1 * e2), xi * (1 - e1 * e2 * e3), xi * (1 - e1), w);
              push(xi * (1 - e1 * e2 * e3), xi * (1 - e1), xi, xi * (1 - e1 + e1 * e2), w);
              push(xi, xi * e1 * (1 - e2 + e2 * e3), xi * (1 - e1 * e2), xi * e1 * (1 - e2), w);
              push(xi * (1 - e1 * e2), xi * e1 * (1 - e2), xi, xi * e1 * (1 - e2 + e2 * e3), w);
              push(xi * (1 - e1 * e2 * e3), xi * e1 * (1 - e2 * e3), xi, xi * e1 * (1 - e2), w);
              push(xi, xi * e1 * (1 - e2), xi * (1 - e1 * e2 * e3), xi * e1 * (1 - e2 * e3), w);
              break;
            }
            case PairKind::Edge: {
              const double w = w0 * xi3 * e1 * e1 * e2;
              push(xi, xi * e1 * e3, xi * (1 - e1 * e2), xi * e1 * (1 - e2), w0 * xi3 * e1 * e1);
              push(xi, xi * e1, xi * (1 - e1 * e2 * e3), xi * e1 * e2 * (1 - e3), w);
              push(xi * (1 - e1 * e2), xi * e1 * (1 - e2), xi, xi * e1 * e2 * e3, w);
              push(xi * (1 - e1 * e2 * e3), xi * e1 * e2 * (1 - e3), xi, xi * e1, w);
              push(xi * (1 - e1 * e2 * e3), xi * e1 * (1 - e2 * e3), xi, xi * e1 * e2, w);
              break;
            }
            case PairKind::Vertex: {
              const double w = w0 * xi3 * e2;
              push(xi, xi * e1, xi * e2, xi * e2 * e3, w);
              push(xi * e2, xi * e2 * e3, xi, xi * e1, w);
              break;
            }
            case PairKind::Separated:
              throw DomainError("sauter_schwab: separated panels use tensor rules");
          }
        }
  return r;
}

}  // namespace

const PairRule& sauter_schwab(PairKind kind, int order) {
  static std::mutex m;
  static std::map<std::pair<int, int>, std::unique_ptr<PairRule>> cache;
  std::lock_guard<std::mutex> lock(m);
  auto& slot = cache[{static_cast<int>(kind), order}];
  if (!slot) slot = std::make_unique<PairRule>(build_sauter_schwab(kind, order));
  return *slot;
}

PairKind classify_pair(const std::array<int, 3>& test, const std::array<int, 3>& trial,
                       std::array<int, 3>& pt, std::array<int, 3>& pr) {
  int common = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (test[i] == trial[j]) {
        pt[common] = i;
        pr[common] = j;
        ++common;
        break;
      }
  auto fill = [common](std::array<int, 3>& p) {
    int k = common;
    for (int i = 0; i < 3 && k < 3; ++i) {
      bool used = false;
      for (int j = 0; j < common; ++j) used = used || p[j] == i;
      if (!used) p[k++] = i;
    }
  };
  fill(pt);
  fill(pr);
  return static_cast<PairKind>(common);
}

}  // namespace ebem::quad
