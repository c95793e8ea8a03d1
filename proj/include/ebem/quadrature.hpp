#pragma once

#include <array>
#include <functional>
#include <vector>

#include "ebem/common.hpp"

namespace ebem::quad {

/// Gauss-Legendre rule on [0,1].
struct Rule1D {
  std::vector<double> x;
  std::vector<double> w;
  std::size_t size() const { return x.size(); }
};

const Rule1D& gauss_legendre(int n);

/// Rule on the reference triangle (0,0),(1,0),(0,1); weights sum to 1/2.
struct TriangleRule {
  std::vector<Vec2> points;
  std::vector<double> weights;
  int degree = 0;

  std::size_t size() const { return points.size(); }
  Vec3 barycentric(std::size_t q) const {
    const Vec2& p = points[q];
    return {1.0 - p.x() - p.y(), p.x(), p.y()};
  }
};

/// Symmetric rule exact up to `degree` (1..20).
const TriangleRule& gauss_triangle(int degree);

/// Collapsed (Duffy) tensor Gauss rule with n*n points, exact to degree 2n-2.
const TriangleRule& collapsed_rule(int n);

/// Flat triangle in space, parametrised as a + s (b - a) + t (c - a).
struct Triangle {
  Vec3 a, b, c;

  Vec3 map(const Vec2& st) const { return a + st.x() * (b - a) + st.y() * (c - a); }
  double area() const { return 0.5 * (b - a).cross(c - a).norm(); }
  double diameter() const {
    return std::max({(b - a).norm(), (c - b).norm(), (a - c).norm()});
  }
  /// Closest point of the closed triangle to p.
  Vec3 closest_point(const Vec3& p) const;
  double distance(const Vec3& p) const { return (closest_point(p) - p).norm(); }
};

using ScalarFn = std::function<cplx(const Vec3&)>;

/// Plain rule applied on a triangle.
cplx integrate(const ScalarFn& f, const Triangle& t, const TriangleRule& rule);

/// Visits (reference point, physical weight) of a Duffy rule collapsed at p.
/// p must be a vertex or lie in the closed triangle; interior and edge points
/// are handled by splitting into sub-triangles that have p as a vertex.
void visit_duffy(const Triangle& t, const Vec3& p, int order,
                 const std::function<void(const Vec2&, double)>& visit);

/// Integral of a kernel with a 1/r singularity at p.
cplx duffy_singular(const ScalarFn& f, const Triangle& t, const Vec3& p, int order = 12);

struct NearSingularOptions {
  double eta = 2.0;   // subdivide while dist < eta * diam
  int degree = 10;    // regular rule used on the leaves
  int max_depth = 14;
};

/// Visits (reference point, physical weight) of the adaptive rule for a
/// target off the triangle. Throws DomainError if the target is on it.
void visit_near_singular(const Triangle& t, const Vec3& target, const NearSingularOptions& opt,
                         const std::function<void(const Vec2&, double)>& visit);

cplx near_singular(const ScalarFn& f, const Triangle& t, const Vec3& target,
                   const NearSingularOptions& opt = {});

// Panel pairs

enum class PairKind { Identical = 3, Edge = 2, Vertex = 1, Separated = 0 };

/// Four-dimensional rule for a pair of reference triangles. Points refer to the
/// triangles after permuting their vertices so shared vertices come first, in
/// the same order on both. Weights sum to 1/4.
struct PairRule {
  std::vector<Vec2> test;
  std::vector<double> w;
  std::vector<Vec2> trial;
  std::size_t size() const { return w.size(); }
};

/// Sauter-Schwab regularising rules for touching panels, tensor Gauss in each
/// of the four variables with `order` points.
const PairRule& sauter_schwab(PairKind kind, int order);

/// Permutations that bring shared vertices to the front. Returns the kind.
PairKind classify_pair(const std::array<int, 3>& test, const std::array<int, 3>& trial,
                       std::array<int, 3>& perm_test, std::array<int, 3>& perm_trial);

}  // namespace ebem::quad
