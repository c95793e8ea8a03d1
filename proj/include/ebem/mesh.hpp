#pragma once

#include <array>
#include <functional>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "ebem/common.hpp"
#include "ebem/quadrature.hpp"

namespace ebem {

struct ElementFrame {
  Vec3 n;
  double area = 0;
  Vec3 t1, t2;  // orthonormal, t1 x t2 = n
  Vec3 centroid;
};

/// Frame of the triangle (a, b, c). Throws DegenerateElement when the area is
/// below 1e-12 * (longest edge)^2.
ElementFrame element_frame(const Vec3& a, const Vec3& b, const Vec3& c);

struct Edge {
  int v0 = 0, v1 = 0;          // v0 < v1
  std::vector<int> triangles;  // incident triangles
  std::vector<int> sense;      // +1 if the triangle traverses v0 -> v1
};

/// Flat triangulated surface. Immutable after construction.
class SurfaceMesh {
 public:
  SurfaceMesh() = default;
  SurfaceMesh(std::vector<Vec3> vertices, std::vector<std::array<int, 3>> triangles,
              std::vector<int> labels = {});

  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_triangles() const { return triangles_.size(); }
  const std::vector<Vec3>& vertices() const { return vertices_; }
  const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }
  const Vec3& vertex(int i) const { return vertices_[i]; }
  const std::array<int, 3>& triangle(int e) const { return triangles_[e]; }
  const ElementFrame& frame(int e) const { return frames_[e]; }
  /// Gradients of the three P1 hat functions on element e (tangential, constant).
  const std::array<Vec3, 3>& p1_gradients(int e) const { return grads_[e]; }
  quad::Triangle geometry(int e) const;
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<int>& labels() const { return labels_; }

  /// Every edge shared by exactly two triangles traversing it in opposite directions.
  bool closed() const { return closed_; }
  double total_area() const { return total_area_; }
  /// Longest edge.
  double h() const { return h_; }

 private:
  std::vector<Vec3> vertices_;
  std::vector<std::array<int, 3>> triangles_;
  std::vector<int> labels_;
  std::vector<ElementFrame> frames_;
  std::vector<std::array<Vec3, 3>> grads_;
  std::vector<Edge> edges_;
  bool closed_ = false;
  double total_area_ = 0, h_ = 0;
};

/// Frame of element `elem`.
const ElementFrame& element_frame(const SurfaceMesh& mesh, int elem);

/// Gmsh ASCII 2.2 reader (nodes and 3-node triangles).
SurfaceMesh load_msh(const std::string& path);
SurfaceMesh parse_msh(std::istream& in);

using Projector = std::function<Vec3(const Vec3&)>;
Vec3 project_unit_sphere(const Vec3& x);

/// 1 -> 4 midpoint refinement; new vertices are projected when a projector is given.
SurfaceMesh refine(const SurfaceMesh& mesh, const Projector& projector = nullptr);

SurfaceMesh icosahedron();
/// Unit icosphere: icosahedron refined `level` times onto the sphere.
SurfaceMesh icosphere(int level);
/// Axis-aligned cube [-half, half]^3 with n x n squares per face, two triangles each.
SurfaceMesh cube(int n, double half = 0.5);

enum class PointTag { Interior, Exterior };

struct EvalGrid {
  std::vector<Vec3> points;
  std::vector<PointTag> tags;
  std::vector<double> distance;
};

/// Tags points by the summed solid angle of the triangles. Throws DomainError
/// for points on (or numerically on) the surface.
EvalGrid classify_points(const SurfaceMesh& mesh, const std::vector<Vec3>& pts);

/// Closed polygonal curves in the plane. Segment k joins vertex k to its successor
/// in the same loop. tau = R_{pi/2} n, so n = (tau_2, -tau_1) is outward on a
/// counterclockwise loop.
class Curve2D {
 public:
  struct Segment {
    int a = 0, b = 0;
    double length = 0;
    Vec2 tau, n;
    Vec2 midpoint;
  };

  Curve2D() = default;
  explicit Curve2D(std::vector<std::vector<Vec2>> loops);

  const std::vector<Vec2>& vertices() const { return vertices_; }
  const std::vector<Segment>& segments() const { return segments_; }
  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_segments() const { return segments_.size(); }
  /// Signed area of loop l (positive when counterclockwise).
  double signed_area(int l) const;
  std::size_t num_loops() const { return loop_start_.size(); }
  double length() const { return length_; }
  double h() const { return h_; }
  /// Arclength of vertex i from the start of its loop.
  double arclength(int i) const { return arclength_[i]; }

 private:
  std::vector<Vec2> vertices_;
  std::vector<Segment> segments_;
  std::vector<int> loop_start_, loop_size_;
  std::vector<double> arclength_;
  double length_ = 0, h_ = 0;
};

/// Regular N-gon inscribed in the circle of given radius, counterclockwise,
/// first vertex on the positive x axis.
Curve2D regular_polygon(int n, double radius = 1.0, const Vec2& centre = Vec2::Zero());

}  // namespace ebem
