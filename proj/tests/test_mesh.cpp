#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "ebem/mesh.hpp"

using namespace ebem;

namespace {

const char* square_msh = R"($MeshFormat
2.2 0 8
$EndMeshFormat
$Nodes
4
1 0 0 0
2 1 0 0
3 1 1 0
4 0 1 0
$EndNodes
$Elements
2
1 2 2 7 1 1 2 3
2 2 2 7 1 1 3 4
$EndElements
)";

SurfaceMesh parse(const std::string& s) {
  std::istringstream in(s);
  return parse_msh(in);
}

std::string to_msh(const SurfaceMesh& m) {
  std::ostringstream o;
  o << "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n$PhysicalNames\n1\n2 1 \"surface\"\n$EndPhysicalNames\n";
  o << "$Nodes\n" << m.num_vertices() << "\n";
  o.precision(17);
  for (std::size_t i = 0; i < m.num_vertices(); ++i)
    o << i + 10 << " " << m.vertex(i).x() << " " << m.vertex(i).y() << " " << m.vertex(i).z() << "\n";
  o << "$EndNodes\n$Elements\n" << m.num_triangles() + 1 << "\n";
  o << "1 15 2 0 1 10\n";
  for (std::size_t e = 0; e < m.num_triangles(); ++e) {
    const auto& t = m.triangle(e);
    o << e + 2 << " 2 2 1 1 " << t[0] + 10 << " " << t[1] + 10 << " " << t[2] + 10 << "\n";
  }
  o << "$EndElements\n";
  return o.str();
}

double enclosed_volume(const SurfaceMesh& m) {
  double v = 0;
  for (std::size_t e = 0; e < m.num_triangles(); ++e)
    v += m.frame(e).area * m.frame(e).centroid.dot(m.frame(e).n) / 3.0;
  return v;
}

void check_frames(const SurfaceMesh& m) {
  Vec3 sum = Vec3::Zero();
  for (std::size_t e = 0; e < m.num_triangles(); ++e) {
    const ElementFrame& f = m.frame(e);
    CHECK(std::abs(f.n.norm() - 1) <= 1e-14);
    CHECK(std::abs(f.t1.dot(f.n)) <= 1e-14);
    CHECK(std::abs(f.t2.dot(f.n)) <= 1e-14);
    CHECK((f.t1.cross(f.t2) - f.n).norm() <= 1e-14);
    sum += f.area * f.n;
  }
  if (m.closed()) CHECK(sum.norm() <= 1e-12 * m.total_area());
}

}  // namespace

TEST_CASE("element_frame") {
  const ElementFrame f = element_frame(Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0));
  CHECK((f.n - Vec3(0, 0, 1)).norm() == 0.0);
  CHECK(f.area == 0.5);
  CHECK_THROWS_AS(element_frame(Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(2, 0, 0)), DegenerateElement);
  CHECK_THROWS_AS(SurfaceMesh({Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(2, 0, 0)}, {{0, 1, 2}}), DegenerateElement);
  const SurfaceMesh m = icosphere(1);
  CHECK_THROWS_AS(element_frame(m, -1), DomainError);
  CHECK_THROWS_AS(element_frame(m, 80), DomainError);
}

TEST_CASE("P1 gradients") {
  const SurfaceMesh m = cube(2);
  for (std::size_t e = 0; e < m.num_triangles(); ++e) {
    const auto& g = m.p1_gradients(e);
    const auto& t = m.triangle(e);
    CHECK((g[0] + g[1] + g[2]).norm() <= 1e-13);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        // hat i changes by delta_ij - delta_i0 from vertex 0 to vertex j
        const double d = g[i].dot(m.vertex(t[j]) - m.vertex(t[0]));
        CHECK(std::abs(d - ((i == j) - (i == 0))) <= 1e-13);
      }
  }
}

TEST_CASE("load_msh") {
  SUBCASE("two-triangle square patch") {
    const SurfaceMesh m = parse(square_msh);
    CHECK(m.num_vertices() == 4);
    CHECK(m.num_triangles() == 2);
    CHECK_FALSE(m.closed());
    CHECK(m.labels()[0] == 7);
    CHECK(m.total_area() == doctest::Approx(1.0));
  }
  SUBCASE("icosahedron round trip through a file") {
    const SurfaceMesh ico = icosahedron();
    const std::string path = "test_mesh_icosahedron.msh";
    {
      std::ofstream f(path);
      f << to_msh(ico);
    }
    const SurfaceMesh m = load_msh(path);
    std::remove(path.c_str());
    CHECK(m.num_vertices() == 12);
    CHECK(m.num_triangles() == 20);
    CHECK(m.closed());
    for (std::size_t i = 0; i < 12; ++i) CHECK((m.vertex(i) - ico.vertex(i)).norm() == 0.0);
  }
  SUBCASE("errors") {
    std::string quad = square_msh;
    quad.replace(quad.find("2\n1 2 2 7 1 1 2 3\n"), 18, "1\n1 3 2 7 1 1 2 3 4\n");
    quad.erase(quad.find("2 2 2 7 1 1 3 4\n"), 16);
    CHECK_THROWS_AS(parse(quad), ParseError);
    CHECK_THROWS_AS(parse("$MeshFormat\n4.1 0 8\n$EndMeshFormat\n"), ParseError);
    CHECK_THROWS_AS(parse("$MeshFormat\n2.2 0 8\n$EndMeshFormat\n$Nodes\n0\n$EndNodes\n$Elements\n0\n$EndElements\n"),
                    ParseError);
    CHECK_THROWS_AS(parse("$MeshFormat\n2.2 0 8\n$EndMeshFormat\n$Nodes\n2\n1 0 0\n"), ParseError);
    CHECK_THROWS_AS(load_msh("/nonexistent/file.msh"), Error);
  }
}

TEST_CASE("generators and refinement") {
  const SurfaceMesh ico = icosahedron();
  CHECK(ico.closed());
  CHECK(enclosed_volume(ico) > 0);
  check_frames(ico);

  const SurfaceMesh r1 = refine(ico, project_unit_sphere);
  CHECK(r1.num_triangles() == 80);
  CHECK(r1.num_vertices() == 42);
  for (const Vec3& v : r1.vertices()) CHECK(std::abs(v.norm() - 1) <= 1e-14);
  CHECK(refine(r1, project_unit_sphere).num_triangles() == 320);

  double prev = 0;
  for (int level = 0; level <= 4; ++level) {
    const SurfaceMesh m = icosphere(level);
    CHECK(m.closed());
    CHECK(enclosed_volume(m) > 0);
    check_frames(m);
    CHECK(m.total_area() > prev);
    CHECK(m.total_area() < 4 * pi);
    prev = m.total_area();
  }
  CHECK(icosphere(3).num_triangles() == 1280);
  CHECK(icosphere(3).num_vertices() == 642);

  for (int n : {1, 2, 3}) {
    const SurfaceMesh c = cube(n, 0.5);
    CHECK(c.closed());
    CHECK(c.num_triangles() == static_cast<std::size_t>(12 * n * n));
    CHECK(c.num_vertices() == static_cast<std::size_t>(6 * n * n + 2));
    CHECK(c.total_area() == doctest::Approx(6.0).epsilon(1e-14));
    CHECK(enclosed_volume(c) == doctest::Approx(1.0).epsilon(1e-14));
    check_frames(c);
    const SurfaceMesh cr = refine(c);
    CHECK(cr.closed());
    CHECK(cr.total_area() == doctest::Approx(6.0).epsilon(1e-14));
  }

  CHECK_THROWS_AS(refine(parse(square_msh)), DomainError);
}

TEST_CASE("classify_points") {
  const SurfaceMesh m = icosphere(2);
  const EvalGrid g = classify_points(m, {Vec3::Zero(), Vec3(3, 0, 0)});
  CHECK(g.tags[0] == PointTag::Interior);
  CHECK(g.tags[1] == PointTag::Exterior);
  CHECK(g.distance[1] == doctest::Approx(2.0).epsilon(1e-12));

  const Vec3 on_facet = m.frame(5).centroid;
  CHECK_THROWS_AS(classify_points(m, {on_facet}), DomainError);

  std::mt19937 gen(1);
  std::uniform_real_distribution<double> u(-2, 2);
  std::vector<Vec3> pts;
  while (pts.size() < 300) {
    const Vec3 x(u(gen), u(gen), u(gen));
    if (std::abs(x.norm() - 1) > 2 * m.h()) pts.push_back(x);
  }
  const EvalGrid r = classify_points(m, pts);
  for (std::size_t i = 0; i < pts.size(); ++i)
    CHECK((r.tags[i] == PointTag::Interior) == (pts[i].norm() < 1));

  const SurfaceMesh c = cube(3);
  const EvalGrid rc = classify_points(c, {Vec3(0.49, 0.49, 0.49), Vec3(0.51, 0, 0)});
  CHECK(rc.tags[0] == PointTag::Interior);
  CHECK(rc.tags[1] == PointTag::Exterior);
  CHECK_THROWS_AS(classify_points(parse(square_msh), {Vec3(0, 0, 1)}), DomainError);
}

TEST_CASE("Curve2D") {
  const Curve2D c = regular_polygon(64, 2.0);
  CHECK(c.num_segments() == 64);
  CHECK(c.signed_area(0) > 0);
  for (const auto& s : c.segments()) {
    CHECK(std::abs(s.tau.dot(s.n)) <= 1e-15);
    CHECK(std::abs(s.tau.norm() - 1) <= 1e-15);
    CHECK(std::abs(s.n.norm() - 1) <= 1e-15);
    // tau = R_{pi/2} n and n points away from the centre
    CHECK((s.tau - Vec2(-s.n.y(), s.n.x())).norm() <= 1e-15);
    CHECK(s.n.dot(s.midpoint) > 0);
  }
  CHECK(c.length() == doctest::Approx(64 * 2 * 2.0 * std::sin(pi / 64)).epsilon(1e-14));
  CHECK(c.arclength(1) == doctest::Approx(c.segments()[0].length));
  CHECK_THROWS_AS(Curve2D({{Vec2(0, 0), Vec2(1, 0)}}), DomainError);
  CHECK_THROWS_AS(Curve2D({{Vec2(0, 0), Vec2(1, 0), Vec2(1, 0)}}), DegenerateElement);
}
