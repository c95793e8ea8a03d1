#include <doctest.h>

#include <cmath>
#include <random>

#include "ebem/quadrature.hpp"
#include "oracles.hpp"

using namespace ebem;
using namespace ebem::quad;

namespace {

double factorial(int n) {
  double f = 1;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

// exact monomial moments on the reference triangle
double monomial(int a, int b) { return factorial(a) * factorial(b) / factorial(a + b + 2); }

double rule_moment(const TriangleRule& r, int a, int b) {
  double s = 0;
  for (std::size_t q = 0; q < r.size(); ++q)
    s += r.weights[q] * std::pow(r.points[q].x(), a) * std::pow(r.points[q].y(), b);
  return s;
}

const Triangle ref{Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0)};

}  // namespace

TEST_CASE("gauss_legendre integrates polynomials of degree 2n-1") {
  for (int n = 1; n <= 30; ++n) {
    const Rule1D& g = gauss_legendre(n);
    for (int p = 0; p <= 2 * n - 1; ++p) {
      double s = 0;
      for (std::size_t i = 0; i < g.size(); ++i) s += g.w[i] * std::pow(g.x[i], p);
      CHECK(s == doctest::Approx(1.0 / (p + 1)).epsilon(1e-13));
    }
  }
  CHECK_THROWS_AS(gauss_legendre(0), DomainError);
}

TEST_CASE("gauss_triangle is exact to its degree") {
  for (int d = 1; d <= 20; ++d) {
    const TriangleRule& r = gauss_triangle(d);
    CHECK(r.degree >= d);
    double wsum = 0;
    for (std::size_t q = 0; q < r.size(); ++q) {
      wsum += r.weights[q];
      const Vec3 l = r.barycentric(q);
      CHECK(l.minCoeff() >= -1e-15);
    }
    CHECK(std::abs(wsum - 0.5) < 1e-15);
    for (int a = 0; a <= d; ++a)
      for (int b = 0; a + b <= d; ++b)
        CHECK(std::abs(rule_moment(r, a, b) - monomial(a, b)) < 1e-14);
  }
  CHECK(std::abs(rule_moment(gauss_triangle(1), 1, 0) - 1.0 / 6.0) < 1e-15);
  CHECK(std::abs(rule_moment(gauss_triangle(3), 2, 1) - 1.0 / 60.0) < 1e-15);
  CHECK_THROWS_AS(gauss_triangle(0), DomainError);
  CHECK_THROWS_AS(gauss_triangle(21), DomainError);
}

TEST_CASE("collapsed rule exactness") {
  for (int n = 1; n <= 10; ++n) {
    const TriangleRule& r = collapsed_rule(n);
    for (int a = 0; a <= 2 * n - 2; ++a)
      for (int b = 0; a + b <= 2 * n - 2; ++b)
        CHECK(std::abs(rule_moment(r, a, b) - monomial(a, b)) < 1e-14);
  }
}

TEST_CASE("affine invariance of triangle rules") {
  std::mt19937 gen(7);
  std::uniform_real_distribution<double> u(-1, 1);
  auto f = [](const Vec3& x) { return cplx(std::cos(x.x() + 2 * x.y()), x.z() * x.x()); };
  for (int trial = 0; trial < 20; ++trial) {
    Mat3 A;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) A(i, j) = u(gen);
    const Vec3 off(u(gen), u(gen), u(gen));
    const Triangle img{off, A.col(0) + off, A.col(1) + off};
    const TriangleRule& rule = gauss_triangle(8);
    // integrate f∘A over the reference triangle times |det| of the in-plane map
    const double jac = (img.b - img.a).cross(img.c - img.a).norm();
    cplx lhs = 0;
    for (std::size_t q = 0; q < rule.size(); ++q) lhs += rule.weights[q] * f(img.map(rule.points[q]));
    lhs *= jac;
    const cplx rhs = integrate(f, img, rule);
    CHECK(std::abs(lhs - rhs) <= 1e-13 * std::max(1.0, std::abs(rhs)));
  }
}

TEST_CASE("duffy_singular") {
  auto inv_r = [](const Vec3& c) { return [c](const Vec3& x) { return cplx(1.0 / (x - c).norm()); }; };

  SUBCASE("vertex singularity has the closed form sqrt(2) log(1 + sqrt(2))") {
    const double exact = std::sqrt(2.0) * std::log(1.0 + std::sqrt(2.0));
    CHECK(std::abs(duffy_singular(inv_r(Vec3::Zero()), ref, Vec3::Zero()) - exact) < 1e-13);
    CHECK(std::abs(exact - 1.246450) < 1e-6);
  }
  SUBCASE("interior point against the adaptive oracle") {
    const Vec3 c(1.0 / 3.0, 1.0 / 3.0, 0.0);
    const auto f = inv_r(c);
    // oracle: split at c so the singularity sits at a vertex of each piece
    cplx expect = oracle::integrate_triangle(f, c, ref.a, ref.b, 1e-13) +
                  oracle::integrate_triangle(f, c, ref.b, ref.c, 1e-13) +
                  oracle::integrate_triangle(f, c, ref.c, ref.a, 1e-13);
    const cplx got = duffy_singular(f, ref, c);
    CHECK(std::abs(got - expect) <= 1e-10 * std::abs(expect));
  }
  SUBCASE("smooth integrand") {
    CHECK(std::abs(duffy_singular([](const Vec3&) { return cplx(1.0); }, ref, Vec3(0.2, 0.3, 0)) - 0.5) <
          1e-14);
  }
  SUBCASE("point outside is rejected") {
    CHECK_THROWS_AS(duffy_singular(inv_r(Vec3(2, 2, 0)), ref, Vec3(2, 2, 0)), DomainError);
  }
  SUBCASE("algebraic convergence in the tensor order for G_k") {
    const Triangle t{Vec3(0, 0, 0), Vec3(0.7, 0.1, 0.2), Vec3(0.1, 0.8, -0.1)};
    const Vec3 p = t.map(Vec2(0.3, 0.25));
    auto g = [p](const Vec3& x) {
      const double r = (x - p).norm();
      return std::exp(cplx(0, 3.0 * r)) / (4 * pi * r);
    };
    const cplx ref_val = duffy_singular(g, t, p, 40);
    double e4 = std::abs(duffy_singular(g, t, p, 4) - ref_val);
    double e8 = std::abs(duffy_singular(g, t, p, 8) - ref_val);
    MESSAGE("duffy error order 4: " << e4 << ", order 8: " << e8);
    CHECK(e8 <= e4 / 16.0);
  }
}

TEST_CASE("near_singular") {
  auto g0 = [](const Vec3& c) { return [c](const Vec3& x) { return cplx(1.0 / (4 * pi * (x - c).norm())); }; };

  SUBCASE("far target equals the plain rule") {
    NearSingularOptions opt;
    const Vec3 x(0.3, 0.3, 3.0 * ref.diameter() * opt.eta);
    const cplx plain = integrate(g0(x), ref, gauss_triangle(opt.degree));
    CHECK(std::abs(near_singular(g0(x), ref, x, opt) - plain) <= 1e-12 * std::abs(plain));
  }
  SUBCASE("unit square patch, target 1e-3 above the centre") {
    const Vec3 x(0.5, 0.5, 1e-3);
    const Triangle t1{Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(1, 1, 0)};
    const Triangle t2{Vec3(0, 0, 0), Vec3(1, 1, 0), Vec3(0, 1, 0)};
    const auto f = g0(x);
    const Vec3 foot(0.5, 0.5, 0.0);
    // oracle split at the foot point so the peak sits at a vertex
    auto tri = [&](const Vec3& a, const Vec3& b) { return oracle::integrate_triangle(f, foot, a, b, 1e-14); };
    const cplx expect = tri(t1.a, t1.b) + tri(t1.b, t1.c) + tri(t2.b, t2.c) + tri(t2.c, t2.a);
    const cplx got = near_singular(f, t1, x) + near_singular(f, t2, x);
    CHECK(std::abs(got - expect) <= 1e-8 * std::abs(expect));
  }
  SUBCASE("target on the triangle is rejected") {
    CHECK_THROWS_AS(near_singular(g0(Vec3(0.2, 0.2, 0)), ref, Vec3(0.2, 0.2, 0)), DomainError);
  }
}

TEST_CASE("Sauter-Schwab pair rules") {
  // faces of a slightly distorted octahedron, vertices shared by index
  const std::array<Vec3, 6> v = {Vec3(1, 0.1, 0), Vec3(0, 1, 0.05), Vec3(0.1, 0, 1.2),
                                 Vec3(-1, 0, 0),  Vec3(0, -0.9, 0), Vec3(0, 0.1, -1)};
  struct Case {
    std::array<int, 3> a, b;
    PairKind kind;
  };
  const Case cases[] = {{{0, 1, 2}, {0, 1, 2}, PairKind::Identical},
                        {{0, 1, 2}, {1, 3, 2}, PairKind::Edge},
                        {{0, 1, 2}, {0, 5, 1}, PairKind::Edge},
                        {{0, 1, 2}, {3, 4, 2}, PairKind::Vertex},
                        {{1, 2, 0}, {4, 0, 5}, PairKind::Vertex}};
  auto smooth = [](const Vec3& x, const Vec3& y) { return std::exp(0.3 * x.dot(y)) * (1 + x.x() - y.z()); };
  auto singular = [](const Vec3& x, const Vec3& y) { return 1.0 / (x - y).norm(); };

  for (const auto& c : cases) {
    std::array<int, 3> pa, pb;
    REQUIRE(classify_pair(c.a, c.b, pa, pb) == c.kind);
    const Triangle ta{v[c.a[pa[0]]], v[c.a[pa[1]]], v[c.a[pa[2]]]};
    const Triangle tb{v[c.b[pb[0]]], v[c.b[pb[1]]], v[c.b[pb[2]]]};
    for (int i = 0; i < 3 - 0; ++i)
      if (i < static_cast<int>(c.kind)) CHECK((ta.map(i == 0 ? Vec2(0, 0) : i == 1 ? Vec2(1, 0) : Vec2(0, 1)) -
                                               tb.map(i == 0 ? Vec2(0, 0) : i == 1 ? Vec2(1, 0) : Vec2(0, 1)))
                                                  .norm() == 0.0);
    const double jac = 4.0 * ta.area() * tb.area();

    auto apply = [&](const PairRule& r, auto&& k) {
      double s = 0;
      for (std::size_t q = 0; q < r.size(); ++q) s += r.w[q] * k(ta.map(r.test[q]), tb.map(r.trial[q]));
      return s * jac;
    };
    const PairRule& r6 = sauter_schwab(c.kind, 8);
    double wsum = 0;
    for (double w : r6.w) wsum += w;
    CHECK(std::abs(wsum - 0.25) < 1e-14);

    // smooth integrand: compare with a tensor rule
    const TriangleRule& tr = gauss_triangle(14);
    double tensor = 0;
    for (std::size_t i = 0; i < tr.size(); ++i)
      for (std::size_t j = 0; j < tr.size(); ++j)
        tensor += tr.weights[i] * tr.weights[j] * smooth(ta.map(tr.points[i]), tb.map(tr.points[j]));
    tensor *= jac;
    CHECK(std::abs(apply(r6, smooth) - tensor) < 1e-11 * std::abs(tensor));

    // 1/r: exponential convergence in the order
    const double hi = apply(sauter_schwab(c.kind, 14), singular);
    const double e3 = std::abs(apply(sauter_schwab(c.kind, 3), singular) - hi);
    const double e7 = std::abs(apply(sauter_schwab(c.kind, 7), singular) - hi);
    CHECK(e7 < 1e-3 * e3 + 1e-13);
    CHECK(e7 < 1e-7 * std::abs(hi));
  }
}

TEST_CASE("Sauter-Schwab self term of 1/r against the closed form") {
  // closed form of the self integral of 1/r over a flat triangle with sides a, b, c
  const Triangle t{Vec3(0, 0, 0), Vec3(1.0, 0.1, 0), Vec3(0.3, 0.8, 0.2)};
  const double a = (t.b - t.a).norm(), b = (t.c - t.b).norm(), c = (t.a - t.c).norm();
  auto term = [](double a, double b, double c) {
    return std::log(((a + b) * (a + b) - c * c) / (b * b - (c - a) * (c - a))) / a;
  };
  const double exact = 4.0 * t.area() * t.area() / 3.0 * (term(a, b, c) + term(b, c, a) + term(c, a, b));
  const PairRule& r = sauter_schwab(PairKind::Identical, 10);
  double ss = 0;
  for (std::size_t q = 0; q < r.size(); ++q) ss += r.w[q] / (t.map(r.test[q]) - t.map(r.trial[q])).norm();
  ss *= 4 * t.area() * t.area();
  CHECK(std::abs(ss - exact) < 1e-10 * exact);
}
