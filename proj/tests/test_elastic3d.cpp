#include <doctest.h>

#include <cmath>
#include <random>

#include "ebem/elastic3d.hpp"
#include "oracles.hpp"

using namespace ebem;

namespace {

CMat3 gamma_closed(const WaveParams& p, const Vec3& x, const Vec3& y) {
  return oracle::kupradze_closed(p.omega, p.rho, p.mu, p.lambda, x, y);
}

Density smooth_vector(const SurfaceMesh& m, Space s) {
  return Density::interpolate(m, s, [](const Vec3& x) -> CVec3 {
    return CVec3(cplx(x.y() + 0.3, 0.1 * x.z()), cplx(std::cos(x.x()), 0.2), cplx(x.x() * x.z(), -x.y()));
  });
}

std::vector<Vec3> shell_points(int n, double radius, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> g;
  std::vector<Vec3> pts;
  for (int i = 0; i < n; ++i) {
    Vec3 v(g(gen), g(gen), g(gen));
    pts.push_back(radius * v.normalized());
  }
  return pts;
}

// direct double layer: component k is int T(Gamma(., x) e_k) . psi with the
// traction from 4th-order differences of the closed form
CVec3 direct_double_layer(const SurfaceMesh& m, const WaveParams& p, const Density& psi, const Vec3& x) {
  CVec3 out = CVec3::Zero();
  visit_surface(m, x, {}, [&](int e, const Vec3& l, double w) {
    const auto& t = m.triangle(e);
    const Vec3 y = l[0] * m.vertex(t[0]) + l[1] * m.vertex(t[1]) + l[2] * m.vertex(t[2]);
    const Vec3& n = m.frame(e).n;
    const CVec3 v(psi.eval(e, l, 0), psi.eval(e, l, 1), psi.eval(e, l, 2));
    CMat3 grad[3];  // grad[j] = d_{y_j} Gamma(y, x)
    for (int j = 0; j < 3; ++j)
      grad[j] = oracle::fd1([&](const Vec3& z) -> CMat3 { return gamma_closed(p, z, x); }, y, Vec3(Vec3::Unit(j)), 1e-3);
    for (int k = 0; k < 3; ++k) {
      CMat3 J;  // J(i, j) = d_j U_i, U = Gamma(., x) e_k
      for (int j = 0; j < 3; ++j) J.col(j) = grad[j].col(k);
      const CVec3 tr = p.mu * (J + J.transpose()) * n.cast<cplx>() + p.lambda * J.trace() * n.cast<cplx>();
      out[k] += w * bdot(tr, v);
    }
  });
  return out;
}

}  // namespace

TEST_CASE("closed-form Kupradze oracle agrees with the library kernel") {
  WaveParams p;
  p.omega = 1.3;
  p.lambda = 1.7;
  for (double r : {0.05, 0.3, 1.0, 4.0}) {
    const Vec3 x(0.2, -0.1, 0.3), y = x + r * Vec3(0.48, 0.6, 0.64);
    const CMat3 a = kernels::kupradze_gamma(p, x, y), b = gamma_closed(p, x, y);
    CHECK((a - b).norm() <= 1e-11 * b.norm());
  }
}

TEST_CASE("eval_S") {
  const SurfaceMesh m = icosphere(1);
  WaveParams p;
  const Density q = smooth_vector(m, Space::P1);
  SUBCASE("zero density") {
    for (const CVec3& v : eval_S(m, p, Density::zeros(m, Space::P0, 3), {Vec3(0, 0, 3)})) CHECK(v.norm() == 0.0);
  }
  SUBCASE("against direct Kupradze quadrature") {
    const auto pts = shell_points(6, 3.5, 1);
    const VecField s = eval_S(m, p, q, pts);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      CVec3 ref = CVec3::Zero();
      visit_surface(m, pts[i], {}, [&](int e, const Vec3& l, double w) {
        const auto& t = m.triangle(e);
        const Vec3 y = l[0] * m.vertex(t[0]) + l[1] * m.vertex(t[1]) + l[2] * m.vertex(t[2]);
        const CVec3 v(q.eval(e, l, 0), q.eval(e, l, 1), q.eval(e, l, 2));
        ref += w * gamma_closed(p, pts[i], y) * v;
      });
      CHECK((s[i] - ref).norm() <= 1e-10 * ref.norm());
    }
  }
  SUBCASE("Navier residual by finite differences") {
    const Vec3 x(0.4, 2.5, -1.0);
    auto u = [&](const Vec3& z) -> CVec3 { return eval_S(m, p, q, {z})[0]; };
    const double h = 2e-2;
    CVec3 lap = CVec3::Zero(), graddiv = CVec3::Zero();
    for (int i = 0; i < 3; ++i) {
      lap += oracle::fd2(u, x, Vec3(Vec3::Unit(i)), h);
      for (int j = 0; j < 3; ++j) {
        auto dj = [&](const Vec3& z) -> cplx { return oracle::fd1(u, z, Vec3(Vec3::Unit(j)), h)[j]; };
        graddiv[i] += oracle::fd1(dj, x, Vec3(Vec3::Unit(i)), h);
      }
    }
    const CVec3 ux = u(x);
    const CVec3 res = p.mu * lap + (p.lambda + p.mu) * graddiv + p.inertia() * ux;
    CHECK(res.norm() <= 1e-5 * p.inertia() * ux.norm());
  }
}

TEST_CASE("eval_K") {
  const SurfaceMesh m = icosphere(2);
  WaveParams p;
  const Density psi = smooth_vector(m, Space::P1);
  SUBCASE("forms I and II agree") {
    auto pts = shell_points(25, 1.5, 2);
    for (const Vec3& v : shell_points(25, 0.6, 3)) pts.push_back(v);
    const VecField a = eval_K(m, p, psi, pts, KForm::I), b = eval_K(m, p, psi, pts, KForm::II);
    double worst = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) worst = std::max(worst, (a[i] - b[i]).norm() / b[i].norm());
    MESSAGE("form I vs II " << worst);
    CHECK(worst <= 1e-10);
  }
  SUBCASE("against the direct traction kernel, K = -int (T_y Gamma)^T psi") {
    const SurfaceMesh m1 = icosphere(1);
    const Density psi1 = smooth_vector(m1, Space::P1);
    const std::vector<Vec3> pts = {Vec3(0, 0, 1.8), Vec3(1.1, -1.0, 0.3), Vec3(0.1, 0.2, -0.15)};
    const VecField k = eval_K(m1, p, psi1, pts, KForm::II);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const CVec3 ref = -direct_double_layer(m1, p, psi1, pts[i]);
      CHECK((k[i] - ref).norm() <= 1e-8 * ref.norm());
    }
  }
  SUBCASE("P0 density is rejected") {
    CHECK_THROWS_AS(eval_K(m, p, Density::zeros(m, Space::P0, 3), {Vec3(0, 0, 3)}, KForm::I), DomainError);
  }
}

TEST_CASE("Galerkin S: regularised vs direct on separated pairs") {
  const SurfaceMesh m = icosphere(1);
  WaveParams p;
  const DenseOperator S = galerkin_S(m, p, Space::P0, Space::P0);
  const auto el = element_data(m);
  const PairRules rules{AssemblyOptions{}};
  const int nt = m.num_triangles();
  std::vector<PairPoint> pts;
  double worst = 0;
  for (int e = 0; e < nt; ++e)
    for (int f = 0; f < nt; ++f) {
      std::array<int, 3> pa, pb;
      if (quad::classify_pair(el[e].vid, el[f].vid, pa, pb) != quad::PairKind::Separated) continue;
      rules.points(el, e, f, pts);
      CMat3 ref = CMat3::Zero();
      for (const PairPoint& q : pts) ref += q.w * gamma_closed(p, el[e].point(q.lx), el[f].point(q.ly));
      CMat3 blk;
      for (int c = 0; c < 3; ++c)
        for (int d = 0; d < 3; ++d) blk(c, d) = S.A(c * nt + e, d * nt + f);
      worst = std::max(worst, (blk - ref).cwiseAbs().maxCoeff() / ref.cwiseAbs().maxCoeff());
    }
  CHECK(worst <= 1e-10);
}

TEST_CASE("traction of the single layer") {
  const SurfaceMesh m = icosphere(1);
  WaveParams p;
  const Density q = smooth_vector(m, Space::P0);
  const Density tp = traction_single_layer(m, p, q, Side::Plus);
  const Density tm = traction_single_layer(m, p, q, Side::Minus);
  // <phi, p> for P1 test, P0 trial
  CVector mass = CVector::Zero(3 * m.num_vertices());
  for (std::size_t e = 0; e < m.num_triangles(); ++e)
    for (int a = 0; a < 3; ++a)
      for (int c = 0; c < 3; ++c) mass[c * m.num_vertices() + m.triangle(e)[a]] += m.frame(e).area / 3.0 * q.at(e, c);
  CHECK((tp.coeffs - tm.coeffs - mass).norm() <= 1e-10 * mass.norm());
  CHECK(traction_single_layer(m, p, Density::zeros(m, Space::P0, 3), Side::Plus).coeffs.norm() == 0.0);
}

TEST_CASE("traction of the double layer") {
  WaveParams p;
  const SurfaceMesh m = icosphere(1);
  const TractionPair plus = traction_double_layer_both(m, p, Side::Plus);
  const TractionPair minus = traction_double_layer_both(m, p, Side::Minus);
  auto rel = [](const CMatrix& a, const CMatrix& b) { return (a - b).norm() / b.norm(); };
  CHECK(rel(plus.alter.A.transpose(), plus.alter.A) <= 1e-10);
  CHECK(rel(plus.v2.A.transpose(), plus.v2.A) <= 1e-10);
  CHECK(rel(minus.alter.A, plus.alter.A) <= 1e-10);
  CHECK(rel(minus.v2.A, plus.v2.A) <= 1e-10);
  // rigid translations are in the kernel of T K only at omega = 0; here just check
  // the two forms are close on the coarse mesh
  MESSAGE("ALTER vs V2 at level 1: " << rel(plus.v2.A, plus.alter.A));
}

TEST_CASE("Somigliana representation") {
  WaveParams p;
  const auto pts = shell_points(8, 3.0, 4);
  const SurfaceMesh m = icosphere(2);
  CHECK(somigliana_residual(m, p, Vec3::Zero(), CVec3::Zero(), pts) == 0.0);
  const double r = somigliana_residual(m, p, Vec3(0.1, 0, -0.1), CVec3(1.0, cplx(0, 0.5), -0.3), pts);
  MESSAGE("Somigliana residual level 2: " << r);
  CHECK(r < 5e-2);
  CHECK_THROWS_AS(somigliana_residual(m, p, Vec3(0, 0, 2), CVec3(1, 0, 0), pts), DomainError);
  CHECK_THROWS_AS(somigliana_residual(m, p, Vec3::Zero(), CVec3(1, 0, 0), {Vec3(0.1, 0, 0)}), DomainError);
}
