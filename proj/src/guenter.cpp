#include "ebem/guenter.hpp"

#include <cmath>

namespace ebem {

Density Density::zeros(const SurfaceMesh& mesh, Space space, int components) {
  if (components != 1 && components != 3) throw DomainError("density needs 1 or 3 components");
  Density d;
  d.mesh = &mesh;
  d.space = space;
  d.components = components;
  d.coeffs = CVector::Zero(static_cast<Eigen::Index>(d.ndofs() * components));
  return d;
}

Density Density::interpolate(const SurfaceMesh& mesh, Space space, const std::function<cplx(const Vec3&)>& f) {
  Density d = zeros(mesh, space, 1);
  for (std::size_t k = 0; k < d.ndofs(); ++k)
    d.at(k) = f(space == Space::P1 ? mesh.vertex(static_cast<int>(k)) : mesh.frame(static_cast<int>(k)).centroid);
  return d;
}

Density Density::interpolate(const SurfaceMesh& mesh, Space space, const std::function<CVec3(const Vec3&)>& f) {
  Density d = zeros(mesh, space, 3);
  for (std::size_t k = 0; k < d.ndofs(); ++k) {
    const CVec3 v =
        f(space == Space::P1 ? mesh.vertex(static_cast<int>(k)) : mesh.frame(static_cast<int>(k)).centroid);
    for (int c = 0; c < 3; ++c) d.at(k, c) = v[c];
  }
  return d;
}

std::size_t Density::ndofs() const {
  if (!mesh) throw DomainError("density without mesh");
  return space == Space::P1 ? mesh->num_vertices() : mesh->num_triangles();
}

cplx Density::eval(int e, const Vec3& l, int c) const {
  if (space == Space::P0) return at(e, c);
  const auto& t = mesh->triangle(e);
  return l[0] * at(t[0], c) + l[1] * at(t[1], c) + l[2] * at(t[2], c);
}

void Density::validate() const {
  if (!mesh) throw DomainError("density without mesh");
  if (components != 1 && components != 3) throw DomainError("density needs 1 or 3 components");
  if (static_cast<std::size_t>(coeffs.size()) != ndofs() * components)
    throw DomainError("density coefficient count does not match its space");
}

int levi_civita(int i, int j, int k) {
  if (i < 0 || i > 2 || j < 0 || j > 2 || k < 0 || k > 2) throw DomainError("levi_civita: index out of range");
  if (i == j || j == k || i == k) return 0;
  return ((j - i + 3) % 3 == 1) ? 1 : -1;
}

namespace {

void require(const Density& u, Space space, int components, const char* what) {
  u.validate();
  if (u.space != space || u.components != components) throw DomainError(std::string(what) + ": wrong density space");
}

void check_axes(int i, int j) {
  if (i < 0 || i > 2 || j < 0 || j > 2) throw DomainError("axis index out of range");
}

}  // namespace

std::array<double, 3> guenter_element(const SurfaceMesh& mesh, int e, int i, int j) {
  const Vec3& n = mesh.frame(e).n;
  const auto& g = mesh.p1_gradients(e);
  std::array<double, 3> c;
  for (int k = 0; k < 3; ++k) c[k] = g[k][i] * n[j] - g[k][j] * n[i];
  return c;
}

Density guenter_scalar(const Density& u, int i, int j) {
  require(u, Space::P1, 1, "guenter_scalar");
  check_axes(i, j);
  const SurfaceMesh& m = *u.mesh;
  Density out = Density::zeros(m, Space::P0, 1);
  for (std::size_t e = 0; e < m.num_triangles(); ++e) {
    const auto c = guenter_element(m, static_cast<int>(e), i, j);
    const auto& t = m.triangle(e);
    out.at(e) = c[0] * u.at(t[0]) + c[1] * u.at(t[1]) + c[2] * u.at(t[2]);
  }
  return out;
}

Density guenter_matrix_apply(const Density& u) {
  require(u, Space::P1, 3, "guenter_matrix_apply");
  const SurfaceMesh& m = *u.mesh;
  Density out = Density::zeros(m, Space::P0, 3);
  for (std::size_t e = 0; e < m.num_triangles(); ++e) {
    const auto& t = m.triangle(e);
    for (int i = 0; i < 3; ++i) {
      cplx s = 0;
      for (int j = 0; j < 3; ++j) {
        const auto c = guenter_element(m, static_cast<int>(e), i, j);
        s += c[0] * u.at(t[0], j) + c[1] * u.at(t[1], j) + c[2] * u.at(t[2], j);
      }
      out.at(e, i) = s;
    }
  }
  return out;
}

Density guenter_matrix_compact(const Density& u) {
  require(u, Space::P1, 3, "guenter_matrix_compact");
  const SurfaceMesh& m = *u.mesh;
  Density out = Density::zeros(m, Space::P0, 3);
  for (std::size_t e = 0; e < m.num_triangles(); ++e) {
    const auto& t = m.triangle(e);
    const auto& g = m.p1_gradients(e);
    const Vec3& n = m.frame(e).n;
    // G(:, j) = tangential gradient of u_j
    CMat3 G = CMat3::Zero();
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) G.col(j) += g[k].cast<cplx>() * u.at(t[k], j);
    const CVec3 r = G * n.cast<cplx>() - n.cast<cplx>() * G.trace();
    for (int i = 0; i < 3; ++i) out.at(e, i) = r[i];
  }
  return out;
}

cplx pairing(const Density& a, const Density& b) {
  a.validate();
  b.validate();
  if (a.mesh != b.mesh || a.components != b.components) throw DomainError("pairing: incompatible densities");
  const SurfaceMesh& m = *a.mesh;
  cplx s = 0;
  for (std::size_t e = 0; e < m.num_triangles(); ++e) {
    const auto& t = m.triangle(e);
    const double area = m.frame(e).area;
    for (int c = 0; c < a.components; ++c) {
      if (a.space == Space::P0 && b.space == Space::P0) {
        s += area * a.at(e, c) * b.at(e, c);
      } else if (a.space == Space::P1 && b.space == Space::P1) {
        // P1 mass matrix area/12 (1 + delta_kl)
        cplx sa = 0, sb = 0, diag = 0;
        for (int k = 0; k < 3; ++k) {
          sa += a.at(t[k], c);
          sb += b.at(t[k], c);
          diag += a.at(t[k], c) * b.at(t[k], c);
        }
        s += area / 12.0 * (sa * sb + diag);
      } else {
        const Density& p1 = a.space == Space::P1 ? a : b;
        const Density& p0 = a.space == Space::P1 ? b : a;
        const cplx mean = (p1.at(t[0], c) + p1.at(t[1], c) + p1.at(t[2], c)) / 3.0;
        s += area * mean * p0.at(e, c);
      }
    }
  }
  return s;
}

cplx guenter_pairing_defect(const Density& u, const Density& v, int i, int j) {
  require(u, Space::P1, 1, "guenter_pairing_defect");
  require(v, Space::P1, 1, "guenter_pairing_defect");
  return pairing(v, guenter_scalar(u, i, j)) + pairing(u, guenter_scalar(v, i, j));
}

cplx symmetry_residual(const Density& u, const Density& v, int i, int j) {
  require(u, Space::P1, 1, "symmetry_residual");
  require(v, Space::P1, 1, "symmetry_residual");
  if (!u.mesh->closed()) throw DomainError("symmetry_residual: mesh is not closed");
  return pairing(v, guenter_scalar(u, i, j)) - pairing(u, guenter_scalar(v, j, i));
}

cplx stokes_boundary_term(const Density& u, const Density& v, int i, int j) {
  require(u, Space::P1, 1, "stokes_boundary_term");
  require(v, Space::P1, 1, "stokes_boundary_term");
  check_axes(i, j);
  const SurfaceMesh& m = *u.mesh;
  const double g = 0.5 / std::sqrt(3.0);
  cplx s = 0;
  for (const Edge& ed : m.edges()) {
    if (ed.triangles.size() != 1) continue;
    // the free edge is traversed as its triangle traverses it
    const int a = ed.sense[0] > 0 ? ed.v0 : ed.v1;
    const int b = ed.sense[0] > 0 ? ed.v1 : ed.v0;
    const Vec3 dx = m.vertex(b) - m.vertex(a);
    for (double x : {0.5 - g, 0.5 + g}) {
      const cplx uu = (1 - x) * u.at(a) + x * u.at(b);
      const cplx vv = (1 - x) * v.at(a) + x * v.at(b);
      for (int k = 0; k < 3; ++k) s -= 0.5 * levi_civita(i, j, k) * uu * vv * dx[k];
    }
  }
  return s;
}

Density surface_curl(const Density& u) {
  require(u, Space::P1, 3, "surface_curl");
  const SurfaceMesh& m = *u.mesh;
  Density out = Density::zeros(m, Space::P0, 1);
  for (std::size_t e = 0; e < m.num_triangles(); ++e) {
    const auto& t = m.triangle(e);
    const auto& g = m.p1_gradients(e);
    const Vec3& n = m.frame(e).n;
    // sum_l (n x grad u_l)_l
    cplx s = 0;
    for (int k = 0; k < 3; ++k) {
      const Vec3 c = n.cross(g[k]);
      for (int l = 0; l < 3; ++l) s += c[l] * u.at(t[k], l);
    }
    out.at(e) = s;
  }
  return out;
}

double curvature_form_check(const AnalyticField& u, const std::vector<Vec3>& samples) {
  double worst = 0;
  for (const Vec3& s : samples) {
    const Vec3 x = s.normalized();
    const Vec3 n = x;
    const Mat3 P = Mat3::Identity() - n * n.transpose();
    const Mat3 C = P;  // grad n on the unit sphere
    const double twoH = C.trace();
    const Vec3 U = u.value(x);
    const Mat3 J = u.jacobian(x);
    const double un = U.dot(n);

    // compact form with the ambient gradient
    const Vec3 comp = J.transpose() * n - n * J.trace();

    // curvature form; extensions u.n and n x (u x n) = P u use n(x) = x/|x|
    const Vec3 grad_un = P * (J.transpose() * n + C * U);
    const Vec3 ut = P * U;
    // surface divergence of P u: tr(P d(Pu)), d(Pu) = P J - n (grad(u.n))^T - (u.n) C
    const Mat3 dut = P * J - n * (J.transpose() * n + C * U).transpose() - un * C;
    const double div_ut = (P * dut).trace();
    const Vec3 curv = grad_un - n * div_ut - C * ut - twoH * un * n;
    worst = std::max(worst, (curv - comp).cwiseAbs().maxCoeff());
  }
  return worst;
}

VolumeFormCheck volume_form_check(const SurfaceMesh& mesh, const AnalyticField& u, const AnalyticField& v,
                                  const Vec3& apex) {
  if (!mesh.closed()) throw DomainError("volume_form_check: mesh is not closed");
  VolumeFormCheck r;
  const quad::TriangleRule& tr = quad::gauss_triangle(12);
  auto M = [](const Mat3& J, const Vec3& n) { return Vec3(J.transpose() * n - n * J.trace()); };

  for (std::size_t e = 0; e < mesh.num_triangles(); ++e) {
    const int ei = static_cast<int>(e);
    const quad::Triangle t = mesh.geometry(ei);
    const ElementFrame& f = mesh.frame(ei);
    for (std::size_t q = 0; q < tr.size(); ++q) {
      const Vec3 x = t.map(tr.points[q]);
      r.surface_exact += 2 * f.area * tr.weights[q] * v.value(x).dot(M(u.jacobian(x), f.n));
    }
  }

  const SurfaceMesh* mp = &mesh;
  auto p1 = [&](const AnalyticField& w) {
    return Density::interpolate(*mp, Space::P1,
                                std::function<CVec3(const Vec3&)>([&](const Vec3& x) { return CVec3(w.value(x).cast<cplx>()); }));
  };
  const Density uh = p1(u), vh = p1(v);
  r.surface_p1 = pairing(vh, guenter_matrix_apply(uh)).real();

  // cones over the facets: collapsed Gauss rule on each tetrahedron
  const quad::Rule1D& g = quad::gauss_legendre(8);
  for (std::size_t e = 0; e < mesh.num_triangles(); ++e) {
    const quad::Triangle t = mesh.geometry(static_cast<int>(e));
    const Vec3 a = t.a - apex, b = t.b - apex, c = t.c - apex;
    const double vol6 = a.dot(b.cross(c));
    for (std::size_t i = 0; i < g.size(); ++i)
      for (std::size_t j = 0; j < g.size(); ++j)
        for (std::size_t k = 0; k < g.size(); ++k) {
          const double s1 = g.x[i], s2 = (1 - g.x[i]) * g.x[j], s3 = (1 - g.x[i]) * (1 - g.x[j]) * g.x[k];
          const double w = g.w[i] * g.w[j] * g.w[k] * (1 - g.x[i]) * (1 - g.x[i]) * (1 - g.x[j]) * vol6;
          const Vec3 x = apex + s1 * a + s2 * b + s3 * c;
          const Mat3 Ju = u.jacobian(x), Jv = v.jacobian(x);
          const Vec3 cu(Ju(2, 1) - Ju(1, 2), Ju(0, 2) - Ju(2, 0), Ju(1, 0) - Ju(0, 1));
          const Vec3 cv(Jv(2, 1) - Jv(1, 2), Jv(0, 2) - Jv(2, 0), Jv(1, 0) - Jv(0, 1));
          r.volume += w * ((Ju.array() * Jv.array()).sum() - cu.dot(cv) - Ju.trace() * Jv.trace());
        }
  }
  return r;
}

}  // namespace ebem
