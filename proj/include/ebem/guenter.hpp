#pragma once

#include <functional>

#include "ebem/mesh.hpp"

namespace ebem {

enum class Space { P0, P1 };

/// Boundary-element function. Coefficients are stored component-major:
/// coeffs[c * ndofs() + dof].
struct Density {
  const SurfaceMesh* mesh = nullptr;
  Space space = Space::P1;
  int components = 1;
  CVector coeffs;

  static Density zeros(const SurfaceMesh& mesh, Space space, int components = 1);
  /// Nodal interpolant (P1) or centroid value (P0) of f.
  static Density interpolate(const SurfaceMesh& mesh, Space space, const std::function<cplx(const Vec3&)>& f);
  static Density interpolate(const SurfaceMesh& mesh, Space space, const std::function<CVec3(const Vec3&)>& f);

  std::size_t ndofs() const;
  cplx& at(std::size_t dof, int c = 0) { return coeffs[c * ndofs() + dof]; }
  cplx at(std::size_t dof, int c = 0) const { return coeffs[c * ndofs() + dof]; }
  /// Value of component c on element e at barycentric coordinates l (of the stored vertex order).
  cplx eval(int e, const Vec3& l, int c = 0) const;
  /// Throws DomainError if the coefficient count does not match.
  void validate() const;
};

int levi_civita(int i, int j, int k);

/// Coefficients c_k with (M_ij u)|_e = sum_k c_k u(vertex k of e), for P1 u.
std::array<double, 3> guenter_element(const SurfaceMesh& mesh, int e, int i, int j);

/// M_ij u = n_j d_i u - n_i d_j u for scalar P1 u; P0 result.
Density guenter_scalar(const Density& u, int i, int j);

/// (M u)_i = sum_j M_ij u_j for a 3-vector P1 field; P0 result.
Density guenter_matrix_apply(const Density& u);

/// Same operator via the compact form grad(u) n - n div(u) with elementwise
/// tangential derivatives.
Density guenter_matrix_compact(const Density& u);

/// int v (M_ij u) ds + int u (M_ij v) ds. Zero on closed meshes; on an open
/// patch it equals the boundary term of the Stokes formula.
cplx guenter_pairing_defect(const Density& u, const Density& v, int i, int j);

/// int v M_ij u - int u M_ji v on a closed mesh. Throws if the mesh is open.
cplx symmetry_residual(const Density& u, const Density& v, int i, int j);

/// -sum_k eps_ijk (boundary integral of u v dx_k) over the free edges of the
/// mesh, with 2-point Gauss per edge.
cplx stokes_boundary_term(const Density& u, const Density& v, int i, int j);

/// div_e(u x n) per element for a 3-vector P1 field; P0 result.
Density surface_curl(const Density& u);

/// Bilinear pairing sum_c int a_c b_c ds, exact for P0/P1 combinations.
cplx pairing(const Density& a, const Density& b);

/// Smooth field with its Jacobian J(i, j) = d_j u_i.
struct AnalyticField {
  std::function<Vec3(const Vec3&)> value;
  std::function<Mat3(const Vec3&)> jacobian;
};

/// Largest |M_curv u - M_comp u| over the sample points, which are projected onto
/// the unit sphere (n = x, C = I - n n^T, 2H = 2).
double curvature_form_check(const AnalyticField& u, const std::vector<Vec3>& samples);

struct VolumeFormCheck {
  double surface_exact = 0;  // <v, M u> with the fields themselves on the facets
  double surface_p1 = 0;     // <v_h, M u_h> with nodal interpolants
  double volume = 0;         // int grad u : grad v - curl u . curl v - div u div v
};

/// Both sides of the volume identity for the polyhedron bounded by a closed mesh,
/// using the cone decomposition from `apex` (which must see every facet).
VolumeFormCheck volume_form_check(const SurfaceMesh& mesh, const AnalyticField& u, const AnalyticField& v,
                                  const Vec3& apex = Vec3::Zero());

}  // namespace ebem
