#pragma once

#include <string>
#include <vector>

#include "ebem/elastic3d.hpp"

namespace ebem {

/// Max over random P1 pairs and index pairs of |int v M_ij u - int u M_ji v| / (|u|_inf |v|_inf area).
double guenter_symmetry_campaign(const SurfaceMesh& mesh, int pairs, unsigned seed);

struct KernelSelftest {
  double helmholtz_residual = 0;   // |Lap G + k^2 G| / (k^2 |G|) at unit distance
  double navier_residual = 0;      // worst Kupradze column, relative to omega^2 rho |Gamma e_k|
  double line_integral_error = 0;  // 3D kernel integrated along a line vs the 2D kernel, kr in [0.1, 10]
};
KernelSelftest kernel_selftest(const WaveParams& prm);

/// Integral of the 3D Helmholtz kernel along a straight line at distance r.
cplx line_integral_g3(double kappa, double r);

struct JumpOptions {
  int samples = 12;          // element centroids
  double delta_factor = 0.125;  // offsets delta and delta/2, delta = factor * h
  EvalOptions eval;
};

/// Near-boundary extrapolated jump errors, one per relation, relative to the
/// size of the expected jump or of the one-sided values when the jump is zero.
struct JumpErrors {
  double single_layer = 0;    // [S p] = 0
  double double_layer = 0;    // [K psi] = psi
  double traction_s = 0;      // [T S p] = p
  double traction_k = 0;      // [T K psi] = 0
};
JumpErrors jump_campaign(const SurfaceMesh& mesh, const WaveParams& prm, const JumpOptions& opt = {});

/// Relative error of phi^T W psi (Hamdi form) against the normal difference
/// quotient of the double-layer potential on the exterior side, Richardson
/// extrapolated from the offsets f h and f h / 2.
double hypersingular_fd_campaign(const SurfaceMesh& mesh, double kappa, double offset_factor = 0.25,
                                 const AssemblyOptions& aopt = {}, const EvalOptions& eopt = {});

/// |W 1| / |W| for the Hamdi matrix at the given (small) wavenumber.
double hamdi_constant_defect(const SurfaceMesh& mesh, double kappa, const AssemblyOptions& opt = {});

/// |A_alter - A_v2|_F / |A_v2|_F.
double traction_form_difference(const SurfaceMesh& mesh, const WaveParams& prm, const AssemblyOptions& opt = {});

/// Smooth test fields used by the campaigns.
CVec3 smooth_field_a(const Vec3& x);
CVec3 smooth_field_b(const Vec3& x);

}  // namespace ebem
