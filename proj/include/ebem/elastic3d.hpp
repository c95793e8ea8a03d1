#pragma once

#include <vector>

#include "ebem/kernels.hpp"
#include "ebem/potentials.hpp"

namespace ebem {

enum class Side { Plus, Minus };  // + is the interior
enum class KForm { I, II };
enum class TractionForm { Alter, V2 };

using VecField = std::vector<CVec3>;

/// S p(x) = (1/omega^2 rho)(ks^2 V_s p - grad div D p), D = V_p - V_s, through the
/// smooth difference kernel.
VecField eval_S(const SurfaceMesh& mesh, const WaveParams& prm, const Density& p, const std::vector<Vec3>& pts,
                const EvalOptions& opt = {});

/// Double-layer potential of a P1 3-vector density.
///  I : grad V_p (n.psi) - curl V_s (n x psi) - 2 mu S (M psi)
///  II: N_s psi + (V_s - 2 mu S)(M psi) + grad D (n.psi)
VecField eval_K(const SurfaceMesh& mesh, const WaveParams& prm, const Density& psi, const std::vector<Vec3>& pts,
                KForm form, const EvalOptions& opt = {});

/// Galerkin single-layer matrix through the regularised form; test/trial 3-vector spaces.
DenseOperator galerkin_S(const SurfaceMesh& mesh, const WaveParams& prm, Space trial, Space test,
                         const AssemblyOptions& opt = {});

/// <phi, (T S p)^+-> for P1 3-vector test functions phi.
DenseOperator traction_single_layer_matrix(const SurfaceMesh& mesh, const WaveParams& prm, Space trial, Side side,
                                           const AssemblyOptions& opt = {});
/// Functional coefficients <phi_m, (T S p)^+->, returned as a P1 3-vector Density.
Density traction_single_layer(const SurfaceMesh& mesh, const WaveParams& prm, const Density& p, Side side,
                              const AssemblyOptions& opt = {});

/// <phi, T K psi> for P1 3-vector phi, psi.
DenseOperator traction_double_layer(const SurfaceMesh& mesh, const WaveParams& prm, TractionForm form, Side side,
                                    const AssemblyOptions& opt = {});

struct TractionPair {
  DenseOperator alter, v2;
};
/// Both forms from one sweep over the panel pairs.
TractionPair traction_double_layer_both(const SurfaceMesh& mesh, const WaveParams& prm, Side side,
                                        const AssemblyOptions& opt = {});

/// M psi per element for a P1 3-vector density (P0 3-vector result).
Density guenter_p0(const Density& psi);

/// Max relative deviation of -K(u^-) - S((T u)^-) from u(x) = Gamma(x, x0) a on the
/// exterior points. Boundary data: P1 interpolant of u and P0 centroid tractions.
double somigliana_residual(const SurfaceMesh& mesh, const WaveParams& prm, const Vec3& x0, const CVec3& a,
                           const std::vector<Vec3>& pts, const EvalOptions& opt = {});

/// Traction 2 mu d_n u + lambda n div u + mu n x curl u of the field Gamma(., x0) a at y.
CVec3 kupradze_traction(const WaveParams& prm, const Vec3& y, const Vec3& x0, const CVec3& a, const Vec3& n);

}  // namespace ebem
