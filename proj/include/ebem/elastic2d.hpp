#pragma once

#include "ebem/elastic3d.hpp"

namespace ebem {

/// u = u_perp + u3 e3 for a field independent of x3.
struct SplitField {
  Eigen::Vector2cd perp;
  cplx u3;
};
SplitField split_field(const CVec3& u);
CVec3 recombine(const SplitField& s);

/// Plane (2 components) and antiplane parts of a density on a curve; values are
/// nodal (P1) or per segment (P0), plane stored component-major.
struct PlanarDensity {
  const Curve2D* curve = nullptr;
  Space space = Space::P1;
  CVector plane, anti;
  std::size_t ndofs() const;
};

std::size_t space_dim(const Curve2D& c, Space s);

/// Arclength derivative of a nodal P1 function, one value per segment.
CVector guenter_2d(const Curve2D& curve, const CVector& u);
/// M_perp u_perp = e3 x d_s u_perp, P0 result with two components (component-major).
CVector guenter_2d_matrix(const Curve2D& curve, const CVector& uperp);

struct Options2D {
  int far_order = 8;      // Gauss points per segment, separated pairs
  int near_order = 16;    // distance below separation * length
  int log_order = 10;     // points per graded interval near a singularity
  int log_levels = 14;
  double grading = 0.15;
  double separation = 1.0;
};

enum class AntiplaneOp { S3, K3, TS3, TK3, TK3_ALT };
enum class PlaneOp { S, K, TS, TK };

/// Galerkin matrices of the antiplane operators; TK3 and TK3_ALT need P1 spaces.
/// K3 is the principal part (traces add +-psi/2), TS3 includes the side term.
DenseOperator assemble_antiplane(const Curve2D& curve, const WaveParams& prm, AntiplaneOp op, Space trial,
                                 Space test, Side side = Side::Plus, const Options2D& opt = {});

/// Galerkin matrices of the plane operators (2-component P1 spaces; S also takes P0).
DenseOperator assemble_plane(const Curve2D& curve, const WaveParams& prm, PlaneOp op, Space trial = Space::P1,
                             Side side = Side::Plus, const Options2D& opt = {});

/// 2D Helmholtz single layer Galerkin matrix.
DenseOperator galerkin_single_layer_2d(const Curve2D& curve, double kappa, Space trial, Space test,
                                       const Options2D& opt = {});

/// Rayleigh quotient of the P0 single layer on exp(i m theta) sampled at segment midpoints.
cplx fourier_mode_eigenvalue(const Curve2D& curve, double kappa, int m, const Options2D& opt = {});

}  // namespace ebem
