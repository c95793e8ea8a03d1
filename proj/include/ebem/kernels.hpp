#pragma once

#include "ebem/common.hpp"

namespace ebem {

/// Material and frequency constants. Wavenumbers are always derived.
struct WaveParams {
  double omega = 1.0;
  double rho = 1.0;
  double mu = 1.0;
  double lambda = 2.0;

  double kappa_p() const;
  double kappa_s() const;
  /// omega^2 rho
  double inertia() const { return omega * omega * rho; }
  /// Throws DomainError naming the offending field.
  void validate() const;
};

namespace kernels {

/// f(r) and its first three radial derivatives.
struct Radial {
  cplx f = 0.0, d1 = 0.0, d2 = 0.0, d3 = 0.0;
};

/// exp(i k r) / (4 pi r)
cplx helmholtz_g3(double kappa, double r);

/// Radial derivatives of exp(i k r) / (4 pi r), r > 0.
Radial g3_radial(double kappa, double r);

struct PointDerivs {
  cplx value;
  CVec3 grad;  // with respect to x
  CMat3 hess;
};

/// G(x, y) with x-gradient and x-Hessian.
PointDerivs helmholtz_g3_derivs(double kappa, const Vec3& x, const Vec3& y);

/// Smooth difference (exp(i kp r) - exp(i ks r)) / (4 pi r) with radial
/// derivatives; Taylor series for r * max(kp, ks) < diff_switch.
Radial diff_kernel(double kappa_p, double kappa_s, double r);
inline constexpr double diff_switch = 0.5;
Radial diff_kernel_series(double kappa_p, double kappa_s, double r);
Radial diff_kernel_direct(double kappa_p, double kappa_s, double r);

/// Gradient of f(|d|) with respect to d.
CVec3 radial_gradient(const Radial& f, const Vec3& d);
/// Hessian (d1/r) I + dd^T/r^2 (d2 - d1/r).
CMat3 radial_hessian(const Radial& f, const Vec3& d);
/// Third derivative tensor; out[k](i,j) = d_k d_i d_j f.
void radial_third(const Radial& f, const Vec3& d, CMat3 out[3]);

/// Time-harmonic elastodynamic fundamental solution.
CMat3 kupradze_gamma(const WaveParams& params, const Vec3& x, const Vec3& y);

/// x-derivatives of the Kupradze matrix: out[k] = d_{x_k} Gamma.
void kupradze_gamma_grad(const WaveParams& params, const Vec3& x, const Vec3& y, CMat3 out[3]);

// Two-dimensional kernels

double bessel_j0(double x);
double bessel_j1(double x);
double bessel_y0(double x);
double bessel_y1(double x);
/// Ascending series are used below this argument, Hankel asymptotics above.
inline constexpr double bessel_switch = 12.0;

/// (i/4) H0(k r)
cplx hankel_kernel(double kappa, double r);

/// (i/4) H0(k r) with radial derivatives (d3 left zero).
Radial hankel_radial(double kappa, double r);

/// (i/4)(H0(kp r) - H0(ks r)) with radial derivatives. Bounded, with an
/// r^2 log r leading singular term; series for ks r below hankel_diff_switch.
Radial hankel_diff_kernel(double kappa_p, double kappa_s, double r);
inline constexpr double hankel_diff_switch = 1.0;
Radial hankel_diff_series(double kappa_p, double kappa_s, double r);
Radial hankel_diff_direct(double kappa_p, double kappa_s, double r);

/// 2D Kupradze matrix (plane part).
Eigen::Matrix2cd kupradze_gamma_2d(const WaveParams& params, const Vec2& x, const Vec2& y);

}  // namespace kernels
}  // namespace ebem
