#include "ebem/kernels.hpp"

#include <cmath>
#include <string>

namespace ebem {

double WaveParams::kappa_p() const { return omega * std::sqrt(rho / (2.0 * mu + lambda)); }
double WaveParams::kappa_s() const { return omega * std::sqrt(rho / mu); }

void WaveParams::validate() const {
  auto check = [](bool ok, const char* key, const char* what) {
    if (!ok) throw DomainError(std::string(key) + " " + what);
  };
  check(std::isfinite(omega) && omega > 0, "omega", "must be positive");
  check(std::isfinite(rho) && rho > 0, "rho", "must be positive");
  check(std::isfinite(mu) && mu > 0, "mu", "must be positive");
  check(std::isfinite(lambda) && lambda >= 0, "lambda", "must be non-negative");
}

namespace kernels {

namespace {
constexpr double inv4pi = 1.0 / (4.0 * pi);
constexpr double euler_gamma = 0.57721566490153286061;
}  // namespace

cplx helmholtz_g3(double kappa, double r) {
  if (!(r > 0)) throw DomainError("helmholtz_g3: r must be positive");
  return std::polar(inv4pi / r, kappa * r);
}

Radial g3_radial(double kappa, double r) {
  const cplx f = std::polar(inv4pi / r, kappa * r);
  const cplx a = I * kappa - 1.0 / r;
  const double r2 = r * r;
  return {f, f * a, f * (a * a + 1.0 / r2), f * (a * a * a + 3.0 * a / r2 - 2.0 / (r2 * r))};
}

CVec3 radial_gradient(const Radial& f, const Vec3& d) {
  const double r = d.norm();
  return (f.d1 / r) * d.cast<cplx>();
}

CMat3 radial_hessian(const Radial& f, const Vec3& d) {
  const double r = d.norm();
  const Vec3 u = d / r;
  const cplx b = f.d1 / r;
  const cplx a = f.d2 - b;
  CMat3 h = (u * u.transpose()).cast<cplx>() * a;
  h.diagonal().array() += b;
  return h;
}

void radial_third(const Radial& f, const Vec3& d, CMat3 out[3]) {
  const double r = d.norm();
  const Vec3 u = d / r;
  const cplx A = f.d2 - f.d1 / r;
  const cplx dA = f.d3 - f.d2 / r + f.d1 / (r * r);
  const cplx c1 = dA - 2.0 * A / r;
  const cplx c2 = A / r;
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        cplx v = c1 * (u[i] * u[j] * u[k]);
        if (i == k) v += c2 * u[j];
        if (j == k) v += c2 * u[i];
        if (i == j) v += c2 * u[k];
        out[k](i, j) = v;
      }
}

PointDerivs helmholtz_g3_derivs(double kappa, const Vec3& x, const Vec3& y) {
  const Vec3 d = x - y;
  const double r = d.norm();
  if (!(r > 0)) throw DomainError("helmholtz_g3_derivs: coincident points");
  const Radial g = g3_radial(kappa, r);
  return {g.f, radial_gradient(g, d), radial_hessian(g, d)};
}

Radial diff_kernel_series(double kp, double ks, double r) {
  // psi(r) = (1/4pi) sum_{m>=0} z_m r^m, z_m = i^{m+1} (kp^{m+1} - ks^{m+1}) / (m+1)!
  // Each z_m is real or imaginary; the tables hold (re, im) of z_m and of its
  // derivative coefficients, cached per wavenumber pair.
  constexpr int terms = 20;
  struct Table {
    double kp = -1, ks = -1;
    double re[4][terms], im[4][terms];
  };
  thread_local Table t;
  if (t.kp != kp || t.ks != ks) {
    t.kp = kp;
    t.ks = ks;
    double ap = 1.0, as = 1.0, fact = 1.0;
    for (int m = 0; m < terms; ++m) {
      ap *= kp;
      as *= ks;
      fact *= m + 1;
      const double a = (ap - as) / fact * inv4pi;
      // i^{m+1}: i, -1, -i, 1
      const double zr[4] = {0.0, -a, 0.0, a}, zi[4] = {a, 0.0, -a, 0.0};
      t.re[0][m] = zr[m % 4];
      t.im[0][m] = zi[m % 4];
    }
    for (int d = 1; d < 4; ++d)
      for (int m = 0; m < terms; ++m) {
        // coefficient of r^m in the d-th derivative
        const bool ok = m + 1 < terms;
        t.re[d][m] = ok ? (m + 1) * t.re[d - 1][m + 1] : 0.0;
        t.im[d][m] = ok ? (m + 1) * t.im[d - 1][m + 1] : 0.0;
      }
  }
  double vr[4] = {0, 0, 0, 0}, vi[4] = {0, 0, 0, 0};
  for (int m = terms - 1; m >= 0; --m)
    for (int d = 0; d < 4; ++d) {
      vr[d] = vr[d] * r + t.re[d][m];
      vi[d] = vi[d] * r + t.im[d][m];
    }
  return {cplx(vr[0], vi[0]), cplx(vr[1], vi[1]), cplx(vr[2], vi[2]), cplx(vr[3], vi[3])};
}

Radial diff_kernel_direct(double kp, double ks, double r) {
  const Radial p = g3_radial(kp, r), s = g3_radial(ks, r);
  return {p.f - s.f, p.d1 - s.d1, p.d2 - s.d2, p.d3 - s.d3};
}

Radial diff_kernel(double kp, double ks, double r) {
  if (r < 0) throw DomainError("diff_kernel: negative distance");
  if (kp == ks) return {};
  if (r * std::max(kp, ks) < diff_switch) return diff_kernel_series(kp, ks, r);
  return diff_kernel_direct(kp, ks, r);
}

CMat3 kupradze_gamma(const WaveParams& prm, const Vec3& x, const Vec3& y) {
  const Vec3 d = x - y;
  const double r = d.norm();
  if (!(r > 0)) throw DomainError("kupradze_gamma: coincident points");
  const double ks = prm.kappa_s(), kp = prm.kappa_p();
  const cplx gs = helmholtz_g3(ks, r);
  const CMat3 h = radial_hessian(diff_kernel(kp, ks, r), d);
  CMat3 out = -h;
  out.diagonal().array() += ks * ks * gs;
  return out / prm.inertia();
}

void kupradze_gamma_grad(const WaveParams& prm, const Vec3& x, const Vec3& y, CMat3 out[3]) {
  const Vec3 d = x - y;
  const double r = d.norm();
  if (!(r > 0)) throw DomainError("kupradze_gamma_grad: coincident points");
  const double ks = prm.kappa_s(), kp = prm.kappa_p();
  const CVec3 gs = radial_gradient(g3_radial(ks, r), d);
  radial_third(diff_kernel(kp, ks, r), d, out);
  for (int k = 0; k < 3; ++k) {
    out[k] = -out[k];
    out[k].diagonal().array() += ks * ks * gs[k];
    out[k] /= prm.inertia();
  }
}

// ---------------------------------------------------------------------------
// Bessel functions of order 0 and 1

namespace {

struct BesselPair {
  double j, y;
};

// Ascending series, summed in long double.
BesselPair series0(double xd) {
  const long double x = xd, q = x * x / 4.0L;
  long double term = 1.0L, j = 1.0L, s = 0.0L, h = 0.0L;
  for (int k = 1; k < 80; ++k) {
    term *= -q / (static_cast<long double>(k) * k);
    h += 1.0L / k;
    j += term;
    s -= h * term;
    if (std::fabs(term) * (1.0L + h) < 1e-21L * std::fabs(j) && k > 4) break;
  }
  const long double y = (2.0L / static_cast<long double>(pi)) *
                        ((std::log(x / 2.0L) + static_cast<long double>(euler_gamma)) * j + s);
  return {static_cast<double>(j), static_cast<double>(y)};
}

BesselPair series1(double xd) {
  const long double x = xd, q = x * x / 4.0L, hx = x / 2.0L;
  long double term = hx;  // (x/2)^{2k+1} (-1)^k / (k! (k+1)!)
  long double j = term;
  long double hk = 0.0L, hk1 = 1.0L;
  long double s = (hk + hk1) * term;
  for (int k = 1; k < 80; ++k) {
    term *= -q / (static_cast<long double>(k) * (k + 1));
    hk += 1.0L / k;
    hk1 += 1.0L / (k + 1);
    j += term;
    s += (hk + hk1) * term;
    if (std::fabs(term) * (1.0L + hk1) < 1e-21L * std::fabs(j) && k > 4) break;
  }
  const long double lp = static_cast<long double>(pi);
  const long double y = -2.0L / (lp * x) +
                        (2.0L / lp) * (std::log(hx) + static_cast<long double>(euler_gamma)) * j -
                        s / lp;
  return {static_cast<double>(j), static_cast<double>(y)};
}

// Hankel asymptotic expansion, truncated at the smallest term.
BesselPair asymptotic(int nu, double x) {
  const double mu = 4.0 * nu * nu;
  double P = 0.0, Q = 0.0, a = 1.0, prev = 1e300;
  for (int k = 0; k < 60; ++k) {
    if (k > 0) a *= (mu - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (k * 8.0 * x);
    const double t = std::abs(a);
    if (t > prev) break;
    prev = t;
    const double sgn = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
    if (k % 2 == 0)
      P += sgn * a;
    else
      Q += sgn * a;
    if (t < 1e-17) break;
  }
  const double chi = x - (0.5 * nu + 0.25) * pi;
  const double amp = std::sqrt(2.0 / (pi * x));
  return {amp * (P * std::cos(chi) - Q * std::sin(chi)), amp * (P * std::sin(chi) + Q * std::cos(chi))};
}

BesselPair bessel0(double x) {
  if (!(x > 0)) throw DomainError("bessel: argument must be positive");
  return x < bessel_switch ? series0(x) : asymptotic(0, x);
}

BesselPair bessel1(double x) {
  if (!(x > 0)) throw DomainError("bessel: argument must be positive");
  return x < bessel_switch ? series1(x) : asymptotic(1, x);
}

}  // namespace

double bessel_j0(double x) {
  if (x == 0) return 1.0;
  return bessel0(std::abs(x)).j;
}
double bessel_j1(double x) {
  if (x == 0) return 0.0;
  const double v = bessel1(std::abs(x)).j;
  return x < 0 ? -v : v;
}
double bessel_y0(double x) { return bessel0(x).y; }
double bessel_y1(double x) { return bessel1(x).y; }

cplx hankel_kernel(double kappa, double r) {
  if (!(r > 0)) throw DomainError("hankel_kernel: r must be positive");
  const BesselPair b = bessel0(kappa * r);
  return 0.25 * I * cplx(b.j, b.y);
}

Radial hankel_radial(double kappa, double r) {
  if (!(r > 0)) throw DomainError("hankel_radial: r must be positive");
  const BesselPair b0 = bessel0(kappa * r), b1 = bessel1(kappa * r);
  const cplx h0(b0.j, b0.y), h1(b1.j, b1.y);
  Radial out;
  out.f = 0.25 * I * h0;
  out.d1 = -0.25 * I * kappa * h1;
  out.d2 = -out.d1 / r - kappa * kappa * out.f;
  return out;
}

Radial hankel_diff_series(double kp, double ks, double r) {
  // f = sum_k (A_k + B_k log r) r^{2k}
  constexpr int terms = 16;
  Radial out;
  const double lr = std::log(r);
  double c = 1.0, pp = 1.0, ps = 1.0, h = 0.0;
  const double lkp = std::log(kp), lks = std::log(ks);
  const double inv2pi = 1.0 / (2.0 * pi);
  for (int k = 0; k < terms; ++k) {
    if (k > 0) {
      c *= -1.0 / (4.0 * k * k);
      pp *= kp * kp;
      ps *= ks * ks;
      h += 1.0 / k;
    }
    const double delta = pp - ps;
    const double B = -inv2pi * c * delta;
    const cplx A = c * (0.25 * I * delta -
                        inv2pi * ((euler_gamma - std::log(2.0) - h) * delta + pp * lkp - ps * lks));
    const double r2k = std::pow(r, 2 * k);
    out.f += (A + B * lr) * r2k;
    if (k >= 1) {
      const double r1 = std::pow(r, 2 * k - 1), r2 = std::pow(r, 2 * k - 2);
      out.d1 += (2.0 * k * A + B) * r1 + 2.0 * k * B * r1 * lr;
      out.d2 += (double(2 * k * (2 * k - 1)) * A + (4.0 * k - 1.0) * B) * r2 +
                double(2 * k * (2 * k - 1)) * B * r2 * lr;
    }
  }
  return out;
}

Radial hankel_diff_direct(double kp, double ks, double r) {
  const Radial p = hankel_radial(kp, r), s = hankel_radial(ks, r);
  return {p.f - s.f, p.d1 - s.d1, p.d2 - s.d2, 0.0};
}

Radial hankel_diff_kernel(double kp, double ks, double r) {
  if (!(r > 0)) throw DomainError("hankel_diff_kernel: r must be positive");
  if (kp == ks) return {};
  if (r * std::max(kp, ks) < hankel_diff_switch) return hankel_diff_series(kp, ks, r);
  return hankel_diff_direct(kp, ks, r);
}

Eigen::Matrix2cd kupradze_gamma_2d(const WaveParams& prm, const Vec2& x, const Vec2& y) {
  const Vec2 d = x - y;
  const double r = d.norm();
  if (!(r > 0)) throw DomainError("kupradze_gamma_2d: coincident points");
  const double ks = prm.kappa_s(), kp = prm.kappa_p();
  const Radial f = hankel_diff_kernel(kp, ks, r);
  const Vec2 u = d / r;
  const cplx b = f.d1 / r;
  Eigen::Matrix2cd h = (u * u.transpose()).cast<cplx>() * (f.d2 - b);
  h.diagonal().array() += b;
  Eigen::Matrix2cd out = -h;
  out.diagonal().array() += ks * ks * hankel_kernel(ks, r);
  return out / prm.inertia();
}

}  // namespace kernels
}  // namespace ebem
