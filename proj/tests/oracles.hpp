#pragma once

// Reference integrators used as test oracles. They share nothing with the
// library's quadrature code.

#include <cmath>
#include <complex>
#include <functional>
#include <queue>

#include <Eigen/Dense>

namespace oracle {

using cplx = std::complex<double>;

namespace detail {

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1].
inline const double xgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                              0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                              0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                              0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline const double wgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                              0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                              0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                              0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline const double wg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                             0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
cplx gk15(const F& f, double a, double b, double& err) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  cplx fc = f(c);
  cplx rk = fc * wgk[7], rg = fc * wg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * xgk[j];
    const cplx f1 = f(c - dx), f2 = f(c + dx);
    rk += wgk[j] * (f1 + f2);
    if (j % 2 == 1) rg += wg[j / 2] * (f1 + f2);
  }
  err = std::abs((rk - rg) * h);
  return rk * h;
}

struct Piece {
  double a, b, err;
  cplx val;
  bool operator<(const Piece& o) const { return err < o.err; }
};

// Global adaptive strategy: always bisect the interval with the largest error.
template <class F>
cplx adapt(const F& f, double a, double b, double tol, int max_pieces) {
  std::priority_queue<Piece> q;
  double err = 0;
  cplx v = gk15(f, a, b, err);
  q.push({a, b, err, v});
  cplx total = v;
  double total_err = err;
  while (total_err > tol && static_cast<int>(q.size()) < max_pieces) {
    Piece p = q.top();
    q.pop();
    const double m = 0.5 * (p.a + p.b);
    double e1 = 0, e2 = 0;
    const cplx v1 = gk15(f, p.a, m, e1), v2 = gk15(f, m, p.b, e2);
    total += v1 + v2 - p.val;
    total_err += e1 + e2 - p.err;
    q.push({p.a, m, e1, v1});
    q.push({m, p.b, e2, v2});
  }
  // re-sum to limit cancellation in the running total
  cplx sum = 0;
  while (!q.empty()) {
    sum += q.top().val;
    q.pop();
  }
  return sum;
}

}  // namespace detail

/// Adaptive Gauss-Kronrod on [a, b] with absolute tolerance tol.
template <class F>
cplx integrate(const F& f, double a, double b, double tol = 1e-13) {
  return detail::adapt(f, a, b, tol, 4000);
}

/// Iterated adaptive integral over the triangle (a, b, c); f takes a 3D point.
template <class F>
cplx integrate_triangle(const F& f, const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                        const Eigen::Vector3d& c, double tol = 1e-12) {
  const double jac = (b - a).cross(c - a).norm();
  auto outer = [&](double s) {
    auto inner = [&](double t) { return f(Eigen::Vector3d(a + s * (b - a) + t * (c - a))); };
    return integrate(inner, 0.0, 1.0 - s, tol);
  };
  return jac * integrate(outer, 0.0, 1.0, tol);
}

}  // namespace oracle

namespace oracle {

/// (i/4) H0(z) for z > 0 from the Mehler-Sonine integral (1/4pi) int exp(i z cosh t) dt,
/// taken along the deformed contour 0 -> i pi/2 -> i pi/2 + inf where it decays.
inline cplx hankel0_mehler_sonine(double z) {
  const cplx i(0, 1);
  const cplx arc = integrate([&](double th) { return std::exp(i * (z * std::cos(th))); }, 0.0, M_PI / 2, 1e-15);
  // e^{-z sinh t} is below 1e-17 once z sinh t > 40
  const double tmax = std::asinh(40.0 / z);
  const cplx tail = integrate([&](double t) { return cplx(std::exp(-z * std::sinh(t))); }, 0.0, tmax, 1e-15);
  return (i * arc + tail) / (2 * M_PI);
}

/// J0, Y0 by the ascending series in plain double; fine for moderate z.
inline void bessel0_series(double z, double& j0, double& y0) {
  const double q = z * z / 4;
  double term = 1, h = 0, s = 0;
  j0 = 1;
  for (int k = 1; k < 60; ++k) {
    term *= -q / (double(k) * k);
    h += 1.0 / k;
    j0 += term;
    s -= h * term;
  }
  y0 = (2 / M_PI) * ((std::log(z / 2) + 0.57721566490153286061) * j0 + s);
}

/// Fourth-order central difference of f along e at x. The explicit return
/// type forces Eigen expressions to be evaluated before the temporaries die.
template <class F, class V>
auto fd1(const F& f, const V& x, const V& e, double h) -> decltype(f(x)) {
  return (-f(x + 2 * h * e) + 8.0 * f(x + h * e) - 8.0 * f(x - h * e) + f(x - 2 * h * e)) / (12 * h);
}

/// Fourth-order central second difference of f along e at x.
template <class F, class V>
auto fd2(const F& f, const V& x, const V& e, double h) -> decltype(f(x)) {
  return (-f(x + 2 * h * e) + 16.0 * f(x + h * e) - 30.0 * f(x) + 16.0 * f(x - h * e) - f(x - 2 * h * e)) /
         (12 * h * h);
}

}  // namespace oracle

namespace oracle {

/// Kupradze matrix in the classical closed form
/// Gamma = (1/(4 pi mu)) [psi I - chi rr^T] with the usual psi, chi radial functions.
inline Eigen::Matrix3cd kupradze_closed(double omega, double rho, double mu, double lambda, const Eigen::Vector3d& x,
                                        const Eigen::Vector3d& y) {
  using C = std::complex<double>;
  const C i(0, 1);
  const double ks = omega * std::sqrt(rho / mu), kp = omega * std::sqrt(rho / (lambda + 2 * mu));
  const Eigen::Vector3d d = x - y;
  const double r = d.norm();
  const Eigen::Vector3d u = d / r;
  const C es = std::exp(i * ks * r) / r, ep = std::exp(i * kp * r) / r;
  const double q = (kp / ks) * (kp / ks);
  const C psi = es * (1.0 + i / (ks * r) - 1.0 / (ks * ks * r * r)) - q * ep * (i / (kp * r) - 1.0 / (kp * kp * r * r));
  const C chi = es * (1.0 + 3.0 * i / (ks * r) - 3.0 / (ks * ks * r * r)) -
                q * ep * (1.0 + 3.0 * i / (kp * r) - 3.0 / (kp * kp * r * r));
  Eigen::Matrix3cd g = -chi * (u * u.transpose()).cast<C>();
  g.diagonal().array() += psi;
  return g / (4.0 * 3.14159265358979323846 * mu);
}

}  // namespace oracle

namespace oracle {

/// J1, Y1 by the ascending series.
inline void bessel1_series(double z, double& j1, double& y1) {
  const double q = z * z / 4, g = 0.57721566490153286061;
  double term = z / 2, h = 0, s = 0;
  j1 = 0;
  for (int k = 0; k < 60; ++k) {
    if (k > 0) {
      term *= -q / (double(k) * (k + 1));
      h += 1.0 / k;
    }
    // psi(k+1) + psi(k+2) = -2 gamma + H_k + H_{k+1}
    s += (-2 * g + 2 * h + 1.0 / (k + 1)) * term;
    j1 += term;
  }
  y1 = (2 / M_PI) * j1 * std::log(z / 2) - 2 / (M_PI * z) - s / M_PI;
}

/// H0 and H1 of the first kind.
inline void hankel01(double z, cplx& h0, cplx& h1) {
  double j0, y0, j1, y1;
  bessel0_series(z, j0, y0);
  bessel1_series(z, j1, y1);
  h0 = cplx(j0, y0);
  h1 = cplx(j1, y1);
}

/// 2D Kupradze matrix, (1/mu)[g_s I + (1/ks^2) grad grad (g_s - g_p)] with g = (i/4) H0,
/// written out with the radial derivatives.
inline Eigen::Matrix2cd kupradze_2d(double omega, double rho, double mu, double lambda, const Eigen::Vector2d& x,
                                    const Eigen::Vector2d& y) {
  const cplx i(0, 1);
  const double ks = omega * std::sqrt(rho / mu), kp = omega * std::sqrt(rho / (lambda + 2 * mu));
  const Eigen::Vector2d d = x - y;
  const double r = d.norm();
  struct R {
    cplx f, d1, d2;
  };
  auto radial = [&](double k) {
    cplx h0, h1;
    hankel01(k * r, h0, h1);
    return R{i / 4.0 * h0, -i / 4.0 * k * h1, -i / 4.0 * k * k * (h0 - h1 / (k * r))};
  };
  const R s = radial(ks), p = radial(kp);
  const Eigen::Vector2d u = d / r;
  Eigen::Matrix2cd g = (u * u.transpose()).cast<cplx>() * (s.d2 - s.d1 / r - p.d2 + p.d1 / r);
  g.diagonal().array() += ks * ks * s.f + (s.d1 - p.d1) / r;
  return g / (omega * omega * rho);
}

}  // namespace oracle
