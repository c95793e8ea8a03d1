#include "ebem/campaigns.hpp"

#include <random>

namespace ebem {

CVec3 smooth_field_a(const Vec3& x) {
  return CVec3(cplx(x.y() + 0.3, 0.1 * x.z()), cplx(std::cos(x.x()), 0.2), cplx(x.x() * x.z(), -x.y()));
}

CVec3 smooth_field_b(const Vec3& x) {
  return CVec3(cplx(0.5 * x.x() * x.y(), x.z()), cplx(1.0 - x.z(), 0.3 * x.x()), cplx(std::sin(x.y()), 0.1));
}

double guenter_symmetry_campaign(const SurfaceMesh& mesh, int pairs, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> u(-1, 1);
  auto random_p1 = [&]() {
    Density d = Density::zeros(mesh, Space::P1);
    for (auto& c : d.coeffs) c = cplx(u(gen), u(gen));
    return d;
  };
  double worst = 0;
  for (int k = 0; k < pairs; ++k) {
    const Density a = random_p1(), b = random_p1();
    const double scale = a.coeffs.cwiseAbs().maxCoeff() * b.coeffs.cwiseAbs().maxCoeff() * mesh.total_area();
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) worst = std::max(worst, std::abs(symmetry_residual(a, b, i, j)) / scale);
  }
  return worst;
}

namespace {

// composite Gauss-Legendre on [a, b]
template <class F>
cplx composite(const F& f, double a, double b, int panels) {
  const auto& gl = quad::gauss_legendre(20);
  cplx sum = 0;
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p)
    for (std::size_t q = 0; q < gl.size(); ++q) sum += h * gl.w[q] * f(a + h * (p + gl.x[q]));
  return sum;
}

template <class F>
auto central4(const F& f, const Vec3& x, const Vec3& e, double h) -> decltype(f(x)) {
  return (-f(x + 2 * h * e) + 8.0 * f(x + h * e) - 8.0 * f(x - h * e) + f(x - 2 * h * e)) / (12 * h);
}

template <class F>
auto second4(const F& f, const Vec3& x, const Vec3& e, double h) -> decltype(f(x)) {
  return (-f(x + 2 * h * e) + 16.0 * f(x + h * e) - 30.0 * f(x) + 16.0 * f(x - h * e) - f(x - 2 * h * e)) /
         (12 * h * h);
}

}  // namespace

cplx line_integral_g3(double kappa, double r) {
  if (!(kappa > 0) || !(r > 0)) throw DomainError("line_integral_g3: kappa and r must be positive");
  // z = r sinh t turns the line into int_0^inf exp(i k r cosh t) dt / (2 pi); the
  // contour 0 -> i pi/2 -> i pi/2 + inf makes the integrand decay
  const double z = kappa * r;
  const cplx arc = composite([&](double th) { return std::polar(1.0, z * std::cos(th)); }, 0.0, pi / 2, 8);
  const double tmax = std::asinh(40.0 / z);
  const cplx tail = composite([&](double t) { return cplx(std::exp(-z * std::sinh(t))); }, 0.0, tmax, 16);
  return (I * arc + tail) / (2 * pi);
}

KernelSelftest kernel_selftest(const WaveParams& prm) {
  prm.validate();
  KernelSelftest out;
  std::mt19937 gen(17);
  std::normal_distribution<double> nd;
  const Vec3 y(0.2, -0.1, 0.4);
  const double h = 4e-3;
  for (int trial = 0; trial < 6; ++trial) {
    const Vec3 x = y + Vec3(nd(gen), nd(gen), nd(gen)).normalized();
    const double k = prm.kappa_s();
    auto g = [&](const Vec3& z) { return kernels::helmholtz_g3(k, (z - y).norm()); };
    cplx lap = 0;
    for (int j = 0; j < 3; ++j) lap += second4(g, x, Vec3(Vec3::Unit(j)), h);
    out.helmholtz_residual = std::max(out.helmholtz_residual, std::abs(lap + k * k * g(x)) / (k * k * std::abs(g(x))));
    for (int col = 0; col < 3; ++col) {
      auto c = [&](const Vec3& z) { return CVec3(kernels::kupradze_gamma(prm, z, y).col(col)); };
      CVec3 lap3 = CVec3::Zero(), graddiv = CVec3::Zero();
      for (int j = 0; j < 3; ++j) lap3 += second4(c, x, Vec3(Vec3::Unit(j)), h);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          auto cj = [&](const Vec3& z) { return c(z)[j]; };
          if (i == j)
            graddiv[i] += second4(cj, x, Vec3(Vec3::Unit(j)), h);
          else
            graddiv[i] += central4([&](const Vec3& z) { return central4(cj, z, Vec3(Vec3::Unit(j)), h); }, x,
                                   Vec3(Vec3::Unit(i)), h);
        }
      const CVec3 res = prm.mu * lap3 + (prm.lambda + prm.mu) * graddiv + prm.inertia() * c(x);
      out.navier_residual = std::max(out.navier_residual, res.norm() / (prm.inertia() * c(x).norm()));
    }
  }
  for (int i = 0; i <= 40; ++i) {
    const double z = 0.1 * std::pow(100.0, i / 40.0);
    const cplx ref = kernels::hankel_kernel(1.0, z);
    out.line_integral_error = std::max(out.line_integral_error, std::abs(line_integral_g3(1.0, z) - ref) / std::abs(ref));
  }
  return out;
}

namespace {

CMat3 fd_gradient(const VecField& f, std::size_t base, double h) {
  // rows: component, cols: derivative direction; points base+1+4k .. in the order +2h, +h, -h, -2h
  CMat3 J;
  for (int k = 0; k < 3; ++k) {
    const std::size_t o = base + 1 + 4 * k;
    J.col(k) = (-f[o] + 8.0 * f[o + 1] - 8.0 * f[o + 2] + f[o + 3]) / (12 * h);
  }
  return J;
}

CVec3 traction(const WaveParams& prm, const CMat3& J, const Vec3& n) {
  const CVec3 nc = n.cast<cplx>();
  return prm.lambda * J.trace() * nc + prm.mu * (J + J.transpose()) * nc;
}

}  // namespace

JumpErrors jump_campaign(const SurfaceMesh& mesh, const WaveParams& prm, const JumpOptions& opt) {
  prm.validate();
  const Density p = Density::interpolate(mesh, Space::P1, smooth_field_a);
  const Density psi = Density::interpolate(mesh, Space::P1, smooth_field_b);
  const int nt = mesh.num_triangles();
  const int ns = std::min(opt.samples, nt);
  const double delta = opt.delta_factor * mesh.h();
  constexpr int stencil = 13;

  std::vector<Vec3> pts;
  std::vector<double> steps;
  for (int i = 0; i < ns; ++i) {
    const auto& fr = mesh.frame(i * nt / ns);
    for (int side = 0; side < 2; ++side)
      for (int d = 0; d < 2; ++d) {
        const double off = delta / (1 << d);
        const Vec3 x = fr.centroid + (side == 0 ? -off : off) * fr.n;
        const double hs = off / 8;
        steps.push_back(hs);
        pts.push_back(x);
        for (int k = 0; k < 3; ++k)
          for (double s : {2.0, 1.0, -1.0, -2.0}) pts.push_back(x + s * hs * Vec3(Vec3::Unit(k)));
      }
  }
  const VecField fs = eval_S(mesh, prm, p, pts, opt.eval);
  const VecField fk = eval_K(mesh, prm, psi, pts, KForm::II, opt.eval);

  double num[4] = {0, 0, 0, 0}, den[4] = {0, 0, 0, 0};
  const Vec3 mid = Vec3::Constant(1.0 / 3.0);
  for (int i = 0; i < ns; ++i) {
    const int e = i * nt / ns;
    const Vec3& n = mesh.frame(e).n;
    // one-sided values: [side][delta]
    CVec3 s[2][2], k[2][2], ts[2][2], tk[2][2];
    for (int side = 0; side < 2; ++side)
      for (int d = 0; d < 2; ++d) {
        const int slot = (i * 2 + side) * 2 + d;
        const std::size_t base = std::size_t(slot) * stencil;
        s[side][d] = fs[base];
        k[side][d] = fk[base];
        ts[side][d] = traction(prm, fd_gradient(fs, base, steps[slot]), n);
        tk[side][d] = traction(prm, fd_gradient(fk, base, steps[slot]), n);
      }
    auto jump = [](const CVec3 v[2][2]) {
      const CVec3 j0 = v[0][0] - v[1][0], j1 = v[0][1] - v[1][1];
      return CVec3(2.0 * j1 - j0);
    };
    CVec3 pv, psiv;
    for (int c = 0; c < 3; ++c) {
      pv[c] = p.eval(e, mid, c);
      psiv[c] = psi.eval(e, mid, c);
    }
    num[0] += jump(s).squaredNorm();
    den[0] += s[0][1].squaredNorm();
    num[1] += (jump(k) - psiv).squaredNorm();
    den[1] += psiv.squaredNorm();
    num[2] += (jump(ts) - pv).squaredNorm();
    den[2] += pv.squaredNorm();
    num[3] += jump(tk).squaredNorm();
    den[3] += tk[0][1].squaredNorm();
  }
  return {std::sqrt(num[0] / den[0]), std::sqrt(num[1] / den[1]), std::sqrt(num[2] / den[2]),
          std::sqrt(num[3] / den[3])};
}

double hypersingular_fd_campaign(const SurfaceMesh& mesh, double kappa, double offset_factor,
                                 const AssemblyOptions& aopt, const EvalOptions& eopt) {
  auto fphi = [](const Vec3& x) { return smooth_field_a(x)[0]; };
  auto fpsi = [](const Vec3& x) { return smooth_field_b(x)[1]; };
  const Density phi = Density::interpolate(mesh, Space::P1, std::function<cplx(const Vec3&)>(fphi));
  const Density psi = Density::interpolate(mesh, Space::P1, std::function<cplx(const Vec3&)>(fpsi));
  const DenseOperator W = hypersingular_hamdi(mesh, kappa, Space::P1, Space::P1, aopt);
  const cplx galerkin = (phi.coeffs.transpose() * W.A * psi.coeffs)(0, 0);

  const auto& rule = quad::gauss_triangle(4);
  const double h = mesh.h();
  const double offsets[2] = {offset_factor * h, 0.5 * offset_factor * h};
  std::vector<Vec3> pts;
  std::vector<double> wts;
  std::vector<cplx> phis;
  for (std::size_t e = 0; e < mesh.num_triangles(); ++e) {
    const auto& t = mesh.triangle(e);
    const auto& fr = mesh.frame(e);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Vec3 l = rule.barycentric(q);
      const Vec3 x = l[0] * mesh.vertex(t[0]) + l[1] * mesh.vertex(t[1]) + l[2] * mesh.vertex(t[2]);
      wts.push_back(2 * fr.area * rule.weights[q]);
      phis.push_back(phi.eval(e, l));
      for (double d : offsets) {
        const double hs = d / 20;
        pts.push_back(x + (d + hs) * fr.n);
        pts.push_back(x + (d - hs) * fr.n);
      }
    }
  }
  const CVector f = eval_double_layer(mesh, kappa, psi, pts, eopt);
  cplx v[2] = {0, 0};
  for (std::size_t q = 0; q < wts.size(); ++q)
    for (int d = 0; d < 2; ++d) {
      const double hs = offsets[d] / 20;
      v[d] += wts[q] * phis[q] * (f[4 * q + 2 * d] - f[4 * q + 2 * d + 1]) / (2 * hs);
    }
  const cplx extrapolated = 2.0 * v[1] - v[0];
  return std::abs(extrapolated - galerkin) / std::abs(galerkin);
}

double hamdi_constant_defect(const SurfaceMesh& mesh, double kappa, const AssemblyOptions& opt) {
  const DenseOperator W = hypersingular_hamdi(mesh, kappa, Space::P1, Space::P1, opt);
  const CVector one = CVector::Ones(W.cols());
  return (W.A * one).norm() / W.A.norm();
}

double traction_form_difference(const SurfaceMesh& mesh, const WaveParams& prm, const AssemblyOptions& opt) {
  const TractionPair t = traction_double_layer_both(mesh, prm, Side::Plus, opt);
  return (t.alter.A - t.v2.A).norm() / t.v2.A.norm();
}

}  // namespace ebem
