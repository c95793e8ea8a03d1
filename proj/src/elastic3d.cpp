#include "ebem/elastic3d.hpp"

namespace ebem {

namespace {

using kernels::Radial;

// Radial data of G_s, G_p and D = G_p - G_s at distance r.
struct ElasticRadial {
  Radial gs, gp, d;
};

// Only f, d1 of G_s and G_p and f, d1, d2 of D are filled in.
ElasticRadial elastic_radial(double kp, double ks, double r) {
  constexpr double inv4pi = 1.0 / (4.0 * pi);
  ElasticRadial out;
  const double ir = 1.0 / r;
  const cplx es = std::polar(inv4pi * ir, ks * r), ep = std::polar(inv4pi * ir, kp * r);
  const cplx as(-ir, ks), ap(-ir, kp);
  out.gs.f = es;
  out.gs.d1 = es * as;
  out.gp.f = ep;
  out.gp.d1 = ep * ap;
  if (r * std::max(kp, ks) < kernels::diff_switch) {
    out.d = kernels::diff_kernel_series(kp, ks, r);
  } else {
    const double ir2 = ir * ir;
    out.d.f = ep - es;
    out.d.d1 = out.gp.d1 - out.gs.d1;
    out.d.d2 = ep * (ap * ap + ir2) - es * (as * as + ir2);
  }
  return out;
}

CVec3 grad_of(const Radial& f, const Vec3& d, double r) { return (f.d1 / r) * d.cast<cplx>(); }

CMat3 hess_of(const Radial& f, const Vec3& d, double r) {
  const Vec3 u = d / r;
  const cplx b = f.d1 / r;
  CMat3 h = (u * u.transpose()).cast<cplx>() * (f.d2 - b);
  h.diagonal().array() += b;
  return h;
}

void check_vector(const Density& p, const char* who) {
  p.validate();
  if (p.components != 3) throw DomainError(std::string(who) + ": expected a 3-vector density");
}

CVec3 eval3(const Density& p, int e, const Vec3& l) { return CVec3(p.eval(e, l, 0), p.eval(e, l, 1), p.eval(e, l, 2)); }

Vec3 point_of(const SurfaceMesh& mesh, int e, const Vec3& l) {
  const auto& t = mesh.triangle(e);
  return l[0] * mesh.vertex(t[0]) + l[1] * mesh.vertex(t[1]) + l[2] * mesh.vertex(t[2]);
}

// Galerkin block for P1 3-vector test (a, c) and trial (b, d): out[a][b](c, d).
using Block9 = std::array<std::array<CMat3, 3>, 3>;

void zero(Block9& b) {
  for (auto& row : b)
    for (auto& m : row) m.setZero();
}

// Global index of local dof (a, comp) on element e.
inline int dof(Space s, const ElementData& el, int e, int a, int comp, int ndofs) {
  return comp * ndofs + (s == Space::P0 ? e : el.vid[a]);
}

void scatter9(CMatrix& A, Space test, Space trial, const ElementData& ex, const ElementData& ey, int e, int f,
              int ntest, int ntrial, const Block9& blk) {
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c)
        for (int d = 0; d < 3; ++d)
          A(dof(test, ex, e, a, c, ntest), dof(trial, ey, f, b, d, ntrial)) += blk[a][b](c, d);
}

}  // namespace

Density guenter_p0(const Density& psi) {
  check_vector(psi, "guenter_p0");
  if (psi.space != Space::P1) throw DomainError("guenter_p0: P1 density required");
  const SurfaceMesh& mesh = *psi.mesh;
  const auto el = element_data(mesh);
  Density out = Density::zeros(mesh, Space::P0, 3);
  for (std::size_t e = 0; e < el.size(); ++e) {
    CVec3 m = CVec3::Zero();
    for (int a = 0; a < 3; ++a)
      for (int c = 0; c < 3; ++c) m += el[e].m[a][c].cast<cplx>() * psi.at(el[e].vid[a], c);
    for (int i = 0; i < 3; ++i) out.at(e, i) = m[i];
  }
  return out;
}

VecField eval_S(const SurfaceMesh& mesh, const WaveParams& prm, const Density& p, const std::vector<Vec3>& pts,
                const EvalOptions& opt) {
  prm.validate();
  check_vector(p, "eval_S");
  const double ks = prm.kappa_s(), kp = prm.kappa_p(), inv = 1.0 / prm.inertia();
  VecField out(pts.size());
  parallel_for(pts.size(), opt.threads, [&](std::size_t i) {
    CVec3 s = CVec3::Zero();
    visit_surface(mesh, pts[i], opt.near, [&](int e, const Vec3& l, double w) {
      const Vec3 d = pts[i] - point_of(mesh, e, l);
      const double r = d.norm();
      const ElasticRadial k = elastic_radial(kp, ks, r);
      const CVec3 pv = eval3(p, e, l);
      s += w * (ks * ks * k.gs.f * pv - hess_of(k.d, d, r) * pv);
    });
    out[i] = inv * s;
  });
  return out;
}

VecField eval_K(const SurfaceMesh& mesh, const WaveParams& prm, const Density& psi, const std::vector<Vec3>& pts,
                KForm form, const EvalOptions& opt) {
  prm.validate();
  check_vector(psi, "eval_K");
  if (psi.space != Space::P1) throw DomainError("eval_K: P1 density required");
  const double ks = prm.kappa_s(), kp = prm.kappa_p();
  const double c2 = 2.0 / (ks * ks);
  const Density mpsi = guenter_p0(psi);
  VecField out(pts.size());
  parallel_for(pts.size(), opt.threads, [&](std::size_t i) {
    CVec3 s = CVec3::Zero();
    visit_surface(mesh, pts[i], opt.near, [&](int e, const Vec3& l, double w) {
      const Vec3 d = pts[i] - point_of(mesh, e, l);
      const double r = d.norm();
      const Vec3& n = mesh.frame(e).n;
      const ElasticRadial k = elastic_radial(kp, ks, r);
      const CVec3 v = eval3(psi, e, l);
      const CVec3 m(mpsi.at(e, 0), mpsi.at(e, 1), mpsi.at(e, 2));
      const cplx nv = bdot(n, v);
      const CVec3 hm = hess_of(k.d, d, r) * m;
      if (form == KForm::I) {
        // 2 mu S = (2/ks^2)(ks^2 V_s - grad div D)
        const CVec3 nxv = cross(n.cast<cplx>(), v);
        s += w * (grad_of(k.gp, d, r) * nv - cross(grad_of(k.gs, d, r), nxv) - 2.0 * k.gs.f * m + c2 * hm);
      } else {
        const cplx kn = k.gs.d1 / r * d.dot(n);  // n_y . grad_x G_s
        s += w * (kn * v - k.gs.f * m + c2 * hm + grad_of(k.d, d, r) * nv);
      }
    });
    out[i] = s;
  });
  return out;
}

DenseOperator galerkin_S(const SurfaceMesh& mesh, const WaveParams& prm, Space trial, Space test,
                         const AssemblyOptions& opt) {
  prm.validate();
  const double ks = prm.kappa_s(), kp = prm.kappa_p(), inv = 1.0 / prm.inertia();
  const auto el = element_data(mesh);
  const int ntest = space_dim(mesh, test), ntrial = space_dim(mesh, trial);
  DenseOperator op;
  op.A = CMatrix::Zero(3 * ntest, 3 * ntrial);
  op.trial = {trial, 3};
  op.test = {test, 3};
  op.kernel = "elastic_single_layer";
  op.convention = "S = (1/omega^2 rho)(ks^2 V_s - grad div (V_p - V_s))";
  struct Work {
    Block9 blk;
  };
  for_each_pair<Work>(mesh, el, opt, [&](int e, int f, const std::vector<PairPoint>& pts, Work& wk) {
    zero(wk.blk);
    for (const PairPoint& p : pts) {
      const Vec3 d = el[e].point(p.lx) - el[f].point(p.ly);
      const double r = d.norm();
      const ElasticRadial k = elastic_radial(kp, ks, r);
      CMat3 g = -hess_of(k.d, d, r);
      g.diagonal().array() += ks * ks * k.gs.f;
      g *= p.w * inv;
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) wk.blk[a][b] += (p.lx[a] * p.ly[b]) * g;
    }
    scatter9(op.A, test, trial, el[e], el[f], e, f, ntest, ntrial, wk.blk);
  });
  return op;
}

namespace {

// <phi, p> for P1 3-vector test and 3-vector trial (diagonal in components).
void add_vector_mass(CMatrix& A, const SurfaceMesh& mesh, Space trial, cplx scale) {
  const auto el = element_data(mesh);
  const int nt = mesh.num_vertices(), nr = space_dim(mesh, trial);
  for (std::size_t e = 0; e < el.size(); ++e)
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        const double m = el[e].area * (a == b ? 2.0 : 1.0) / 12.0;
        for (int c = 0; c < 3; ++c)
          A(dof(Space::P1, el[e], e, a, c, nt), dof(trial, el[e], e, b, c, nr)) += scale * m;
      }
}

// <M phi, psi> - <phi, M psi> for P1 3-vector spaces; zero on closed meshes up to rounding.
void add_guenter_side_terms(CMatrix& A, const SurfaceMesh& mesh, cplx scale) {
  const auto el = element_data(mesh);
  const int nv = mesh.num_vertices();
  for (std::size_t e = 0; e < el.size(); ++e) {
    const ElementData& d = el[e];
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        for (int c = 0; c < 3; ++c)
          for (int k = 0; k < 3; ++k) {
            // int lambda_b = A / 3
            const double mp = d.m[a][c][k] * d.area / 3.0;  // (M phi)_k against psi = lambda_b e_k
            const double pm = d.m[b][k][c] * d.area / 3.0;  // phi = lambda_a e_c against (M psi)_c, psi = lambda_b e_k
            A(dof(Space::P1, d, e, a, c, nv), dof(Space::P1, d, e, b, k, nv)) += scale * (mp - pm);
          }
  }
}

}  // namespace

DenseOperator traction_single_layer_matrix(const SurfaceMesh& mesh, const WaveParams& prm, Space trial, Side side,
                                           const AssemblyOptions& opt) {
  prm.validate();
  const double ks = prm.kappa_s(), kp = prm.kappa_p();
  const double c2 = 2.0 / (ks * ks);
  const auto el = element_data(mesh);
  const int ntest = mesh.num_vertices(), ntrial = space_dim(mesh, trial);
  DenseOperator op;
  op.A = CMatrix::Zero(3 * ntest, 3 * ntrial);
  op.trial = {trial, 3};
  op.test = {Space::P1, 3};
  op.kernel = "traction_single_layer";
  op.convention = side == Side::Plus ? "side +, interior" : "side -, exterior";
  struct Work {
    Block9 blk;
  };
  for_each_pair<Work>(mesh, el, opt, [&](int e, int f, const std::vector<PairPoint>& pts, Work& wk) {
    const ElementData& ex = el[e];
    const ElementData& ey = el[f];
    // moments
    Eigen::Matrix3cd kll = Eigen::Matrix3cd::Zero();      // d_nx G_s lambda_a lambda_b
    std::array<CVec3, 9> gll{};                           // grad D lambda_a lambda_b
    std::array<CVec3, 3> gl{};                            // G_s lambda_b (scalar in [0])
    std::array<CMat3, 3> hl{};
    for (int b = 0; b < 3; ++b) {
      gl[b].setZero();
      hl[b].setZero();
    }
    for (auto& v : gll) v.setZero();
    for (const PairPoint& p : pts) {
      const Vec3 d = ex.point(p.lx) - ey.point(p.ly);
      const double r = d.norm();
      const ElasticRadial k = elastic_radial(kp, ks, r);
      const cplx kn = p.w * k.gs.d1 / r * d.dot(ex.n);
      const CVec3 gd = p.w * grad_of(k.d, d, r);
      const CMat3 h = p.w * hess_of(k.d, d, r);
      const cplx g = p.w * k.gs.f;
      for (int b = 0; b < 3; ++b) {
        gl[b][0] += g * p.ly[b];
        hl[b] += p.ly[b] * h;
        for (int a = 0; a < 3; ++a) {
          const double ll = p.lx[a] * p.ly[b];
          kll(a, b) += kn * ll;
          gll[3 * a + b] += ll * gd;
        }
      }
    }
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        CMat3& B = wk.blk[a][b];
        B.setZero();
        B.diagonal().array() += kll(a, b);
        B += ex.n.cast<cplx>() * gll[3 * a + b].transpose();
        for (int c = 0; c < 3; ++c) {
          const CVec3 m = ex.m[a][c].cast<cplx>();
          B.row(c) += gl[b][0] * m.transpose() - c2 * (m.transpose() * hl[b]);
        }
      }
    scatter9(op.A, Space::P1, trial, ex, ey, e, f, ntest, ntrial, wk.blk);
  });
  add_vector_mass(op.A, mesh, trial, side == Side::Plus ? 0.5 : -0.5);
  return op;
}

Density traction_single_layer(const SurfaceMesh& mesh, const WaveParams& prm, const Density& p, Side side,
                              const AssemblyOptions& opt) {
  check_vector(p, "traction_single_layer");
  Density out = Density::zeros(mesh, Space::P1, 3);
  out.coeffs = traction_single_layer_matrix(mesh, prm, p.space, side, opt).A * p.coeffs;
  return out;
}

TractionPair traction_double_layer_both(const SurfaceMesh& mesh, const WaveParams& prm, Side side,
                                        const AssemblyOptions& opt) {
  prm.validate();
  const double ks = prm.kappa_s(), kp = prm.kappa_p(), mu = prm.mu, w2r = prm.inertia();
  const double c4 = 4.0 * mu / (ks * ks);
  const auto el = element_data(mesh);
  const int nv = mesh.num_vertices();
  TractionPair out;
  for (DenseOperator* op : {&out.alter, &out.v2}) {
    op->A = CMatrix::Zero(3 * nv, 3 * nv);
    op->trial = op->test = {Space::P1, 3};
    op->convention = side == Side::Plus ? "side +, interior" : "side -, exterior";
  }
  out.alter.kernel = "traction_double_layer:alter";
  out.v2.kernel = "traction_double_layer:v2";

  struct Work {
    Block9 alt, v2;
  };
  for_each_pair<Work>(mesh, el, opt, [&](int e, int f, const std::vector<PairPoint>& pts, Work& wk) {
    const ElementData& ex = el[e];
    const ElementData& ey = el[f];
    cplx g0 = 0.0, hb = 0.0;
    Eigen::Matrix3cd gll = Eigen::Matrix3cd::Zero(), pll = gll, dll = gll;
    CVec3 knl = CVec3::Zero(), kxl = CVec3::Zero();
    std::array<CVec3, 3> gdy, gdx;
    for (int a = 0; a < 3; ++a) {
      gdy[a].setZero();
      gdx[a].setZero();
    }
    cplx huu[6] = {};  // xx yy zz xy xz yz
    for (const PairPoint& p : pts) {
      const Vec3 d = ex.point(p.lx) - ey.point(p.ly);
      const double r = d.norm(), ir = 1.0 / r;
      const ElasticRadial k = elastic_radial(kp, ks, r);
      const cplx gs = p.w * k.gs.f;
      const cplx b = (p.w * ir) * k.gs.d1;
      const cplx kn = b * d.dot(ey.n), kx = b * d.dot(ex.n);
      const cplx db = (p.w * ir) * k.d.d1;  // grad D = db d
      const cplx ha = (p.w * ir * ir) * (k.d.d2 - ir * k.d.d1);
      g0 += gs;
      hb += db;
      huu[0] += ha * (d[0] * d[0]);
      huu[1] += ha * (d[1] * d[1]);
      huu[2] += ha * (d[2] * d[2]);
      huu[3] += ha * (d[0] * d[1]);
      huu[4] += ha * (d[0] * d[2]);
      huu[5] += ha * (d[1] * d[2]);
      const cplx gp = p.w * k.gp.f, gd = p.w * k.d.f;
      for (int a = 0; a < 3; ++a) {
        for (int c = 0; c < 3; ++c) {
          const double ll = p.lx[a] * p.ly[c];
          gll(a, c) += gs * ll;
          pll(a, c) += gp * ll;
          dll(a, c) += gd * ll;
        }
        knl[a] += kn * p.ly[a];
        kxl[a] += kx * p.lx[a];
        const cplx sy = db * p.ly[a], sx = db * p.lx[a];
        for (int i = 0; i < 3; ++i) {
          gdy[a][i] += sy * d[i];
          gdx[a][i] += sx * d[i];
        }
      }
    }
    CMat3 H;
    H << hb + huu[0], huu[3], huu[4], huu[3], hb + huu[1], huu[5], huu[4], huu[5], hb + huu[2];
    const Vec3& nx = ex.n;
    const Vec3& ny = ey.n;
    const double nn = nx.dot(ny);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        CMat3& A = wk.alt[a][b];
        CMat3& V = wk.v2[a][b];
        const cplx cc = g0 * ex.curl[a].dot(ey.curl[b]);
        for (int c = 0; c < 3; ++c) {
          const CVec3 mx = ex.m[a][c].cast<cplx>();
          const CVec3 hm = H.transpose() * mx;  // (m^T H)^T
          const cplx mgd = bdot(mx, gdy[b]);
          for (int dd = 0; dd < 3; ++dd) {
            const Vec3& my = ey.m[b][dd];
            const cplx kpv = mx[dd] * knl[b] - my[c] * kxl[a];
            const cplx dterms = 2.0 * mu * (mgd * ny[dd] - nx[c] * bdot(gdx[a], my));
            const cplx mhm = bdot(hm, my);
            const cplx mgm = g0 * bdot(mx, my);
            A(c, dd) = mu * kpv + dterms - mu * mgm + c4 * mhm - w2r * nx[c] * ny[dd] * dll(a, b);
            if (c == dd) A(c, dd) += mu * (cc - ks * ks * nn * gll(a, b));
            V(c, dd) = mu * g0 * ex.curl[a][c] * ey.curl[b][dd] + 2.0 * mu * kpv + dterms + c4 * mhm -
                       w2r * (gll(a, b) * ((c == dd ? nn : 0.0) - nx[dd] * ny[c]) + pll(a, b) * nx[c] * ny[dd]);
          }
        }
      }
    scatter9(out.alter.A, Space::P1, Space::P1, ex, ey, e, f, nv, nv, wk.alt);
    scatter9(out.v2.A, Space::P1, Space::P1, ex, ey, e, f, nv, nv, wk.v2);
  });
  // one-sided parts: +-(mu/2)(<M phi, psi> - <phi, M psi>) for ALTER, twice that for V2
  const double s = side == Side::Plus ? 0.5 : -0.5;
  add_guenter_side_terms(out.alter.A, mesh, s * mu);
  add_guenter_side_terms(out.v2.A, mesh, 2.0 * s * mu);
  return out;
}

DenseOperator traction_double_layer(const SurfaceMesh& mesh, const WaveParams& prm, TractionForm form, Side side,
                                    const AssemblyOptions& opt) {
  TractionPair both = traction_double_layer_both(mesh, prm, side, opt);
  return form == TractionForm::Alter ? std::move(both.alter) : std::move(both.v2);
}

CVec3 kupradze_traction(const WaveParams& prm, const Vec3& y, const Vec3& x0, const CVec3& a, const Vec3& n) {
  CMat3 g[3];
  kernels::kupradze_gamma_grad(prm, y, x0, g);
  CMat3 J;  // J(i, k) = d_k u_i
  for (int k = 0; k < 3; ++k) J.col(k) = g[k] * a;
  const CVec3 nc = n.cast<cplx>();
  return prm.mu * (J + J.transpose()) * nc + prm.lambda * J.trace() * nc;
}

double somigliana_residual(const SurfaceMesh& mesh, const WaveParams& prm, const Vec3& x0, const CVec3& a,
                           const std::vector<Vec3>& pts, const EvalOptions& opt) {
  const EvalGrid inner = classify_points(mesh, {x0});
  if (inner.tags[0] != PointTag::Interior) throw DomainError("somigliana_residual: x0 is not interior");
  const EvalGrid grid = classify_points(mesh, pts);
  for (auto t : grid.tags)
    if (t != PointTag::Exterior) throw DomainError("somigliana_residual: evaluation point is not exterior");
  if (a.norm() == 0) return 0.0;

  const Density u = Density::interpolate(mesh, Space::P1,
                                         [&](const Vec3& y) -> CVec3 { return kernels::kupradze_gamma(prm, y, x0) * a; });
  Density t = Density::zeros(mesh, Space::P0, 3);
  for (std::size_t e = 0; e < mesh.num_triangles(); ++e) {
    const CVec3 tv = kupradze_traction(prm, mesh.frame(e).centroid, x0, a, mesh.frame(e).n);
    for (int c = 0; c < 3; ++c) t.at(e, c) = tv[c];
  }
  const VecField k = eval_K(mesh, prm, u, pts, KForm::II, opt);
  const VecField s = eval_S(mesh, prm, t, pts, opt);
  double worst = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const CVec3 ex = kernels::kupradze_gamma(prm, pts[i], x0) * a;
    worst = std::max(worst, (-k[i] - s[i] - ex).norm() / ex.norm());
  }
  return worst;
}

}  // namespace ebem
