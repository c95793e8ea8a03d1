#include "ebem/elastic2d.hpp"

#include <map>

namespace ebem {

SplitField split_field(const CVec3& u) { return {Eigen::Vector2cd(u[0], u[1]), u[2]}; }

CVec3 recombine(const SplitField& s) { return CVec3(s.perp[0], s.perp[1], s.u3); }

std::size_t space_dim(const Curve2D& c, Space s) { return s == Space::P0 ? c.num_segments() : c.num_vertices(); }

std::size_t PlanarDensity::ndofs() const { return space_dim(*curve, space); }

CVector guenter_2d(const Curve2D& curve, const CVector& u) {
  if (static_cast<std::size_t>(u.size()) != curve.num_vertices())
    throw DomainError("guenter_2d: expected one value per vertex");
  CVector out(curve.num_segments());
  for (std::size_t k = 0; k < curve.num_segments(); ++k) {
    const auto& s = curve.segments()[k];
    out[k] = (u[s.b] - u[s.a]) / s.length;
  }
  return out;
}

CVector guenter_2d_matrix(const Curve2D& curve, const CVector& uperp) {
  const auto nv = curve.num_vertices(), ns = curve.num_segments();
  if (static_cast<std::size_t>(uperp.size()) != 2 * nv) throw DomainError("guenter_2d_matrix: expected 2 components");
  const CVector d1 = guenter_2d(curve, uperp.head(nv)), d2 = guenter_2d(curve, uperp.tail(nv));
  CVector out(2 * ns);
  out.head(ns) = -d2;
  out.tail(ns) = d1;
  return out;
}

namespace {

struct Seg {
  Vec2 a, b;
  double L;
  Vec2 tau, n;
  std::array<int, 2> vid;
  std::array<double, 2> g;                 // d lambda_a / ds
  std::array<std::array<Vec2, 2>, 2> m;    // m[a][c] = e3 x (g_a e_c)
  Vec2 point(double s) const { return a + s * (b - a); }
};

std::vector<Seg> segment_data(const Curve2D& c) {
  std::vector<Seg> out;
  for (const auto& s : c.segments()) {
    Seg d;
    d.a = c.vertices()[s.a];
    d.b = c.vertices()[s.b];
    d.L = s.length;
    d.tau = s.tau;
    d.n = s.n;
    d.vid = {s.a, s.b};
    d.g = {-1.0 / s.length, 1.0 / s.length};
    for (int a = 0; a < 2; ++a) {
      d.m[a][0] = Vec2(0.0, d.g[a]);
      d.m[a][1] = Vec2(-d.g[a], 0.0);
    }
    out.push_back(d);
  }
  return out;
}

struct SegPoint {
  double s, t, w;
};

class SegRules {
 public:
  explicit SegRules(const Options2D& opt) : opt_(opt) {
    const auto& gl = quad::gauss_legendre(opt.log_order);
    // graded rule on [0, 1] toward 0
    std::vector<double> gx, gw;
    double hi = 1.0;
    for (int k = 0; k <= opt.log_levels; ++k) {
      const double lo = k == opt.log_levels ? 0.0 : hi * opt.grading;
      for (std::size_t q = 0; q < gl.size(); ++q) {
        gx.push_back(lo + (hi - lo) * gl.x[q]);
        gw.push_back((hi - lo) * gl.w[q]);
      }
      hi = lo;
    }
    // self: v = |s - t| graded, u regular on [v, 1]
    for (std::size_t i = 0; i < gx.size(); ++i)
      for (std::size_t q = 0; q < gl.size(); ++q) {
        const double v = gx[i], u = v + (1 - v) * gl.x[q], w = gw[i] * gl.w[q] * (1 - v);
        self_.push_back({u, u - v, w});
        self_.push_back({u - v, u, w});
      }
    // corner at (0, 0) of the local square, Duffy in both triangles
    for (std::size_t i = 0; i < gx.size(); ++i)
      for (std::size_t q = 0; q < gl.size(); ++q) {
        const double xi = gx[i], eta = gl.x[q], w = gw[i] * gl.w[q] * xi;
        corner_.push_back({xi, xi * eta, w});
        corner_.push_back({xi * eta, xi, w});
      }
    auto tensor = [](const quad::Rule1D& r, std::vector<SegPoint>& out) {
      for (std::size_t i = 0; i < r.size(); ++i)
        for (std::size_t j = 0; j < r.size(); ++j) out.push_back({r.x[i], r.x[j], r.w[i] * r.w[j]});
    };
    tensor(quad::gauss_legendre(opt.far_order), far_);
    tensor(quad::gauss_legendre(opt.near_order), near_);
  }

  void points(const std::vector<Seg>& sg, int k, int l, std::vector<SegPoint>& out) const {
    out.clear();
    const Seg& A = sg[k];
    const Seg& B = sg[l];
    const double jac = A.L * B.L;
    if (k == l) {
      for (const auto& p : self_) out.push_back({p.s, p.t, p.w * jac});
      return;
    }
    // shared node: local coordinates measured from it
    int ea = -1, eb = -1;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        if (A.vid[i] == B.vid[j]) {
          ea = i;
          eb = j;
        }
    if (ea >= 0) {
      for (const auto& p : corner_) {
        const double s = ea == 0 ? p.s : 1 - p.s, t = eb == 0 ? p.t : 1 - p.t;
        out.push_back({s, t, p.w * jac});
      }
      return;
    }
    const double dist = segment_distance(A, B);
    const auto& rule = dist > opt_.separation * std::max(A.L, B.L) ? far_ : near_;
    for (const auto& p : rule) out.push_back({p.s, p.t, p.w * jac});
  }

 private:
  static double point_segment(const Vec2& p, const Seg& s) {
    const Vec2 d = s.b - s.a;
    const double t = std::clamp((p - s.a).dot(d) / d.squaredNorm(), 0.0, 1.0);
    return (p - s.a - t * d).norm();
  }
  static double segment_distance(const Seg& A, const Seg& B) {
    return std::min({point_segment(A.a, B), point_segment(A.b, B), point_segment(B.a, A), point_segment(B.b, A)});
  }
  Options2D opt_;
  std::vector<SegPoint> self_, corner_, far_, near_;
};

// Local block indexed (a * comps + c, b * comps + d).
using Local = Eigen::Matrix<cplx, 4, 4>;

template <class F>
CMatrix assemble2d(const Curve2D& curve, const std::vector<Seg>& sg, Space trial, Space test, int comps,
                   const Options2D& opt, F&& f) {
  const SegRules rules(opt);
  const int nt = space_dim(curve, test), nr = space_dim(curve, trial);
  CMatrix A = CMatrix::Zero(comps * nt, comps * nr);
  std::vector<SegPoint> pts;
  const int ns = sg.size();
  for (int k = 0; k < ns; ++k)
    for (int l = 0; l < ns; ++l) {
      rules.points(sg, k, l, pts);
      Local blk = Local::Zero();
      for (const auto& p : pts) f(sg[k], sg[l], p, blk);
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          for (int c = 0; c < comps; ++c)
            for (int d = 0; d < comps; ++d) {
              const int row = c * nt + (test == Space::P0 ? k : sg[k].vid[a]);
              const int col = d * nr + (trial == Space::P0 ? l : sg[l].vid[b]);
              A(row, col) += blk(a * comps + c, b * comps + d);
            }
    }
  return A;
}

void add_mass(CMatrix& A, const Curve2D& curve, const std::vector<Seg>& sg, Space trial, Space test, int comps,
              cplx scale) {
  const int nt = space_dim(curve, test), nr = space_dim(curve, trial);
  for (int k = 0; k < static_cast<int>(sg.size()); ++k)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int c = 0; c < comps; ++c) {
          const double m = sg[k].L * (a == b ? 2.0 : 1.0) / 6.0;
          A(c * nt + (test == Space::P0 ? k : sg[k].vid[a]), c * nr + (trial == Space::P0 ? k : sg[k].vid[b])) +=
              scale * m;
        }
}

// <M phi, psi> - <phi, M psi> for 2-component P1 spaces.
void add_side_terms(CMatrix& A, const Curve2D& curve, const std::vector<Seg>& sg, cplx scale) {
  const int nv = curve.num_vertices();
  for (const Seg& s : sg)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int c = 0; c < 2; ++c)
          for (int d = 0; d < 2; ++d) {
            const double mp = s.m[a][c][d] * s.L / 2.0;
            const double pm = s.m[b][d][c] * s.L / 2.0;
            A(c * nv + s.vid[a], d * nv + s.vid[b]) += scale * (mp - pm);
          }
}

struct Radial2 {
  kernels::Radial gs, gp, d;
};

Radial2 radial2(double kp, double ks, double r) {
  return {kernels::hankel_radial(ks, r), kernels::hankel_radial(kp, r), kernels::hankel_diff_kernel(kp, ks, r)};
}

Eigen::Matrix2cd hess2(const kernels::Radial& f, const Vec2& d, double r) {
  const Vec2 u = d / r;
  const cplx b = f.d1 / r;
  Eigen::Matrix2cd h = (u * u.transpose()).cast<cplx>() * (f.d2 - b);
  h.diagonal().array() += b;
  return h;
}

cplx Hmy_c_row(const Eigen::Matrix2cd& H, const Vec2& my, int c) { return H(c, 0) * my[0] + H(c, 1) * my[1]; }

std::string side_name(Side s) { return s == Side::Plus ? "side +, interior" : "side -, exterior"; }

void require_p1(Space trial, Space test, const char* who) {
  if (trial != Space::P1 || test != Space::P1) throw DomainError(std::string(who) + ": P1 spaces required");
}

}  // namespace

DenseOperator galerkin_single_layer_2d(const Curve2D& curve, double kappa, Space trial, Space test,
                                       const Options2D& opt) {
  const auto sg = segment_data(curve);
  DenseOperator op;
  op.A = assemble2d(curve, sg, trial, test, 1, opt, [&](const Seg& A, const Seg& B, const SegPoint& p, Local& blk) {
    const double r = (A.point(p.s) - B.point(p.t)).norm();
    const cplx g = p.w * kernels::hankel_kernel(kappa, r);
    const double lx[2] = {1 - p.s, p.s}, ly[2] = {1 - p.t, p.t};
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) blk(a, b) += g * lx[a] * ly[b];
  });
  op.trial = {trial, 1};
  op.test = {test, 1};
  op.kernel = "single_layer_2d";
  op.convention = "G = (i/4) H0(k r)";
  return op;
}

DenseOperator assemble_antiplane(const Curve2D& curve, const WaveParams& prm, AntiplaneOp which, Space trial,
                                 Space test, Side side, const Options2D& opt) {
  prm.validate();
  const double ks = prm.kappa_s(), mu = prm.mu, w2r = prm.inertia();
  const auto sg = segment_data(curve);
  DenseOperator op;
  op.trial = {trial, 1};
  op.test = {test, 1};
  if (which == AntiplaneOp::TK3 || which == AntiplaneOp::TK3_ALT) require_p1(trial, test, "assemble_antiplane");
  auto kernel = [&](const Seg& A, const Seg& B, const SegPoint& p, Local& blk) {
    const Vec2 d = A.point(p.s) - B.point(p.t);
    const double r = d.norm();
    const kernels::Radial g = kernels::hankel_radial(ks, r);
    const double lx[2] = {1 - p.s, p.s}, ly[2] = {1 - p.t, p.t};
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        const double ll = lx[a] * ly[b];
        cplx v;
        switch (which) {
          case AntiplaneOp::S3: v = g.f * ll / mu; break;
          case AntiplaneOp::K3: v = g.d1 / r * d.dot(B.n) * ll; break;
          case AntiplaneOp::TS3: v = g.d1 / r * d.dot(A.n) * ll; break;
          case AntiplaneOp::TK3: v = mu * g.f * (A.g[a] * B.g[b] - ks * ks * A.n.dot(B.n) * ll); break;
          case AntiplaneOp::TK3_ALT: v = g.f * (mu * A.g[a] * B.g[b] - w2r * A.tau.dot(B.tau) * ll); break;
        }
        blk(a, b) += p.w * v;
      }
  };
  op.A = assemble2d(curve, sg, trial, test, 1, opt, kernel);
  switch (which) {
    case AntiplaneOp::S3: op.kernel = "antiplane:S3"; break;
    case AntiplaneOp::K3:
      op.kernel = "antiplane:K3";
      op.convention = "principal part; traces add +-psi/2, + = interior";
      break;
    case AntiplaneOp::TS3:
      op.kernel = "antiplane:TS3";
      add_mass(op.A, curve, sg, trial, test, 1, side == Side::Plus ? 0.5 : -0.5);
      op.convention = side_name(side);
      break;
    case AntiplaneOp::TK3: op.kernel = "antiplane:TK3"; break;
    case AntiplaneOp::TK3_ALT: op.kernel = "antiplane:TK3_ALT"; break;
  }
  return op;
}

DenseOperator assemble_plane(const Curve2D& curve, const WaveParams& prm, PlaneOp which, Space trial, Side side,
                             const Options2D& opt) {
  prm.validate();
  const double ks = prm.kappa_s(), kp = prm.kappa_p(), mu = prm.mu, w2r = prm.inertia();
  const double c2 = 2.0 / (ks * ks), c4 = 4.0 * mu / (ks * ks);
  if (which != PlaneOp::S && trial != Space::P1) throw DomainError("assemble_plane: P1 trial space required");
  const auto sg = segment_data(curve);
  DenseOperator op;
  op.trial = {trial, 2};
  op.test = {Space::P1, 2};
  op.convention = side_name(side);
  auto kernel = [&](const Seg& A, const Seg& B, const SegPoint& p, Local& blk) {
    const Vec2 d = A.point(p.s) - B.point(p.t);
    const double r = d.norm();
    const Radial2 k = radial2(kp, ks, r);
    const Eigen::Matrix2cd H = hess2(k.d, d, r);
    const Eigen::Vector2cd gd = (k.d.d1 / r) * d.cast<cplx>();
    const cplx kn = k.gs.d1 / r * d.dot(B.n), kx = k.gs.d1 / r * d.dot(A.n);
    const double lx[2] = {1 - p.s, p.s}, ly[2] = {1 - p.t, p.t};
    const double nn = A.n.dot(B.n);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        const double ll = lx[a] * ly[b];
        for (int c = 0; c < 2; ++c)
          for (int dd = 0; dd < 2; ++dd) {
            const Vec2& mx = A.m[a][c];
            const Vec2& my = B.m[b][dd];
            const cplx mxH_d = mx[0] * H(0, dd) + mx[1] * H(1, dd);
            const cplx Hmy_c = H(c, 0) * my[0] + H(c, 1) * my[1];
            cplx v = 0.0;
            switch (which) {
              case PlaneOp::S: v = ((c == dd ? ks * ks * k.gs.f : 0.0) - H(c, dd)) * ll / w2r; break;
              case PlaneOp::K:
                v = lx[a] * ((c == dd ? kn * ly[b] : 0.0) - k.gs.f * my[c] + c2 * Hmy_c + gd[c] * ly[b] * B.n[dd]);
                break;
              case PlaneOp::TS:
                v = (c == dd ? kx * ll : 0.0) + A.n[c] * gd[dd] * ll + (mx[dd] * k.gs.f - c2 * mxH_d) * ly[b];
                break;
              case PlaneOp::TK: {
                const cplx mhm = mx[0] * Hmy_c_row(H, my, 0) + mx[1] * Hmy_c_row(H, my, 1);
                v = (c == dd ? mu * k.gs.f * (A.g[a] * B.g[b] - ks * ks * nn * ll) : 0.0) +
                    mu * (mx[dd] * kn * ly[b] - my[c] * kx * lx[a]) +
                    2.0 * mu * ((mx[0] * gd[0] + mx[1] * gd[1]) * ly[b] * B.n[dd] -
                                A.n[c] * lx[a] * (gd[0] * my[0] + gd[1] * my[1])) -
                    mu * k.gs.f * mx.dot(my) + c4 * mhm - w2r * A.n[c] * B.n[dd] * k.d.f * ll;
                break;
              }
            }
            blk(a * 2 + c, b * 2 + dd) += p.w * v;
          }
      }
  };
  op.A = assemble2d(curve, sg, trial, Space::P1, 2, opt, kernel);
  const double s = side == Side::Plus ? 0.5 : -0.5;
  switch (which) {
    case PlaneOp::S:
      op.kernel = "plane:S";
      op.convention = "";
      break;
    case PlaneOp::K:
      op.kernel = "plane:K";
      op.convention = "principal part; traces add +-psi/2, + = interior";
      break;
    case PlaneOp::TS:
      op.kernel = "plane:TS";
      add_mass(op.A, curve, sg, trial, Space::P1, 2, s);
      break;
    case PlaneOp::TK:
      op.kernel = "plane:TK";
      add_side_terms(op.A, curve, sg, s * mu);
      break;
  }
  return op;
}

cplx fourier_mode_eigenvalue(const Curve2D& curve, double kappa, int m, const Options2D& opt) {
  const DenseOperator V = galerkin_single_layer_2d(curve, kappa, Space::P0, Space::P0, opt);
  CVector v(curve.num_segments());
  CVector mass(curve.num_segments());
  for (std::size_t k = 0; k < curve.num_segments(); ++k) {
    const Vec2& c = curve.segments()[k].midpoint;
    v[k] = std::polar(1.0, m * std::atan2(c.y(), c.x()));
    mass[k] = curve.segments()[k].length * v[k];
  }
  // conjugated test vector
  return v.dot(V.A * v) / v.dot(mass);
}

}  // namespace ebem
