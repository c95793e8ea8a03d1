#include "ebem/potentials.hpp"

#include <array>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "ebem/kernels.hpp"
#include "json.hpp"

namespace ebem {

std::string to_string(Space s) { return s == Space::P0 ? "P0" : "P1"; }

std::size_t space_dim(const SurfaceMesh& mesh, Space s) {
  return s == Space::P0 ? mesh.num_triangles() : mesh.num_vertices();
}

void DenseOperator::validate(const SurfaceMesh& mesh) const {
  const auto r = space_dim(mesh, test.space) * test.components;
  const auto c = space_dim(mesh, trial.space) * trial.components;
  if (rows() != r || cols() != c) throw DomainError("DenseOperator: shape does not match the spaces");
}

void visit_surface(const SurfaceMesh& mesh, const Vec3& x, const quad::NearSingularOptions& opt,
                   const std::function<void(int, const Vec3&, double)>& visit) {
  for (std::size_t e = 0; e < mesh.num_triangles(); ++e) {
    const quad::Triangle t = mesh.geometry(e);
    quad::visit_near_singular(t, x, opt, [&](const Vec2& r, double w) {
      visit(static_cast<int>(e), Vec3(1 - r.x() - r.y(), r.x(), r.y()), w);
    });
  }
}

namespace {

Vec3 bary_point(const SurfaceMesh& mesh, int e, const Vec3& l) {
  const auto& t = mesh.triangle(e);
  return l[0] * mesh.vertex(t[0]) + l[1] * mesh.vertex(t[1]) + l[2] * mesh.vertex(t[2]);
}

void check_scalar(const Density& p) {
  p.validate();
  if (p.components != 1) throw DomainError("expected a scalar density");
}

}  // namespace

CVector eval_single_layer(const SurfaceMesh& mesh, double kappa, const Density& p, const std::vector<Vec3>& pts,
                          const EvalOptions& opt) {
  check_scalar(p);
  CVector out = CVector::Zero(pts.size());
  parallel_for(pts.size(), opt.threads, [&](std::size_t i) {
    cplx s = 0.0;
    visit_surface(mesh, pts[i], opt.near, [&](int e, const Vec3& l, double w) {
      const double r = (pts[i] - bary_point(mesh, e, l)).norm();
      s += w * kernels::helmholtz_g3(kappa, r) * p.eval(e, l);
    });
    out[i] = s;
  });
  return out;
}

CVector eval_double_layer(const SurfaceMesh& mesh, double kappa, const Density& psi, const std::vector<Vec3>& pts,
                          const EvalOptions& opt) {
  check_scalar(psi);
  CVector out = CVector::Zero(pts.size());
  parallel_for(pts.size(), opt.threads, [&](std::size_t i) {
    cplx s = 0.0;
    visit_surface(mesh, pts[i], opt.near, [&](int e, const Vec3& l, double w) {
      const Vec3 d = pts[i] - bary_point(mesh, e, l);
      const double r = d.norm();
      const kernels::Radial g = kernels::g3_radial(kappa, r);
      // -d_{n_y} G = n_y . grad_x G
      s += w * (g.d1 / r) * d.dot(mesh.frame(e).n) * psi.eval(e, l);
    });
    out[i] = s;
  });
  return out;
}

namespace {

using Block3 = Eigen::Matrix<cplx, 3, 3>;

// Adds a 3x3 block of moments (P1 test a, P1 trial b) into the global matrix,
// collapsing rows/columns for P0.
void scatter(CMatrix& A, const ElementData& ex, const ElementData& ey, int e, int f, Space test, Space trial,
             const Block3& m, int row_off = 0, int col_off = 0) {
  for (int a = 0; a < 3; ++a) {
    const int row = row_off + (test == Space::P0 ? e : ex.vid[a]);
    for (int b = 0; b < 3; ++b) {
      const int col = col_off + (trial == Space::P0 ? f : ey.vid[b]);
      A(row, col) += m(a, b);
    }
  }
}

template <class Kernel>
DenseOperator scalar_galerkin(const SurfaceMesh& mesh, Space trial, Space test, const AssemblyOptions& opt,
                              Kernel kernel) {
  const auto el = element_data(mesh);
  DenseOperator op;
  op.A = CMatrix::Zero(space_dim(mesh, test), space_dim(mesh, trial));
  op.trial = {trial, 1};
  op.test = {test, 1};
  struct Work {};
  for_each_pair<Work>(mesh, el, opt, [&](int e, int f, const std::vector<PairPoint>& pts, Work&) {
    const ElementData& ex = el[e];
    const ElementData& ey = el[f];
    Block3 m = Block3::Zero();
    for (const PairPoint& p : pts) {
      const Vec3 x = ex.point(p.lx), y = ey.point(p.ly);
      const cplx k = p.w * kernel(x, y, ex, ey);
      m += k * (p.lx * p.ly.transpose()).cast<cplx>();
    }
    scatter(op.A, ex, ey, e, f, test, trial, m);
  });
  return op;
}

}  // namespace

DenseOperator mass_matrix(const SurfaceMesh& mesh, Space trial, Space test) {
  DenseOperator op;
  op.A = CMatrix::Zero(space_dim(mesh, test), space_dim(mesh, trial));
  op.trial = {trial, 1};
  op.test = {test, 1};
  op.kernel = "mass";
  const auto el = element_data(mesh);
  for (std::size_t e = 0; e < el.size(); ++e) {
    Block3 m;
    // int lambda_a lambda_b = A (1 + delta_ab) / 12
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) m(a, b) = el[e].area * (a == b ? 2.0 : 1.0) / 12.0;
    scatter(op.A, el[e], el[e], e, e, test, trial, m);
  }
  return op;
}

DenseOperator galerkin_single_layer(const SurfaceMesh& mesh, double kappa, Space trial, Space test,
                                    const AssemblyOptions& opt) {
  auto op = scalar_galerkin(mesh, trial, test, opt, [kappa](const Vec3& x, const Vec3& y, const ElementData&,
                                                            const ElementData&) {
    return kernels::helmholtz_g3(kappa, (x - y).norm());
  });
  op.kernel = "single_layer";
  op.convention = "G = exp(i k r)/(4 pi r)";
  return op;
}

DenseOperator galerkin_double_layer(const SurfaceMesh& mesh, double kappa, Space trial, Space test,
                                    const AssemblyOptions& opt) {
  auto op = scalar_galerkin(mesh, trial, test, opt,
                            [kappa](const Vec3& x, const Vec3& y, const ElementData&, const ElementData& ey) {
                              const Vec3 d = x - y;
                              const double r = d.norm();
                              return kernels::g3_radial(kappa, r).d1 / r * d.dot(ey.n);
                            });
  op.kernel = "double_layer";
  op.convention = "principal part of N = -int d_ny G; (N psi)^+- = K psi +- psi/2, + = interior";
  return op;
}

DenseOperator galerkin_adjoint(const SurfaceMesh& mesh, double kappa, Space trial, Space test,
                               const AssemblyOptions& opt) {
  auto op = scalar_galerkin(mesh, trial, test, opt,
                            [kappa](const Vec3& x, const Vec3& y, const ElementData& ex, const ElementData&) {
                              const Vec3 d = x - y;
                              const double r = d.norm();
                              return kernels::g3_radial(kappa, r).d1 / r * d.dot(ex.n);
                            });
  op.kernel = "adjoint_double_layer";
  op.convention = "K' = int d_nx G; (d_n V p)^+- = K' p +- p/2, + = interior";
  return op;
}

DenseOperator hypersingular_hamdi(const SurfaceMesh& mesh, double kappa, Space trial, Space test,
                                  const AssemblyOptions& opt) {
  if (trial != Space::P1 || test != Space::P1) throw DomainError("hypersingular_hamdi: P1 spaces required");
  const auto el = element_data(mesh);
  DenseOperator op;
  op.A = CMatrix::Zero(mesh.num_vertices(), mesh.num_vertices());
  op.trial = {trial, 1};
  op.test = {test, 1};
  op.kernel = "hypersingular_hamdi";
  op.convention = "<phi, d_n N psi> with the kappa^2 factor on the normal term";
  const double k2 = kappa * kappa;
  struct Work {};
  for_each_pair<Work>(mesh, el, opt, [&](int e, int f, const std::vector<PairPoint>& pts, Work&) {
    const ElementData& ex = el[e];
    const ElementData& ey = el[f];
    cplx g0 = 0.0;
    Block3 m = Block3::Zero();
    for (const PairPoint& p : pts) {
      const cplx g = p.w * kernels::helmholtz_g3(kappa, (ex.point(p.lx) - ey.point(p.ly)).norm());
      g0 += g;
      m += g * (p.lx * p.ly.transpose()).cast<cplx>();
    }
    const double nn = ex.n.dot(ey.n);
    Block3 b;
    for (int a = 0; a < 3; ++a)
      for (int c = 0; c < 3; ++c) b(a, c) = g0 * ex.curl[a].dot(ey.curl[c]) - k2 * nn * m(a, c);
    scatter(op.A, ex, ey, e, f, test, trial, b);
  });
  return op;
}

OneSidedTraces one_sided_traces(const SurfaceMesh& mesh, double kappa, TraceKind kind, const Density& p,
                                const AssemblyOptions& opt) {
  check_scalar(p);
  OneSidedTraces out;
  if (kind == TraceKind::SingleLayer) {
    out.plus = galerkin_single_layer(mesh, kappa, p.space, p.space, opt).A * p.coeffs;
    out.minus = out.plus;
    return out;
  }
  const CMatrix K = kind == TraceKind::DoubleLayer ? galerkin_double_layer(mesh, kappa, p.space, p.space, opt).A
                                                   : galerkin_adjoint(mesh, kappa, p.space, p.space, opt).A;
  const CVector kp = K * p.coeffs;
  const CVector half = 0.5 * (mass_matrix(mesh, p.space, p.space).A * p.coeffs);
  out.plus = kp + half;
  out.minus = kp - half;
  return out;
}

// Matrix files

namespace {

constexpr char kMagic[8] = {'E', 'B', 'E', 'M', 'M', 'A', 'T', '1'};

void put_u64(std::ostream& os, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t get_u64(std::istream& is) {
  unsigned char b[8];
  if (!is.read(reinterpret_cast<char*>(b), 8)) throw ParseError("matrix file: truncated header");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

nlohmann::json space_json(const SpaceDesc& s) { return {{"space", to_string(s.space)}, {"components", s.components}}; }

SpaceDesc space_from_json(const nlohmann::json& j) {
  SpaceDesc s;
  const std::string name = j.at("space").get<std::string>();
  if (name != "P0" && name != "P1") throw ParseError("matrix sidecar: unknown space " + name);
  s.space = name == "P0" ? Space::P0 : Space::P1;
  s.components = j.at("components").get<int>();
  return s;
}

}  // namespace

void write_matrix_binary(std::ostream& os, const CMatrix& A) {
  static_assert(sizeof(double) == 8);
  os.write(kMagic, 8);
  put_u64(os, A.rows());
  put_u64(os, A.cols());
  put_u64(os, 1);
  std::vector<double> row(2 * A.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
      row[2 * j] = A(i, j).real();
      row[2 * j + 1] = A(i, j).imag();
    }
    os.write(reinterpret_cast<const char*>(row.data()), row.size() * sizeof(double));
  }
}

CMatrix read_matrix_binary(std::istream& is) {
  char magic[8];
  if (!is.read(magic, 8) || std::memcmp(magic, kMagic, 8) != 0) throw ParseError("matrix file: bad magic");
  const auto rows = get_u64(is), cols = get_u64(is), flag = get_u64(is);
  if (flag != 1) throw ParseError("matrix file: unsupported scalar flag");
  CMatrix A(rows, cols);
  std::vector<double> row(2 * cols);
  for (std::uint64_t i = 0; i < rows; ++i) {
    if (!is.read(reinterpret_cast<char*>(row.data()), row.size() * sizeof(double)))
      throw ParseError("matrix file: truncated data");
    for (std::uint64_t j = 0; j < cols; ++j) A(i, j) = cplx(row[2 * j], row[2 * j + 1]);
  }
  return A;
}

void write_matrix(const std::string& path, const DenseOperator& op) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path + " for writing");
  write_matrix_binary(os, op.A);
  if (!os) throw IoError("write failed: " + path);
  nlohmann::json side = {{"format", "EBEMMAT1"},
                         {"rows", op.rows()},
                         {"cols", op.cols()},
                         {"trial", space_json(op.trial)},
                         {"test", space_json(op.test)},
                         {"kernel", op.kernel},
                         {"convention", op.convention}};
  std::ofstream js(path + ".json");
  if (!js) throw IoError("cannot open " + path + ".json for writing");
  js << side.dump(2) << "\n";
}

DenseOperator read_matrix(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path);
  DenseOperator op;
  op.A = read_matrix_binary(is);
  std::ifstream js(path + ".json");
  if (js) {
    nlohmann::json side;
    try {
      js >> side;
      op.trial = space_from_json(side.at("trial"));
      op.test = space_from_json(side.at("test"));
      op.kernel = side.value("kernel", "");
      op.convention = side.value("convention", "");
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("matrix sidecar: ") + e.what());
    }
  }
  return op;
}

}  // namespace ebem
