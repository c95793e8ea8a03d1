#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ebem/assembly.hpp"
#include "ebem/guenter.hpp"

namespace ebem {

struct SpaceDesc {
  Space space = Space::P1;
  int components = 1;
};

std::string to_string(Space s);

/// Dense Galerkin matrix A[m, n] = <test_m, Op trial_n>.
struct DenseOperator {
  CMatrix A;
  SpaceDesc trial, test;
  std::string kernel;      // e.g. "single_layer", "traction_double_layer:alter"
  std::string convention;  // sign / side metadata
  std::size_t rows() const { return A.rows(); }
  std::size_t cols() const { return A.cols(); }
  /// Throws DomainError if the shape does not match the space descriptors on `mesh`.
  void validate(const SurfaceMesh& mesh) const;
};

std::size_t space_dim(const SurfaceMesh& mesh, Space s);

struct EvalOptions {
  quad::NearSingularOptions near;
  int threads = 1;
};

// Pointwise potentials at off-surface points (scalar densities).

/// V p(x) = int G(x, y) p(y) ds_y
CVector eval_single_layer(const SurfaceMesh& mesh, double kappa, const Density& p, const std::vector<Vec3>& pts,
                          const EvalOptions& opt = {});
/// N psi(x) = -int d_{n_y} G(x, y) psi(y) ds_y
CVector eval_double_layer(const SurfaceMesh& mesh, double kappa, const Density& psi, const std::vector<Vec3>& pts,
                          const EvalOptions& opt = {});

/// Visits the quadrature nodes (element, barycentric, weight) used for the target x.
void visit_surface(const SurfaceMesh& mesh, const Vec3& x, const quad::NearSingularOptions& opt,
                   const std::function<void(int, const Vec3&, double)>& visit);

// Galerkin matrices (scalar spaces).

DenseOperator mass_matrix(const SurfaceMesh& mesh, Space trial, Space test);
DenseOperator galerkin_single_layer(const SurfaceMesh& mesh, double kappa, Space trial, Space test,
                                    const AssemblyOptions& opt = {});
/// Principal part K of N: kernel n_y . grad_x G = -d_{n_y} G; traces (N psi)^+- = K psi +- psi/2.
DenseOperator galerkin_double_layer(const SurfaceMesh& mesh, double kappa, Space trial, Space test,
                                    const AssemblyOptions& opt = {});
/// K': kernel d_{n_x} G; traces (d_n V p)^+- = K' p +- p/2.
DenseOperator galerkin_adjoint(const SurfaceMesh& mesh, double kappa, Space trial, Space test,
                               const AssemblyOptions& opt = {});
/// <phi, d_n N psi> = <n x grad phi, V (n x grad psi)> - kappa^2 int int G phi psi n_x . n_y
DenseOperator hypersingular_hamdi(const SurfaceMesh& mesh, double kappa, Space trial = Space::P1,
                                  Space test = Space::P1, const AssemblyOptions& opt = {});

enum class TraceKind { SingleLayer, DoubleLayer, Adjoint };

/// One-sided traces as Galerkin functionals <phi_m, (Op p)^+->, tested in the space of p.
/// The + side is the interior (the normals point outward).
struct OneSidedTraces {
  CVector plus, minus;
};
OneSidedTraces one_sided_traces(const SurfaceMesh& mesh, double kappa, TraceKind kind, const Density& p,
                                const AssemblyOptions& opt = {});

// Matrix files: "EBEMMAT1", u64 rows, u64 cols, u64 flag (1 = complex128), then
// row-major interleaved re/im doubles, all little endian. The sidecar FILE.json
// holds the space descriptors and the convention metadata.

void write_matrix(const std::string& path, const DenseOperator& op);
DenseOperator read_matrix(const std::string& path);
void write_matrix_binary(std::ostream& os, const CMatrix& A);
CMatrix read_matrix_binary(std::istream& is);

}  // namespace ebem
