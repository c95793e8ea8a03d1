#pragma once

#include <array>
#include <thread>
#include <vector>

#include "ebem/mesh.hpp"
#include "ebem/quadrature.hpp"

namespace ebem {

struct AssemblyOptions {
  int threads = 1;
  int ss_order = 5;       // Sauter-Schwab Gauss points per variable
  int far_degree = 6;     // triangle rule for separated pairs
  int near_order = 6;     // collapsed rule, 0.5 <= dist/diam < 1
  int close_order = 8;    // collapsed rule, dist/diam < 0.5
  double separation = 1.0;
};

/// Per-element data used by the kernels.
struct ElementData {
  std::array<Vec3, 3> v;
  Vec3 n;
  double area = 0;
  std::array<Vec3, 3> grad;                 // P1 hat gradients
  std::array<Vec3, 3> curl;                 // n x grad
  std::array<std::array<Vec3, 3>, 3> m;     // m[a][c] = M (lambda_a e_c)
  Vec3 centroid;
  double radius = 0;                        // max distance centroid -> vertex
  double diam = 0;
  std::array<int, 3> vid;

  Vec3 point(const Vec3& l) const { return l[0] * v[0] + l[1] * v[1] + l[2] * v[2]; }
};

std::vector<ElementData> element_data(const SurfaceMesh& mesh);

/// Quadrature node of a panel pair: barycentric coordinates in the stored vertex
/// order of each panel and the full weight (Jacobians included).
struct PairPoint {
  Vec3 lx, ly;
  double w;
};

class PairRules {
 public:
  explicit PairRules(const AssemblyOptions& opt);
  /// Nodes for the test panel e and trial panel f.
  void points(const std::vector<ElementData>& el, int e, int f, std::vector<PairPoint>& out) const;

 private:
  struct RefPoint {
    Vec3 lx, ly;
    double w;
  };
  std::vector<RefPoint> far_, near_, close_;
  std::array<std::vector<RefPoint>, 4> touching_;  // by shared-vertex count, permuted order
  double separation_;
};

/// Greedy colouring of the elements such that elements of one colour share no vertex.
std::vector<std::vector<int>> vertex_colouring(const SurfaceMesh& mesh);

/// Runs body(e, f, points, work) over all panel pairs. Test panels of one colour
/// are processed concurrently; colours run in sequence, so every matrix entry
/// receives its contributions in the same order for any thread count.
template <class Work, class Body>
void for_each_pair(const SurfaceMesh& mesh, const std::vector<ElementData>& el, const AssemblyOptions& opt,
                   Body&& body) {
  const PairRules rules(opt);
  const auto colours = vertex_colouring(mesh);
  const int nt = std::max(1, opt.threads);
  const int nf = static_cast<int>(el.size());
  auto run = [&](const std::vector<int>& elems, int tid) {
    Work work;
    std::vector<PairPoint> pts;
    for (std::size_t k = tid; k < elems.size(); k += nt) {
      const int e = elems[k];
      for (int f = 0; f < nf; ++f) {
        rules.points(el, e, f, pts);
        body(e, f, pts, work);
      }
    }
  };
  for (const auto& col : colours) {
    if (nt == 1) {
      run(col, 0);
      continue;
    }
    std::vector<std::thread> pool;
    for (int t = 0; t < nt; ++t) pool.emplace_back(run, std::cref(col), t);
    for (auto& th : pool) th.join();
  }
}

/// Runs body(i) for i in [0, n) on opt.threads threads (static striding).
template <class Body>
void parallel_for(std::size_t n, int threads, Body&& body) {
  const int nt = std::max(1, threads);
  if (nt == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  for (int t = 0; t < nt; ++t)
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < n; i += nt) body(i);
    });
  for (auto& th : pool) th.join();
}

}  // namespace ebem
