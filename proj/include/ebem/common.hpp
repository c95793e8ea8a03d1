#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace ebem {

using cplx = std::complex<double>;
using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using CVec3 = Eigen::Vector3cd;
using Mat3 = Eigen::Matrix3d;
using CMat3 = Eigen::Matrix3cd;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr double pi = 3.14159265358979323846;

/// Bilinear dot product (Eigen's dot() conjugates the first complex operand).
template <class A, class B>
auto bdot(const A& a, const B& b) {
  return (a.array() * b.array()).sum();
}

/// Bilinear cross product. Eigen's cross() conjugates complex operands.
template <class A, class B>
CVec3 cross(const A& a, const B& b) {
  return CVec3(a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]);
}
inline constexpr cplx I{0.0, 1.0};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Element with (numerically) zero area.
class DegenerateElement : public Error {
 public:
  using Error::Error;
};

/// File could not be opened or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Operation called outside its domain (coincident points, wrong space, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

}  // namespace ebem
