#pragma once

#include <Eigen/Dense>

namespace mmx {

using Mat3 = Eigen::Matrix3d;
using Vec3 = Eigen::Vector3d;
using Mat9 = Eigen::Matrix<double, 9, 9>;
using Vec9 = Eigen::Matrix<double, 9, 1>;

/// Row-major flattening of a 3x3 tensor: vec(X)[3*i+j] = X(i,j).
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, 9, 1> vec9(const Eigen::MatrixBase<Derived>& X) {
  Eigen::Matrix<typename Derived::Scalar, 9, 1> v;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) v[3 * i + j] = X(i, j);
  return v;
}

template <typename Scalar>
Eigen::Matrix<Scalar, 3, 3> unvec9(const Eigen::Matrix<Scalar, 9, 1>& v) {
  Eigen::Matrix<Scalar, 3, 3> X;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) X(i, j) = v[3 * i + j];
  return X;
}

template <typename Derived>
auto sym(const Eigen::MatrixBase<Derived>& X) {
  return (0.5 * (X + X.transpose())).eval();
}

template <typename Derived>
auto skew(const Eigen::MatrixBase<Derived>& X) {
  return (0.5 * (X - X.transpose())).eval();
}

/// Trace-free part: X - (tr X / 3) Id.
template <typename Derived>
auto dev(const Eigen::MatrixBase<Derived>& X) {
  using Scalar = typename Derived::Scalar;
  using M = Eigen::Matrix<Scalar, 3, 3>;
  return (X - (X.trace() / Scalar(3)) * M::Identity()).eval();
}

template <typename Derived>
auto devsym(const Eigen::MatrixBase<Derived>& X) {
  return dev(sym(X));
}

template <typename Derived>
auto spherical(const Eigen::MatrixBase<Derived>& X) {
  using Scalar = typename Derived::Scalar;
  using M = Eigen::Matrix<Scalar, 3, 3>;
  return ((X.trace() / Scalar(3)) * M::Identity()).eval();
}

/// Frobenius inner product <X, Y> = sum_ij X_ij Y_ij.
inline double inner(const Mat3& X, const Mat3& Y) { return (X.array() * Y.array()).sum(); }

struct CartanParts {
  Mat3 devsym;
  Mat3 skew;
  Mat3 spherical;
};

/// Orthogonal split X = devsym + skew + spherical.
inline CartanParts decompose(const Mat3& X) {
  return {devsym(X), skew(X), spherical(X)};
}

/// Cross-product matrix: cross_matrix(a) * b = a x b.
inline Mat3 cross_matrix(const Vec3& a) {
  Mat3 A;
  A << 0, -a[2], a[1], a[2], 0, -a[0], -a[1], a[0], 0;
  return A;
}

// Projectors on vectorized tensors; proj_sph9() is rank one, and
// proj_sym9() = proj_devsym9() + proj_sph9().
const Mat9& proj_sym9();
const Mat9& proj_skew9();
const Mat9& proj_dev9();
const Mat9& proj_devsym9();
const Mat9& proj_sph9();
/// vec(Id) vec(Id)^T; as a quadratic form gives (tr X)^2.
const Mat9& trace_outer9();

}  // namespace mmx
