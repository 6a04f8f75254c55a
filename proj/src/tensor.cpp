#include "micromorphx/tensor.hpp"

namespace mmx {

namespace {

Mat9 build_projector(Mat3 (*part)(const Mat3&)) {
  Mat9 P = Mat9::Zero();
  for (int c = 0; c < 9; ++c) {
    Mat3 E = Mat3::Zero();
    E(c / 3, c % 3) = 1.0;
    P.col(c) = vec9(part(E));
  }
  return P;
}

Mat3 part_sym(const Mat3& X) { return sym(X); }
Mat3 part_skew(const Mat3& X) { return skew(X); }
Mat3 part_dev(const Mat3& X) { return dev(X); }
Mat3 part_devsym(const Mat3& X) { return devsym(X); }
Mat3 part_sph(const Mat3& X) { return spherical(X); }

}  // namespace

const Mat9& proj_sym9() {
  static const Mat9 P = build_projector(&part_sym);
  return P;
}

const Mat9& proj_skew9() {
  static const Mat9 P = build_projector(&part_skew);
  return P;
}

const Mat9& proj_dev9() {
  static const Mat9 P = build_projector(&part_dev);
  return P;
}

const Mat9& proj_devsym9() {
  static const Mat9 P = build_projector(&part_devsym);
  return P;
}

const Mat9& proj_sph9() {
  static const Mat9 P = build_projector(&part_sph);
  return P;
}

const Mat9& trace_outer9() {
  static const Mat9 J = 3.0 * proj_sph9();
  return J;
}

}  // namespace mmx
