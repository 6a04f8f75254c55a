#pragma once

#include <complex>
#include <vector>

#include "micromorphx/material.hpp"

namespace mmx {

using Mat12c = Eigen::Matrix<std::complex<double>, 12, 12>;

/// Plane-wave symbol: substituting u = u_hat e^{i k.x}, P = P_hat e^{i k.x}
/// into the strong form yields omega^2 (u_hat, P_hat) = S(k) (u_hat, P_hat).
/// Hermitian and positive semidefinite for admissible parameters; at k = 0
/// the displacement block vanishes and the micro block reduces to C + H.
Mat12c symbol_matrix(const Vec3& k, const MaterialModel& material);

struct DispersionPoint {
  int index = 0;
  double k_mag = 0.0;
  Vec3 k = Vec3::Zero();
  std::array<double, 12> omega{};  // ascending
};

/// Branches along a polyline of wave vectors, `samples` points per segment
/// (endpoints included). Validates the material up front and throws when an
/// eigenvalue drops below -1e-10 (the symbol must be positive semidefinite
/// for admissible parameters).
std::vector<DispersionPoint> dispersion_curves(const std::vector<Vec3>& endpoints,
                                               int samples, const MaterialModel& material);

}  // namespace mmx
