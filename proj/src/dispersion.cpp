#include "micromorphx/dispersion.hpp"

#include <stdexcept>

#include "micromorphx/tensor.hpp"

namespace mmx {

namespace {

using Cplx = std::complex<double>;
using Mat3c = Eigen::Matrix3cd;
using Vec3c = Eigen::Vector3cd;

Mat3c row_cross(const Vec3& k, const Mat3c& P) {
  // row r of the result is k x (row r of P). Spelled out componentwise:
  // Eigen's cross() conjugates complex operands, which would silently flip
  // the sign of the curl-curl block.
  Mat3c out;
  for (int r = 0; r < 3; ++r) {
    out(r, 0) = k[1] * P(r, 2) - k[2] * P(r, 1);
    out(r, 1) = k[2] * P(r, 0) - k[0] * P(r, 2);
    out(r, 2) = k[0] * P(r, 1) - k[1] * P(r, 0);
  }
  return out;
}

}  // namespace

Mat12c symbol_matrix(const Vec3& k, const MaterialModel& material) {
  // no parameter validation here: evaluating the symbol for out-of-range
  // moduli is how the sanity checks exhibit the loss of positivity
  if (!variant_supports_dynamics(material.variant))
    throw std::invalid_argument("plane-wave symbol needs a dynamic variant");
  if (material.anisotropic())
    throw std::invalid_argument("plane-wave symbol implemented for isotropic moduli");

  const IsotropicModuli& m = material.iso;
  const ModelVariant v = material.variant;
  const Cplx I(0.0, 1.0);

  Mat12c S = Mat12c::Zero();
  for (int col = 0; col < 12; ++col) {
    Vec3c u = Vec3c::Zero();
    Mat3c P = Mat3c::Zero();
    if (col < 3)
      u[col] = 1.0;
    else
      P((col - 3) / 3, (col - 3) % 3) = 1.0;

    // elastic distortion of the plane wave: grad u -> i u k^T
    const Mat3c E = I * u * Vec3c(k.cast<Cplx>()).transpose() - P;
    const Mat3c sigma = apply_isotropic_sigma(m, E);
    const Mat3c s = apply_isotropic_s(m, P, v);
    const Mat3c A = I * row_cross(k, P);          // Curl P
    const Mat3c mom = apply_isotropic_m(m, A, v);  // moment stress
    const Mat3c curl_mom = I * row_cross(k, mom);

    // u_tt = Div sigma -> omega^2 u = -i sigma k
    const Vec3c out_u = -I * (sigma * Vec3c(k.cast<Cplx>()));
    // P_tt = -Curl m + sigma - s -> omega^2 P = Curl m - sigma + s
    const Mat3c out_P = curl_mom - sigma + s;

    S.block<3, 1>(0, col) = out_u;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) S(3 + 3 * r + c, col) = out_P(r, c);
  }
  return S;
}

std::vector<DispersionPoint> dispersion_curves(const std::vector<Vec3>& endpoints,
                                               int samples, const MaterialModel& material) {
  if (endpoints.size() < 2) throw std::invalid_argument("wave path needs two endpoints");
  if (samples < 2) throw std::invalid_argument("need at least two samples per segment");
  if (auto report = material.validate(); !report.ok)
    throw std::invalid_argument("invalid material parameters:\n" + report.summary());

  std::vector<DispersionPoint> out;
  int index = 0;
  for (size_t seg = 0; seg + 1 < endpoints.size(); ++seg) {
    for (int s = 0; s < samples; ++s) {
      if (seg > 0 && s == 0) continue;  // shared endpoint
      const double tau = static_cast<double>(s) / (samples - 1);
      const Vec3 k = (1.0 - tau) * endpoints[seg] + tau * endpoints[seg + 1];
      const Mat12c S = symbol_matrix(k, material);
      const Mat12c H = 0.5 * (S + S.adjoint());
      Eigen::SelfAdjointEigenSolver<Mat12c> es(H);
      DispersionPoint pt;
      pt.index = index++;
      pt.k = k;
      pt.k_mag = k.norm();
      for (int j = 0; j < 12; ++j) {
        const double lam = es.eigenvalues()[j];
        if (lam < -1e-10)
          throw std::runtime_error("symbol not positive semidefinite: eigenvalue " +
                                   std::to_string(lam));
        pt.omega[j] = std::sqrt(std::max(0.0, lam));
      }
      out.push_back(pt);
    }
  }
  return out;
}

}  // namespace mmx
