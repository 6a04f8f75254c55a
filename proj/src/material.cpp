#include "micromorphx/material.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mmx {

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (const auto& c : checks)
    os << (c.ok ? "  ok   " : "  FAIL ") << c.condition << "  (value " << c.value << ")\n";
  return os.str();
}

ValidationReport validate_parameters(const IsotropicModuli& m) {
  ValidationReport r;
  auto strict = [&](const std::string& cond, double v) { r.checks.push_back({cond, v, v > 0.0}); };
  strict("mu_e > 0", m.mu_e);
  strict("2 mu_e + 3 lambda_e > 0", 2.0 * m.mu_e + 3.0 * m.lambda_e);
  strict("mu_h > 0", m.mu_h);
  strict("2 mu_h + 3 lambda_h > 0", 2.0 * m.mu_h + 3.0 * m.lambda_h);
  strict("alpha_1 > 0", m.alpha_1);
  strict("alpha_2 > 0", m.alpha_2);
  strict("alpha_3 > 0", m.alpha_3);
  r.checks.push_back({"mu_c >= 0", m.mu_c, m.mu_c >= 0.0});
  r.ok = true;
  for (const auto& c : r.checks) r.ok = r.ok && c.ok;
  return r;
}

bool variant_supports_dynamics(ModelVariant v) {
  return v == ModelVariant::Full || v == ModelVariant::DevDev;
}

std::string variant_name(ModelVariant v) {
  switch (v) {
    case ModelVariant::Full: return "full";
    case ModelVariant::DevDev: return "dev_dev";
    case ModelVariant::SymPSymCurl: return "symp_symcurl";
    case ModelVariant::SymPDevsymCurl: return "symp_devsymcurl";
    case ModelVariant::DevsymPSymCurl: return "devsymp_symcurl";
    case ModelVariant::DevsymPDevsymCurl: return "devsymp_devsymcurl";
  }
  return "?";
}

FourthOrderTensor::FourthOrderTensor(const Mat9& coefficients, SymmetryClass cls)
    : coeff_(coefficients), cls_(cls) {
  const double scale = coeff_.norm();
  const double asym = (coeff_ - coeff_.transpose()).norm();
  if (asym > 1e-12 * (scale > 0 ? scale : 1.0)) throw std::invalid_argument("asymmetric tensor");
}

FourthOrderTensor FourthOrderTensor::isotropic_elastic(double mu, double lambda, double mu_c) {
  Mat9 m = 2.0 * mu * proj_sym9() + lambda * trace_outer9();
  if (mu_c != 0.0) {
    m += 2.0 * mu_c * proj_skew9();
    return FourthOrderTensor(m, SymmetryClass::FullMajor);
  }
  return FourthOrderTensor(m, SymmetryClass::SymToSym);
}

FourthOrderTensor FourthOrderTensor::isotropic_micro(double mu_h, double lambda_h) {
  return FourthOrderTensor(2.0 * mu_h * proj_sym9() + lambda_h * trace_outer9(),
                           SymmetryClass::SymToSym);
}

FourthOrderTensor FourthOrderTensor::isotropic_curl(double a1, double a2, double a3) {
  return FourthOrderTensor(a1 * proj_devsym9() + a2 * proj_skew9() + a3 * trace_outer9(),
                           SymmetryClass::FullMajor);
}

namespace {

// Orthonormal basis of Sym(3) as vectorized tensors (3 diagonal + 3 shear).
Eigen::Matrix<double, 9, 6> sym_basis() {
  Eigen::Matrix<double, 9, 6> B = Eigen::Matrix<double, 9, 6>::Zero();
  int col = 0;
  for (int i = 0; i < 3; ++i, ++col) B(3 * i + i, col) = 1.0;
  const double s = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j, ++col) {
      B(3 * i + j, col) = s;
      B(3 * j + i, col) = s;
    }
  return B;
}

}  // namespace

std::pair<double, double> FourthOrderTensor::eigen_bounds() const {
  if (cls_ == SymmetryClass::SymToSym) {
    const auto B = sym_basis();
    Eigen::Matrix<double, 6, 6> S = B.transpose() * coeff_ * B;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 6, 6>> es(S);
    return {es.eigenvalues().minCoeff(), es.eigenvalues().maxCoeff()};
  }
  Eigen::SelfAdjointEigenSolver<Mat9> es(coeff_);
  return {es.eigenvalues().minCoeff(), es.eigenvalues().maxCoeff()};
}

namespace {

Mat9 eps_p_projector(ModelVariant v) {
  switch (v) {
    case ModelVariant::Full:
    case ModelVariant::SymPSymCurl:
    case ModelVariant::SymPDevsymCurl: return proj_sym9();
    default: return proj_devsym9();
  }
}

Mat9 curl_projector(ModelVariant v) {
  switch (v) {
    case ModelVariant::Full: return Mat9::Identity();
    case ModelVariant::DevDev: return proj_dev9();
    case ModelVariant::SymPSymCurl:
    case ModelVariant::DevsymPSymCurl: return proj_sym9();
    default: return proj_devsym9();
  }
}

}  // namespace

ChannelWeights channel_weights(const IsotropicModuli& m, ModelVariant v) {
  return channel_weights(FourthOrderTensor::isotropic_elastic(m.mu_e, m.lambda_e, m.mu_c),
                         FourthOrderTensor::isotropic_micro(m.mu_h, m.lambda_h),
                         FourthOrderTensor::isotropic_curl(m.alpha_1, m.alpha_2, m.alpha_3), v);
}

ChannelWeights channel_weights(const FourthOrderTensor& C, const FourthOrderTensor& H,
                               const FourthOrderTensor& L, ModelVariant v) {
  if (!variant_supports_dynamics(v))
    throw std::invalid_argument("channel weights exist only for the full and dev_dev variants");
  ChannelWeights w;
  // For mu_c = 0 the elastic matrix already contains the symmetrizer
  // (C = C * proj_sym); folding it in once more keeps the quadratic form
  // identical and makes C act on the full gradient perturbation.
  if (C.symmetry_class() == SymmetryClass::SymToSym)
    w.C = proj_sym9().transpose() * C.coefficients() * proj_sym9();
  else
    w.C = C.coefficients();
  const Mat9 Pp = eps_p_projector(v);
  const Mat9 Pc = curl_projector(v);
  w.H = Pp.transpose() * H.coefficients() * Pp;
  w.L = Pc.transpose() * L.coefficients() * Pc;
  return w;
}

ChannelWeights MaterialModel::weights() const {
  if (anisotropic()) return channel_weights(*C, *H, *L, variant);
  return channel_weights(iso, variant);
}

ValidationReport MaterialModel::validate() const {
  if (!anisotropic()) return validate_parameters(iso);
  ValidationReport r;
  auto bound = [&](const char* name, const FourthOrderTensor& T) {
    auto [lo, hi] = T.eigen_bounds();
    (void)hi;
    r.checks.push_back({std::string(name) + " positive definite", lo, lo > 0.0});
  };
  bound("C", *C);
  bound("H", *H);
  bound("L", *L);
  r.ok = true;
  for (const auto& c : r.checks) r.ok = r.ok && c.ok;
  return r;
}

}  // namespace mmx
