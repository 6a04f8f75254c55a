#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "micromorphx/tensor.hpp"

namespace mmx {

/// Moduli of the isotropic constitutive laws. The balance equations are used in
/// normalized form (unit density), so all entries share one stress-like unit.
struct IsotropicModuli {
  double mu_e = 1.0;
  double lambda_e = 1.0;
  double mu_c = 0.0;  // couple modulus; 0 keeps the force stress symmetric
  double mu_h = 1.0;
  double lambda_h = 1.0;
  double alpha_1 = 1.0;
  double alpha_2 = 1.0;
  double alpha_3 = 1.0;
};

struct ParameterCheck {
  std::string condition;  // e.g. "mu_e > 0"
  double value;           // evaluated left-hand side
  bool ok;
};

struct ValidationReport {
  std::vector<ParameterCheck> checks;
  bool ok = false;
  std::string summary() const;
};

ValidationReport validate_parameters(const IsotropicModuli& m);

/// Which energy channels act on the micro-distortion and its curl.
/// Only the first two are admissible for time stepping and statics; the rest
/// exist so the inequality studies can probe the whole model family.
enum class ModelVariant {
  Full,               // sym P and Curl P
  DevDev,             // dev sym P and dev Curl P
  SymPSymCurl,        // sym P and sym Curl P
  SymPDevsymCurl,     // sym P and dev sym Curl P
  DevsymPSymCurl,     // dev sym P and sym Curl P
  DevsymPDevsymCurl,  // dev sym P and dev sym Curl P
};

bool variant_supports_dynamics(ModelVariant v);
std::string variant_name(ModelVariant v);

// ---- isotropic constitutive maps (templated so the Fourier symbol can reuse
// them with complex amplitudes) ----

/// Force stress: 2 mu_e sym E + lambda_e tr(E) Id, plus 2 mu_c skew E when the
/// couple modulus is switched on.
template <typename Derived>
auto apply_isotropic_sigma(const IsotropicModuli& m, const Eigen::MatrixBase<Derived>& E) {
  using Scalar = typename Derived::Scalar;
  using M = Eigen::Matrix<Scalar, 3, 3>;
  M out = 2.0 * m.mu_e * sym(E) + m.lambda_e * E.trace() * M::Identity();
  if (m.mu_c != 0.0) out += 2.0 * m.mu_c * skew(E);
  return out;
}

/// Moment stress acting on the curl channel. DEV_DEV drops the trace term.
template <typename Derived>
auto apply_isotropic_m(const IsotropicModuli& m, const Eigen::MatrixBase<Derived>& A,
                       ModelVariant v = ModelVariant::Full) {
  using Scalar = typename Derived::Scalar;
  using M = Eigen::Matrix<Scalar, 3, 3>;
  M out = m.alpha_1 * devsym(A) + m.alpha_2 * skew(A);
  if (v == ModelVariant::Full) out += m.alpha_3 * A.trace() * M::Identity();
  return out;
}

/// Micro stress on sym P; DEV_DEV keeps only the deviatoric part.
template <typename Derived>
auto apply_isotropic_s(const IsotropicModuli& m, const Eigen::MatrixBase<Derived>& P,
                       ModelVariant v = ModelVariant::Full) {
  using Scalar = typename Derived::Scalar;
  using M = Eigen::Matrix<Scalar, 3, 3>;
  if (v == ModelVariant::DevDev) return M(2.0 * m.mu_h * devsym(P));
  return M(2.0 * m.mu_h * sym(P) + m.lambda_h * P.trace() * M::Identity());
}

enum class SymmetryClass { SymToSym, FullMajor };

/// Fourth-order tensor stored as a 9x9 matrix on vectorized 3x3 tensors.
/// SYM_TO_SYM tensors act on (and are judged positive on) Sym(3) only.
class FourthOrderTensor {
 public:
  FourthOrderTensor(const Mat9& coefficients, SymmetryClass cls);

  static FourthOrderTensor isotropic_elastic(double mu, double lambda, double mu_c = 0.0);
  static FourthOrderTensor isotropic_micro(double mu_h, double lambda_h);
  static FourthOrderTensor isotropic_curl(double a1, double a2, double a3);

  Mat3 apply(const Mat3& X) const { return unvec9<double>(Vec9(coeff_ * vec9(X))); }
  const Mat9& coefficients() const { return coeff_; }
  SymmetryClass symmetry_class() const { return cls_; }

  /// Extreme eigenvalues on the declared domain (Sym(3) or all of R^{3x3}).
  std::pair<double, double> eigen_bounds() const;

 private:
  Mat9 coeff_;
  SymmetryClass cls_;
};

/// Quadratic-form weights of the three energy channels on vectorized tensors:
///   2 E_pot = vec(grad u - P)' C vec(grad u - P) + vec(P)' H vec(P)
///           + vec(Curl P)' L vec(Curl P),
/// with the variant's channel projectors folded into H and L. The same
/// matrices apply the constitutive laws (sigma = C vec(e), etc.).
struct ChannelWeights {
  Mat9 C;
  Mat9 H;
  Mat9 L;
};

ChannelWeights channel_weights(const IsotropicModuli& m, ModelVariant v);
ChannelWeights channel_weights(const FourthOrderTensor& C, const FourthOrderTensor& H,
                               const FourthOrderTensor& L, ModelVariant v);

/// Material description used by assembly: isotropic moduli or general tensors,
/// plus the variant selector.
struct MaterialModel {
  IsotropicModuli iso;
  ModelVariant variant = ModelVariant::Full;
  std::optional<FourthOrderTensor> C, H, L;  // set all three for anisotropy

  bool anisotropic() const { return C.has_value(); }
  ChannelWeights weights() const;
  ValidationReport validate() const;
};

}  // namespace mmx
