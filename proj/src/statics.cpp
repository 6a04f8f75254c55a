#include "micromorphx/statics.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace mmx {

namespace {

VectorXd mass_solve(const SystemMatrices& sm, const VectorXd& rhs, double tol) {
  VectorXd x = VectorXd::Zero(sm.n);
  CgOptions cg;
  cg.tol = tol;
  auto res = cg_solve(sm.M, rhs, x, cg, &sm.M_inv_diag);
  if (!res.converged) throw std::runtime_error("mass solve failed in resolvent residual");
  return x;
}

}  // namespace

ResolventSolution solve_resolvent(const SystemMatrices& sm, const ResolventRhs& rhs,
                                  double tol) {
  VectorXd us = rhs.u_star, vs = rhs.v_star, Ps = rhs.P_star, Ks = rhs.K_star;
  sm.map_u.apply_bc(us);
  sm.map_u.apply_bc(vs);
  sm.map_P.apply_bc(Ps);
  sm.map_P.apply_bc(Ks);

  const VectorXd qs = sm.pack(us, Ps);
  const VectorXd ps = sm.pack(vs, Ks);
  VectorXd b(sm.n);
  kernels::spmv(sm.M, VectorXd(qs + ps), b);  // weak form of (v* + u*, K* + P*)

  Csr R = assemble_resolvent(sm);
  VectorXd diag = R.diagonal();
  for (int i = 0; i < sm.n; ++i) diag[i] = 1.0 / diag[i];
  VectorXd q = VectorXd::Zero(sm.n);
  CgOptions cg;
  cg.tol = tol;
  auto res = cg_solve(R, b, q, cg, &diag);
  if (!res.converged) {
    std::ostringstream msg;
    msg << "resolvent CG stalled at relative residual " << res.rel_residual << " after "
        << res.iterations << " iterations";
    throw std::runtime_error(msg.str());
  }

  ResolventSolution out;
  out.cg_iterations = res.iterations;
  out.cg_residual = res.rel_residual;
  VectorXd u_full, P_full;
  sm.unpack(q, u_full, P_full);
  out.u = u_full;
  out.P = P_full;
  out.v = u_full - us;
  out.K = P_full - Ps;

  // (I - A)w = w* splits into q - p = q* (exact by construction) and
  // M p + K q = M p*; measure the second block in the X-norm.
  const VectorXd p = q - qs;
  VectorXd Mp(sm.n), Kq(sm.n);
  kernels::spmv(sm.M, p, Mp);
  kernels::spmv(sm.K, q, Kq);
  VectorXd defect = Mp + Kq;
  {
    VectorXd Mps(sm.n);
    kernels::spmv(sm.M, ps, Mps);
    defect -= Mps;
  }
  const VectorXd r = mass_solve(sm, defect, 1e-12);     // momentum-block defect in field form
  const double num = std::sqrt(std::max(0.0, r.dot(defect)));  // r' M r = r' defect
  VectorXd Kqs(sm.n), Mps2(sm.n);
  kernels::spmv(sm.K, qs, Kqs);
  kernels::spmv(sm.M, ps, Mps2);
  const double den = std::sqrt(std::max(0.0, qs.dot(Kqs) + ps.dot(Mps2)));
  out.residual_X = den > 0.0 ? num / den : num;
  return out;
}

double inner_product_X(const SystemMatrices& sm, const VectorXd& w1, const VectorXd& w2) {
  if (w1.size() != 2 * sm.n || w2.size() != 2 * sm.n)
    throw std::invalid_argument("state vector size mismatch");
  VectorXd Kq(sm.n), Mp(sm.n);
  kernels::spmv(sm.K, VectorXd(w1.head(sm.n)), Kq);
  kernels::spmv(sm.M, VectorXd(w1.tail(sm.n)), Mp);
  return Kq.dot(w2.head(sm.n)) + Mp.dot(w2.tail(sm.n));
}

double check_dissipativity(const SystemMatrices& sm, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    VectorXd w(2 * sm.n);
    for (int i = 0; i < w.size(); ++i) w[i] = normal(rng);
    const VectorXd Aw = generator_apply(sm, w);
    const double norm2 = inner_product_X(sm, w, w);
    if (norm2 <= 0.0) continue;
    worst = std::max(worst, std::abs(inner_product_X(sm, Aw, w)) / norm2);
  }
  return worst;
}

EigResult coercivity_lower_bound(const SystemMatrices& sm, const EigOptions& opts) {
  Csr R = assemble_resolvent(sm);
  return pencil_smallest(R, sm.Z, opts);
}

ChannelBounds channel_lower_bounds(const MaterialModel& material) {
  ChannelBounds b;
  if (material.anisotropic()) {
    b.c_m = material.C->eigen_bounds().first;
    b.h_m = material.H->eigen_bounds().first;
    b.l_m = material.L->eigen_bounds().first;
    return b;
  }
  const IsotropicModuli& m = material.iso;
  b.c_m = std::min(2.0 * m.mu_e, 2.0 * m.mu_e + 3.0 * m.lambda_e);
  if (material.variant == ModelVariant::DevDev) {
    b.h_m = 2.0 * m.mu_h;                    // on deviatoric symmetric tensors
    b.l_m = std::min(m.alpha_1, m.alpha_2);  // on trace-free curl tensors
  } else {
    b.h_m = std::min(2.0 * m.mu_h, 2.0 * m.mu_h + 3.0 * m.lambda_h);
    b.l_m = std::min({m.alpha_1, m.alpha_2, 3.0 * m.alpha_3});
  }
  return b;
}

double elastic_micro_lower_bound(double c_m, double h_m) {
  if (c_m <= 0.0) return 0.0;
  if (h_m <= 0.0) return 0.0;
  const double delta = (-h_m + std::sqrt(h_m * h_m + 4.0 * c_m * c_m)) / (2.0 * c_m);
  return c_m * (1.0 - delta);
}

EigResult degenerate_micro_experiment(const Grid& grid, const EigOptions& opts) {
  MaterialModel unit;  // all moduli 1; only the channel split matters here
  SystemMatrices sm = assemble_system(grid, unit);
  Csr B = sm.K_C;  // energy without the micro-strain channel
  B.add_scaled(sm.K_L, 1.0);
  B.add_scaled(sm.M, 1.0);  // stationary form M + K with H dropped
  return pencil_smallest(B, sm.Z, opts);
}

}  // namespace mmx
