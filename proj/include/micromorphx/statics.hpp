#pragma once

#include "micromorphx/assembly.hpp"

namespace mmx {

/// Data of the stationary problem (I - A)w = w*: four nodal fields on the
/// full grid. Constrained entries are zeroed on use.
struct ResolventRhs {
  VectorXd u_star, v_star, P_star, K_star;
};

struct ResolventSolution {
  VectorXd u, v, P, K;       // full nodal layouts, boundary rows zero
  int cg_iterations = 0;
  double cg_residual = 0.0;
  double residual_X = 0.0;   // ||(I - A) w - w*||_X / ||w*||_X
};

/// Solves (M + K) q = M (v* + u*, K* + P*) by preconditioned CG, then
/// reconstructs the velocity pair v = u - u*, K = P - P*. Throws
/// std::runtime_error when CG fails to reach the tolerance.
ResolventSolution solve_resolvent(const SystemMatrices& sm, const ResolventRhs& rhs,
                                  double tol = 1e-10);

/// Energy inner product on first-order free states w = [q; p]: stiffness
/// pairing on the configuration half, mass pairing on the momentum half.
double inner_product_X(const SystemMatrices& sm, const VectorXd& w1, const VectorXd& w2);

/// max over random admissible states of |(Aw, w)_X| / (w, w)_X; the evolution
/// operator is conservative, so this measures only solver noise.
double check_dissipativity(const SystemMatrices& sm, int samples, std::uint64_t seed = 42);

/// Smallest eigenvalue of M + K against the reference-norm Gram Z. A positive
/// value certifies that the stationary form controls the full norm.
EigResult coercivity_lower_bound(const SystemMatrices& sm, const EigOptions& opts = {});

/// Smallest eigenvalues of the elastic / micro-strain / curl channel weights
/// on their natural domains.
struct ChannelBounds {
  double c_m = 0.0;  // elastic channel on symmetric tensors
  double h_m = 0.0;  // micro-strain channel (deviatoric part under DEV_DEV)
  double l_m = 0.0;  // curl channel
};
ChannelBounds channel_lower_bounds(const MaterialModel& material);

/// Explicit constant a1 with
///   a1 (|sym grad u|^2 + |sym P|^2)
///     <= <C sym(grad u - P), sym(grad u - P)> + <H sym P, sym P>
/// obtained from the channel minima c_m, h_m by optimizing the Young-split
/// parameter delta; the optimum solves c_m d^2 + h_m d - c_m = 0.
double elastic_micro_lower_bound(double c_m, double h_m);

/// Experiment: drop the micro-strain channel (H = 0) and report the smallest
/// eigenvalue of the remaining energy form against Z. Reported, not asserted:
/// a vanishing value flags the degeneracy of the stationary inner product
/// without the H term.
EigResult degenerate_micro_experiment(const Grid& grid, const EigOptions& opts = {});

}  // namespace mmx
