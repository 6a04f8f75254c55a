#pragma once

#include <cstdint>
#include <optional>

#include "micromorphx/sparse.hpp"

namespace mmx {

struct CgOptions {
  double tol = 1e-10;       // on ||b - A x|| / ||b||
  int max_iterations = 0;   // 0: 10 * nrows + 100
  bool jacobi = true;
};

struct CgResult {
  bool converged = false;
  int iterations = 0;
  double rel_residual = 0.0;
};

/// Preconditioned conjugate gradients; x carries the initial guess in and the
/// solution out. inv_diag, when given, overrides the Jacobi diagonal.
CgResult cg_solve(const Csr& A, const VectorXd& b, VectorXd& x, const CgOptions& opts = {},
                  const VectorXd* inv_diag = nullptr);

struct EigOptions {
  double rq_tol = 1e-10;   // relative Rayleigh-quotient change
  int max_outer = 600;     // cap only; clustered low spectra need a few hundred
  double cg_tol = 1e-9;
  int cg_max = 0;
  std::uint64_t seed = 42;
};

struct EigResult {
  double lambda = 0.0;
  int iterations = 0;
  bool converged = false;    // Rayleigh-quotient criterion met
  bool solver_ok = true;     // inner solves behaved (false hints at a singular matrix)
  double last_change = 0.0;
  VectorXd x;                // minimizer / maximizer, unit denominator norm
};

/// Smallest lambda of D x = lambda N x (D, N symmetric positive semidefinite,
/// N definite) by inverse iteration with CG inner solves. x0 warm-starts the
/// iteration, e.g. with a solution prolonged from a coarser grid.
EigResult pencil_smallest(const Csr& D, const Csr& N, const EigOptions& opts = {},
                          const VectorXd* x0 = nullptr);

/// Largest lambda of A x = lambda B x (B definite) by power iteration with CG
/// solves on B; fixed step count, used for time-step limits.
EigResult pencil_largest(const Csr& A, const Csr& B, int steps = 50,
                         const EigOptions& opts = {}, const VectorXd* x0 = nullptr);

}  // namespace mmx
