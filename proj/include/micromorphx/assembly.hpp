#pragma once

#include <string>

#include "micromorphx/material.hpp"
#include "micromorphx/operators.hpp"
#include "micromorphx/solvers.hpp"
#include "micromorphx/sparse.hpp"

namespace mmx {

/// Which cell-local evaluation a Gram matrix integrates. Value and Gradient
/// exist for every field kind; Curl acts rowwise on tensor fields (use a
/// channel weight on Gradient for the curl/divergence of a vector field).
enum class Primitive { Value, Gradient, Curl };

/// Gram matrix on the free dofs of one field: sum over Gauss points of
/// w * (B x)' W (B x), with B the primitive evaluation and W a constant
/// positive semidefinite channel weight (sym/dev projectors, curl extraction,
/// identity, ...). Runs cell-parallel with atomic scatter; `serial` switches
/// to the reference single-thread path.
Csr assemble_gram(const Grid& grid, const DofMap& map, Primitive primitive,
                  const Eigen::MatrixXd& weight, bool serial = false);

Csr assemble_mass(const Grid& grid, const DofMap& map, bool serial = false);

/// Consistent load vector on free dofs: F_i = integral of <S, phi_i> for a
/// source sampled at Gauss points.
VectorXd assemble_load(const Grid& grid, const DofMap& map, const QpField& source);

/// All sparse operators of the coupled (u, P) problem on free dofs, sharing
/// one sparsity pattern so they can be combined entry-wise. Ordering: the nu
/// free displacement dofs first, then the nP free micro-distortion dofs.
struct SystemMatrices {
  Grid grid;
  MaterialModel material;
  DofMap map_u;  // vector field, all components pinned on the boundary
  DofMap map_P;  // tensor field, rowwise tangential trace pinned
  int nu = 0, nP = 0, n = 0;

  Csr K;    // stiffness: twice the potential energy as a quadratic form
  Csr K_C;  // elastic channel    <C sym(grad u - P), sym(grad u - P)>
  Csr K_H;  // micro-strain channel
  Csr K_L;  // dislocation (curl) channel
  Csr M;    // consistent block mass on (u, P)
  Csr Z;    // reference norm: H1 on u, H(Curl) on P
  VectorXd M_inv_diag;

  VectorXd pack(const VectorXd& u_full, const VectorXd& P_full) const;
  void unpack(const VectorXd& q, VectorXd& u_full, VectorXd& P_full) const;
  /// Split a combined free vector into its u / P free parts.
  VectorXd part_u(const VectorXd& q) const { return q.head(nu); }
  VectorXd part_P(const VectorXd& q) const { return q.tail(nP); }
};

/// Assembles stiffness (with its three energy channels), mass, and the
/// reference-norm Gram. Throws on invalid material or a variant without
/// dynamics support.
SystemMatrices assemble_system(const Grid& grid, const MaterialModel& material);

/// R = M + K, the matrix of the stationary system (identity pairing plus
/// energy pairing); symmetric positive definite when K is semidefinite.
Csr assemble_resolvent(const SystemMatrices& sm);

/// First-order evolution operator applied in the Galerkin sense:
/// w = [q; p] -> [p; -M^{-1} K q], mass solves by CG to 1e-12.
VectorXd generator_apply(const SystemMatrices& sm, const VectorXd& w);

/// Wall of lowest spectrum: smallest eigenvalue of K on free dofs (uniqueness
/// probe) computed against the mass.
EigResult stiffness_smallest_eigenvalue(const SystemMatrices& sm, const EigOptions& opts = {});

void dump_system(const SystemMatrices& sm, const std::string& directory);

}  // namespace mmx
