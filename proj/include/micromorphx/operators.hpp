#pragma once

#include "micromorphx/grid.hpp"

namespace mmx {

/// Shape-function values and physical gradients at the 8 Gauss points of one
/// cell. Identical for every cell of a uniform grid, so computed once.
struct ElementTables {
  double N[8][8];      // [qp][node]
  double dN[8][8][3];  // [qp][node][axis]
  double w = 0.0;      // quadrature weight including the Jacobian
};

ElementTables element_tables(const Grid& grid);

/// Field sampled at all Gauss points: layout (cell * 8 + qp) * ncomp + comp.
struct QpField {
  int ncomp = 0;
  VectorXd data;
  int n_points() const { return ncomp ? static_cast<int>(data.size()) / ncomp : 0; }
};

// Discrete differential operators: trilinear nodal field in, Gauss-point
// samples out. Grad and Curl act rowwise on vector/tensor fields.
QpField discrete_grad(const Grid& grid, const VectorXd& scalar_nodal);
QpField discrete_Grad(const Grid& grid, const VectorXd& vector_nodal);   // 9 comps: (d_j v_i)
QpField discrete_Curl(const Grid& grid, const VectorXd& tensor_nodal);   // 9 comps: row i = curl P_i
QpField discrete_div(const Grid& grid, const VectorXd& vector_nodal);
QpField discrete_curl(const Grid& grid, const VectorXd& vector_nodal);   // 3 comps
QpField qp_values(const Grid& grid, const VectorXd& nodal, int ncomp);

/// Gauss-weighted approximation of the volume integral of <a, b>; exact for
/// integrands of tensor-product degree <= 3 per axis.
double l2_inner(const Grid& grid, const QpField& a, const QpField& b);

namespace ref {
double l2_inner(const Grid& grid, const QpField& a, const QpField& b);
}

/// Gauss positions of one cell, matching QpField ordering.
std::array<Vec3, 8> cell_gauss_points(const Grid& grid, int cell);

}  // namespace mmx
