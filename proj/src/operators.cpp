#include "micromorphx/operators.hpp"

#include <cmath>
#include <stdexcept>

namespace mmx {

ElementTables element_tables(const Grid& grid) {
  ElementTables t;
  t.w = grid.cell_volume() / 8.0;
  const double g = 1.0 / std::sqrt(3.0);
  const double inv_h[3] = {2.0 / grid.hx(), 2.0 / grid.hy(), 2.0 / grid.hz()};
  for (int q = 0; q < 8; ++q) {
    const double xi[3] = {(q & 1) ? g : -g, (q & 2) ? g : -g, (q & 4) ? g : -g};
    for (int a = 0; a < 8; ++a) {
      const double s[3] = {(a & 1) ? 1.0 : -1.0, (a & 2) ? 1.0 : -1.0, (a & 4) ? 1.0 : -1.0};
      const double f[3] = {1.0 + s[0] * xi[0], 1.0 + s[1] * xi[1], 1.0 + s[2] * xi[2]};
      t.N[q][a] = f[0] * f[1] * f[2] / 8.0;
      t.dN[q][a][0] = s[0] * f[1] * f[2] / 8.0 * inv_h[0];
      t.dN[q][a][1] = f[0] * s[1] * f[2] / 8.0 * inv_h[1];
      t.dN[q][a][2] = f[0] * f[1] * s[2] / 8.0 * inv_h[2];
    }
  }
  return t;
}

std::array<Vec3, 8> cell_gauss_points(const Grid& grid, int cell) {
  const double g = 1.0 / std::sqrt(3.0);
  auto [cx, cy, cz] = grid.cell_ijk(cell);
  std::array<Vec3, 8> pts;
  for (int q = 0; q < 8; ++q) {
    const double xi[3] = {(q & 1) ? g : -g, (q & 2) ? g : -g, (q & 4) ? g : -g};
    pts[q] = Vec3((cx + 0.5 + 0.5 * xi[0]) * grid.hx(), (cy + 0.5 + 0.5 * xi[1]) * grid.hy(),
                  (cz + 0.5 + 0.5 * xi[2]) * grid.hz());
  }
  return pts;
}

namespace {

void check_size(const Grid& grid, const VectorXd& nodal, int ncomp) {
  if (nodal.size() != static_cast<long>(grid.n_nodes()) * ncomp)
    throw std::invalid_argument("nodal field size mismatch");
}

// Evaluate per-component gradients: out comps = 3 * ncomp, ordered
// (comp, axis) -> 3 * comp + axis. For vectors this is exactly (Grad v)_ij.
QpField gradients(const Grid& grid, const VectorXd& nodal, int ncomp) {
  check_size(grid, nodal, ncomp);
  const auto t = element_tables(grid);
  QpField out;
  out.ncomp = 3 * ncomp;
  out.data.setZero(static_cast<long>(grid.n_cells()) * 8 * out.ncomp);
#pragma omp parallel for schedule(static)
  for (int cell = 0; cell < grid.n_cells(); ++cell) {
    int nodes[8];
    for (int a = 0; a < 8; ++a) nodes[a] = grid.cell_node(cell, a);
    for (int q = 0; q < 8; ++q) {
      double* dst = out.data.data() + (static_cast<long>(cell) * 8 + q) * out.ncomp;
      for (int a = 0; a < 8; ++a)
        for (int c = 0; c < ncomp; ++c) {
          const double v = nodal[ncomp * nodes[a] + c];
          dst[3 * c + 0] += t.dN[q][a][0] * v;
          dst[3 * c + 1] += t.dN[q][a][1] * v;
          dst[3 * c + 2] += t.dN[q][a][2] * v;
        }
    }
  }
  return out;
}

}  // namespace

QpField discrete_grad(const Grid& grid, const VectorXd& scalar_nodal) {
  return gradients(grid, scalar_nodal, 1);
}

QpField discrete_Grad(const Grid& grid, const VectorXd& vector_nodal) {
  return gradients(grid, vector_nodal, 3);
}

QpField qp_values(const Grid& grid, const VectorXd& nodal, int ncomp) {
  check_size(grid, nodal, ncomp);
  const auto t = element_tables(grid);
  QpField out;
  out.ncomp = ncomp;
  out.data.setZero(static_cast<long>(grid.n_cells()) * 8 * ncomp);
#pragma omp parallel for schedule(static)
  for (int cell = 0; cell < grid.n_cells(); ++cell) {
    int nodes[8];
    for (int a = 0; a < 8; ++a) nodes[a] = grid.cell_node(cell, a);
    for (int q = 0; q < 8; ++q) {
      double* dst = out.data.data() + (static_cast<long>(cell) * 8 + q) * ncomp;
      for (int a = 0; a < 8; ++a)
        for (int c = 0; c < ncomp; ++c) dst[c] += t.N[q][a] * nodal[ncomp * nodes[a] + c];
    }
  }
  return out;
}

QpField discrete_div(const Grid& grid, const VectorXd& vector_nodal) {
  QpField g = gradients(grid, vector_nodal, 3);
  QpField out;
  out.ncomp = 1;
  out.data.resize(g.n_points());
#pragma omp parallel for schedule(static)
  for (int p = 0; p < g.n_points(); ++p) {
    const double* src = g.data.data() + static_cast<long>(p) * 9;
    out.data[p] = src[0] + src[4] + src[8];
  }
  return out;
}

QpField discrete_curl(const Grid& grid, const VectorXd& vector_nodal) {
  QpField g = gradients(grid, vector_nodal, 3);
  QpField out;
  out.ncomp = 3;
  out.data.resize(static_cast<long>(g.n_points()) * 3);
#pragma omp parallel for schedule(static)
  for (int p = 0; p < g.n_points(); ++p) {
    const double* G = g.data.data() + static_cast<long>(p) * 9;  // G[3c+j] = d_j v_c
    double* dst = out.data.data() + static_cast<long>(p) * 3;
    dst[0] = G[3 * 2 + 1] - G[3 * 1 + 2];
    dst[1] = G[3 * 0 + 2] - G[3 * 2 + 0];
    dst[2] = G[3 * 1 + 0] - G[3 * 0 + 1];
  }
  return out;
}

QpField discrete_Curl(const Grid& grid, const VectorXd& tensor_nodal) {
  QpField g = gradients(grid, tensor_nodal, 9);  // comps (3r+c, axis) -> 3*(3r+c)+axis
  QpField out;
  out.ncomp = 9;
  out.data.resize(static_cast<long>(g.n_points()) * 9);
#pragma omp parallel for schedule(static)
  for (int p = 0; p < g.n_points(); ++p) {
    const double* G = g.data.data() + static_cast<long>(p) * 27;
    double* dst = out.data.data() + static_cast<long>(p) * 9;
    for (int r = 0; r < 3; ++r) {
      // row r of P is a vector with gradient G[3*(3r+c)+axis]
      auto d = [&](int c, int axis) { return G[3 * (3 * r + c) + axis]; };
      dst[3 * r + 0] = d(2, 1) - d(1, 2);
      dst[3 * r + 1] = d(0, 2) - d(2, 0);
      dst[3 * r + 2] = d(1, 0) - d(0, 1);
    }
  }
  return out;
}

double l2_inner(const Grid& grid, const QpField& a, const QpField& b) {
  if (a.ncomp != b.ncomp || a.data.size() != b.data.size())
    throw std::invalid_argument("quadrature field layout mismatch");
  const double w = grid.cell_volume() / 8.0;
  double acc = 0.0;
  const long n = a.data.size();
#pragma omp parallel for schedule(static) reduction(+ : acc)
  for (long i = 0; i < n; ++i) acc += a.data[i] * b.data[i];
  return w * acc;
}

namespace ref {
double l2_inner(const Grid& grid, const QpField& a, const QpField& b) {
  if (a.ncomp != b.ncomp || a.data.size() != b.data.size())
    throw std::invalid_argument("quadrature field layout mismatch");
  const double w = grid.cell_volume() / 8.0;
  double acc = 0.0;
  for (long i = 0; i < a.data.size(); ++i) acc += a.data[i] * b.data[i];
  return w * acc;
}
}  // namespace ref

}  // namespace mmx
