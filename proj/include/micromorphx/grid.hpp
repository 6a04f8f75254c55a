#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

namespace mmx {

using Eigen::VectorXd;
using Vec3 = Eigen::Vector3d;

/// Axis-aligned box meshed into nx*ny*nz equal hexahedra with trilinear nodal
/// shape functions and a 2x2x2 Gauss rule per cell. Node ids run x-fastest.
struct Grid {
  int nx = 0, ny = 0, nz = 0;
  double Lx = 1.0, Ly = 1.0, Lz = 1.0;

  int npx() const { return nx + 1; }
  int npy() const { return ny + 1; }
  int npz() const { return nz + 1; }
  int n_nodes() const { return npx() * npy() * npz(); }
  int n_cells() const { return nx * ny * nz; }
  double hx() const { return Lx / nx; }
  double hy() const { return Ly / ny; }
  double hz() const { return Lz / nz; }
  double cell_volume() const { return hx() * hy() * hz(); }

  int node_id(int i, int j, int k) const { return i + npx() * (j + npy() * k); }
  std::array<int, 3> node_ijk(int node) const {
    return {node % npx(), (node / npx()) % npy(), node / (npx() * npy())};
  }
  Vec3 node_pos(int node) const {
    auto [i, j, k] = node_ijk(node);
    return {i * hx(), j * hy(), k * hz()};
  }
  int cell_id(int cx, int cy, int cz) const { return cx + nx * (cy + ny * cz); }
  std::array<int, 3> cell_ijk(int cell) const {
    return {cell % nx, (cell / nx) % ny, cell / (nx * ny)};
  }
  /// Node of local corner a (bit 0: +x, bit 1: +y, bit 2: +z).
  int cell_node(int cell, int a) const {
    auto [cx, cy, cz] = cell_ijk(cell);
    return node_id(cx + (a & 1), cy + ((a >> 1) & 1), cz + ((a >> 2) & 1));
  }
  /// Axes whose boundary faces contain the node (empty for interior nodes).
  std::array<bool, 3> boundary_axes(int node) const {
    auto [i, j, k] = node_ijk(node);
    return {i == 0 || i == nx, j == 0 || j == ny, k == 0 || k == nz};
  }
};

/// Throws std::invalid_argument for fewer than 2 cells per axis or
/// non-positive lengths.
Grid build_grid(std::array<int, 3> n, std::array<double, 3> lengths = {1.0, 1.0, 1.0});

enum class FieldKind { Scalar, Vector, Tensor };  // 1 / 3 / 9 components per node

inline int components(FieldKind k) {
  return k == FieldKind::Scalar ? 1 : (k == FieldKind::Vector ? 3 : 9);
}

enum class Constraint {
  DisplacementZero,  // every component vanishes at boundary nodes
  TangentialZero,    // components tangential to each containing boundary face vanish
};

/// Free/constrained bookkeeping for one nodal field. Tangential constraints
/// act on the column index of tensor entries (each row of P is a vector with
/// P_i x n = 0); at edges and corners the union of the face constraints
/// applies, which pins every component there.
struct DofMap {
  FieldKind kind = FieldKind::Scalar;
  Constraint constraint = Constraint::DisplacementZero;
  int ncomp = 1;
  std::vector<int> full_to_free;  // -1 where constrained
  std::vector<int> free_to_full;

  int n_full() const { return static_cast<int>(full_to_free.size()); }
  int n_free() const { return static_cast<int>(free_to_full.size()); }
  bool is_free(int full_dof) const { return full_to_free[full_dof] >= 0; }

  void apply_bc(VectorXd& field) const;
  VectorXd gather(const VectorXd& full) const;   // full -> free
  VectorXd scatter(const VectorXd& free) const;  // free -> full (zeros elsewhere)
};

DofMap build_dof_map(const Grid& grid, FieldKind kind, Constraint constraint);

/// Evaluate a nodal field at an arbitrary point of the box (trilinear within
/// the containing cell). Used for transferring fields between nested grids.
Eigen::VectorXd point_eval(const Grid& grid, const VectorXd& nodal, int ncomp, const Vec3& x);

/// Interpolate a coarse nodal field onto the nodes of a finer grid of the same
/// box. Exact when the grids are nested.
VectorXd prolong_nodal(const Grid& coarse, const Grid& fine, const VectorXd& coarse_field,
                       int ncomp);

}  // namespace mmx
