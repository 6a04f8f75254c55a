#include "micromorphx/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mmx {

Grid build_grid(std::array<int, 3> n, std::array<double, 3> lengths) {
  if (n[0] < 2 || n[1] < 2 || n[2] < 2)
    throw std::invalid_argument("grid needs at least 2 cells per axis");
  if (lengths[0] <= 0 || lengths[1] <= 0 || lengths[2] <= 0)
    throw std::invalid_argument("grid lengths must be positive");
  Grid g;
  g.nx = n[0];
  g.ny = n[1];
  g.nz = n[2];
  g.Lx = lengths[0];
  g.Ly = lengths[1];
  g.Lz = lengths[2];
  return g;
}

namespace {

bool component_free(const std::array<bool, 3>& axes, Constraint constraint, int column) {
  const bool on_boundary = axes[0] || axes[1] || axes[2];
  if (!on_boundary) return true;
  if (constraint == Constraint::DisplacementZero) return false;
  // tangential: the component survives only if every containing face has its
  // normal along this component's column axis
  for (int a = 0; a < 3; ++a)
    if (axes[a] && a != column) return false;
  return true;
}

}  // namespace

DofMap build_dof_map(const Grid& grid, FieldKind kind, Constraint constraint) {
  if (kind == FieldKind::Scalar && constraint == Constraint::TangentialZero)
    throw std::invalid_argument("tangential constraint is undefined for scalar fields");
  DofMap map;
  map.kind = kind;
  map.constraint = constraint;
  map.ncomp = components(kind);
  map.full_to_free.assign(static_cast<std::size_t>(grid.n_nodes()) * map.ncomp, -1);
  for (int node = 0; node < grid.n_nodes(); ++node) {
    const auto axes = grid.boundary_axes(node);
    for (int c = 0; c < map.ncomp; ++c) {
      const int column = c % 3;  // vectors: component; tensors: column within the row
      if (component_free(axes, constraint, kind == FieldKind::Scalar ? -1 : column)) {
        map.full_to_free[map.ncomp * node + c] = static_cast<int>(map.free_to_full.size());
        map.free_to_full.push_back(map.ncomp * node + c);
      }
    }
  }
  return map;
}

void DofMap::apply_bc(VectorXd& field) const {
  if (field.size() != n_full()) throw std::invalid_argument("field size mismatch");
  for (int d = 0; d < n_full(); ++d)
    if (full_to_free[d] < 0) field[d] = 0.0;
}

VectorXd DofMap::gather(const VectorXd& full) const {
  if (full.size() != n_full()) throw std::invalid_argument("field size mismatch");
  VectorXd out(n_free());
  for (int f = 0; f < n_free(); ++f) out[f] = full[free_to_full[f]];
  return out;
}

VectorXd DofMap::scatter(const VectorXd& free) const {
  if (free.size() != n_free()) throw std::invalid_argument("free vector size mismatch");
  VectorXd out = VectorXd::Zero(n_full());
  for (int f = 0; f < n_free(); ++f) out[free_to_full[f]] = free[f];
  return out;
}

Eigen::VectorXd point_eval(const Grid& grid, const VectorXd& nodal, int ncomp, const Vec3& x) {
  auto locate = [](double t, double h, int ncells) {
    int c = static_cast<int>(std::floor(t / h));
    c = std::clamp(c, 0, ncells - 1);
    return c;
  };
  // clamp to the box instead of extrapolating past it
  const double tx = std::clamp(x[0], 0.0, grid.Lx);
  const double ty = std::clamp(x[1], 0.0, grid.Ly);
  const double tz = std::clamp(x[2], 0.0, grid.Lz);
  const int cx = locate(tx, grid.hx(), grid.nx);
  const int cy = locate(ty, grid.hy(), grid.ny);
  const int cz = locate(tz, grid.hz(), grid.nz);
  const double rx = tx / grid.hx() - cx;  // in [0,1] within the cell
  const double ry = ty / grid.hy() - cy;
  const double rz = tz / grid.hz() - cz;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(ncomp);
  const int cell = grid.cell_id(cx, cy, cz);
  for (int a = 0; a < 8; ++a) {
    const double wx = (a & 1) ? rx : 1.0 - rx;
    const double wy = (a & 2) ? ry : 1.0 - ry;
    const double wz = (a & 4) ? rz : 1.0 - rz;
    const int node = grid.cell_node(cell, a);
    for (int c = 0; c < ncomp; ++c) out[c] += wx * wy * wz * nodal[ncomp * node + c];
  }
  return out;
}

VectorXd prolong_nodal(const Grid& coarse, const Grid& fine, const VectorXd& coarse_field,
                       int ncomp) {
  if (coarse_field.size() != static_cast<long>(coarse.n_nodes()) * ncomp)
    throw std::invalid_argument("coarse field size mismatch");
  VectorXd out(static_cast<long>(fine.n_nodes()) * ncomp);
#pragma omp parallel for schedule(static)
  for (int node = 0; node < fine.n_nodes(); ++node) {
    const auto v = point_eval(coarse, coarse_field, ncomp, fine.node_pos(node));
    for (int c = 0; c < ncomp; ++c) out[ncomp * node + c] = v[c];
  }
  return out;
}

}  // namespace mmx
