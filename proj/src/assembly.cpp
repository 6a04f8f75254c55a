#include "micromorphx/assembly.hpp"

#include <filesystem>
#include <stdexcept>

namespace mmx {

namespace {

constexpr double kEps[3][3][3] = {
    {{0, 0, 0}, {0, 0, 1}, {0, -1, 0}},
    {{0, 0, -1}, {0, 0, 0}, {1, 0, 0}},
    {{0, 1, 0}, {-1, 0, 0}, {0, 0, 0}},
};

int primitive_comps(Primitive p, int ncomp) {
  switch (p) {
    case Primitive::Value: return ncomp;
    case Primitive::Gradient: return 3 * ncomp;
    case Primitive::Curl: return 9;
  }
  return 0;
}

// Local evaluation matrix of one primitive at one Gauss point; local dofs are
// node-major (ncomp * a + c).
Eigen::MatrixXd local_operator(const ElementTables& t, int q, Primitive p, int ncomp) {
  const int ldofs = 8 * ncomp;
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(primitive_comps(p, ncomp), ldofs);
  for (int a = 0; a < 8; ++a) {
    switch (p) {
      case Primitive::Value:
        for (int c = 0; c < ncomp; ++c) B(c, ncomp * a + c) = t.N[q][a];
        break;
      case Primitive::Gradient:
        for (int c = 0; c < ncomp; ++c)
          for (int ax = 0; ax < 3; ++ax) B(3 * c + ax, ncomp * a + c) = t.dN[q][a][ax];
        break;
      case Primitive::Curl:
        if (ncomp != 9) throw std::invalid_argument("rowwise curl needs a tensor field");
        for (int r = 0; r < 3; ++r)
          for (int jj = 0; jj < 3; ++jj)
            for (int l = 0; l < 3; ++l)
              for (int m = 0; m < 3; ++m)
                if (kEps[jj][l][m] != 0.0)
                  B(3 * r + jj, 9 * a + 3 * r + m) += kEps[jj][l][m] * t.dN[q][a][l];
        break;
    }
  }
  return B;
}

Eigen::MatrixXd element_gram(const ElementTables& t, Primitive p, int ncomp,
                             const Eigen::MatrixXd& weight) {
  const int ldofs = 8 * ncomp;
  Eigen::MatrixXd E = Eigen::MatrixXd::Zero(ldofs, ldofs);
  for (int q = 0; q < 8; ++q) {
    const Eigen::MatrixXd B = local_operator(t, q, p, ncomp);
    E += t.w * B.transpose() * weight * B;
  }
  return E;
}

// Neighborhood pattern: every free dof couples with every free dof living on
// one of the <= 27 surrounding nodes. A superset of any one channel's
// coupling, which lets all operators of one space share the pattern.
void neighbor_nodes(const Grid& g, int node, std::vector<int>& out) {
  out.clear();
  auto [i, j, k] = g.node_ijk(node);
  for (int dk = -1; dk <= 1; ++dk)
    for (int dj = -1; dj <= 1; ++dj)
      for (int di = -1; di <= 1; ++di) {
        const int ni = i + di, nj = j + dj, nk = k + dk;
        if (ni < 0 || nj < 0 || nk < 0 || ni > g.nx || nj > g.ny || nk > g.nz) continue;
        out.push_back(g.node_id(ni, nj, nk));
      }
}

Csr structured_pattern(const Grid& g, const DofMap& m) {
  std::vector<std::vector<int>> rows(m.n_free());
#pragma omp parallel
  {
    std::vector<int> nbr;
#pragma omp for schedule(static)
    for (int f = 0; f < m.n_free(); ++f) {
      const int node = m.free_to_full[f] / m.ncomp;
      neighbor_nodes(g, node, nbr);
      auto& row = rows[f];
      row.reserve(nbr.size() * m.ncomp);
      for (int nb : nbr)
        for (int c = 0; c < m.ncomp; ++c) {
          const int ff = m.full_to_free[m.ncomp * nb + c];
          if (ff >= 0) row.push_back(ff);
        }
    }
  }
  return csr_from_rows(m.n_free(), m.n_free(), rows);
}

Csr combined_pattern(const Grid& g, const DofMap& mu, const DofMap& mP) {
  const int nu = mu.n_free(), nP = mP.n_free();
  std::vector<std::vector<int>> rows(nu + nP);
#pragma omp parallel
  {
    std::vector<int> nbr;
#pragma omp for schedule(static)
    for (int f = 0; f < nu + nP; ++f) {
      const bool urow = f < nu;
      const int node = urow ? mu.free_to_full[f] / 3 : mP.free_to_full[f - nu] / 9;
      neighbor_nodes(g, node, nbr);
      auto& row = rows[f];
      row.reserve(nbr.size() * 12);
      for (int nb : nbr) {
        for (int c = 0; c < 3; ++c) {
          const int ff = mu.full_to_free[3 * nb + c];
          if (ff >= 0) row.push_back(ff);
        }
        for (int c = 0; c < 9; ++c) {
          const int ff = mP.full_to_free[9 * nb + c];
          if (ff >= 0) row.push_back(nu + ff);
        }
      }
    }
  }
  return csr_from_rows(nu + nP, nu + nP, rows);
}

// Scatter one cell's dense element block. rowmap[l] is the global free row of
// local dof l, or -1 when constrained.
void scatter_cell(Csr& A, const Eigen::MatrixXd& E, const std::vector<int>& rowmap,
                  bool atomic) {
  const int ld = static_cast<int>(rowmap.size());
  for (int lr = 0; lr < ld; ++lr) {
    const int r = rowmap[lr];
    if (r < 0) continue;
    for (int lc = 0; lc < ld; ++lc) {
      const int c = rowmap[lc];
      if (c < 0) continue;
      const auto idx = A.find(r, c);
      const double v = E(lr, lc);
      if (atomic) {
#pragma omp atomic
        A.val[idx] += v;
      } else {
        A.val[idx] += v;
      }
    }
  }
}

void local_free_map(const Grid& g, const DofMap& m, int cell, std::vector<int>& rowmap) {
  rowmap.resize(8 * m.ncomp);
  for (int a = 0; a < 8; ++a) {
    const int node = g.cell_node(cell, a);
    for (int c = 0; c < m.ncomp; ++c) rowmap[m.ncomp * a + c] = m.full_to_free[m.ncomp * node + c];
  }
}

void assemble_into(Csr& A, const Grid& g, const DofMap& m, const Eigen::MatrixXd& E,
                   bool serial) {
  if (serial) {
    std::vector<int> rowmap;
    for (int cell = 0; cell < g.n_cells(); ++cell) {
      local_free_map(g, m, cell, rowmap);
      scatter_cell(A, E, rowmap, false);
    }
    return;
  }
#pragma omp parallel
  {
    std::vector<int> rowmap;
#pragma omp for schedule(static)
    for (int cell = 0; cell < g.n_cells(); ++cell) {
      local_free_map(g, m, cell, rowmap);
      scatter_cell(A, E, rowmap, true);
    }
  }
}

}  // namespace

Csr assemble_gram(const Grid& grid, const DofMap& map, Primitive primitive,
                  const Eigen::MatrixXd& weight, bool serial) {
  const int pc = primitive_comps(primitive, map.ncomp);
  if (weight.rows() != pc || weight.cols() != pc)
    throw std::invalid_argument("channel weight size mismatch");
  const auto t = element_tables(grid);
  const Eigen::MatrixXd E = element_gram(t, primitive, map.ncomp, weight);
  Csr A = structured_pattern(grid, map);
  assemble_into(A, grid, map, E, serial);
  return A;
}

Csr assemble_mass(const Grid& grid, const DofMap& map, bool serial) {
  return assemble_gram(grid, map, Primitive::Value,
                       Eigen::MatrixXd::Identity(map.ncomp, map.ncomp), serial);
}

VectorXd assemble_load(const Grid& grid, const DofMap& map, const QpField& source) {
  if (source.ncomp != map.ncomp || source.n_points() != grid.n_cells() * 8)
    throw std::invalid_argument("source layout mismatch");
  const auto t = element_tables(grid);
  VectorXd F = VectorXd::Zero(map.n_free());
#pragma omp parallel
  {
    std::vector<int> rowmap;
#pragma omp for schedule(static)
    for (int cell = 0; cell < grid.n_cells(); ++cell) {
      local_free_map(grid, map, cell, rowmap);
      for (int q = 0; q < 8; ++q) {
        const double* s = source.data.data() + (static_cast<long>(cell) * 8 + q) * map.ncomp;
        for (int a = 0; a < 8; ++a)
          for (int c = 0; c < map.ncomp; ++c) {
            const int r = rowmap[map.ncomp * a + c];
            if (r < 0) continue;
            const double v = t.w * t.N[q][a] * s[c];
#pragma omp atomic
            F[r] += v;
          }
      }
    }
  }
  return F;
}

VectorXd SystemMatrices::pack(const VectorXd& u_full, const VectorXd& P_full) const {
  VectorXd q(n);
  q.head(nu) = map_u.gather(u_full);
  q.tail(nP) = map_P.gather(P_full);
  return q;
}

void SystemMatrices::unpack(const VectorXd& q, VectorXd& u_full, VectorXd& P_full) const {
  u_full = map_u.scatter(q.head(nu));
  P_full = map_P.scatter(q.tail(nP));
}

SystemMatrices assemble_system(const Grid& grid, const MaterialModel& material) {
  auto report = material.validate();
  if (!report.ok)
    throw std::invalid_argument("invalid material parameters:\n" + report.summary());
  const ChannelWeights W = material.weights();  // also rejects inequality-only variants

  SystemMatrices sm;
  sm.grid = grid;
  sm.material = material;
  sm.map_u = build_dof_map(grid, FieldKind::Vector, Constraint::DisplacementZero);
  sm.map_P = build_dof_map(grid, FieldKind::Tensor, Constraint::TangentialZero);
  sm.nu = sm.map_u.n_free();
  sm.nP = sm.map_P.n_free();
  sm.n = sm.nu + sm.nP;

  const auto t = element_tables(grid);
  constexpr int LD = 96;  // 24 displacement + 72 micro-distortion local dofs
  Eigen::MatrixXd EC = Eigen::MatrixXd::Zero(LD, LD), EH = EC, EL = EC, EM = EC, EZ = EC;
  for (int q = 0; q < 8; ++q) {
    Eigen::MatrixXd Bval_u = Eigen::MatrixXd::Zero(3, LD);
    Eigen::MatrixXd Bgrad_u = Eigen::MatrixXd::Zero(9, LD);
    Eigen::MatrixXd Bval_P = Eigen::MatrixXd::Zero(9, LD);
    Eigen::MatrixXd Bcurl_P = Eigen::MatrixXd::Zero(9, LD);
    for (int a = 0; a < 8; ++a) {
      for (int c = 0; c < 3; ++c) {
        Bval_u(c, 3 * a + c) = t.N[q][a];
        for (int ax = 0; ax < 3; ++ax) Bgrad_u(3 * c + ax, 3 * a + c) = t.dN[q][a][ax];
      }
      for (int c = 0; c < 9; ++c) Bval_P(c, 24 + 9 * a + c) = t.N[q][a];
      for (int r = 0; r < 3; ++r)
        for (int jj = 0; jj < 3; ++jj)
          for (int l = 0; l < 3; ++l)
            for (int m = 0; m < 3; ++m)
              if (kEps[jj][l][m] != 0.0)
                Bcurl_P(3 * r + jj, 24 + 9 * a + 3 * r + m) += kEps[jj][l][m] * t.dN[q][a][l];
    }
    const Eigen::MatrixXd B1 = Bgrad_u - Bval_P;  // grad u - P
    EC += t.w * B1.transpose() * W.C * B1;
    EH += t.w * Bval_P.transpose() * W.H * Bval_P;
    EL += t.w * Bcurl_P.transpose() * W.L * Bcurl_P;
    EM += t.w * (Bval_u.transpose() * Bval_u + Bval_P.transpose() * Bval_P);
    EZ += t.w * (Bval_u.transpose() * Bval_u + Bgrad_u.transpose() * Bgrad_u +
                 Bval_P.transpose() * Bval_P + Bcurl_P.transpose() * Bcurl_P);
  }

  Csr pattern = combined_pattern(grid, sm.map_u, sm.map_P);
  auto assemble_combined = [&](const Eigen::MatrixXd& E) {
    Csr A = pattern;  // copy shares rowptr/col layout
    A.set_zero();
#pragma omp parallel
    {
      std::vector<int> rowmap(LD);
#pragma omp for schedule(static)
      for (int cell = 0; cell < grid.n_cells(); ++cell) {
        for (int a = 0; a < 8; ++a) {
          const int node = grid.cell_node(cell, a);
          for (int c = 0; c < 3; ++c) rowmap[3 * a + c] = sm.map_u.full_to_free[3 * node + c];
          for (int c = 0; c < 9; ++c) {
            const int ff = sm.map_P.full_to_free[9 * node + c];
            rowmap[24 + 9 * a + c] = ff >= 0 ? sm.nu + ff : -1;
          }
        }
        scatter_cell(A, E, rowmap, true);
      }
    }
    return A;
  };

  sm.K_C = assemble_combined(EC);
  sm.K_H = assemble_combined(EH);
  sm.K_L = assemble_combined(EL);
  sm.M = assemble_combined(EM);
  sm.Z = assemble_combined(EZ);
  sm.K = sm.K_C;
  sm.K.add_scaled(sm.K_H, 1.0);
  sm.K.add_scaled(sm.K_L, 1.0);
  sm.M_inv_diag = sm.M.diagonal();
  for (int i = 0; i < sm.n; ++i) sm.M_inv_diag[i] = 1.0 / sm.M_inv_diag[i];
  return sm;
}

Csr assemble_resolvent(const SystemMatrices& sm) {
  Csr R = sm.M;
  R.add_scaled(sm.K, 1.0);
  return R;
}

VectorXd generator_apply(const SystemMatrices& sm, const VectorXd& w) {
  if (w.size() != 2 * sm.n) throw std::invalid_argument("state vector size mismatch");
  VectorXd out(2 * sm.n);
  out.head(sm.n) = w.tail(sm.n);
  VectorXd rhs(sm.n);
  kernels::spmv(sm.K, w.head(sm.n), rhs);
  VectorXd a = VectorXd::Zero(sm.n);
  CgOptions cg;
  cg.tol = 1e-12;
  auto res = cg_solve(sm.M, rhs, a, cg, &sm.M_inv_diag);
  if (!res.converged) throw std::runtime_error("mass solve failed in generator application");
  out.tail(sm.n) = -a;
  return out;
}

EigResult stiffness_smallest_eigenvalue(const SystemMatrices& sm, const EigOptions& opts) {
  return pencil_smallest(sm.K, sm.M, opts);
}

void dump_system(const SystemMatrices& sm, const std::string& directory) {
  namespace fs = std::filesystem;
  fs::create_directories(directory);
  dump_matrix_market(sm.K, (fs::path(directory) / "stiffness.mtx").string());
  dump_matrix_market(sm.M, (fs::path(directory) / "mass.mtx").string());
  Csr R = assemble_resolvent(sm);
  dump_matrix_market(R, (fs::path(directory) / "resolvent.mtx").string());
}

}  // namespace mmx
