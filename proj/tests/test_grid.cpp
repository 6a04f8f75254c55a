#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "micromorphx/grid.hpp"

using namespace mmx;

TEST_CASE("grid counts and spacing") {
  Grid g = build_grid({2, 2, 2});
  CHECK(g.n_nodes() == 27);
  CHECK(g.n_cells() == 8);
  CHECK(g.cell_volume() == doctest::Approx(0.125).epsilon(1e-15));

  Grid r = build_grid({4, 2, 2}, {2.0, 1.0, 1.0});
  CHECK(r.n_nodes() == 45);  // (4+1)*(2+1)*(2+1)
  CHECK(r.n_cells() == 16);
  CHECK(r.hx() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(r.hy() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(r.hz() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(r.cell_volume() == doctest::Approx(0.125).epsilon(1e-15));
}

TEST_CASE("grid rejects degenerate input") {
  CHECK_THROWS_AS(build_grid({1, 2, 2}), std::invalid_argument);
  CHECK_THROWS_AS(build_grid({2, 1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(build_grid({2, 2, 0}), std::invalid_argument);
  CHECK_THROWS_AS(build_grid({2, 2, 2}, {0.0, 1.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(build_grid({2, 2, 2}, {1.0, -1.0, 1.0}), std::invalid_argument);
}

TEST_CASE("node numbering runs x fastest and round-trips") {
  Grid g = build_grid({3, 2, 4}, {1.0, 2.0, 0.5});
  CHECK(g.node_id(0, 0, 0) == 0);
  CHECK(g.node_id(1, 0, 0) == 1);
  CHECK(g.node_id(0, 1, 0) == g.npx());
  CHECK(g.node_id(0, 0, 1) == g.npx() * g.npy());
  for (int node = 0; node < g.n_nodes(); ++node) {
    auto [i, j, k] = g.node_ijk(node);
    CHECK(g.node_id(i, j, k) == node);
  }
  Vec3 p = g.node_pos(g.node_id(2, 1, 3));
  CHECK(p.x() == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(p.y() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(p.z() == doctest::Approx(0.375).epsilon(1e-15));
}

TEST_CASE("cell corners follow the bit pattern") {
  Grid g = build_grid({2, 2, 2});
  const int cell = g.cell_id(1, 0, 1);
  CHECK(g.cell_node(cell, 0) == g.node_id(1, 0, 1));
  CHECK(g.cell_node(cell, 1) == g.node_id(2, 0, 1));
  CHECK(g.cell_node(cell, 2) == g.node_id(1, 1, 1));
  CHECK(g.cell_node(cell, 4) == g.node_id(1, 0, 2));
  CHECK(g.cell_node(cell, 7) == g.node_id(2, 1, 2));
}

TEST_CASE("boundary axis detection") {
  Grid g = build_grid({2, 2, 2});
  auto corner = g.boundary_axes(g.node_id(0, 0, 0));
  CHECK(corner[0]);
  CHECK(corner[1]);
  CHECK(corner[2]);
  auto face = g.boundary_axes(g.node_id(1, 1, 2));
  CHECK_FALSE(face[0]);
  CHECK_FALSE(face[1]);
  CHECK(face[2]);
  auto interior = g.boundary_axes(g.node_id(1, 1, 1));
  CHECK_FALSE(interior[0]);
  CHECK_FALSE(interior[1]);
  CHECK_FALSE(interior[2]);
}

TEST_CASE("free dof counts on the smallest grid") {
  Grid g = build_grid({2, 2, 2});
  auto ms = build_dof_map(g, FieldKind::Scalar, Constraint::DisplacementZero);
  CHECK(ms.n_free() == 1);  // single interior node
  auto mv = build_dof_map(g, FieldKind::Vector, Constraint::DisplacementZero);
  CHECK(mv.n_free() == 3);
  // rowwise tangential trace: interior node keeps 9, each face center keeps
  // the column matching the face normal (3 comps), edges and corners none
  auto mt = build_dof_map(g, FieldKind::Tensor, Constraint::TangentialZero);
  CHECK(mt.n_free() == 9 + 6 * 3);
  CHECK_THROWS_AS(build_dof_map(g, FieldKind::Scalar, Constraint::TangentialZero),
                  std::invalid_argument);
}

TEST_CASE("tangential constraint keys on the column index") {
  Grid g = build_grid({3, 3, 3});
  auto m = build_dof_map(g, FieldKind::Tensor, Constraint::TangentialZero);
  const int face_x = g.node_id(0, 1, 2);  // on x=0 face only
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      const bool free = m.is_free(9 * face_x + 3 * r + c);
      CHECK(free == (c == 0));
    }
  const int edge = g.node_id(0, 0, 1);  // x=0 and y=0 faces
  for (int c = 0; c < 9; ++c) CHECK_FALSE(m.is_free(9 * edge + c));
}

TEST_CASE("gather/scatter round trip and bc application") {
  Grid g = build_grid({3, 2, 2});
  auto m = build_dof_map(g, FieldKind::Vector, Constraint::DisplacementZero);
  std::mt19937_64 rng(11);
  VectorXd full = testhelp::random_vec(rng, m.n_full());
  VectorXd free = m.gather(full);
  CHECK(free.size() == m.n_free());
  VectorXd back = m.scatter(free);
  for (int d = 0; d < m.n_full(); ++d) {
    if (m.is_free(d))
      CHECK(back[d] == full[d]);
    else
      CHECK(back[d] == 0.0);
  }
  VectorXd bc = full;
  m.apply_bc(bc);
  CHECK((bc - back).norm() == 0.0);
  m.apply_bc(bc);  // idempotent
  CHECK((bc - back).norm() == 0.0);
}

TEST_CASE("point evaluation reproduces trilinear functions") {
  Grid g = build_grid({3, 4, 2}, {1.5, 1.0, 2.0});
  auto f = [](double x, double y, double z) {
    return 2.0 + x + 3.0 * y - z + x * y + y * z + x * z + x * y * z;
  };
  VectorXd nodal(g.n_nodes());
  for (int node = 0; node < g.n_nodes(); ++node) {
    Vec3 p = g.node_pos(node);
    nodal[node] = f(p.x(), p.y(), p.z());
  }
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    Vec3 x(testhelp::uniform(rng, 0.0, 1.5), testhelp::uniform(rng, 0.0, 1.0),
           testhelp::uniform(rng, 0.0, 2.0));
    VectorXd v = point_eval(g, nodal, 1, x);
    CHECK(v[0] == doctest::Approx(f(x.x(), x.y(), x.z())).epsilon(1e-13));
  }
  // clamps instead of extrapolating
  VectorXd at_edge = point_eval(g, nodal, 1, Vec3(-0.5, 0.5, 0.5));
  VectorXd clamped = point_eval(g, nodal, 1, Vec3(0.0, 0.5, 0.5));
  CHECK(at_edge[0] == doctest::Approx(clamped[0]).epsilon(1e-14));
}

TEST_CASE("prolongation is exact on nested grids") {
  Grid coarse = build_grid({2, 2, 2});
  Grid fine = build_grid({4, 4, 4});
  VectorXd cf(3 * coarse.n_nodes());
  for (int node = 0; node < coarse.n_nodes(); ++node) {
    Vec3 p = coarse.node_pos(node);
    cf[3 * node + 0] = 1.0 + p.x() - p.y();
    cf[3 * node + 1] = p.y() * p.z();
    cf[3 * node + 2] = p.x() + 2.0 * p.z();
  }
  VectorXd ff = prolong_nodal(coarse, fine, cf, 3);
  CHECK(ff.size() == 3 * fine.n_nodes());
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    Vec3 x(testhelp::uniform(rng, 0.0, 1.0), testhelp::uniform(rng, 0.0, 1.0),
           testhelp::uniform(rng, 0.0, 1.0));
    VectorXd a = point_eval(coarse, cf, 3, x);
    VectorXd b = point_eval(fine, ff, 3, x);
    for (int c = 0; c < 3; ++c) CHECK(b[c] == doctest::Approx(a[c]).epsilon(1e-12));
  }
}
