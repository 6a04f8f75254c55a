#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "micromorphx/statics.hpp"

using namespace mmx;

namespace {

// Random nodal fields satisfying the boundary constraints.
VectorXd random_admissible(std::mt19937_64& rng, const DofMap& map, double scale = 1.0) {
  VectorXd f = testhelp::random_vec(rng, map.n_full(), scale);
  map.apply_bc(f);
  return f;
}

ResolventRhs random_rhs(std::mt19937_64& rng, const SystemMatrices& sm) {
  ResolventRhs rhs;
  rhs.u_star = random_admissible(rng, sm.map_u);
  rhs.v_star = random_admissible(rng, sm.map_u);
  rhs.P_star = random_admissible(rng, sm.map_P);
  rhs.K_star = random_admissible(rng, sm.map_P);
  return rhs;
}

VectorXd pack_state(const SystemMatrices& sm, const VectorXd& u, const VectorXd& v,
                    const VectorXd& P, const VectorXd& K) {
  VectorXd w(2 * sm.n);
  w << sm.pack(u, P), sm.pack(v, K);
  return w;
}

}  // namespace

TEST_CASE("zero data gives the zero stationary solution") {
  const Grid grid = build_grid({3, 3, 3});
  const SystemMatrices sm = assemble_system(grid, MaterialModel{});
  ResolventRhs rhs;
  rhs.u_star = VectorXd::Zero(sm.map_u.n_full());
  rhs.v_star = VectorXd::Zero(sm.map_u.n_full());
  rhs.P_star = VectorXd::Zero(sm.map_P.n_full());
  rhs.K_star = VectorXd::Zero(sm.map_P.n_full());

  const ResolventSolution sol = solve_resolvent(sm, rhs);
  CHECK(sol.u.norm() == 0.0);
  CHECK(sol.v.norm() == 0.0);
  CHECK(sol.P.norm() == 0.0);
  CHECK(sol.K.norm() == 0.0);
}

TEST_CASE("manufactured solution is recovered to 1e-8 in the energy norm") {
  for (int cells : {3, 4}) {
    CAPTURE(cells);
    const Grid grid = build_grid({cells, cells, cells});
    const SystemMatrices sm = assemble_system(grid, MaterialModel{});
    std::mt19937_64 rng(100 + cells);

    // pick w = (u, 0, P, 0), hand the solver w* = w - Aw, expect w back
    const VectorXd u = random_admissible(rng, sm.map_u);
    const VectorXd P = random_admissible(rng, sm.map_P);
    const VectorXd q = sm.pack(u, P);
    VectorXd w(2 * sm.n);
    w << q, VectorXd::Zero(sm.n);
    const VectorXd Aw = generator_apply(sm, w);

    ResolventRhs rhs;
    rhs.u_star = u;
    rhs.P_star = P;
    sm.unpack(-Aw.tail(sm.n), rhs.v_star, rhs.K_star);

    const ResolventSolution sol = solve_resolvent(sm, rhs);
    const VectorXd diff = pack_state(sm, sol.u, sol.v, sol.P, sol.K) - w;
    const double rel =
        std::sqrt(inner_product_X(sm, diff, diff) / inner_product_X(sm, w, w));
    CHECK(rel <= 1e-8);
  }
}

TEST_CASE("random data: defect of (I - A) w against w* stays below 1e-8") {
  const Grid grid = build_grid({4, 4, 4});
  const SystemMatrices sm = assemble_system(grid, MaterialModel{});
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 3; ++trial) {
    const ResolventSolution sol = solve_resolvent(sm, random_rhs(rng, sm));
    CHECK(sol.residual_X <= 1e-8);
    CHECK(sol.cg_iterations > 0);
    CHECK(sol.cg_residual <= 1e-10);
  }
}

TEST_CASE("velocity reconstruction v = u - u*, K = P - P* is exact") {
  const Grid grid = build_grid({3, 3, 3});
  const SystemMatrices sm = assemble_system(grid, MaterialModel{});
  std::mt19937_64 rng(8);
  const ResolventRhs rhs = random_rhs(rng, sm);
  const ResolventSolution sol = solve_resolvent(sm, rhs);

  VectorXd us = rhs.u_star, Ps = rhs.P_star;
  sm.map_u.apply_bc(us);
  sm.map_P.apply_bc(Ps);
  CHECK((sol.v - (sol.u - us)).norm() == 0.0);
  CHECK((sol.K - (sol.P - Ps)).norm() == 0.0);
}

TEST_CASE("energy inner product: symmetric, definite, kinetic block decoupled") {
  const Grid grid = build_grid({3, 3, 3});
  const SystemMatrices sm = assemble_system(grid, MaterialModel{});
  std::mt19937_64 rng(9);

  for (int trial = 0; trial < 5; ++trial) {
    const VectorXd w1 = testhelp::random_vec(rng, 2 * sm.n);
    const VectorXd w2 = testhelp::random_vec(rng, 2 * sm.n);
    const double a = inner_product_X(sm, w1, w2);
    const double b = inner_product_X(sm, w2, w1);
    CHECK(std::abs(a - b) <= 1e-13 * (1.0 + std::abs(a)));
    CHECK(inner_product_X(sm, w1, w1) > 0.0);
  }

  // pure-kinetic state: (Aw, w)_X pairs momenta with a zero configuration
  VectorXd w = VectorXd::Zero(2 * sm.n);
  w.tail(sm.n) = testhelp::random_vec(rng, sm.n);
  const VectorXd Aw = generator_apply(sm, w);
  CHECK(inner_product_X(sm, Aw, w) == 0.0);
}

TEST_CASE("evolution operator is conservative: (Aw, w)_X vanishes") {
  const Grid grid = build_grid({4, 4, 4});
  const SystemMatrices sm = assemble_system(grid, MaterialModel{});
  const double worst = check_dissipativity(sm, 20);
  CHECK(worst <= 1e-10);

  // homogeneity: the normalized pairing ignores the amplitude of w
  std::mt19937_64 rng(10);
  VectorXd w(2 * sm.n);
  w << sm.pack(random_admissible(rng, sm.map_u), random_admissible(rng, sm.map_P)),
      sm.pack(random_admissible(rng, sm.map_u), random_admissible(rng, sm.map_P));
  auto ratio = [&](const VectorXd& probe) {
    return std::abs(inner_product_X(sm, generator_apply(sm, probe), probe)) /
           inner_product_X(sm, probe, probe);
  };
  CHECK(std::abs(ratio(w) - ratio(VectorXd(5.0 * w))) <= 1e-9);
}

TEST_CASE("stationary form is coercive over the reference norm") {
  EigResult coarse, fine;
  {
    const Grid grid = build_grid({2, 2, 2});
    const SystemMatrices sm = assemble_system(grid, MaterialModel{});
    coarse = coercivity_lower_bound(sm);
  }
  {
    const Grid grid = build_grid({4, 4, 4});
    const SystemMatrices sm = assemble_system(grid, MaterialModel{});
    fine = coercivity_lower_bound(sm);

    // eigen-consistency: random Rayleigh quotients stay above the bound
    std::mt19937_64 rng(11);
    const Csr R = assemble_resolvent(sm);
    for (int trial = 0; trial < 10; ++trial) {
      const VectorXd q = testhelp::random_vec(rng, sm.n);
      VectorXd Rq(sm.n), Zq(sm.n);
      kernels::spmv(R, q, Rq);
      kernels::spmv(sm.Z, q, Zq);
      CHECK(q.dot(Rq) >= fine.lambda * q.dot(Zq) * (1.0 - 1e-8));
    }
  }
  CHECK(coarse.converged);
  CHECK(fine.converged);
  CHECK(coarse.lambda > 0.0);
  CHECK(fine.lambda > 0.0);
  // richer nested space can only lower the minimum quotient
  CHECK(fine.lambda <= coarse.lambda * (1.0 + 1e-8));
}

TEST_CASE("coercivity holds for the deviatoric variant as well") {
  const Grid grid = build_grid({3, 3, 3});
  MaterialModel material;
  material.variant = ModelVariant::DevDev;
  const SystemMatrices sm = assemble_system(grid, material);
  const EigResult res = coercivity_lower_bound(sm);
  CHECK(res.converged);
  CHECK(res.lambda > 0.0);
}

TEST_CASE("channel minima of the default isotropic moduli") {
  MaterialModel material;  // all moduli 1, couple modulus 0
  const ChannelBounds full = channel_lower_bounds(material);
  CHECK(full.c_m == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(full.h_m == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(full.l_m == doctest::Approx(1.0).epsilon(1e-12));

  material.variant = ModelVariant::DevDev;
  const ChannelBounds dev = channel_lower_bounds(material);
  CHECK(dev.h_m == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(dev.l_m == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("explicit elastic/micro constant: optimal split and edge cases") {
  CHECK(elastic_micro_lower_bound(0.0, 1.0) == 0.0);
  CHECK(elastic_micro_lower_bound(1.0, 0.0) == 0.0);
  CHECK(elastic_micro_lower_bound(-1.0, 1.0) == 0.0);

  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const double c = testhelp::uniform(rng, 0.1, 5.0);
    const double h = testhelp::uniform(rng, 0.1, 5.0);
    const double a1 = elastic_micro_lower_bound(c, h);
    CHECK(a1 > 0.0);
    CHECK(a1 < c);
    // at the optimal split both branches of the bound coincide
    const double delta = 1.0 - a1 / c;
    CHECK(std::abs(a1 - (c + h - c / delta)) <= 1e-10 * (c + h));
  }
}

TEST_CASE("a1 bounds the elastic + micro energy from below on probe fields") {
  const Grid grid = build_grid({3, 3, 3});
  MaterialModel material;
  material.iso.mu_e = 1.3;
  material.iso.lambda_e = 0.4;
  material.iso.mu_h = 0.8;
  material.iso.lambda_h = 0.2;
  const SystemMatrices sm = assemble_system(grid, material);

  const ChannelBounds cb = channel_lower_bounds(material);
  const double a1 = elastic_micro_lower_bound(cb.c_m, cb.h_m);
  REQUIRE(a1 > 0.0);

  const Csr G_symgrad = assemble_gram(grid, sm.map_u, Primitive::Gradient, proj_sym9());
  const Csr G_symP = assemble_gram(grid, sm.map_P, Primitive::Value, proj_sym9());

  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const VectorXd ufree = testhelp::random_vec(rng, sm.nu);
    const VectorXd Pfree = testhelp::random_vec(rng, sm.nP);
    VectorXd q(sm.n);
    q << ufree, Pfree;

    VectorXd tmp(sm.nu);
    kernels::spmv(G_symgrad, ufree, tmp);
    double lhs = ufree.dot(tmp);
    VectorXd tmpP(sm.nP);
    kernels::spmv(G_symP, Pfree, tmpP);
    lhs += Pfree.dot(tmpP);

    VectorXd Kq(sm.n);
    kernels::spmv(sm.K_C, q, Kq);
    double rhs = q.dot(Kq);
    kernels::spmv(sm.K_H, q, Kq);
    rhs += q.dot(Kq);

    CHECK(a1 * lhs <= rhs * (1.0 + 1e-10));
  }
}

TEST_CASE("dropping the micro-strain channel: lowest quotient reported") {
  const Grid grid = build_grid({3, 3, 3});
  const EigResult res = degenerate_micro_experiment(grid);
  CHECK(res.lambda >= -1e-12);
  MESSAGE("H = 0 stationary quotient over the reference norm: ", res.lambda,
          " (converged = ", res.converged, ", inner solves ok = ", res.solver_ok, ")");
}
