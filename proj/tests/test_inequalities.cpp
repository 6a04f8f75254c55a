#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "micromorphx/inequalities.hpp"

using namespace mmx;

namespace {

double quad_form(const Csr& A, const VectorXd& x) {
  VectorXd y(A.nrows);
  kernels::spmv(A, x, y);
  return x.dot(y);
}

// Smallest generalized eigenvalue of the discrete Dirichlet Laplacian with
// consistent mass on the unit interval, n cells; the 3-D value is three times
// this (tensor-product separation).
double poincare_lambda_3d(int n) {
  const double h = 1.0 / n;
  const double c = std::cos(M_PI * h);
  return 3.0 * (6.0 / (h * h)) * (1.0 - c) / (2.0 + c);
}

// The estimated constant must actually bound random fields.
void check_validity(InequalityTag tag, const Grid& grid, std::uint64_t seed) {
  const ConstantEstimate est = estimate_constant(tag, grid);
  REQUIRE(!est.degenerate);
  REQUIRE(est.constant > 0.0);
  const InequalityPencil pencil = build_pencil(tag, grid);
  std::mt19937_64 rng(seed);
  for (int trial = 0; trial < 100; ++trial) {
    const VectorXd x = testhelp::random_vec(rng, pencil.map.n_free());
    const double N = quad_form(pencil.numerator, x);
    const double D = quad_form(pencil.denominator, x);
    CHECK(N <= est.constant * est.constant * D * (1.0 + 1e-8) + 1e-10 * (N + D));
  }
}

}  // namespace

TEST_CASE("tag names round-trip") {
  for (InequalityTag tag : all_tags()) {
    const auto back = tag_from_name(tag_name(tag));
    REQUIRE(back.has_value());
    CHECK(*back == tag);
  }
  CHECK(!tag_from_name("hardy").has_value());
  CHECK(std::string(tag_name(InequalityTag::Poincare)) == "poincare");
  CHECK(std::string(tag_name(InequalityTag::DevsymDevcurl)) == "devsym_devcurl");
  CHECK(std::string(tag_name(InequalityTag::SymPSymCurl)) == "symp_symcurl");
}

TEST_CASE("scalar embedding constant matches the closed-form discrete spectrum") {
  // cross-check the closed form itself against an independently computed value
  CHECK(poincare_lambda_3d(4) == doctest::Approx(31.159926015664).epsilon(1e-10));
  CHECK(poincare_lambda_3d(8) == doctest::Approx(29.991241968742).epsilon(1e-10));

  for (int n : {4, 8}) {
    CAPTURE(n);
    const ConstantEstimate est = estimate_constant(InequalityTag::Poincare, build_grid({n, n, n}));
    CHECK(!est.degenerate);
    CHECK(est.classification == "ok");
    CHECK(est.lambda_min == doctest::Approx(poincare_lambda_3d(n)).epsilon(1e-8));
    CHECK(est.constant == doctest::Approx(1.0 / std::sqrt(poincare_lambda_3d(n))).epsilon(1e-8));
    CHECK(est.n == std::array<int, 3>{n, n, n});
  }

  // discrete values approach the continuum limit 1/sqrt(3 pi^2) from below
  const double limit = 1.0 / std::sqrt(3.0 * M_PI * M_PI);
  CHECK(1.0 / std::sqrt(poincare_lambda_3d(4)) < 1.0 / std::sqrt(poincare_lambda_3d(8)));
  CHECK(1.0 / std::sqrt(poincare_lambda_3d(8)) < limit);
}

TEST_CASE("gradient-control constant on the coarse grid") {
  const ConstantEstimate est = estimate_constant(InequalityTag::Korn, build_grid({4, 4, 4}));
  CHECK(!est.degenerate);
  CHECK(est.constant == doctest::Approx(1.40334).epsilon(1e-4));
}

TEST_CASE("estimated constants are valid bounds on random fields") {
  const Grid grid = build_grid({3, 3, 3});
  check_validity(InequalityTag::Poincare, grid, 21);
  check_validity(InequalityTag::Korn, grid, 22);
  check_validity(InequalityTag::Maxwell, grid, 23);
  check_validity(InequalityTag::DevsymGrad, grid, 24);
  check_validity(InequalityTag::SymCurl, grid, 25);
  check_validity(InequalityTag::DevCurl, grid, 26);
  check_validity(InequalityTag::DevsymDevcurl, grid, 27);
}

TEST_CASE("eigenvalues shrink (constants grow) under nested refinement") {
  for (InequalityTag tag : {InequalityTag::Poincare, InequalityTag::Korn}) {
    CAPTURE(tag_name(tag));
    const ConstantEstimate coarse = estimate_constant(tag, build_grid({2, 2, 2}));
    const ConstantEstimate fine = estimate_constant(tag, build_grid({4, 4, 4}));
    CHECK(fine.lambda_min <= coarse.lambda_min * (1.0 + 1e-8));
    CHECK(fine.constant >= coarse.constant * (1.0 - 1e-8));
  }
}

TEST_CASE("curl-deviator control: finite constant despite the shared kernel") {
  const ConstantEstimate est = estimate_constant(InequalityTag::DevCurl, build_grid({4, 4, 4}));
  CHECK(!est.degenerate);
  CHECK(est.constant == doctest::Approx(1.6628).epsilon(1e-3));
}

TEST_CASE("compatible-channel constants on the coarse grid") {
  const ConstantEstimate sc = estimate_constant(InequalityTag::SymCurl, build_grid({4, 4, 4}));
  CHECK(!sc.degenerate);
  CHECK(sc.constant == doctest::Approx(0.748).epsilon(2e-3));

  const ConstantEstimate dd =
      estimate_constant(InequalityTag::DevsymDevcurl, build_grid({4, 4, 4}));
  CHECK(!dd.degenerate);
  CHECK(dd.constant == doctest::Approx(1.6749).epsilon(1e-3));
}

TEST_CASE("channel projections only weaken the denominator") {
  // |dev sym P| <= |sym P| and |dev Curl P| <= |Curl P| pointwise, so the
  // fully projected denominator Gram sits below the unprojected one.
  const Grid grid = build_grid({3, 3, 3});
  const InequalityPencil strong = build_pencil(InequalityTag::SymCurl, grid);
  const InequalityPencil weak = build_pencil(InequalityTag::DevsymPDevsymCurl, grid);
  REQUIRE(strong.map.n_free() == weak.map.n_free());

  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    const VectorXd x = testhelp::random_vec(rng, strong.map.n_free());
    const double d_strong = quad_form(strong.denominator, x);
    const double d_weak = quad_form(weak.denominator, x);
    CHECK(d_weak <= d_strong * (1.0 + 1e-12) + 1e-12);
  }
}

TEST_CASE("spherical witness annihilates the deviatoric-micro denominators") {
  // P = phi * Id with a scalar hat function phi: dev sym P = 0 and Curl P is
  // skew, so every denominator built from dev sym P and (dev) sym Curl P
  // vanishes identically while the numerator stays positive.
  const Grid grid = build_grid({4, 4, 4});
  VectorXd phi = VectorXd::Zero(grid.n_nodes());
  for (int node = 0; node < grid.n_nodes(); ++node) {
    const auto ba = grid.boundary_axes(node);
    if (!ba[0] && !ba[1] && !ba[2]) {
      const Vec3 x = grid.node_pos(node);
      phi[node] = std::sin(M_PI * x[0]) * std::sin(M_PI * x[1]) * std::sin(M_PI * x[2]);
    }
  }
  VectorXd P_full = VectorXd::Zero(9 * grid.n_nodes());
  for (int node = 0; node < grid.n_nodes(); ++node)
    for (int d = 0; d < 3; ++d) P_full[9 * node + 3 * d + d] = phi[node];

  for (InequalityTag tag : {InequalityTag::DevsymPSymCurl, InequalityTag::DevsymPDevsymCurl}) {
    CAPTURE(tag_name(tag));
    const InequalityPencil pencil = build_pencil(tag, grid);
    VectorXd P_c = P_full;
    pencil.map.apply_bc(P_c);
    const VectorXd x = pencil.map.gather(P_c);
    const double N = quad_form(pencil.numerator, x);
    const double D = quad_form(pencil.denominator, x);
    REQUIRE(N > 0.0);
    CHECK(std::abs(D) <= 1e-14 * N);

    // the estimator must flag the pencil instead of inventing a constant
    const ConstantEstimate est = estimate_constant(tag, grid);
    CHECK(est.degenerate);
    CHECK(est.classification == "degenerate");
    CHECK(std::isinf(est.constant));
  }
}

TEST_CASE("symmetrized-curl denominators lose control under refinement") {
  const std::vector<Grid> levels = {build_grid({4, 4, 4}), build_grid({8, 8, 8})};
  EigOptions opts;
  opts.cg_max = 3000;  // bound the inner solves on the badly conditioned pencil
  const RefinementStudy study = refinement_study(InequalityTag::SymPSymCurl, levels, opts);
  REQUIRE(study.rows.size() == 2);
  CHECK(study.verdict != "WELL_POSED_EVIDENCE");
  if (!study.rows[0].degenerate && !study.rows[1].degenerate)
    CHECK(study.rows[1].constant > 1.5 * study.rows[0].constant);
}

TEST_CASE("refinement study: stable constants give well-posed evidence") {
  const std::vector<Grid> levels = {build_grid({2, 2, 2}), build_grid({4, 4, 4}),
                                    build_grid({8, 8, 8})};
  const RefinementStudy study = refinement_study(InequalityTag::Korn, levels);
  REQUIRE(study.rows.size() == 3);
  CHECK(study.verdict == "WELL_POSED_EVIDENCE");
  for (const ConstantEstimate& row : study.rows) {
    CHECK(!row.degenerate);
    CHECK(row.classification == "WELL_POSED_EVIDENCE");
  }
  // the finest level reproduces its standalone estimate
  CHECK(study.rows[2].constant == doctest::Approx(1.41357).epsilon(1e-4));
}

TEST_CASE("refinement study rejects non-nested level lists") {
  CHECK_THROWS_AS(
      refinement_study(InequalityTag::Korn, {build_grid({3, 3, 3}), build_grid({4, 4, 4})}),
      std::invalid_argument);
  CHECK_THROWS_AS(refinement_study(InequalityTag::Korn,
                                   {build_grid({2, 2, 2}, {1, 1, 1}),
                                    build_grid({4, 4, 4}, {2, 1, 1})}),
                  std::invalid_argument);
  CHECK_THROWS_AS(refinement_study(InequalityTag::Korn, {}), std::invalid_argument);
}
