#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <random>

#include "helpers.hpp"
#include "micromorphx/assembly.hpp"
#include "micromorphx/tensor.hpp"

using namespace mmx;

namespace {

VectorXd csr_apply(const Csr& A, const VectorXd& x) {
  VectorXd y(A.nrows);
  kernels::spmv(A, x, y);
  return y;
}

double quad_form(const Csr& A, const VectorXd& x) { return x.dot(csr_apply(A, x)); }

}  // namespace

TEST_CASE("mass matrix reproduces the quadrature inner product") {
  Grid g = build_grid({3, 2, 2}, {1.2, 1.0, 0.8});
  std::mt19937_64 rng(17);
  struct Setup {
    FieldKind kind;
    Constraint bc;
  };
  for (auto [kind, bc] : {Setup{FieldKind::Scalar, Constraint::DisplacementZero},
                          Setup{FieldKind::Vector, Constraint::DisplacementZero},
                          Setup{FieldKind::Tensor, Constraint::TangentialZero}}) {
    auto m = build_dof_map(g, kind, bc);
    Csr M = assemble_mass(g, m);
    VectorXd full = testhelp::random_vec(rng, m.n_full());
    m.apply_bc(full);
    QpField vals = qp_values(g, full, m.ncomp);
    const double direct = l2_inner(g, vals, vals);
    CHECK(quad_form(M, m.gather(full)) == doctest::Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("gradient gram matches the sampled gradient integral") {
  Grid g = build_grid({2, 3, 2});
  auto m = build_dof_map(g, FieldKind::Vector, Constraint::DisplacementZero);
  Csr G = assemble_gram(g, m, Primitive::Gradient, Eigen::MatrixXd::Identity(9, 9));
  std::mt19937_64 rng(23);
  VectorXd full = testhelp::random_vec(rng, m.n_full());
  m.apply_bc(full);
  QpField grad = discrete_Grad(g, full);
  CHECK(quad_form(G, m.gather(full)) == doctest::Approx(l2_inner(g, grad, grad)).epsilon(1e-12));
}

TEST_CASE("symmetric-gradient gram obeys the divergence split") {
  // for fields vanishing on the boundary:
  //   int |sym grad v|^2 = 1/2 int |grad v|^2 + 1/2 int (div v)^2,
  // and the identity survives discretisation entry-for-entry
  Grid g = build_grid({3, 3, 3});
  auto m = build_dof_map(g, FieldKind::Vector, Constraint::DisplacementZero);
  Csr S = assemble_gram(g, m, Primitive::Gradient, proj_sym9());
  Csr G = assemble_gram(g, m, Primitive::Gradient, Eigen::MatrixXd::Identity(9, 9));
  Csr D = assemble_gram(g, m, Primitive::Gradient, trace_outer9());
  G.add_scaled(D, 1.0);
  double maxdiff = 0.0, scale = 0.0;
  for (long long k = 0; k < S.nnz(); ++k) {
    maxdiff = std::max(maxdiff, std::abs(S.val[k] - 0.5 * G.val[k]));
    scale = std::max(scale, std::abs(S.val[k]));
  }
  CHECK(maxdiff <= 1e-13 * scale);
}

TEST_CASE("curl gram matches the sampled curl integral") {
  Grid g = build_grid({2, 2, 3});
  auto m = build_dof_map(g, FieldKind::Tensor, Constraint::TangentialZero);
  Csr C = assemble_gram(g, m, Primitive::Curl, Eigen::MatrixXd::Identity(9, 9));
  std::mt19937_64 rng(29);
  VectorXd full = testhelp::random_vec(rng, m.n_full());
  m.apply_bc(full);
  QpField curl = discrete_Curl(g, full);
  CHECK(quad_form(C, m.gather(full)) == doctest::Approx(l2_inner(g, curl, curl)).epsilon(1e-12));
}

TEST_CASE("weighted value gram applies the micro stress law") {
  Grid g = build_grid({2, 2, 2});
  auto m = build_dof_map(g, FieldKind::Tensor, Constraint::TangentialZero);
  IsotropicModuli mod;
  mod.mu_h = 1.7;
  mod.lambda_h = 0.4;
  ChannelWeights W = channel_weights(mod, ModelVariant::Full);
  Csr H = assemble_gram(g, m, Primitive::Value, W.H);
  std::mt19937_64 rng(31);
  VectorXd full = testhelp::random_vec(rng, m.n_full());
  m.apply_bc(full);
  QpField vals = qp_values(g, full, 9);
  QpField stress = vals;
  for (int p = 0; p < vals.n_points(); ++p) {
    Vec9 v = Eigen::Map<const Vec9>(vals.data.data() + 9 * p);
    Mat3 s = apply_isotropic_s(mod, unvec9<double>(v));
    Eigen::Map<Vec9>(stress.data.data() + 9 * p) = vec9(s);
  }
  CHECK(quad_form(H, m.gather(full)) ==
        doctest::Approx(l2_inner(g, vals, stress)).epsilon(1e-12));
}

TEST_CASE("spherical micro field carries the expected channel energy") {
  // P = c Id: <s(P), P> integrates to 3 c^2 (2 mu_h + 3 lambda_h) * volume
  Grid g = build_grid({2, 2, 2}, {1.0, 1.0, 1.0});
  IsotropicModuli mod;
  mod.mu_h = 2.0;
  mod.lambda_h = 0.5;
  const double c = 0.75;
  VectorXd P(9 * g.n_nodes());
  for (int node = 0; node < g.n_nodes(); ++node)
    Eigen::Map<Vec9>(P.data() + 9 * node) = vec9(Mat3(c * Mat3::Identity()));
  QpField vals = qp_values(g, P, 9);
  QpField stress = vals;
  for (int p = 0; p < vals.n_points(); ++p) {
    Vec9 v = Eigen::Map<const Vec9>(vals.data.data() + 9 * p);
    Eigen::Map<Vec9>(stress.data.data() + 9 * p) = vec9(Mat3(apply_isotropic_s(mod, unvec9<double>(v))));
  }
  const double expected = 3.0 * c * c * (2.0 * mod.mu_h + 3.0 * mod.lambda_h);
  CHECK(l2_inner(g, vals, stress) == doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("serial and parallel assembly agree") {
  Grid g = build_grid({3, 3, 2});
  auto m = build_dof_map(g, FieldKind::Tensor, Constraint::TangentialZero);
  Csr par = assemble_gram(g, m, Primitive::Curl, proj_devsym9());
  Csr ser = assemble_gram(g, m, Primitive::Curl, proj_devsym9(), /*serial=*/true);
  REQUIRE(par.nnz() == ser.nnz());
  double maxdiff = 0.0;
  for (long long k = 0; k < par.nnz(); ++k)
    maxdiff = std::max(maxdiff, std::abs(par.val[k] - ser.val[k]));
  CHECK(maxdiff <= 1e-13);
}

TEST_CASE("load vector is consistent with the quadrature pairing") {
  Grid g = build_grid({3, 2, 2}, {1.0, 1.4, 1.0});
  auto m = build_dof_map(g, FieldKind::Vector, Constraint::DisplacementZero);
  std::mt19937_64 rng(37);
  QpField source{3, testhelp::random_vec(rng, g.n_cells() * 8 * 3)};
  VectorXd F = assemble_load(g, m, source);
  VectorXd full = testhelp::random_vec(rng, m.n_full());
  m.apply_bc(full);
  QpField test_vals = qp_values(g, full, 3);
  CHECK(F.dot(m.gather(full)) ==
        doctest::Approx(l2_inner(g, source, test_vals)).epsilon(1e-12));
}

TEST_CASE("system stiffness carries exactly the constitutive energy") {
  Grid g = build_grid({2, 2, 2}, {1.0, 1.2, 0.9});
  MaterialModel mat;
  mat.iso.mu_e = 1.3;
  mat.iso.lambda_e = 0.6;
  mat.iso.mu_c = 0.4;
  mat.iso.mu_h = 0.9;
  mat.iso.lambda_h = 0.2;
  mat.iso.alpha_1 = 1.1;
  mat.iso.alpha_2 = 0.5;
  mat.iso.alpha_3 = 0.7;
  for (ModelVariant v : {ModelVariant::Full, ModelVariant::DevDev}) {
    mat.variant = v;
    SystemMatrices sm = assemble_system(g, mat);

    std::mt19937_64 rng(41);
    VectorXd u = testhelp::random_vec(rng, 3 * g.n_nodes());
    VectorXd P = testhelp::random_vec(rng, 9 * g.n_nodes());
    sm.map_u.apply_bc(u);
    sm.map_P.apply_bc(P);
    VectorXd q = sm.pack(u, P);

    QpField Gu = discrete_Grad(g, u);
    QpField Pv = qp_values(g, P, 9);
    QpField CP = discrete_Curl(g, P);
    QpField e = Gu, s_of_e = Gu, s_of_P = Pv, m_of_C = CP;
    for (int p = 0; p < Gu.n_points(); ++p) {
      Mat3 E = unvec9<double>(Vec9(Eigen::Map<const Vec9>(Gu.data.data() + 9 * p) -
                                   Eigen::Map<const Vec9>(Pv.data.data() + 9 * p)));
      Mat3 Pm = unvec9<double>(Vec9(Eigen::Map<const Vec9>(Pv.data.data() + 9 * p)));
      Mat3 Cm = unvec9<double>(Vec9(Eigen::Map<const Vec9>(CP.data.data() + 9 * p)));
      Eigen::Map<Vec9>(e.data.data() + 9 * p) = vec9(E);
      Eigen::Map<Vec9>(s_of_e.data.data() + 9 * p) = vec9(Mat3(apply_isotropic_sigma(mat.iso, E)));
      Eigen::Map<Vec9>(s_of_P.data.data() + 9 * p) = vec9(Mat3(apply_isotropic_s(mat.iso, Pm, v)));
      Eigen::Map<Vec9>(m_of_C.data.data() + 9 * p) = vec9(Mat3(apply_isotropic_m(mat.iso, Cm, v)));
    }
    const double direct = l2_inner(g, e, s_of_e) + l2_inner(g, Pv, s_of_P) + l2_inner(g, CP, m_of_C);
    CHECK(quad_form(sm.K, q) == doctest::Approx(direct).epsilon(1e-11));
    CHECK(quad_form(sm.K_C, q) == doctest::Approx(l2_inner(g, e, s_of_e)).epsilon(1e-11));
    CHECK(quad_form(sm.K_H, q) == doctest::Approx(l2_inner(g, Pv, s_of_P)).epsilon(1e-11));
    CHECK(quad_form(sm.K_L, q) == doctest::Approx(l2_inner(g, CP, m_of_C)).epsilon(1e-11));

    // mass form = squared L2 norm of the pair, reference form adds the slopes
    QpField uv = qp_values(g, u, 3);
    const double l2pair = l2_inner(g, uv, uv) + l2_inner(g, Pv, Pv);
    CHECK(quad_form(sm.M, q) == doctest::Approx(l2pair).epsilon(1e-11));
    const double h1 = l2pair + l2_inner(g, Gu, Gu) + l2_inner(g, CP, CP);
    CHECK(quad_form(sm.Z, q) == doctest::Approx(h1).epsilon(1e-11));
  }
}

TEST_CASE("channel matrices sum to the stiffness exactly") {
  Grid g = build_grid({2, 2, 2});
  MaterialModel mat;
  SystemMatrices sm = assemble_system(g, mat);
  double maxdiff = 0.0;
  for (long long k = 0; k < sm.K.nnz(); ++k)
    maxdiff = std::max(maxdiff,
                       std::abs(sm.K.val[k] - (sm.K_C.val[k] + sm.K_H.val[k] + sm.K_L.val[k])));
  CHECK(maxdiff == 0.0);
}

TEST_CASE("stiffness is symmetric positive semidefinite") {
  Grid g = build_grid({2, 2, 2});
  MaterialModel mat;
  mat.iso.mu_c = 0.3;
  SystemMatrices sm = assemble_system(g, mat);
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    VectorXd x = testhelp::random_vec(rng, sm.n);
    VectorXd y = testhelp::random_vec(rng, sm.n);
    CHECK(csr_apply(sm.K, x).dot(y) == doctest::Approx(x.dot(csr_apply(sm.K, y))).epsilon(1e-11));
    CHECK(quad_form(sm.K, x) >= -1e-10 * x.squaredNorm());
    CHECK(quad_form(sm.K_C, x) >= -1e-10 * x.squaredNorm());
    CHECK(quad_form(sm.K_H, x) >= -1e-10 * x.squaredNorm());
    CHECK(quad_form(sm.K_L, x) >= -1e-10 * x.squaredNorm());
    CHECK(quad_form(sm.M, x) > 0.0);
  }
}

TEST_CASE("restricting the variant can only lower the energy") {
  Grid g = build_grid({2, 2, 2});
  MaterialModel full, dev;
  full.variant = ModelVariant::Full;
  dev.variant = ModelVariant::DevDev;
  SystemMatrices a = assemble_system(g, full);
  SystemMatrices b = assemble_system(g, dev);
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 20; ++trial) {
    VectorXd x = testhelp::random_vec(rng, a.n);
    CHECK(quad_form(a.K, x) - quad_form(b.K, x) >= -1e-10 * x.squaredNorm());
  }
}

TEST_CASE("system assembly validates its material") {
  Grid g = build_grid({2, 2, 2});
  MaterialModel bad;
  bad.iso.mu_e = -1.0;
  CHECK_THROWS_AS(assemble_system(g, bad), std::invalid_argument);
  MaterialModel inequality_only;
  inequality_only.variant = ModelVariant::SymPSymCurl;
  CHECK_THROWS_AS(assemble_system(g, inequality_only), std::invalid_argument);
}

TEST_CASE("resolvent is symmetric positive definite") {
  Grid g = build_grid({2, 2, 2});
  MaterialModel mat;
  SystemMatrices sm = assemble_system(g, mat);
  Csr R = assemble_resolvent(sm);
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 10; ++trial) {
    VectorXd x = testhelp::random_vec(rng, sm.n);
    VectorXd y = testhelp::random_vec(rng, sm.n);
    CHECK(csr_apply(R, x).dot(y) == doctest::Approx(x.dot(csr_apply(R, y))).epsilon(1e-11));
    CHECK(quad_form(R, x) > 0.0);
    // entry-wise combination: R = M + K on the shared pattern
    CHECK(quad_form(R, x) ==
          doctest::Approx(quad_form(sm.M, x) + quad_form(sm.K, x)).epsilon(1e-12));
  }
}

TEST_CASE("first-order generator moves momentum up and force down") {
  Grid g = build_grid({2, 2, 2});
  MaterialModel mat;
  SystemMatrices sm = assemble_system(g, mat);
  std::mt19937_64 rng(59);
  VectorXd w = testhelp::random_vec(rng, 2 * sm.n);
  VectorXd Aw = generator_apply(sm, w);
  CHECK((Aw.head(sm.n) - w.tail(sm.n)).norm() == 0.0);
  // M a = -K q
  VectorXd res = csr_apply(sm.M, Aw.tail(sm.n)) + csr_apply(sm.K, w.head(sm.n));
  CHECK(res.norm() <= 1e-8 * (1.0 + w.norm()));
  // skew pairing in the energy inner product: <Aw, w>_X = 0
  const double pair = csr_apply(sm.K, w.head(sm.n)).dot(Aw.head(sm.n)) +
                      csr_apply(sm.M, w.tail(sm.n)).dot(Aw.tail(sm.n));
  CHECK(std::abs(pair) <= 1e-8 * (1.0 + w.squaredNorm()));
}

TEST_CASE("smallest stiffness eigenvalue matches a dense solve") {
  Grid g = build_grid({2, 2, 2});
  MaterialModel mat;
  mat.iso.mu_e = 1.5;
  mat.iso.lambda_e = 0.3;
  SystemMatrices sm = assemble_system(g, mat);
  Eigen::MatrixXd Kd = sm.K.dense(), Md = sm.M.dense();
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(Kd, Md);
  const double dense_min = es.eigenvalues().minCoeff();
  EigResult r = stiffness_smallest_eigenvalue(sm);
  CHECK(r.solver_ok);
  CHECK(r.converged);
  CHECK(r.lambda == doctest::Approx(dense_min).epsilon(1e-8));
}

TEST_CASE("system dump writes the three operators") {
  Grid g = build_grid({2, 2, 2});
  MaterialModel mat;
  SystemMatrices sm = assemble_system(g, mat);
  const std::string dir = "mmx_dump_test";
  dump_system(sm, dir);
  namespace fs = std::filesystem;
  CHECK(fs::exists(fs::path(dir) / "stiffness.mtx"));
  CHECK(fs::exists(fs::path(dir) / "mass.mtx"));
  CHECK(fs::exists(fs::path(dir) / "resolvent.mtx"));
  fs::remove_all(dir);
}
