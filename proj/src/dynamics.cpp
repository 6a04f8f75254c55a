#include "micromorphx/dynamics.hpp"

#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include <unsupported/Eigen/MatrixFunctions>

#include "micromorphx/inequalities.hpp"
#include "micromorphx/statics.hpp"

namespace mmx {

State zero_state(const SystemMatrices& sm) {
  State s;
  s.u = VectorXd::Zero(sm.map_u.n_full());
  s.v = VectorXd::Zero(sm.map_u.n_full());
  s.P = VectorXd::Zero(sm.map_P.n_full());
  s.Pdot = VectorXd::Zero(sm.map_P.n_full());
  return s;
}

double LoadTerm::time_factor(double t) const {
  switch (shape) {
    case TimeShape::Constant: return amplitude;
    case TimeShape::Sin: return amplitude * std::sin(omega * t);
    case TimeShape::Cos: return amplitude * std::cos(omega * t);
    case TimeShape::Poly: return amplitude * std::pow(t, power);
  }
  return 0.0;
}

namespace {

QpField spatial_profile(const Grid& g, const LoadTerm& term) {
  const int ncomp = term.target == LoadTerm::Target::Force ? 3 : 9;
  QpField f{ncomp, VectorXd::Zero(static_cast<long>(g.n_cells()) * 8 * ncomp)};
  for (int cell = 0; cell < g.n_cells(); ++cell) {
    auto pts = cell_gauss_points(g, cell);
    for (int q = 0; q < 8; ++q) {
      double v = 1.0;
      for (int ax = 0; ax < 3; ++ax)
        for (int e = 0; e < term.space_pow[ax]; ++e) v *= pts[q][ax];
      f.data[(static_cast<long>(cell) * 8 + q) * ncomp + term.component] = v;
    }
  }
  return f;
}

}  // namespace

AssembledLoads::AssembledLoads(const SystemMatrices& sm, const Loads& loads)
    : terms_(loads.terms), n_(sm.n) {
  const int m = static_cast<int>(terms_.size());
  vectors_.reserve(m);
  std::vector<QpField> profiles;
  profiles.reserve(m);
  for (const LoadTerm& term : terms_) {
    if (term.component < 0 ||
        term.component >= (term.target == LoadTerm::Target::Force ? 3 : 9))
      throw std::invalid_argument("load component out of range");
    QpField prof = spatial_profile(sm.grid, term);
    VectorXd combined = VectorXd::Zero(sm.n);
    if (term.target == LoadTerm::Target::Force)
      combined.head(sm.nu) = assemble_load(sm.grid, sm.map_u, prof);
    else
      combined.tail(sm.nP) = assemble_load(sm.grid, sm.map_P, prof);
    vectors_.push_back(std::move(combined));
    profiles.push_back(std::move(prof));
  }
  gram_ = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) {
      if (terms_[i].target != terms_[j].target) continue;
      gram_(i, j) = gram_(j, i) = l2_inner(sm.grid, profiles[i], profiles[j]);
    }
}

void AssembledLoads::eval(double t, VectorXd& out) const {
  out.setZero(n_);
  for (size_t i = 0; i < terms_.size(); ++i) out += terms_[i].time_factor(t) * vectors_[i];
}

double AssembledLoads::supply_norm2(double t) const {
  const int m = static_cast<int>(terms_.size());
  double total = 0.0;
  for (int i = 0; i < m; ++i) {
    const double gi = terms_[i].time_factor(t);
    for (int j = 0; j < m; ++j) total += gi * terms_[j].time_factor(t) * gram_(i, j);
  }
  return total;
}

namespace {

double quad_form(const Csr& A, const VectorXd& x) {
  VectorXd y(A.nrows);
  kernels::spmv(A, x, y);
  return x.dot(y);
}

}  // namespace

EnergyRow energy(const SystemMatrices& sm, const State& state) {
  const VectorXd q = sm.pack(state.u, state.P);
  const VectorXd p = sm.pack(state.v, state.Pdot);
  EnergyRow row;
  row.t = state.t;
  row.kinetic = 0.5 * quad_form(sm.M, p);
  row.elastic = 0.5 * quad_form(sm.K_C, q);
  row.microstrain = 0.5 * quad_form(sm.K_H, q);
  row.dislocation = 0.5 * quad_form(sm.K_L, q);
  row.total = row.kinetic + row.elastic + row.microstrain + row.dislocation;
  return row;
}

double power(const SystemMatrices& sm, const AssembledLoads& loads, const State& state) {
  if (loads.empty()) return 0.0;
  VectorXd F(sm.n);
  loads.eval(state.t, F);
  return F.dot(sm.pack(state.v, state.Pdot));
}

MidpointStepper::MidpointStepper(const SystemMatrices& sm, double dt) : sm_(sm), dt_(dt) {
  if (dt <= 0.0) throw std::invalid_argument("time step must be positive");
  S_ = sm.M;
  S_.add_scaled(sm.K, dt * dt / 4.0);
  S_inv_diag_ = S_.diagonal();
  for (int i = 0; i < sm.n; ++i) S_inv_diag_[i] = 1.0 / S_inv_diag_[i];
  pm_ = VectorXd::Zero(sm.n);
}

State MidpointStepper::step(const State& state, const AssembledLoads& loads) {
  const VectorXd q = sm_.pack(state.u, state.P);
  const VectorXd p = sm_.pack(state.v, state.Pdot);
  const double t_mid = state.t + dt_ / 2.0;

  VectorXd rhs(sm_.n), Kq(sm_.n);
  kernels::spmv(sm_.M, p, rhs);
  kernels::spmv(sm_.K, q, Kq);
  rhs -= (dt_ / 2.0) * Kq;
  VectorXd F = VectorXd::Zero(sm_.n);
  if (!loads.empty()) {
    loads.eval(t_mid, F);
    rhs += (dt_ / 2.0) * F;
  }

  CgOptions cg;
  cg.tol = 1e-12;
  auto res = cg_solve(S_, rhs, pm_, cg, &S_inv_diag_);
  if (!res.converged) {
    std::ostringstream msg;
    msg << "midpoint solve stalled at relative residual " << res.rel_residual;
    throw std::runtime_error(msg.str());
  }

  last_work_ = loads.empty() ? 0.0 : dt_ * F.dot(pm_);
  State out;
  out.t = state.t + dt_;
  const VectorXd q1 = q + dt_ * pm_;
  const VectorXd p1 = 2.0 * pm_ - p;
  sm_.unpack(q1, out.u, out.P);
  VectorXd v_full, Pdot_full;
  sm_.unpack(p1, v_full, Pdot_full);
  out.v = v_full;
  out.Pdot = Pdot_full;
  return out;
}

LeapfrogStepper::LeapfrogStepper(const SystemMatrices& sm, double dt) : sm_(sm), dt_(dt) {
  if (dt < 0.0) throw std::invalid_argument("time step must be nonnegative");
}

State LeapfrogStepper::step(const State& state, const AssembledLoads& loads) {
  const VectorXd q = sm_.pack(state.u, state.P);
  const VectorXd p = sm_.pack(state.v, state.Pdot);

  auto accel_at = [&](double t, const VectorXd& conf, VectorXd& a) {
    VectorXd rhs(sm_.n);
    kernels::spmv(sm_.K, conf, rhs);
    rhs = -rhs;
    if (!loads.empty()) {
      VectorXd F(sm_.n);
      loads.eval(t, F);
      rhs += F;
    }
    CgOptions cg;
    cg.tol = 1e-12;
    auto res = cg_solve(sm_.M, rhs, a, cg, &sm_.M_inv_diag);
    if (!res.converged) throw std::runtime_error("leapfrog mass solve stalled");
  };

  if (accel_.size() != sm_.n || accel_t_ != state.t) {
    accel_ = VectorXd::Zero(sm_.n);
    accel_at(state.t, q, accel_);
  }

  const double pw0 = loads.empty() ? 0.0 : power(sm_, loads, state);
  const VectorXd q1 = q + dt_ * p + (dt_ * dt_ / 2.0) * accel_;
  VectorXd a1 = accel_;  // warm start
  accel_at(state.t + dt_, q1, a1);
  const VectorXd p1 = p + (dt_ / 2.0) * (accel_ + a1);

  State out;
  out.t = state.t + dt_;
  sm_.unpack(q1, out.u, out.P);
  VectorXd v_full, Pdot_full;
  sm_.unpack(p1, v_full, Pdot_full);
  out.v = v_full;
  out.Pdot = Pdot_full;

  if (!loads.empty()) {
    const double pw1 = power(sm_, loads, out);
    last_work_ = dt_ / 2.0 * (pw0 + pw1);
  } else {
    last_work_ = 0.0;
  }
  accel_ = a1;
  accel_t_ = out.t;
  return out;
}

State step_midpoint(const SystemMatrices& sm, const State& state, double dt,
                    const AssembledLoads& loads) {
  MidpointStepper stepper(sm, dt);
  return stepper.step(state, loads);
}

State step_leapfrog(const SystemMatrices& sm, const State& state, double dt,
                    const AssembledLoads& loads) {
  LeapfrogStepper stepper(sm, dt);
  return stepper.step(state, loads);
}

double estimate_stable_dt(const SystemMatrices& sm) {
  EigOptions opts;
  auto res = pencil_largest(sm.K, sm.M, 50, opts);
  if (res.lambda <= 0.0) return std::numeric_limits<double>::infinity();
  return 0.9 * 2.0 / std::sqrt(res.lambda);
}

RunResult run(const SystemMatrices& sm, const State& initial, const Loads& loads,
              const RunOptions& opts) {
  if (opts.dt <= 0.0 || opts.T <= 0.0)
    throw std::invalid_argument("dt and T must be positive");
  const int nsteps = std::max(1, static_cast<int>(std::llround(opts.T / opts.dt)));
  const double dt = opts.T / nsteps;  // land exactly on T

  if (opts.scheme == Scheme::Leapfrog && !opts.allow_unstable) {
    const double dt_max = estimate_stable_dt(sm);
    if (dt > dt_max) {
      std::ostringstream msg;
      msg << "explicit step " << dt << " above the stability estimate " << dt_max;
      throw std::invalid_argument(msg.str());
    }
  }

  AssembledLoads F(sm, loads);
  State state = initial;
  sm.map_u.apply_bc(state.u);
  sm.map_u.apply_bc(state.v);
  sm.map_P.apply_bc(state.P);
  sm.map_P.apply_bc(state.Pdot);

  MidpointStepper midpoint(sm, dt);
  LeapfrogStepper leapfrog(sm, opts.scheme == Scheme::Leapfrog ? dt : 0.0);

  RunResult result;
  EnergyRow first = energy(sm, state);
  first.power = power(sm, F, state);
  const double E0 = first.total;
  result.ledger.rows.push_back(first);
  if (opts.on_snapshot && opts.snapshot_every > 0) opts.on_snapshot(state, 0);

  double work = 0.0, scale = std::abs(E0);
  for (int step = 1; step <= nsteps; ++step) {
    if (opts.scheme == Scheme::Midpoint) {
      state = midpoint.step(state, F);
      work += midpoint.last_work();
    } else {
      state = leapfrog.step(state, F);
      work += leapfrog.last_work();
    }
    const bool record = step == nsteps || (opts.ledger_every > 0 && step % opts.ledger_every == 0);
    if (record) {
      EnergyRow row = energy(sm, state);
      row.power = power(sm, F, state);
      row.work = work;
      row.drift = row.total - E0 - work;
      result.ledger.rows.push_back(row);
      scale = std::max({scale, std::abs(row.total), std::abs(work)});
      result.max_drift = std::max(result.max_drift, std::abs(row.drift));
    }
    if (opts.on_snapshot && opts.snapshot_every > 0 && (step % opts.snapshot_every == 0 || step == nsteps))
      opts.on_snapshot(state, step);
  }
  result.final_state = state;
  result.max_drift_rel = scale > 0.0 ? result.max_drift / scale : result.max_drift;
  return result;
}

namespace {

using DMat = Eigen::MatrixXd;

const DMat& cached_exp(std::map<long long, DMat>& cache, const DMat& A, double gap) {
  const long long key = std::llround(gap * 1e14);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  DMat E = (gap * A).exp();
  return cache.emplace(key, std::move(E)).first->second;
}

}  // namespace

State reference_exponential(const SystemMatrices& sm, const State& initial,
                            const Loads& loads, double t, int panels) {
  if (sm.n > 2000)
    throw std::invalid_argument("dense reference limited to 2000 free dofs");
  if (panels < 64) panels = 64;
  const int n = sm.n;

  const DMat Md = sm.M.dense();
  const DMat Kd = sm.K.dense();
  Eigen::LLT<DMat> llt(Md);
  const DMat MinvK = llt.solve(Kd);

  DMat A = DMat::Zero(2 * n, 2 * n);
  A.topRightCorner(n, n).setIdentity();
  A.bottomLeftCorner(n, n) = -MinvK;

  State masked = initial;
  sm.map_u.apply_bc(masked.u);
  sm.map_u.apply_bc(masked.v);
  sm.map_P.apply_bc(masked.P);
  sm.map_P.apply_bc(masked.Pdot);
  VectorXd w0(2 * n);
  w0.head(n) = sm.pack(masked.u, masked.P);
  w0.tail(n) = sm.pack(masked.v, masked.Pdot);

  std::map<long long, DMat> cache;
  VectorXd w = cached_exp(cache, A, t) * w0;

  AssembledLoads F(sm, loads);
  if (!F.empty() && t > 0.0) {
    // 4-point Gauss on each panel; nodes ascending across [0, t]
    static const double xi[4] = {-0.8611363115940526, -0.3399810435848563,
                                 0.3399810435848563, 0.8611363115940526};
    static const double wt[4] = {0.3478548451374538, 0.6521451548625461,
                                 0.6521451548625461, 0.3478548451374538};
    std::vector<double> nodes, weights;
    nodes.reserve(4 * panels);
    const double h = t / panels;
    for (int p = 0; p < panels; ++p) {
      const double a = p * h;
      for (int g = 0; g < 4; ++g) {
        nodes.push_back(a + h / 2.0 + h / 2.0 * xi[g]);
        weights.push_back(h / 2.0 * wt[g]);
      }
    }
    // Horner evaluation of sum_i w_i e^{(t - s_i) A} g(s_i) over ascending s_i
    VectorXd acc = VectorXd::Zero(2 * n);
    VectorXd Fv(n), ghat(2 * n);
    for (size_t i = 0; i < nodes.size(); ++i) {
      if (i > 0) acc = cached_exp(cache, A, nodes[i] - nodes[i - 1]) * acc;
      F.eval(nodes[i], Fv);
      ghat.head(n).setZero();
      ghat.tail(n) = llt.solve(Fv);
      acc += weights[i] * ghat;
    }
    w += cached_exp(cache, A, t - nodes.back()) * acc;
  }

  State out;
  out.t = initial.t + t;
  VectorXd uf, Pf, vf, Kf;
  sm.unpack(VectorXd(w.head(n)), uf, Pf);
  sm.unpack(VectorXd(w.tail(n)), vf, Kf);
  out.u = uf;
  out.P = Pf;
  out.v = vf;
  out.Pdot = Kf;
  return out;
}

DependenceConstant measure_dependence_constant(const SystemMatrices& sm) {
  DependenceConstant dc;
  const ChannelBounds cb = channel_lower_bounds(sm.material);
  dc.a1 = elastic_micro_lower_bound(cb.c_m, cb.h_m);
  dc.l_m = cb.l_m;

  const bool devdev = sm.material.variant == ModelVariant::DevDev;
  auto grad_est = estimate_constant(
      devdev ? InequalityTag::DevsymGrad : InequalityTag::Korn, sm.grid);
  auto comb_est = estimate_constant(
      devdev ? InequalityTag::DevsymDevcurl : InequalityTag::SymCurl, sm.grid);
  dc.c_grad = grad_est.constant;
  dc.c_comb = comb_est.constant;

  // FULL controls |P|^2 alone, so the combined factor is 1 + c^2; the DEV_DEV
  // estimate already bounds |P|^2 + |Curl P|^2, so its factor is c^2.
  const double comb_factor = devdev ? dc.c_comb * dc.c_comb : 1.0 + dc.c_comb * dc.c_comb;
  const double denom = 2.0 * std::max({1.0, dc.c_grad * dc.c_grad, comb_factor});
  dc.a = std::min({1.0, dc.a1, dc.l_m}) / denom;
  return dc;
}

namespace {

struct SeminormGrams {
  Csr grad_u;   // on the displacement free dofs
  Csr hcurl_P;  // mass + curl on the micro-distortion free dofs
};

SeminormGrams seminorm_grams(const SystemMatrices& sm) {
  SeminormGrams g;
  g.grad_u = assemble_gram(sm.grid, sm.map_u, Primitive::Gradient,
                           Eigen::MatrixXd::Identity(9, 9));
  g.hcurl_P = assemble_mass(sm.grid, sm.map_P);
  Csr curl = assemble_gram(sm.grid, sm.map_P, Primitive::Curl,
                           Eigen::MatrixXd::Identity(9, 9));
  g.hcurl_P.add_scaled(curl, 1.0);
  return g;
}

double seminorm5(const SystemMatrices& sm, const SeminormGrams& g, const State& s) {
  const VectorXd p = sm.pack(s.v, s.Pdot);
  const VectorXd uf = sm.map_u.gather(s.u);
  const VectorXd Pf = sm.map_P.gather(s.P);
  VectorXd y1(sm.n), y2(uf.size()), y3(Pf.size());
  kernels::spmv(sm.M, p, y1);
  kernels::spmv(g.grad_u, uf, y2);
  kernels::spmv(g.hcurl_P, Pf, y3);
  return p.dot(y1) + uf.dot(y2) + Pf.dot(y3);
}

}  // namespace

DependenceReport initial_data_dependence(const SystemMatrices& sm, const State& state0,
                                         double dt, double T) {
  DependenceReport rep;
  rep.constant = measure_dependence_constant(sm);
  const SeminormGrams grams = seminorm_grams(sm);
  State state = state0;
  sm.map_u.apply_bc(state.u);
  sm.map_u.apply_bc(state.v);
  sm.map_P.apply_bc(state.P);
  sm.map_P.apply_bc(state.Pdot);
  const double E0 = energy(sm, state).total;

  const int nsteps = std::max(1, static_cast<int>(std::llround(T / dt)));
  MidpointStepper stepper(sm, T / nsteps);
  AssembledLoads none(sm, Loads{});
  const double tiny = 1e-300, slack = 1.0 + 1e-8;
  rep.initial_margin = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= nsteps; ++k) {
    const double lhs = rep.constant.a * seminorm5(sm, grams, state);
    if (lhs > E0 * slack + 1e-14 * std::max(1.0, E0)) rep.initial_data_ok = false;
    rep.initial_margin = std::min(rep.initial_margin, (E0 + tiny) / (lhs + tiny));
    if (k < nsteps) state = stepper.step(state, none);
  }
  rep.steps = nsteps;
  return rep;
}

DependenceReport supply_dependence(const SystemMatrices& sm, const Loads& loads, double dt,
                                   double T) {
  DependenceReport rep;
  rep.constant = measure_dependence_constant(sm);
  const SeminormGrams grams = seminorm_grams(sm);
  AssembledLoads F(sm, loads);
  State state = zero_state(sm);

  const int nsteps = std::max(1, static_cast<int>(std::llround(T / dt)));
  const double h = T / nsteps;
  MidpointStepper stepper(sm, h);
  const double tiny = 1e-300, slack = 1.0 + 1e-8;
  rep.supply_margin = std::numeric_limits<double>::infinity();
  double gsum = 0.0;
  for (int k = 0; k < nsteps; ++k) {
    gsum += h * std::sqrt(std::max(0.0, F.supply_norm2(state.t + h / 2.0)));
    state = stepper.step(state, F);
    const double lhs = rep.constant.a * seminorm5(sm, grams, state);
    const double rhs = 0.5 * gsum * gsum;
    if (lhs > rhs * slack + 1e-14 * std::max(1.0, rhs)) rep.supply_ok = false;
    rep.supply_margin = std::min(rep.supply_margin, (rhs + tiny) / (lhs + tiny));
  }
  rep.steps = nsteps;
  return rep;
}

}  // namespace mmx
