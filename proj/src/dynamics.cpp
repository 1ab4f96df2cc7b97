#include "fiberflow/dynamics.hpp"

#include <cmath>

namespace fiberflow::dynamics {

using kinematics::pinv_solve;

namespace {

VectorXd mrr_on_grid(const spectral::ChebGrid& g, const Problem& prob) {
  return mobility::rotrot_diagonal(g.nodes, g.length, prob.params, prob.mob.model);
}

}  // namespace

Stepper::Stepper(const FiberState& init, const Problem& prob)
    : state_(init),
      prob_(prob),
      ops_n_(init.grid),
      pre_(prob.mob.model == mobility::MobilityModel::SpectralRPY
               ? mobility::precompute(init.grid, ops_n_, prob.params, prob.mob.n2)
               : mobility::QuadPrecompute{}),
      lift_(fiber::BCLift{}) {
  spectral::ChebGrid np2 = spectral::make_grid(init.grid.n + 2, spectral::GridKind::Type2, init.grid.length);
  mrr_np2_ = mrr_on_grid(np2, prob_);
  mrr_n_ = mrr_on_grid(init.grid, prob_);
  lift_ = fiber::build_bc_lift(state_, prob_.bc, prob_.drive, prob_.kappa, prob_.gamma, mrr_np2_, 0.0);
}

SaddleSolution Stepper::solve(double dt_implicit) {
  if (prob_.bc == BcKind::ClampedFree && prob_.drive.kind == Drive::Kind::AngularVelocity)
    lift_.update_drive_row(prob_.drive.omega - omega_rt0_lag_);

  const int n = state_.grid.n;
  FiberGeometry geom = fiber::lift_geometry(state_, lift_);
  mobility::MobilitySet mob = mobility::build_mobility(geom, ops_n_, prob_.params, pre_, prob_.mob);
  kinematics::KinematicOps kin = kinematics::build_kinematics(geom, prob_.bc);

  VectorXd fk = fiber::bending_force(state_, lift_);
  fiber::TwistForces tw = fiber::twist_force_and_torque(state_, lift_);
  VectorXd f = fk + tw.f_gamma;

  MatrixXd Khat = kin.K;
  MatrixXd Fk3;
  if (dt_implicit > 0) {
    Fk3 = stack3(lift_.F_kappa);
    Khat -= dt_implicit * (mob.Mtt * (Fk3 * kin.K));
  }
  VectorXd rhs = mob.Mtt * f + mob.Mtr * tw.n_par;

  Eigen::PartialPivLU<MatrixXd> mlu(mob.Mtt);
  MatrixXd MinvK = mlu.solve(Khat);
  VectorXd Minvrhs = mlu.solve(rhs);

  SaddleSolution sol;
  sol.alpha = pinv_solve(kin.Kstar * MinvK, kin.Kstar * Minvrhs);
  sol.lambda = MinvK * sol.alpha - Minvrhs;
  sol.U = kin.K * sol.alpha;
  sol.omega_perp = kinematics::omega_perp_from_velocity(geom, ops_n_, sol.U);
  sol.f_elastic = f;
  sol.n_par = tw.n_par;

  VectorXd f_star = f;
  if (dt_implicit > 0) f_star = f + dt_implicit * (Fk3 * sol.U);
  VectorXd om_rt = mob.Mrt * (f_star + sol.lambda);
  sol.omega_par = om_rt + mob.mrr.cwiseProduct(tw.n_par);
  sol.omega_rt0 = spectral::interp_value(state_.grid, om_rt, 0.0);
  sol.tension = ops_n_.Ddag0 * dot_field(sol.lambda, state_.tau);

  // Stash the rot-trans spin series for the twist update.
  sol.omega_par_rt = om_rt;
  return sol;
}

SaddleSolution Stepper::solve_static() { return solve(0.0); }

void Stepper::advance(const SaddleSolution& sol, double dt) {
  const int n = state_.grid.n;
  FiberState next = state_;

  // Twist update: (I - dt R D Mrr Ntilde) psi = psi + dt (rhs terms).
  FiberGeometry geom = fiber::lift_geometry(state_, lift_);
  const MatrixXd& Dp2 = lift_.ops_np2->D;
  MatrixXd RDM = lift_.R_psi * Dp2 * mrr_np2_.asDiagonal();
  MatrixXd A = MatrixXd::Identity(n, n) - dt * RDM * lift_.Ntilde;
  VectorXd rhs = state_.psi +
                 dt * (-dot_field(sol.omega_perp, geom.dtau) + ops_n_.D * sol.omega_par_rt +
                       RDM * lift_.beta_n);
  Eigen::FullPivLU<MatrixXd> alu(A);
  if (!alu.isInvertible()) throw std::runtime_error("step: singular twist system");
  next.psi = alu.solve(rhs);

  // Rotate tangents by the perpendicular angular velocity (norm preserving).
  for (int p = 0; p < n; ++p) {
    Vec3 t = rotate_rodrigues(node(state_.tau, p), node(sol.omega_perp, p), dt);
    set_node(next.tau, p, t.normalized());
  }

  // Midpoint material vector: rotate by the full angular velocity there.
  const double smid = 0.5 * state_.grid.length;
  VectorXd npar_new = lift_.R_psi * (lift_.Ntilde * next.psi + lift_.beta_n);
  VectorXd ompar_new = sol.omega_par_rt + mrr_n_.cwiseProduct(npar_new);
  const Vec3 om_mid = spectral::interp_vec3(state_.grid, sol.omega_perp, smid) +
                      spectral::interp_value(state_.grid, ompar_new, smid) *
                          spectral::interp_vec3(state_.grid, state_.tau, smid);
  Vec3 d1 = rotate_rodrigues(state_.D1_mid, om_mid, dt);

  // Reconstruct X by anchored integration of the new tangents.
  VectorXd Xint = apply_per_component(ops_n_.Ddag0, next.tau);
  if (prob_.bc == BcKind::ClampedFree) {
    for (int p = 0; p < n; ++p) set_node(Xint, p, node(Xint, p) + state_.anchor);
    next.X = Xint;
    next.anchor = state_.anchor;
  } else {
    next.anchor = state_.anchor + dt * spectral::interp_vec3(state_.grid, sol.U, smid);
    const Vec3 shift = next.anchor - spectral::interp_vec3(state_.grid, Xint, smid);
    for (int p = 0; p < n; ++p) set_node(Xint, p, node(Xint, p) + shift);
    next.X = Xint;
  }

  const Vec3 tau_mid = spectral::interp_vec3(state_.grid, next.tau, smid).normalized();
  d1 -= d1.dot(tau_mid) * tau_mid;
  next.D1_mid = d1.normalized();
  next.time = state_.time + dt;

  if (!next.X.allFinite() || !next.tau.allFinite() || !next.psi.allFinite())
    throw DivergenceError(state_);

  omega_rt0_lag_ = sol.omega_rt0;
  state_ = next;
}

SaddleSolution Stepper::step(double dt) {
  SaddleSolution sol = solve(dt);
  advance(sol, dt);
  return sol;
}

double Stepper::elastic_energy() const { return fiber::elastic_energy(state_, lift_); }

Vec3 Stepper::endpoint() const {
  return spectral::interp_vec3(state_.grid, state_.X, state_.grid.length);
}

double Stepper::min_self_distance() const {
  const int n = state_.grid.n;
  spectral::ChebGrid fine = spectral::make_grid(4 * n, spectral::GridKind::Type1, state_.grid.length);
  MatrixXd P = spectral::interpolation_matrix(state_.grid, fine);
  VectorXd Xf = apply_per_component(P, state_.X);
  const double a = prob_.params.a_hat;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 4 * n; ++i)
    for (int j = i + 1; j < 4 * n; ++j) {
      if (fine.nodes(j) - fine.nodes(i) <= 4.0 * a) continue;
      best = std::min(best, (node(Xf, i) - node(Xf, j)).norm());
    }
  return best;
}

SaddleSolution solve_static(const FiberState& state, const Problem& prob) {
  Stepper st(state, prob);
  return st.solve_static();
}

}  // namespace fiberflow::dynamics
