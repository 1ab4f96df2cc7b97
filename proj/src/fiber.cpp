#include "fiberflow/fiber.hpp"

#include <cmath>
#include <stdexcept>

namespace fiberflow::fiber {

using spectral::ChebGrid;
using spectral::GridKind;
using spectral::SpectralOps;

namespace {

double qphase(double s, double L, double q) { return q * std::pow(s, 3) * std::pow(s - L, 3); }
double qphase1(double s, double L, double q) {
  return 3.0 * q * s * s * (s - L) * (s - L) * (2.0 * s - L);
}
double qphase2(double s, double L, double q) {
  const double d = s - L;
  return q * (6.0 * s * d * d * d + 18.0 * s * s * d * d + 6.0 * s * s * s * d);
}
double qphase3(double s, double L, double q) {
  const double d = s - L;
  return q * (6.0 * d * d * d + 54.0 * s * d * d + 54.0 * s * s * d + 6.0 * s * s * s);
}

Vec3 unit_perpendicular(const Vec3& t) {
  Vec3 e = Vec3::UnitX();
  if (std::abs(t.x()) > std::abs(t.y())) e = Vec3::UnitY();
  if (std::abs(t.z()) < std::min(std::abs(t.x()), std::abs(t.y()))) e = Vec3::UnitZ();
  Vec3 v = e - e.dot(t) * t;
  return v.normalized();
}

VectorXd integrate_tangent(const ChebGrid& grid, const VectorXd& tau) {
  SpectralOps ops(grid);
  return apply_per_component(ops.Ddag0, tau);
}

}  // namespace

Vec3 qfiber_tau(double s, double L, double q) {
  const double p = qphase(s, L, q);
  return Vec3(std::cos(p), std::sin(p), 1.0) / std::sqrt(2.0);
}

Vec3 qfiber_dtau(double s, double L, double q) {
  const double p = qphase(s, L, q), p1 = qphase1(s, L, q);
  return p1 * Vec3(-std::sin(p), std::cos(p), 0.0) / std::sqrt(2.0);
}

Vec3 qfiber_d2tau(double s, double L, double q) {
  const double p = qphase(s, L, q), p1 = qphase1(s, L, q), p2 = qphase2(s, L, q);
  return (p2 * Vec3(-std::sin(p), std::cos(p), 0.0) + p1 * p1 * Vec3(-std::cos(p), -std::sin(p), 0.0)) /
         std::sqrt(2.0);
}

Vec3 qfiber_d3tau(double s, double L, double q) {
  const double p = qphase(s, L, q), p1 = qphase1(s, L, q), p2 = qphase2(s, L, q), p3 = qphase3(s, L, q);
  return (p3 * Vec3(-std::sin(p), std::cos(p), 0.0) +
          3.0 * p1 * p2 * Vec3(-std::cos(p), -std::sin(p), 0.0) +
          p1 * p1 * p1 * Vec3(std::sin(p), -std::cos(p), 0.0)) /
         std::sqrt(2.0);
}

FiberState make_qfiber(int n, double L, double q) {
  FiberState st;
  st.grid = spectral::make_grid(n, GridKind::Type1, L);
  st.tau.resize(3 * n);
  for (int p = 0; p < n; ++p) set_node(st.tau, p, qfiber_tau(st.grid.nodes(p), L, q));
  st.X = integrate_tangent(st.grid, st.tau);
  st.anchor = spectral::interp_vec3(st.grid, st.X, 0.5 * L);
  st.psi = VectorXd::Zero(n);
  // orthogonal to the interpolated midpoint tangent, which is what the
  // dynamics tracks
  st.D1_mid = unit_perpendicular(spectral::interp_vec3(st.grid, st.tau, 0.5 * L).normalized());
  return st;
}

FiberState make_whirl_fiber(int n, double L, double delta) {
  FiberState st;
  st.grid = spectral::make_grid(n, GridKind::Type1, L);
  const double c = std::cos(std::atan(delta)), s = std::sin(std::atan(delta));
  Mat3 rot;
  rot << c, -s, 0, s, c, 0, 0, 0, 1;
  st.tau.resize(3 * n);
  for (int p = 0; p < n; ++p) {
    const double sp = st.grid.nodes(p);
    const double ph = sp * std::pow(sp - L, 3);
    Vec3 v(delta * std::cos(ph), 1.0, delta * std::sin(ph));
    set_node(st.tau, p, (rot * v) / std::sqrt(1.0 + delta * delta));
  }
  st.X = integrate_tangent(st.grid, st.tau);
  st.anchor = Vec3::Zero();
  st.psi = VectorXd::Zero(n);
  st.D1_mid = unit_perpendicular(spectral::interp_vec3(st.grid, st.tau, 0.5 * L).normalized());
  return st;
}

FiberGeometry qfiber_geometry(int n, double L, double q) {
  FiberGeometry g;
  g.grid = spectral::make_grid(n, GridKind::Type1, L);
  g.X.resize(3 * n);
  g.tau.resize(3 * n);
  g.dtau.resize(3 * n);
  g.d2tau.resize(3 * n);
  FiberState st = make_qfiber(n, L, q);
  g.X = st.X;
  for (int p = 0; p < n; ++p) {
    const double s = g.grid.nodes(p);
    set_node(g.tau, p, qfiber_tau(s, L, q));
    set_node(g.dtau, p, qfiber_dtau(s, L, q));
    set_node(g.d2tau, p, qfiber_d2tau(s, L, q));
  }
  return g;
}

VectorXd BCLift::lift_X(const VectorXd& X) const {
  VectorXd out = apply_per_component(E_X, X);
  const int m = static_cast<int>(E_X.rows());
  for (int q = 0; q < m; ++q)
    for (int d = 0; d < 3; ++d) out(3 * q + d) += beta_X(q, d);
  return out;
}

VectorXd BCLift::lift_psi(const VectorXd& psi) const { return E_psi * psi + beta_psi; }

void BCLift::update_drive_row(double value) {
  const int n = grid_n.n;
  VectorXd rhs = VectorXd::Zero(n + 2);
  rhs(n) = value;
  beta_psi = psi_sys_inv * rhs;
  beta_n = gamma * ops_np2->D * beta_psi;
}

BCLift build_bc_lift(const FiberState& state, BcKind kind, Drive drive, double kappa, double gamma,
                     const VectorXd& mrr_np2, double omega_rt0) {
  const int n = state.grid.n;
  const double L = state.grid.length;
  BCLift lift;
  lift.kind = kind;
  lift.drive = drive;
  lift.kappa = kappa;
  lift.gamma = gamma;
  lift.grid_n = state.grid;
  lift.grid_np2 = spectral::make_grid(n + 2, GridKind::Type2, L);
  lift.grid_np4 = spectral::make_grid(n + 4, GridKind::Type2, L);
  lift.grid_2n = spectral::make_grid(2 * n, GridKind::Type1, L);
  lift.ops_np2 = std::make_shared<SpectralOps>(lift.grid_np2);
  lift.ops_np4 = std::make_shared<SpectralOps>(lift.grid_np4);

  // X lift: N interpolation rows plus 4 boundary rows.
  const int m4 = n + 4;
  lift.R_X = spectral::interpolation_matrix(lift.grid_np4, state.grid);
  const MatrixXd& D4 = lift.ops_np4->D;
  MatrixXd D2 = D4 * D4;
  MatrixXd D3 = D2 * D4;
  MatrixXd sys(m4, m4);
  MatrixXd bvals = MatrixXd::Zero(4, 3);
  sys.topRows(n) = lift.R_X;
  if (kind == BcKind::FreeFree) {
    sys.row(n) = D2.row(0);
    sys.row(n + 1) = D3.row(0);
    sys.row(n + 2) = D2.row(m4 - 1);
    sys.row(n + 3) = D3.row(m4 - 1);
  } else {
    sys.row(n).setZero();
    sys(n, 0) = 1.0;  // X(0)
    sys.row(n + 1) = D4.row(0);
    sys.row(n + 2) = D2.row(m4 - 1);
    sys.row(n + 3) = D3.row(m4 - 1);
    bvals.row(0) = state.anchor.transpose();
    Vec3 tau0 = spectral::interp_vec3(state.grid, state.tau, 0.0).normalized();
    bvals.row(1) = tau0.transpose();
  }
  Eigen::FullPivLU<MatrixXd> lu(sys);
  if (!lu.isInvertible()) throw std::runtime_error("build_bc_lift: ill-posed X boundary rows");
  MatrixXd rhsE = MatrixXd::Zero(m4, n);
  rhsE.topRows(n).setIdentity();
  lift.E_X = lu.solve(rhsE);
  MatrixXd rhsB = MatrixXd::Zero(m4, 3);
  rhsB.bottomRows(4) = bvals;
  lift.beta_X = lu.solve(rhsB);

  MatrixXd D4th = D2 * D2;
  lift.F_kappa = -kappa * lift.R_X * D4th * lift.E_X;
  lift.beta_kappa = -kappa * lift.R_X * D4th * lift.beta_X;

  // psi lift: N interpolation rows plus 2 boundary rows.
  const int m2 = n + 2;
  lift.R_psi = spectral::interpolation_matrix(lift.grid_np2, state.grid);
  lift.mrr_np2 = mrr_np2.size() == m2 ? mrr_np2 : VectorXd::Zero(m2);
  MatrixXd psys(m2, m2);
  VectorXd pb = VectorXd::Zero(2);
  psys.topRows(n) = lift.R_psi;
  if (kind == BcKind::FreeFree) {
    psys.row(n).setZero();
    psys(n, 0) = 1.0;
    psys.row(n + 1).setZero();
    psys(n + 1, m2 - 1) = 1.0;
  } else if (drive.kind == Drive::Kind::AngularVelocity) {
    // Omega_par(0) = omega row: first row of M_rr gamma D_{N+2}.
    psys.row(n) = lift.mrr_np2(0) * gamma * lift.ops_np2->D.row(0);
    pb(0) = drive.omega - omega_rt0;
    psys.row(n + 1).setZero();
    psys(n + 1, m2 - 1) = 1.0;
  } else {
    if (gamma <= 0) throw std::invalid_argument("build_bc_lift: torque drive requires gamma > 0");
    psys.row(n).setZero();
    psys(n, 0) = 1.0;
    pb(0) = drive.torque / gamma;
    psys.row(n + 1).setZero();
    psys(n + 1, m2 - 1) = 1.0;
  }
  Eigen::FullPivLU<MatrixXd> plu(psys);
  if (!plu.isInvertible()) throw std::runtime_error("build_bc_lift: ill-posed psi boundary rows");
  lift.psi_sys_inv = plu.inverse();
  lift.E_psi = lift.psi_sys_inv.leftCols(n);
  VectorXd prhsB = VectorXd::Zero(m2);
  prhsB.tail(2) = pb;
  lift.beta_psi = lift.psi_sys_inv * prhsB;
  lift.Ntilde = gamma * lift.ops_np2->D * lift.E_psi;
  lift.beta_n = gamma * lift.ops_np2->D * lift.beta_psi;

  lift.up_np4_2n = spectral::interpolation_matrix(lift.grid_np4, lift.grid_2n);
  lift.up_np2_2n = spectral::interpolation_matrix(lift.grid_np2, lift.grid_2n);
  lift.R_2n = spectral::l2_restriction(lift.grid_2n, state.grid);
  return lift;
}

FiberGeometry lift_geometry(const FiberState& state, const BCLift& lift) {
  FiberGeometry g;
  g.grid = state.grid;
  g.X = state.X;
  g.tau = state.tau;
  VectorXd Xt = lift.lift_X(state.X);
  const MatrixXd& D = lift.ops_np4->D;
  g.dtau = apply_per_component(lift.R_X * D * D, Xt);
  g.d2tau = apply_per_component(lift.R_X * D * D * D, Xt);
  return g;
}

VectorXd bending_force(const FiberState& state, const BCLift& lift) {
  const int n = state.grid.n;
  VectorXd f(3 * n);
  for (int d = 0; d < 3; ++d) {
    VectorXd comp(n);
    for (int j = 0; j < n; ++j) comp(j) = state.X(3 * j + d);
    VectorXd res = lift.F_kappa * comp + lift.beta_kappa.col(d);
    for (int j = 0; j < n; ++j) f(3 * j + d) = res(j);
  }
  return f;
}

TwistForces twist_force_and_torque(const FiberState& state, const BCLift& lift) {
  const int n = state.grid.n;
  VectorXd Xt = lift.lift_X(state.X);
  VectorXd pt = lift.lift_psi(state.psi);
  const MatrixXd& D4 = lift.ops_np4->D;
  VectorXd x1 = apply_per_component(lift.up_np4_2n * D4, Xt);
  VectorXd x2 = apply_per_component(lift.up_np4_2n * D4 * D4, Xt);
  VectorXd x3 = apply_per_component(lift.up_np4_2n * D4 * D4 * D4, Xt);
  VectorXd u0 = lift.up_np2_2n * pt;
  VectorXd u1 = lift.up_np2_2n * (lift.ops_np2->D * pt);
  const int n2 = 2 * n;
  VectorXd f2n(3 * n2);
  for (int p = 0; p < n2; ++p) {
    const Vec3 a = node(x1, p), b = node(x2, p), c = node(x3, p);
    set_node(f2n, p, lift.gamma * (u1(p) * a.cross(b) + u0(p) * a.cross(c)));
  }
  TwistForces out;
  out.f_gamma = apply_per_component(lift.R_2n, f2n);
  out.n_par = lift.gamma * (lift.R_psi * (lift.ops_np2->D * pt));
  return out;
}

double elastic_energy(const FiberState& state, const BCLift& lift) {
  VectorXd Xt = lift.lift_X(state.X);
  const MatrixXd& D4 = lift.ops_np4->D;
  VectorXd dtau = apply_per_component(D4 * D4, Xt);
  double bend = 0.0;
  for (int q = 0; q < lift.grid_np4.n; ++q) bend += lift.grid_np4.weights(q) * node(dtau, q).squaredNorm();
  // Twist density is upsampled by plain interpolation; the BC lift is not
  // involved in the energy diagnostic.
  MatrixXd up = spectral::interpolation_matrix(state.grid, lift.grid_np2);
  VectorXd psi2 = up * state.psi;
  double tw = 0.0;
  for (int q = 0; q < lift.grid_np2.n; ++q) tw += lift.grid_np2.weights(q) * psi2(q) * psi2(q);
  return 0.5 * lift.kappa * bend + 0.5 * lift.gamma * tw;
}

Frame bishop_frame(const FiberState& state, const VectorXd& dtau) {
  const int n = state.grid.n;
  SpectralOps ops(state.grid);
  MatrixXd sys = MatrixXd::Zero(3 * n + 3, 3 * n + 3);
  // rows: (I - Ddag0 [(tau x dtau) x]) b1 + c = 0 ; b1(L/2) = D1_mid
  MatrixXd A = MatrixXd::Identity(3 * n, 3 * n);
  MatrixXd Dd = stack3(ops.Ddag0);
  MatrixXd W = MatrixXd::Zero(3 * n, 3 * n);
  for (int p = 0; p < n; ++p)
    W.block<3, 3>(3 * p, 3 * p) = cross_matrix(node(state.tau, p).cross(node(dtau, p)));
  A -= Dd * W;
  sys.topLeftCorner(3 * n, 3 * n) = A;
  for (int p = 0; p < n; ++p) sys.block<3, 3>(3 * p, 3 * n, 3, 3) = Mat3::Identity();
  VectorXd mid(1);
  mid << 0.5 * state.grid.length;
  MatrixXd P = spectral::interpolation_matrix(state.grid, mid);
  for (int m = 0; m < n; ++m)
    for (int d = 0; d < 3; ++d) sys(3 * n + d, 3 * m + d) = P(0, m);
  VectorXd rhs = VectorXd::Zero(3 * n + 3);
  rhs.tail(3) = state.D1_mid;
  Eigen::FullPivLU<MatrixXd> lu(sys);
  if (!lu.isInvertible()) throw std::runtime_error("bishop_frame: degenerate frame system");
  VectorXd sol = lu.solve(rhs);
  Frame fr;
  fr.b1 = sol.head(3 * n);
  fr.b2.resize(3 * n);
  for (int p = 0; p < n; ++p) set_node(fr.b2, p, node(state.tau, p).cross(node(fr.b1, p)));
  return fr;
}

Frame material_frame(const FiberState& state, const Frame& bishop, const VectorXd& theta) {
  const int n = state.grid.n;
  Frame fr;
  fr.b1.resize(3 * n);
  fr.b2.resize(3 * n);
  for (int p = 0; p < n; ++p) {
    const double c = std::cos(theta(p)), s = std::sin(theta(p));
    set_node(fr.b1, p, c * node(bishop.b1, p) + s * node(bishop.b2, p));
    set_node(fr.b2, p, -s * node(bishop.b1, p) + c * node(bishop.b2, p));
  }
  return fr;
}

VectorXd twist_angle(const FiberState& state, const SpectralOps& ops) {
  VectorXd theta = ops.Ddag0 * state.psi;
  theta.array() -= spectral::interp_value(state.grid, theta, 0.5 * state.grid.length);
  return theta;
}

IntrinsicForces intrinsic_forces(const FiberState& state, const BCLift& lift, const Frame& material,
                                 double kappa1, double kappa2, double phi) {
  const int n = state.grid.n;
  const double L = state.grid.length;
  const double kappa = lift.kappa, gamma = lift.gamma;

  // Modified free-end boundary values from the preferred strains.
  auto frame_at = [&](double s, const VectorXd& f) { return spectral::interp_vec3(state.grid, f, s); };
  MatrixXd bvals = MatrixXd::Zero(4, 3);
  const Vec3 d1_0 = frame_at(0.0, material.b1), d2_0 = frame_at(0.0, material.b2);
  const Vec3 d1_L = frame_at(L, material.b1), d2_L = frame_at(L, material.b2);
  BCLift mod = lift;
  {
    const int m4 = n + 4;
    const MatrixXd& D4 = lift.ops_np4->D;
    MatrixXd D2 = D4 * D4;
    MatrixXd D3 = D2 * D4;
    MatrixXd sys(m4, m4);
    sys.topRows(n) = lift.R_X;
    if (lift.kind == BcKind::FreeFree) {
      sys.row(n) = D2.row(0);
      sys.row(n + 1) = D3.row(0);
      bvals.row(0) = (kappa2 * d1_0 - kappa1 * d2_0).transpose();
      bvals.row(1) = (kappa1 * phi * d1_0 + kappa2 * phi * d2_0).transpose();
    } else {
      sys.row(n).setZero();
      sys(n, 0) = 1.0;
      sys.row(n + 1) = D4.row(0);
      bvals.row(0) = state.anchor.transpose();
      bvals.row(1) = spectral::interp_vec3(state.grid, state.tau, 0.0).normalized().transpose();
    }
    sys.row(n + 2) = D2.row(m4 - 1);
    sys.row(n + 3) = D3.row(m4 - 1);
    bvals.row(2) = (kappa2 * d1_L - kappa1 * d2_L).transpose();
    bvals.row(3) = (kappa1 * phi * d1_L + kappa2 * phi * d2_L).transpose();
    Eigen::PartialPivLU<MatrixXd> lu(sys);
    MatrixXd rhsB = MatrixXd::Zero(m4, 3);
    rhsB.bottomRows(4) = bvals;
    mod.beta_X = lu.solve(rhsB);
    mod.beta_kappa = -kappa * lift.R_X * D2 * D2 * mod.beta_X;
  }
  {
    const int m2 = n + 2;
    MatrixXd psys(m2, m2);
    psys.topRows(n) = lift.R_psi;
    psys.row(n).setZero();
    psys(n, 0) = 1.0;
    psys.row(n + 1).setZero();
    psys(n + 1, m2 - 1) = 1.0;
    VectorXd prhs = VectorXd::Zero(m2);
    prhs(n) = phi;
    prhs(n + 1) = phi;
    Eigen::PartialPivLU<MatrixXd> plu(psys);
    mod.beta_psi = plu.solve(prhs);
    mod.beta_n = gamma * lift.ops_np2->D * mod.beta_psi;
  }

  VectorXd fk = bending_force(state, mod);

  // Twist force with the preferred angle: gamma d/ds[(psi - phi)(tau x dtau)].
  VectorXd Xt = mod.lift_X(state.X);
  VectorXd pt = mod.lift_psi(state.psi);
  const MatrixXd& D4 = lift.ops_np4->D;
  VectorXd x1 = apply_per_component(lift.up_np4_2n * D4, Xt);
  VectorXd x2 = apply_per_component(lift.up_np4_2n * D4 * D4, Xt);
  VectorXd x3 = apply_per_component(lift.up_np4_2n * D4 * D4 * D4, Xt);
  VectorXd u0 = lift.up_np2_2n * pt;
  VectorXd u1 = lift.up_np2_2n * (lift.ops_np2->D * pt);
  const int n2 = 2 * n;
  VectorXd f2n(3 * n2);
  for (int p = 0; p < n2; ++p) {
    const Vec3 a = node(x1, p), b = node(x2, p), c = node(x3, p);
    set_node(f2n, p, gamma * (u1(p) * a.cross(b) + (u0(p) - phi) * a.cross(c)));
  }
  VectorXd fg = apply_per_component(lift.R_2n, f2n);

  // Intrinsic-curvature force correction kappa d/ds(kappa1 psi D1 + kappa2 psi D2).
  SpectralOps ops_n(state.grid);
  VectorXd corr = VectorXd::Zero(3 * n);
  if (kappa1 != 0.0 || kappa2 != 0.0) {
    VectorXd Fc(3 * n);
    for (int p = 0; p < n; ++p)
      set_node(Fc, p,
               kappa * state.psi(p) * (kappa1 * node(material.b1, p) + kappa2 * node(material.b2, p)));
    corr = apply_per_component(ops_n.D, Fc);
  }

  IntrinsicForces out;
  out.f = fk + fg + corr;
  VectorXd dtau = apply_per_component(lift.R_X * D4 * D4, Xt);
  out.n_par = gamma * (lift.R_psi * (lift.ops_np2->D * pt));
  for (int p = 0; p < n; ++p)
    out.n_par(p) += kappa * (kappa1 * node(material.b1, p).dot(node(dtau, p)) +
                             kappa2 * node(material.b2, p).dot(node(dtau, p)));
  return out;
}

}  // namespace fiberflow::fiber
