#pragma once

#include <memory>

#include "fiberflow/chebyshev.hpp"
#include "fiberflow/geometry.hpp"
#include "fiberflow/types.hpp"

namespace fiberflow::fiber {

enum class BcKind { FreeFree, ClampedFree };

/// Drive applied at the clamped end: either a prescribed spin rate
/// Omega_par(0) = omega or a prescribed parallel torque gamma psi(0) = N0.
struct Drive {
  enum class Kind { AngularVelocity, Torque } kind = Kind::AngularVelocity;
  double omega = 0.0;
  double torque = 0.0;
};

/// Chebyshev representation of one fiber: centerline samples, unit tangents,
/// twist density, the tracked midpoint material vector and the anchor point
/// used to reconstruct X from tau.
struct FiberState {
  spectral::ChebGrid grid;
  VectorXd X;    ///< 3N
  VectorXd tau;  ///< 3N, unit at nodes
  VectorXd psi;  ///< N
  Vec3 D1_mid = Vec3(1, 0, 0);
  Vec3 anchor = Vec3::Zero();  ///< clamp point (clamped) or midpoint (free)
  double time = 0.0;
};

// ---- Benchmark fibers ------------------------------------------------------

/// tau(s) = (cos(q s^3 (s-L)^3), sin(q s^3 (s-L)^3), 1)/sqrt(2); satisfies the
/// free-fiber boundary conditions analytically.
Vec3 qfiber_tau(double s, double L, double q);
Vec3 qfiber_dtau(double s, double L, double q);
Vec3 qfiber_d2tau(double s, double L, double q);
Vec3 qfiber_d3tau(double s, double L, double q);
FiberState make_qfiber(int n, double L, double q);

/// Small whirl perturbation of a straight fiber clamped along y at s = 0.
FiberState make_whirl_fiber(int n, double L, double delta);

/// Exact nodal geometry for the q-family (analytic tangent derivatives).
FiberGeometry qfiber_geometry(int n, double L, double q);

// ---- Rectangular spectral collocation lifts --------------------------------

/// Affine lifts of X (to an N+4 type-2 grid) and psi (to an N+2 type-2 grid)
/// that satisfy the boundary conditions, plus the derived bending-force and
/// torque maps. The psi lift row for an angular-velocity drive depends on the
/// rot-rot mobility and the lagged rot-trans spin at the clamp, so lifts are
/// rebuilt whenever those change.
struct BCLift {
  BcKind kind = BcKind::FreeFree;
  Drive drive;
  double kappa = 1.0, gamma = 0.0;

  spectral::ChebGrid grid_n, grid_np2, grid_np4, grid_2n;
  std::shared_ptr<spectral::SpectralOps> ops_np2, ops_np4;

  MatrixXd E_X;         ///< (N+4) x N
  MatrixXd beta_X;      ///< (N+4) x 3
  MatrixXd R_X;         ///< N x (N+4), evaluation on the collocation grid
  MatrixXd F_kappa;     ///< N x N scalar bending-force map
  MatrixXd beta_kappa;  ///< N x 3

  MatrixXd E_psi;      ///< (N+2) x N
  VectorXd beta_psi;   ///< N+2
  MatrixXd R_psi;      ///< N x (N+2)
  MatrixXd Ntilde;     ///< (N+2) x N, gamma D_{N+2} E_psi
  VectorXd beta_n;     ///< N+2, gamma D_{N+2} beta_psi
  VectorXd mrr_np2;    ///< rot-rot diagonal on the N+2 grid
  MatrixXd psi_sys_inv;  ///< inverse of the bordered psi system

  /// Refresh the inhomogeneous part of the psi lift when the drive row value
  /// (omega - rot-trans spin at the clamp) changes between steps.
  void update_drive_row(double value);

  // upsampling paths used by the twist force (2N anti-aliasing grid)
  MatrixXd up_np4_2n, up_np2_2n;  ///< interpolation to the 2N grid
  MatrixXd R_2n;                  ///< L2 restriction 2N -> N

  VectorXd lift_X(const VectorXd& X) const;      ///< 3(N+4) stacked
  VectorXd lift_psi(const VectorXd& psi) const;  ///< N+2
};

/// Build the lift operators. `mrr_np2` is the rot-rot diagonal on the N+2
/// grid; `omega_rt0` is the (lagged) rot-trans spin at s = 0 entering the
/// angular-velocity BC row. Both are ignored for free fibers.
BCLift build_bc_lift(const FiberState& state, BcKind kind, Drive drive, double kappa, double gamma,
                     const VectorXd& mrr_np2 = VectorXd(), double omega_rt0 = 0.0);

/// Nodal geometry with tangent derivatives from the lifted representation.
FiberGeometry lift_geometry(const FiberState& state, const BCLift& lift);

/// f_kappa = F_kappa X + beta_kappa (per component).
VectorXd bending_force(const FiberState& state, const BCLift& lift);

/// Twist force density and parallel torque density; products are formed on
/// the 2N grid and L2-restricted back to the collocation grid.
struct TwistForces {
  VectorXd f_gamma;  ///< 3N
  VectorXd n_par;    ///< N
};
TwistForces twist_force_and_torque(const FiberState& state, const BCLift& lift);

/// Bending plus twist elastic energy.
double elastic_energy(const FiberState& state, const BCLift& lift);

// ---- Frames ----------------------------------------------------------------

/// Twist-free frame from the bordered integral form of the frame ODE, pinned
/// to D1_mid at the midpoint. Not renormalized.
struct Frame {
  VectorXd b1, b2;  ///< 3N each
};
Frame bishop_frame(const FiberState& state, const VectorXd& dtau);

/// Material frame: Bishop frame rotated about tau by theta(s), where
/// psi = dtheta/ds and theta(L/2) = 0.
Frame material_frame(const FiberState& state, const Frame& bishop, const VectorXd& theta);

/// theta from psi with theta(L/2) = 0.
VectorXd twist_angle(const FiberState& state, const spectral::SpectralOps& ops);

/// Force density and parallel torque for an intrinsically bent/twisted rod.
/// Reduces exactly to bending_force + twist_force_and_torque when
/// kappa1 = kappa2 = phi = 0.
struct IntrinsicForces {
  VectorXd f;      ///< 3N
  VectorXd n_par;  ///< N
};
IntrinsicForces intrinsic_forces(const FiberState& state, const BCLift& lift, const Frame& material,
                                 double kappa1, double kappa2, double phi);

}  // namespace fiberflow::fiber
