#pragma once

#include "fiberflow/fiber.hpp"
#include "fiberflow/geometry.hpp"

namespace fiberflow::kinematics {

using fiber::BcKind;

/// Discrete inextensible-motion operators built on a doubled grid and
/// restricted back: K = R J E with J the integrated cross-product map and
/// K* = R J* E its L2 adjoint. Free fibers prepend rigid-translation columns
/// to K and the total-force rows to K*.
struct KinematicOps {
  BcKind kind = BcKind::FreeFree;
  MatrixXd K;      ///< 3N x ndof (ndof = 3N + 3 free, 3N clamped)
  MatrixXd Kstar;  ///< nconstr x 3N (nconstr = 3N + 3 free, 3N clamped)
  MatrixXd J;      ///< 6N x 6N doubled-grid map (kept for diagnostics)
  spectral::ChebGrid grid2n;
  VectorXd tau2n;  ///< tangent interpolated to the doubled grid

  int ndof() const { return static_cast<int>(K.cols()); }
};

KinematicOps build_kinematics(const FiberGeometry& geom, BcKind kind);

/// Omega_perp = tau x dU/ds on the collocation grid.
VectorXd omega_perp_from_velocity(const FiberGeometry& geom, const spectral::SpectralOps& ops,
                                  const VectorXd& U);

/// Least-squares pseudo-inverse solve with relative singular value cutoff
/// max(rows, cols) * eps * sigma_max.
VectorXd pinv_solve(const MatrixXd& A, const VectorXd& b, double cutoff_scale = 1.0);

}  // namespace fiberflow::kinematics
