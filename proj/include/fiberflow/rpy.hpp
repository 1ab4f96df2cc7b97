#pragma once

#include "fiberflow/types.hpp"

namespace fiberflow::rpy {

/// Regularization radius and viscosity shared by all kernel evaluations.
struct KernelParams {
  double a_hat;  ///< regularized radius (length)
  double mu;     ///< fluid viscosity

  KernelParams(double a_hat_, double mu_);

  /// Radius calibrated from the true cylinder radius, a_hat = a e^{3/2} / 4.
  static KernelParams from_true_radius(double a, double mu);
};

/// Oseen tensor (I + RR)/(8 pi mu R). Throws on coincident points.
Mat3 stokeslet(const Vec3& x, const Vec3& y, double mu);

/// Doublet (I - 3RR)/(8 pi mu R^3), the Laplacian of the Stokeslet. Throws on
/// coincident points.
Mat3 doublet(const Vec3& x, const Vec3& y, double mu);

// Pair mobilities. Velocity/angular velocity at x due to a regularized
// force/torque at y. Each returns the correct overlapping branch for
// R < 2 a_hat; R = 2 a_hat is classified into the far branch, where the two
// branches agree.
Mat3 rpy_tt(const Vec3& x, const Vec3& y, const KernelParams& p);
Mat3 rpy_tr(const Vec3& x, const Vec3& y, const KernelParams& p);
Mat3 rpy_rt(const Vec3& x, const Vec3& y, const KernelParams& p);
Mat3 rpy_rr(const Vec3& x, const Vec3& y, const KernelParams& p);

}  // namespace fiberflow::rpy
