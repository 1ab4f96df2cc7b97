#pragma once

#include <vector>

#include "fiberflow/rpy.hpp"
#include "fiberflow/types.hpp"

namespace fiberflow::local_drag {

using rpy::KernelParams;

/// Scalar rot-rot mobility m_rr(s) with 8 pi mu Omega_par = (p_I + p_tau) n_par.
/// Interior nodes (2a <= s <= L - 2a) use the closed form
/// (9/4 - a^2/(2 s^2) - a^2/(2 (L-s)^2)) / a^2; endpoint zones are tabulated by
/// integrating the overlapping rot-rot branch plus the far-field doublet along
/// a locally straight fiber over the truncated rescaled domain.
VectorXd rotrot_coefficients(const VectorXd& s, double L, const KernelParams& p);

/// Uniform rot-rot mobility 9/(32 pi mu a^2) of an ellipsoidally tapered fiber.
double rotrot_ellipsoidal(const KernelParams& p);

/// Three-case closed form for the subtracted Stokeslet integral over D(s):
/// log(s(L-s)/(4a^2)) in the interior, log((L-s)/(2a)) and log(s/(2a)) in the
/// endpoint zones.
double stokeslet_log_factor(double s, double L, double a_hat);

/// Doublet singular part of the trans-trans mobility (2a^2/3 factor included):
/// 8 pi mu U = (2/3)(I - 3 tau tau) f * dblt factor.
double doublet_inner_factor(double s, double L, double a_hat);

/// Local-drag trans-trans coefficients c_I, c_tau with
/// 8 pi mu U = (c_I I + c_tau tau tau) f. The near-field contribution is
/// integrated numerically over the truncated rescaled domain, reproducing
/// (23/6, 1/2) in the interior.
struct LocalTT {
  double c_I;
  double c_tau;
};
LocalTT cylindrical_tt(double s, double L, const KernelParams& p);

/// Ellipsoidal (uniform) local drag: c_I = log(1/(16 ehat^2)) + 4,
/// c_tau = log(1/(16 ehat^2)).
LocalTT ellipsoidal_tt(double L, const KernelParams& p);

}  // namespace fiberflow::local_drag
