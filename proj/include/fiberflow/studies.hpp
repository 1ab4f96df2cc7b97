#pragma once

#include <functional>
#include <vector>

#include "fiberflow/dynamics.hpp"

namespace fiberflow::studies {

using dynamics::Problem;
using fiber::FiberState;

/// Critical twirling frequency of the ellipsoidal local-drag model,
/// 8.9 m_rr kappa / L^2 with m_rr = 9/(32 pi mu a^2).
double omega_c_eld(double L, double kappa, double mu, double a_hat);

/// Whirling frequency of the ellipsoidal local-drag model,
/// 22.9 kappa (log(1/(16 ehat^2)) + 4) / (8 pi mu L^4).
double chi_c_eld(double L, double kappa, double mu, double ehat);

/// Steady twirl twist profile psi(s) = (omega/gamma) int_L^s 1/m_rr.
VectorXd twirl_initial_psi(const spectral::ChebGrid& grid, const Problem& prob, double omega);

/// Clamped whirl state (perturbation delta) with the steady twist profile.
FiberState twirl_state(int n, double L, double delta, const Problem& prob, double omega);

struct EndpointTrace {
  std::vector<double> t, x, y, z;
  std::vector<double> amplitude;  ///< sqrt(x^2 + z^2)
};

enum class Growth { Decay = -1, Neutral = 0, Grow = 1 };

struct GrowthResult {
  EndpointTrace trace;
  double rate = 0.0;    ///< fitted d/dt log amplitude
  double period = 0.0;  ///< from zero crossings of the endpoint x trace
  Growth classification = Growth::Neutral;
};

/// Simulate a twirling fiber for `periods` whirl periods and classify the
/// transverse endpoint amplitude as growing, decaying or neutral
/// (|rate| * period < 1e-2).
GrowthResult twirl_growth_run(const Problem& prob, int n, double L, double delta, double omega,
                              double periods, int steps_per_period);

/// Bisection for the frequency ratio (omega / omega_c_eld) at which growth
/// changes sign; bracket [lo, hi] must straddle it. Tolerance on the ratio.
double find_neutral_frequency(const Problem& prob, int n, double L, double delta, double lo, double hi,
                              double tol, double periods, int steps_per_period,
                              std::function<void(double, const GrowthResult&)> on_point = {});

/// L2 distance between the relaxed fiber with twist modulus gamma and the
/// gamma = 0 run (q = 7 family), at time t_end.
struct RelaxPoint {
  double gamma;
  double diff;  ///< L2 norm of the position difference
};
std::vector<RelaxPoint> relax_study(const Problem& base, int n, double L, double q,
                                    const std::vector<double>& gammas, double dt, double t_end);

struct OverwhirlPoint {
  double omega;
  double amplitude = 0.0;  ///< steady sqrt(X(L)^2 + Z(L)^2)
  double y_end = 0.0;      ///< steady Y(L)
  double chi = 0.0;        ///< crankshaft frequency
  bool overwhirling = false;
  bool steady = false;
  bool self_intersected = false;
};

/// Run at fixed omega from the given state until the crankshaft frequency
/// drifts < drift_tol over 5 periods (or t_max); returns the endpoint metrics
/// and leaves the final state in `state` for continuation.
OverwhirlPoint overwhirl_run(const Problem& prob, FiberState& state, double omega, double dt,
                             double t_max, double drift_tol = 2e-3);

}  // namespace fiberflow::studies
