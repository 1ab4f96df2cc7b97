#pragma once

#include <optional>
#include <stdexcept>

#include "fiberflow/fiber.hpp"
#include "fiberflow/kinematics.hpp"
#include "fiberflow/mobility.hpp"

namespace fiberflow::dynamics {

using fiber::BcKind;
using fiber::Drive;
using fiber::FiberState;
using mobility::MobilityOptions;
using rpy::KernelParams;

/// Physical and model parameters of one simulation.
struct Problem {
  double kappa = 1.0;
  double gamma = 0.0;
  BcKind bc = BcKind::FreeFree;
  Drive drive;
  KernelParams params{0.02, 1.0};
  MobilityOptions mob;
};

struct SaddleSolution {
  VectorXd lambda;      ///< 3N constraint force density
  VectorXd alpha;       ///< kinematic coefficients
  VectorXd U;           ///< 3N translational velocity
  VectorXd omega_perp;  ///< 3N
  VectorXd omega_par;   ///< N
  VectorXd tension;     ///< N, integral of lambda . tau
  VectorXd f_elastic;   ///< 3N bending + twist force used in the solve
  VectorXd n_par;       ///< N parallel torque density
  VectorXd omega_par_rt;   ///< N rot-trans part of the spin
  double omega_rt0 = 0.0;  ///< rot-trans spin at s = 0
};

struct DivergenceError : std::runtime_error {
  FiberState last_good;
  explicit DivergenceError(const FiberState& st)
      : std::runtime_error("time step produced non-finite values"), last_good(st) {}
};

/// Time stepper: linearly-implicit backward Euler with implicit bending and
/// implicit twist diffusion. Grid-dependent tables are built once; the
/// angular-velocity BC row is refreshed each step with the lagged rot-trans
/// spin at the clamp.
class Stepper {
 public:
  Stepper(const FiberState& init, const Problem& prob);

  const FiberState& state() const { return state_; }
  FiberState& state() { return state_; }
  const Problem& problem() const { return prob_; }
  const fiber::BCLift& lift() const { return lift_; }
  const spectral::SpectralOps& ops() const { return ops_n_; }

  /// Static saddle-point solve at the current state.
  SaddleSolution solve_static();

  /// Advance one time step; returns the solution used for the update.
  SaddleSolution step(double dt);

  double elastic_energy() const;
  Vec3 endpoint() const;  ///< X(L)
  double min_self_distance() const;

 private:
  SaddleSolution solve(double dt_implicit);
  void advance(const SaddleSolution& sol, double dt);

  FiberState state_;
  Problem prob_;
  spectral::SpectralOps ops_n_;
  mobility::QuadPrecompute pre_;
  fiber::BCLift lift_;
  VectorXd mrr_np2_;
  VectorXd mrr_n_;
  double omega_rt0_lag_ = 0.0;
};

/// One-off static solve (builds all tables internally).
SaddleSolution solve_static(const FiberState& state, const Problem& prob);

}  // namespace fiberflow::dynamics
