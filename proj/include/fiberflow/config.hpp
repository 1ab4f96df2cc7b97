#pragma once

#include <string>

#include "fiberflow/dynamics.hpp"

namespace fiberflow::io {

/// One simulation configuration, parsed from a versioned JSON file.
struct SimConfig {
  int schema_version = 1;
  double L = 2.0;
  double epshat = 1e-2;  ///< a_hat / L
  double mu = 1.0;
  double kappa = 1.0;
  double gamma = 0.0;
  int N = 32;
  int N2 = 8;
  double dt = 1e-4;
  double t_end = 1e-2;

  std::string bc = "free";         ///< "free" | "clamped"
  std::string drive = "omega";     ///< "omega" | "torque"
  double omega = 0.0;
  double torque = 0.0;

  std::string shape = "qfiber";    ///< "qfiber" | "whirl" | "straight"
  double q = 7.0;
  double delta = 0.01;

  std::string psi0 = "zero";       ///< "zero" | "sine" | "twirl-steady"

  std::string mobility = "spectral-rpy";  ///< | "ellipsoidal-ld" | "cylindrical-ld"
  bool rot_trans = true;

  int output_every = 10;

  dynamics::Problem problem() const;
  fiber::FiberState initial_state() const;
  double a_hat() const { return epshat * L; }
};

/// Parse a config file; throws std::runtime_error naming the offending field.
SimConfig load_config(const std::string& path);

/// Echo the configuration as a JSON string (round-trips through load_config).
std::string config_json(const SimConfig& cfg);

}  // namespace fiberflow::io
