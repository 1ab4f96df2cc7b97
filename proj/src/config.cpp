#include "fiberflow/config.hpp"

#include <fstream>
#include <json.hpp>

#include "fiberflow/studies.hpp"

namespace fiberflow::io {

using nlohmann::json;

dynamics::Problem SimConfig::problem() const {
  dynamics::Problem p;
  p.kappa = kappa;
  p.gamma = gamma;
  p.bc = bc == "clamped" ? fiber::BcKind::ClampedFree : fiber::BcKind::FreeFree;
  p.drive.kind = drive == "torque" ? fiber::Drive::Kind::Torque : fiber::Drive::Kind::AngularVelocity;
  p.drive.omega = omega;
  p.drive.torque = torque;
  p.params = rpy::KernelParams(a_hat(), mu);
  if (mobility == "ellipsoidal-ld")
    p.mob.model = mobility::MobilityModel::EllipsoidalLocalDrag;
  else if (mobility == "cylindrical-ld")
    p.mob.model = mobility::MobilityModel::CylindricalLocalDrag;
  else
    p.mob.model = mobility::MobilityModel::SpectralRPY;
  p.mob.rot_trans = rot_trans;
  p.mob.n2 = N2;
  return p;
}

fiber::FiberState SimConfig::initial_state() const {
  fiber::FiberState st;
  if (shape == "whirl")
    st = fiber::make_whirl_fiber(N, L, delta);
  else if (shape == "straight")
    st = fiber::make_qfiber(N, L, 0.0);
  else
    st = fiber::make_qfiber(N, L, q);

  if (psi0 == "sine") {
    for (int p = 0; p < N; ++p) st.psi(p) = std::sin(2.0 * M_PI * st.grid.nodes(p));
  } else if (psi0 == "twirl-steady") {
    st.psi = studies::twirl_initial_psi(st.grid, problem(), omega);
  }
  return st;
}

namespace {

template <typename T>
T require(const json& j, const std::string& field) {
  if (!j.contains(field)) throw std::runtime_error("config: missing required field '" + field + "'");
  try {
    return j.at(field).get<T>();
  } catch (const json::exception&) {
    throw std::runtime_error("config: field '" + field + "' has the wrong type");
  }
}

template <typename T>
void optional(const json& j, const std::string& field, T& out) {
  if (!j.contains(field)) return;
  try {
    out = j.at(field).get<T>();
  } catch (const json::exception&) {
    throw std::runtime_error("config: field '" + field + "' has the wrong type");
  }
}

}  // namespace

SimConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("config: parse error: ") + e.what());
  }

  SimConfig c;
  c.schema_version = require<int>(j, "schema_version");
  if (c.schema_version != 1) throw std::runtime_error("config: unsupported schema_version");
  c.L = require<double>(j, "L");
  c.epshat = require<double>(j, "epshat");
  c.mu = require<double>(j, "mu");
  c.kappa = require<double>(j, "kappa");
  c.gamma = require<double>(j, "gamma");
  c.N = require<int>(j, "N");
  optional(j, "N2", c.N2);
  optional(j, "dt", c.dt);
  optional(j, "t_end", c.t_end);
  optional(j, "bc", c.bc);
  optional(j, "drive", c.drive);
  optional(j, "omega", c.omega);
  optional(j, "torque", c.torque);
  optional(j, "shape", c.shape);
  optional(j, "q", c.q);
  optional(j, "delta", c.delta);
  optional(j, "psi0", c.psi0);
  optional(j, "mobility", c.mobility);
  optional(j, "rot_trans", c.rot_trans);
  optional(j, "output_every", c.output_every);

  if (c.L <= 0) throw std::runtime_error("config: L must be positive");
  if (c.mu <= 0) throw std::runtime_error("config: mu must be positive");
  if (c.kappa < 0) throw std::runtime_error("config: kappa must be nonnegative");
  if (c.gamma < 0) throw std::runtime_error("config: gamma must be nonnegative");
  if (c.epshat <= 0 || 4.0 * c.a_hat() >= c.L)
    throw std::runtime_error("config: epshat violates 4 a_hat < L");
  if (c.bc != "free" && c.bc != "clamped") throw std::runtime_error("config: bc must be free|clamped");
  return c;
}

std::string config_json(const SimConfig& c) {
  json j;
  j["schema_version"] = c.schema_version;
  j["L"] = c.L;
  j["epshat"] = c.epshat;
  j["mu"] = c.mu;
  j["kappa"] = c.kappa;
  j["gamma"] = c.gamma;
  j["N"] = c.N;
  j["N2"] = c.N2;
  j["dt"] = c.dt;
  j["t_end"] = c.t_end;
  j["bc"] = c.bc;
  j["drive"] = c.drive;
  j["omega"] = c.omega;
  j["torque"] = c.torque;
  j["shape"] = c.shape;
  j["q"] = c.q;
  j["delta"] = c.delta;
  j["psi0"] = c.psi0;
  j["mobility"] = c.mobility;
  j["rot_trans"] = c.rot_trans;
  j["output_every"] = c.output_every;
  return j.dump(2);
}

}  // namespace fiberflow::io
