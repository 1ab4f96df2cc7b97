#include "fiberflow/trajectory.hpp"

#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <stdexcept>

namespace fiberflow::io {

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

TrajectoryRecord make_record(const dynamics::Stepper& stepper, const dynamics::SaddleSolution& sol) {
  TrajectoryRecord r;
  const fiber::FiberState& st = stepper.state();
  r.t = st.time;
  r.s = st.grid.nodes;
  r.X = st.X;
  r.tau = st.tau;
  r.psi = st.psi;
  r.lambda = sol.lambda;
  r.U = sol.U;
  r.omega_par = sol.omega_par;
  fiber::FiberState tmp = st;
  r.bend_energy = 0.0;
  r.twist_energy = 0.0;
  {
    // split energies from the lift diagnostics
    const fiber::BCLift& lift = stepper.lift();
    VectorXd Xt = lift.lift_X(st.X);
    const MatrixXd& D4 = lift.ops_np4->D;
    VectorXd dtau = apply_per_component(D4 * D4, Xt);
    for (int q = 0; q < lift.grid_np4.n; ++q)
      r.bend_energy += 0.5 * lift.kappa * lift.grid_np4.weights(q) * node(dtau, q).squaredNorm();
    MatrixXd up = spectral::interpolation_matrix(st.grid, lift.grid_np2);
    VectorXd psi2 = up * st.psi;
    for (int q = 0; q < lift.grid_np2.n; ++q)
      r.twist_energy += 0.5 * lift.gamma * lift.grid_np2.weights(q) * psi2(q) * psi2(q);
  }
  r.endpoint = stepper.endpoint();
  r.min_self_distance = stepper.min_self_distance();
  return r;
}

void write_trajectory_csv(const std::string& path, const std::vector<TrajectoryRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << "t,s,X1,X2,X3,tau1,tau2,tau3,psi,lam1,lam2,lam3\n";
  for (const auto& r : records) {
    const int n = static_cast<int>(r.s.size());
    for (int p = 0; p < n; ++p) {
      out << format_full(r.t) << ',' << format_full(r.s(p));
      for (int d = 0; d < 3; ++d) out << ',' << format_full(r.X(3 * p + d));
      for (int d = 0; d < 3; ++d) out << ',' << format_full(r.tau(3 * p + d));
      out << ',' << format_full(r.psi(p));
      for (int d = 0; d < 3; ++d) out << ',' << format_full(r.lambda(3 * p + d));
      out << '\n';
    }
  }
}

void write_summary_json(const std::string& path, const std::string& config_json,
                        const std::vector<TrajectoryRecord>& records,
                        const std::vector<std::pair<std::string, std::string>>& classification) {
  nlohmann::json j;
  j["config"] = nlohmann::json::parse(config_json);
  j["steps"] = records.size();
  auto series = nlohmann::json::array();
  for (const auto& r : records) {
    nlohmann::json e;
    e["t"] = r.t;
    e["bend_energy"] = r.bend_energy;
    e["twist_energy"] = r.twist_energy;
    e["endpoint"] = {r.endpoint.x(), r.endpoint.y(), r.endpoint.z()};
    e["min_self_distance"] = r.min_self_distance;
    series.push_back(e);
  }
  j["diagnostics"] = series;
  for (const auto& [k, v] : classification) j[k] = v;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  for (size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_full(row[i]);
    out << '\n';
  }
}

}  // namespace fiberflow::io
