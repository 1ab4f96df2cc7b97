#pragma once

#include <string>
#include <vector>

#include "fiberflow/dynamics.hpp"

namespace fiberflow::io {

/// Per-step snapshot written to the trajectory and summary files.
struct TrajectoryRecord {
  double t = 0.0;
  VectorXd s;       ///< N
  VectorXd X;       ///< 3N
  VectorXd tau;     ///< 3N
  VectorXd psi;     ///< N
  VectorXd lambda;  ///< 3N
  VectorXd U;       ///< 3N
  VectorXd omega_par;  ///< N
  double bend_energy = 0.0;
  double twist_energy = 0.0;
  Vec3 endpoint = Vec3::Zero();
  double min_self_distance = 0.0;
};

TrajectoryRecord make_record(const dynamics::Stepper& stepper, const dynamics::SaddleSolution& sol);

/// trajectory.csv: one row per node per record, header
/// t,s,X1,X2,X3,tau1,tau2,tau3,psi,lam1,lam2,lam3. Full double precision,
/// UTF-8, LF line endings.
void write_trajectory_csv(const std::string& path, const std::vector<TrajectoryRecord>& records);

/// summary.json: config echo, diagnostic time series, classification fields.
void write_summary_json(const std::string& path, const std::string& config_json,
                        const std::vector<TrajectoryRecord>& records,
                        const std::vector<std::pair<std::string, std::string>>& classification);

/// Generic CSV table writer (studies).
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

std::string format_full(double v);  ///< 17 significant digits

}  // namespace fiberflow::io
