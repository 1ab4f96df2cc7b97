// Command-line driver: single-fiber simulations and the study tables behind
// the convergence and twirling figures.

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>

#include "fiberflow/blob.hpp"
#include "fiberflow/config.hpp"
#include "fiberflow/oversampled.hpp"
#include "fiberflow/parallel.hpp"
#include "fiberflow/studies.hpp"
#include "fiberflow/trajectory.hpp"

using namespace fiberflow;
namespace fs = std::filesystem;

namespace {

int run_simulate(const std::string& mode, const io::SimConfig& cfg, const std::string& outdir) {
  fs::create_directories(outdir);
  dynamics::Problem prob = cfg.problem();
  fiber::FiberState st = cfg.initial_state();
  if (mode != "relax" && cfg.psi0 == "zero") st.psi = studies::twirl_initial_psi(st.grid, prob, cfg.omega);

  dynamics::Stepper stepper(st, prob);
  std::vector<io::TrajectoryRecord> records;
  std::vector<std::pair<std::string, std::string>> cls;
  int exit_code = 0;

  const int nsteps = static_cast<int>(std::lround(cfg.t_end / cfg.dt));
  try {
    for (int k = 0; k < nsteps; ++k) {
      dynamics::SaddleSolution sol = stepper.step(cfg.dt);
      if (k % cfg.output_every == 0 || k == nsteps - 1) {
        io::TrajectoryRecord rec = io::make_record(stepper, sol);
        records.push_back(rec);
        if (rec.min_self_distance < 2.0 * prob.params.a_hat) {
          cls.emplace_back("stop_reason", "self-intersection");
          exit_code = 3;
          break;
        }
      }
    }
  } catch (const dynamics::DivergenceError&) {
    cls.emplace_back("stop_reason", "divergence");
    exit_code = 2;
  }
  if (exit_code == 0) cls.emplace_back("stop_reason", "completed");
  io::write_trajectory_csv(outdir + "/trajectory.csv", records);
  io::write_summary_json(outdir + "/summary.json", io::config_json(cfg), records, cls);
  return exit_code;
}

fiber::TwistForces benchmark_forces(const fiber::FiberState& st, const fiber::BCLift& lift) {
  return fiber::twist_force_and_torque(st, lift);
}

int run_study(const std::string& which, const io::SimConfig& cfg, const std::string& outdir) {
  fs::create_directories(outdir);
  const double L = cfg.L, mu = cfg.mu;
  rpy::KernelParams params(cfg.a_hat(), mu);

  if (which == "eigenvalues") {
    std::vector<std::vector<double>> rows;
    for (int n : {15, 30, 45, 60}) {
      FiberGeometry geom = fiber::qfiber_geometry(n, L, cfg.q);
      spectral::SpectralOps ops(geom.grid);
      mobility::QuadPrecompute pre = mobility::precompute(geom.grid, ops, params, cfg.N2);
      mobility::MobilityOptions mo;
      mo.n2 = cfg.N2;
      mobility::MobilitySet set = mobility::build_mobility(geom, ops, params, pre, mo);
      Eigen::VectorXcd ev = mobility::eigenvalues(set.Mtt);
      for (int k = 0; k < ev.size(); ++k)
        rows.push_back({double(n), double(k), std::abs(ev(k)), ev(k).real() > 0 ? 1.0 : 0.0, 0.0});
      if (n == 45) {
        MatrixXd Mos = mobility::oversampled_mtt_matrix(geom, params);
        Eigen::VectorXcd evo = mobility::eigenvalues(Mos);
        for (int k = 0; k < evo.size(); ++k)
          rows.push_back({double(n), double(k), std::abs(evo(k)), evo(k).real() > 0 ? 1.0 : 0.0, 1.0});
      }
    }
    io::write_csv(outdir + "/eigenvalues.csv", {"N", "k", "abs_lambda", "real_positive", "oversampled"},
                  rows);
    return 0;
  }

  if (which == "quadrature") {
    std::vector<std::vector<double>> rows;
    for (int n : {8, 12, 16, 20, 24, 28, 32, 40}) {
      fiber::FiberState st = fiber::make_qfiber(n, L, cfg.q);
      for (int p = 0; p < n; ++p) st.psi(p) = std::sin(2.0 * M_PI * st.grid.nodes(p));
      fiber::BCLift lift = fiber::build_bc_lift(st, fiber::BcKind::FreeFree, {}, cfg.kappa, cfg.gamma);
      FiberGeometry geom = fiber::lift_geometry(st, lift);
      spectral::SpectralOps ops(geom.grid);
      VectorXd f = fiber::bending_force(st, lift);
      fiber::TwistForces tw = benchmark_forces(st, lift);
      f += tw.f_gamma;
      mobility::QuadPrecompute pre = mobility::precompute(geom.grid, ops, params, cfg.N2);
      mobility::MobilityOptions mo;
      mo.n2 = cfg.N2;
      mobility::MobilitySet set = mobility::build_mobility(geom, ops, params, pre, mo);
      auto rel = [](const VectorXd& a, const VectorXd& b) { return (a - b).norm() / b.norm(); };
      VectorXd u_ref = mobility::oversampled_mtt(geom, params, f);
      VectorXd utr_ref = mobility::oversampled_mtr(geom, params, tw.n_par);
      VectorXd ort_ref = mobility::oversampled_mrt(geom, params, f);
      VectorXd orr_ref = mobility::oversampled_mrr(geom, params, tw.n_par);
      rows.push_back({double(n), rel(set.Mtt * f, u_ref), rel(set.Mtr * tw.n_par, utr_ref),
                      rel(set.Mrt * f, ort_ref), rel(set.mrr.cwiseProduct(tw.n_par), orr_ref)});
    }
    io::write_csv(outdir + "/quadrature.csv", {"N", "err_tt", "err_tr", "err_rt", "err_rr"}, rows);
    return 0;
  }

  if (which == "static-convergence") {
    std::vector<std::vector<double>> rows;
    auto solve_at = [&](int n) {
      io::SimConfig c = cfg;
      c.N = n;
      c.shape = "qfiber";
      c.psi0 = "sine";
      fiber::FiberState st = c.initial_state();
      return std::make_pair(st, dynamics::solve_static(st, c.problem()));
    };
    for (int n : {16, 24, 32, 40}) {
      auto [st1, s1] = solve_at(n);
      auto [st2, s2] = solve_at(n + 8);
      spectral::ChebGrid fine = spectral::make_grid(128, spectral::GridKind::Type1, L);
      MatrixXd P1 = spectral::interpolation_matrix(st1.grid, fine);
      MatrixXd P2 = spectral::interpolation_matrix(st2.grid, fine);
      VectorXd du = apply_per_component(P1, s1.U) - apply_per_component(P2, s2.U);
      VectorXd u2 = apply_per_component(P2, s2.U);
      VectorXd dom = P1 * s1.omega_par - P2 * s2.omega_par;
      VectorXd om2 = P2 * s2.omega_par;
      rows.push_back({double(n), du.norm() / u2.norm(), dom.norm() / om2.norm()});
    }
    io::write_csv(outdir + "/static_convergence.csv", {"N", "err_U", "err_Omega"}, rows);
    return 0;
  }

  if (which == "lambda-moments") {
    std::vector<std::vector<double>> rows;
    const int kmax = 19;
    // Blob reference at two resolutions, Richardson extrapolated.
    auto tau_fn = [&](double s) { return fiber::qfiber_tau(s, L, cfg.q); };
    fiber::FiberState ref = fiber::make_qfiber(64, L, cfg.q);
    auto X_fn = [&](double s) { return spectral::interp_vec3(ref.grid, ref.X, s); };
    auto forces_at = [&](const blob::BlobChain& ch) {
      VectorXd f(3 * ch.n_links), npar(ch.n_links);
      for (int j = 0; j < ch.n_links; ++j) {
        const double s = ch.s_links(j);
        Vec3 fk = -cfg.kappa * fiber::qfiber_d3tau(s, L, cfg.q);
        const double psi = std::sin(2.0 * M_PI * s), dpsi = 2.0 * M_PI * std::cos(2.0 * M_PI * s);
        Vec3 txdt = fiber::qfiber_tau(s, L, cfg.q).cross(fiber::qfiber_dtau(s, L, cfg.q));
        Vec3 d_txdt = fiber::qfiber_tau(s, L, cfg.q).cross(fiber::qfiber_d2tau(s, L, cfg.q));
        set_node(f, j, fk + cfg.gamma * (dpsi * txdt + psi * d_txdt));
        npar(j) = cfg.gamma * dpsi;
      }
      return std::make_pair(f, npar);
    };
    blob::BlobChain c1 = blob::make_chain(200, L, X_fn, tau_fn);
    blob::BlobChain c2 = blob::make_chain(400, L, X_fn, tau_fn);
    auto [f1, n1] = forces_at(c1);
    auto [f2, n2] = forces_at(c2);
    blob::EulerBlobSolution b1 = blob::solve_euler_blob(c1, params, f1, n1);
    blob::EulerBlobSolution b2 = blob::solve_euler_blob(c2, params, f2, n2);
    VectorXd m1 = blob::moments(c1, b1.lambda, kmax);
    VectorXd m2 = blob::moments(c2, b2.lambda, kmax);
    VectorXd mref = (4.0 * m2 - m1) / 3.0;
    for (int n : {16, 24, 32, 40}) {
      io::SimConfig c = cfg;
      c.N = n;
      c.shape = "qfiber";
      c.psi0 = "sine";
      fiber::FiberState st = c.initial_state();
      dynamics::SaddleSolution sol = dynamics::solve_static(st, c.problem());
      spectral::ChebGrid fine = spectral::make_grid(200, spectral::GridKind::Type1, L);
      MatrixXd P = spectral::interpolation_matrix(st.grid, fine);
      VectorXd lam_fine = apply_per_component(P, sol.lambda);
      for (int k = 0; k <= kmax; ++k) {
        double mk = 0.0;
        for (int p = 0; p < fine.n; ++p)
          mk += fine.weights(p) * lam_fine(3 * p) * spectral::chebyshev_values(fine.eta(p), k)(k);
        rows.push_back({double(n), double(k), mk, mref(k)});
      }
    }
    io::write_csv(outdir + "/lambda_moments.csv", {"N", "k", "moment_x", "blob_richardson"}, rows);
    return 0;
  }

  if (which == "kirchhoff-euler") {
    std::vector<std::vector<double>> rows;
    for (auto [kap, gam] : std::vector<std::pair<double, double>>{{1.0, 0.0}, {0.0, 1.0}}) {
      for (double eh : {5e-3, 1e-2, 2e-2, 5e-2}) {
        rpy::KernelParams kp(eh * L, mu);
        const int nb = std::min(400, static_cast<int>(std::lround(1.0 / eh)));
        fiber::FiberState ref = fiber::make_qfiber(64, L, 1.0);
        auto X_fn = [&](double s) { return spectral::interp_vec3(ref.grid, ref.X, s); };
        auto tau_fn = [&](double s) { return fiber::qfiber_tau(s, L, 1.0); };
        blob::BlobChain ch = blob::make_chain(nb, L, X_fn, tau_fn);
        VectorXd f(3 * nb), npar(nb), FE(3 * nb);
        for (int j = 0; j < nb; ++j) {
          const double s = ch.s_links(j);
          const double psi = std::sin(2.0 * M_PI * s), dpsi = 2.0 * M_PI * std::cos(2.0 * M_PI * s);
          Vec3 t = fiber::qfiber_tau(s, L, 1.0), dt = fiber::qfiber_dtau(s, L, 1.0);
          Vec3 fk = -kap * fiber::qfiber_d3tau(s, L, 1.0);
          set_node(f, j, fk + gam * (dpsi * t.cross(dt) + psi * t.cross(fiber::qfiber_d2tau(s, L, 1.0))));
          npar(j) = gam * dpsi;
          set_node(FE, j, -kap * fiber::qfiber_d2tau(s, L, 1.0) + gam * psi * t.cross(dt));
        }
        blob::EulerBlobSolution eb = blob::solve_euler_blob(ch, kp, f, npar);
        blob::KirchhoffMismatch km = blob::solve_kirchhoff_mismatch(ch, kp, f, npar, eb);
        MatrixXd Dbl = stack3(blob::d_nodes_from_links(ch));
        VectorXd dUs = Dbl * km.dU;
        VectorXd Us = Dbl * eb.U;
        VectorXd s_int = ch.s_nodes.segment(1, nb - 1);
        // F_E includes the Euler tension term
        VectorXd T = VectorXd::Zero(nb + 1);
        for (int j = 0; j < nb; ++j)
          T(j + 1) = T(j) + ch.ds * node(eb.lambda, j).dot(node(ch.tau, j));
        VectorXd FE_nodes = VectorXd::Zero(3 * (nb + 1));
        for (int j = 1; j < nb; ++j) {
          const double s = ch.s_nodes(j);
          const double psi = std::sin(2.0 * M_PI * s);
          Vec3 t = fiber::qfiber_tau(s, L, 1.0), dt = fiber::qfiber_dtau(s, L, 1.0);
          Vec3 v = -kap * fiber::qfiber_d2tau(s, L, 1.0) + gam * psi * t.cross(dt) + T(j) * t;
          set_node(FE_nodes, j, v);
        }
        const double dU_rel = blob::interior_norm(dUs, s_int, L, ch.ds) /
                              blob::interior_norm(Us, s_int, L, ch.ds);
        VectorXd dLam_int(3 * (nb - 1)), FE_int(3 * (nb - 1));
        for (int j = 1; j < nb; ++j) {
          set_node(dLam_int, j - 1, node(km.dLambda, j));
          set_node(FE_int, j - 1, node(FE_nodes, j));
        }
        const double dLam_rel = blob::interior_norm(dLam_int, s_int, L, ch.ds) /
                                blob::interior_norm(FE_int, s_int, L, ch.ds);
        const double dOm_rel = blob::interior_norm(km.dOmega_par, ch.s_links, L, ch.ds) /
                               blob::interior_norm(eb.omega_par, ch.s_links, L, ch.ds);
        rows.push_back({kap, gam, eh, dU_rel, dLam_rel, dOm_rel});
      }
    }
    io::write_csv(outdir + "/kirchhoff_euler.csv",
                  {"kappa", "gamma", "epshat", "dU_rel", "dLambda_rel", "dOmega_rel"}, rows);
    return 0;
  }

  if (which == "critical-frequency") {
    dynamics::Problem prob = cfg.problem();
    prob.gamma = cfg.gamma > 0 ? cfg.gamma : 1.0;
    std::vector<std::vector<double>> rows;
    const double wc = studies::omega_c_eld(L, cfg.kappa, mu, cfg.a_hat());
    for (double ratio : {0.7, 0.8, 0.9, 1.0, 1.1}) {
      studies::GrowthResult r =
          studies::twirl_growth_run(prob, cfg.N, L, cfg.delta, ratio * wc, 3.0, 1000);
      rows.push_back({ratio, r.rate, r.period, double(static_cast<int>(r.classification))});
    }
    io::write_csv(outdir + "/critical_frequency.csv", {"omega_ratio", "rate", "period", "classification"},
                  rows);
    return 0;
  }

  std::cerr << "unknown study: " << which << "\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  configure_threads();
  CLI::App app{"fiberflow: twisting slender-fiber dynamics in Stokes flow"};
  app.require_subcommand(1);

  std::string config_path, outdir = ".";
  std::string sim_mode, study_name;

  CLI::App* sim = app.add_subcommand("simulate", "run a dynamic simulation");
  sim->add_option("mode", sim_mode, "relax | twirl | overwhirl")->required();
  sim->add_option("--config", config_path, "config file")->required();
  sim->add_option("--out", outdir, "output directory");

  CLI::App* study = app.add_subcommand("study", "emit a figure-level study table");
  study
      ->add_option("name", study_name,
                   "eigenvalues | quadrature | static-convergence | lambda-moments | "
                   "kirchhoff-euler | critical-frequency")
      ->required();
  study->add_option("--config", config_path, "config file")->required();
  study->add_option("--out", outdir, "output directory");

  CLI11_PARSE(app, argc, argv);

  io::SimConfig cfg;
  try {
    cfg = io::load_config(config_path);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }

  try {
    if (sim->parsed()) return run_simulate(sim_mode, cfg, outdir);
    return run_study(study_name, cfg, outdir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
