#include "fiberflow/studies.hpp"

#include <cmath>

#include "fiberflow/local_drag.hpp"

namespace fiberflow::studies {

double omega_c_eld(double L, double kappa, double mu, double a_hat) {
  const double mrr = 9.0 / (32.0 * M_PI * mu * a_hat * a_hat);
  return 8.9 * mrr * kappa / (L * L);
}

double chi_c_eld(double L, double kappa, double mu, double ehat) {
  return 22.9 * kappa * (std::log(1.0 / (16.0 * ehat * ehat)) + 4.0) / (8.0 * M_PI * mu * L * L * L * L);
}

VectorXd twirl_initial_psi(const spectral::ChebGrid& grid, const Problem& prob, double omega) {
  spectral::SpectralOps ops(grid);
  VectorXd inv_mrr =
      mobility::rotrot_diagonal(grid.nodes, grid.length, prob.params, prob.mob.model).cwiseInverse();
  // int_L^s = -int_s^L
  return -(omega / prob.gamma) * (ops.DdagL * inv_mrr);
}

FiberState twirl_state(int n, double L, double delta, const Problem& prob, double omega) {
  FiberState st = fiber::make_whirl_fiber(n, L, delta);
  st.psi = twirl_initial_psi(st.grid, prob, omega);
  return st;
}

namespace {

// Period of the oscillation from the spacing of same-direction zero
// crossings, averaged over up to the last five cycles.
double crossing_period(const std::vector<double>& t, const std::vector<double>& x) {
  std::vector<double> ups;
  for (size_t i = 1; i < x.size(); ++i) {
    if (x[i - 1] <= 0.0 && x[i] > 0.0) {
      const double f = -x[i - 1] / (x[i] - x[i - 1]);
      ups.push_back(t[i - 1] + f * (t[i] - t[i - 1]));
    }
  }
  if (ups.size() < 2) return 0.0;
  const size_t take = std::min<size_t>(6, ups.size());
  const double span = ups.back() - ups[ups.size() - take];
  return span / (take - 1);
}

double fit_log_rate(const std::vector<double>& t, const std::vector<double>& amp, size_t skip) {
  double st = 0, sy = 0, stt = 0, sty = 0;
  size_t n = 0;
  for (size_t i = skip; i < t.size(); ++i) {
    if (amp[i] <= 0) continue;
    const double y = std::log(amp[i]);
    st += t[i];
    sy += y;
    stt += t[i] * t[i];
    sty += t[i] * y;
    ++n;
  }
  if (n < 2) return 0.0;
  return (n * sty - st * sy) / (n * stt - st * st);
}

}  // namespace

GrowthResult twirl_growth_run(const Problem& prob, int n, double L, double delta, double omega,
                              double periods, int steps_per_period) {
  Problem p = prob;
  p.bc = fiber::BcKind::ClampedFree;
  p.drive.kind = fiber::Drive::Kind::AngularVelocity;
  p.drive.omega = omega;
  FiberState st = twirl_state(n, L, delta, p, omega);
  dynamics::Stepper stepper(st, p);

  const double ehat = p.params.a_hat / L;
  const double T = 2.0 * M_PI / chi_c_eld(L, p.kappa, p.params.mu, ehat);
  const double dt = T / steps_per_period;
  const int nsteps = static_cast<int>(std::lround(periods * steps_per_period));

  GrowthResult res;
  for (int k = 0; k < nsteps; ++k) {
    stepper.step(dt);
    const Vec3 e = stepper.endpoint();
    res.trace.t.push_back(stepper.state().time);
    res.trace.x.push_back(e.x());
    res.trace.y.push_back(e.y());
    res.trace.z.push_back(e.z());
    res.trace.amplitude.push_back(std::hypot(e.x(), e.z()));
  }
  res.period = crossing_period(res.trace.t, res.trace.x);
  res.rate = fit_log_rate(res.trace.t, res.trace.amplitude, res.trace.t.size() / 5);
  const double period = res.period > 0 ? res.period : T;
  if (std::abs(res.rate) * period < 1e-2)
    res.classification = Growth::Neutral;
  else
    res.classification = res.rate > 0 ? Growth::Grow : Growth::Decay;
  return res;
}

double find_neutral_frequency(const Problem& prob, int n, double L, double delta, double lo, double hi,
                              double tol, double periods, int steps_per_period,
                              std::function<void(double, const GrowthResult&)> on_point) {
  const double wc = omega_c_eld(L, prob.kappa, prob.params.mu, prob.params.a_hat);
  auto rate_at = [&](double ratio) {
    GrowthResult r = twirl_growth_run(prob, n, L, delta, ratio * wc, periods, steps_per_period);
    if (on_point) on_point(ratio, r);
    return r.rate;
  };
  double flo = rate_at(lo), fhi = rate_at(hi);
  if (flo * fhi > 0) throw std::runtime_error("find_neutral_frequency: bracket does not straddle onset");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double fm = rate_at(mid);
    if (fm * flo <= 0) {
      hi = mid;
      fhi = fm;
    } else {
      lo = mid;
      flo = fm;
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<RelaxPoint> relax_study(const Problem& base, int n, double L, double q,
                                    const std::vector<double>& gammas, double dt, double t_end) {
  auto run = [&](double gamma) {
    Problem p = base;
    p.bc = fiber::BcKind::FreeFree;
    p.gamma = gamma;
    FiberState st = fiber::make_qfiber(n, L, q);
    dynamics::Stepper stepper(st, p);
    const int nsteps = static_cast<int>(std::lround(t_end / dt));
    for (int k = 0; k < nsteps; ++k) stepper.step(dt);
    return stepper.state().X;
  };
  VectorXd X0 = run(0.0);
  const spectral::ChebGrid grid = spectral::make_grid(n, spectral::GridKind::Type1, L);
  std::vector<RelaxPoint> out;
  for (double g : gammas) {
    VectorXd Xg = g == 0.0 ? X0 : run(g);
    double acc = 0.0;
    for (int p = 0; p < n; ++p) acc += grid.weights(p) * (node(Xg, p) - node(X0, p)).squaredNorm();
    out.push_back({g, std::sqrt(acc)});
  }
  return out;
}

OverwhirlPoint overwhirl_run(const Problem& prob, FiberState& state, double omega, double dt,
                             double t_max, double drift_tol) {
  Problem p = prob;
  p.bc = fiber::BcKind::ClampedFree;
  p.drive.kind = fiber::Drive::Kind::AngularVelocity;
  p.drive.omega = omega;
  dynamics::Stepper stepper(state, p);

  OverwhirlPoint pt;
  pt.omega = omega;
  std::vector<double> t, x;
  const double L = state.grid.length;
  double chi_prev = 0.0;
  int checked = 0;
  const int nsteps = static_cast<int>(std::lround(t_max / dt));
  for (int k = 0; k < nsteps; ++k) {
    try {
      stepper.step(dt);
    } catch (const dynamics::DivergenceError&) {
      pt.steady = false;
      state = stepper.state();
      return pt;
    }
    const Vec3 e = stepper.endpoint();
    t.push_back(stepper.state().time);
    x.push_back(e.x());
    pt.amplitude = std::hypot(e.x(), e.z());
    pt.y_end = e.y();
    if (k % 50 == 0 && stepper.min_self_distance() < 2.0 * p.params.a_hat) {
      pt.self_intersected = true;
      state = stepper.state();
      return pt;
    }
    // Check steadiness every half period of the crank estimate.
    if (k % std::max(1, nsteps / 200) == 0 && t.size() > 50) {
      const double period = crossing_period(t, x);
      if (period > 0 && t.back() > 10.0 * period) {
        const double chi = 2.0 * M_PI / period;
        ++checked;
        if (checked > 3 && chi_prev > 0 && std::abs(chi - chi_prev) < drift_tol * chi_prev &&
            t.back() > 15.0 * period) {
          pt.chi = chi;
          pt.steady = true;
          break;
        }
        chi_prev = chi;
      }
    }
  }
  if (!pt.steady && !x.empty()) {
    const double period = crossing_period(t, x);
    if (period > 0) pt.chi = 2.0 * M_PI / period;
  }
  pt.overwhirling = pt.y_end < 0.0 && pt.amplitude > 0.02 * L;
  state = stepper.state();
  return pt;
}

}  // namespace fiberflow::studies
