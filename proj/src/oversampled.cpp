#include "fiberflow/oversampled.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace fiberflow::mobility {

namespace {

struct Rule {
  VectorXd t;       // arclength nodes
  VectorXd w;       // weights
  MatrixXd interp;  // rows from the collocation grid
  std::vector<bool> near;  // |t - s| < 2a
};

// Panels graded geometrically away from the target s within each segment
// between the breakpoints {0, s - 2a, s, s + 2a, L}.
Rule target_rule(const spectral::ChebGrid& grid, double s, double a, const OversampledOptions& opts) {
  const double L = grid.length;
  const double h0 = opts.base_panel * a / opts.refine;
  std::vector<double> edges{0.0, s - 2.0 * a, s, s + 2.0 * a, L};
  std::vector<double> bp;
  for (double e : edges)
    if (e > -1e-15 && e < L + 1e-15) bp.push_back(std::clamp(e, 0.0, L));
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end(), [](double x, double y) { return std::abs(x - y) < 1e-14; }),
           bp.end());

  std::vector<double> ts, ws;
  const int ngl = 16;
  auto add_panel = [&](double lo, double hi) {
    if (hi - lo < 1e-15) return;
    VectorXd x, w;
    gauss_legendre(ngl, lo, hi, x, w);
    for (int i = 0; i < ngl; ++i) {
      ts.push_back(x(i));
      ws.push_back(w(i));
    }
  };
  for (size_t seg = 0; seg + 1 < bp.size(); ++seg) {
    const double lo = bp[seg], hi = bp[seg + 1];
    if (hi - lo < 1e-15) continue;
    // Grade toward whichever end is closer to s.
    const bool from_left = std::abs(lo - s) < std::abs(hi - s);
    double width = h0;
    double done = 0.0;
    std::vector<std::pair<double, double>> panels;
    while (done < hi - lo - 1e-15) {
      const double len = std::min(width, hi - lo - done);
      panels.emplace_back(done, done + len);
      done += len;
      width *= 2.0;
    }
    for (auto& pr : panels) {
      if (from_left)
        add_panel(lo + pr.first, lo + pr.second);
      else
        add_panel(hi - pr.second, hi - pr.first);
    }
  }

  Rule r;
  r.t = Eigen::Map<VectorXd>(ts.data(), ts.size());
  r.w = Eigen::Map<VectorXd>(ws.data(), ws.size());
  r.interp = spectral::interpolation_matrix(grid, r.t);
  r.near.resize(ts.size());
  for (size_t i = 0; i < ts.size(); ++i) r.near[i] = std::abs(ts[i] - s) < 2.0 * a;
  return r;
}

Mat3 tt_kernel(const Vec3& R, bool near, const KernelParams& kp) {
  const double a = kp.a_hat;
  const double pre = 1.0 / (8.0 * M_PI * kp.mu);
  const double r = R.norm();
  const Vec3 rhat = R / r;
  const Mat3 rr = rhat * rhat.transpose();
  if (!near)
    return pre * ((Mat3::Identity() + rr) / r +
                  (2.0 * a * a / 3.0) * (Mat3::Identity() - 3.0 * rr) / (r * r * r));
  return pre * ((4.0 / (3.0 * a) - 3.0 * r / (8.0 * a * a)) * Mat3::Identity() + (r / (8.0 * a * a)) * rr);
}

double rot_coeff(double r, bool near, const KernelParams& kp) {
  const double a = kp.a_hat;
  const double pre = 1.0 / (8.0 * M_PI * kp.mu);
  if (!near) return pre / (r * r * r);
  return pre * (1.0 / a - 3.0 * r / (8.0 * a * a)) / (2.0 * a * a);
}

Mat3 rr_kernel(const Vec3& R, bool near, const KernelParams& kp) {
  const double a = kp.a_hat;
  const double pre = 1.0 / (8.0 * M_PI * kp.mu);
  const double r = R.norm();
  const Vec3 rhat = R / r;
  const Mat3 rr = rhat * rhat.transpose();
  if (!near) return -0.5 * pre * (Mat3::Identity() - 3.0 * rr) / (r * r * r);
  const double a3 = a * a * a;
  const double ci = 1.0 - 27.0 * r / (32.0 * a) + 5.0 * r * r * r / (64.0 * a3);
  const double cr = 9.0 * r / (32.0 * a) - 3.0 * r * r * r / (64.0 * a3);
  return pre / a3 * (ci * Mat3::Identity() + cr * rr);
}

template <typename Accum>
void sweep(const FiberGeometry& geom, const KernelParams& params, const OversampledOptions& opts,
           Accum&& accumulate) {
  const int n = geom.n();
#pragma omp parallel for schedule(dynamic)
  for (int p = 0; p < n; ++p) {
    Rule rule = target_rule(geom.grid, geom.grid.nodes(p), params.a_hat, opts);
    const Vec3 Xp = node(geom.X, p);
    for (int g = 0; g < rule.t.size(); ++g) {
      Vec3 Xg = Vec3::Zero(), tg = Vec3::Zero();
      for (int m = 0; m < n; ++m) {
        Xg += rule.interp(g, m) * node(geom.X, m);
        tg += rule.interp(g, m) * node(geom.tau, m);
      }
      accumulate(p, g, rule, Xp - Xg, tg);
    }
  }
}

}  // namespace

VectorXd oversampled_mtt(const FiberGeometry& geom, const KernelParams& params, const VectorXd& f,
                         const OversampledOptions& opts) {
  const int n = geom.n();
  VectorXd out = VectorXd::Zero(3 * n);
  sweep(geom, params, opts, [&](int p, int g, const Rule& rule, const Vec3& R, const Vec3&) {
    Vec3 fg = Vec3::Zero();
    for (int m = 0; m < n; ++m) fg += rule.interp(g, m) * node(f, m);
    out.segment<3>(3 * p) += rule.w(g) * (tt_kernel(R, rule.near[g], params) * fg);
  });
  return out;
}

VectorXd oversampled_mtr(const FiberGeometry& geom, const KernelParams& params, const VectorXd& npar,
                         const OversampledOptions& opts) {
  const int n = geom.n();
  VectorXd out = VectorXd::Zero(3 * n);
  sweep(geom, params, opts, [&](int p, int g, const Rule& rule, const Vec3& R, const Vec3& tg) {
    double ng = 0.0;
    for (int m = 0; m < n; ++m) ng += rule.interp(g, m) * npar(m);
    out.segment<3>(3 * p) += rule.w(g) * rot_coeff(R.norm(), rule.near[g], params) * ng * tg.cross(R);
  });
  return out;
}

VectorXd oversampled_mrt(const FiberGeometry& geom, const KernelParams& params, const VectorXd& f,
                         const OversampledOptions& opts) {
  const int n = geom.n();
  VectorXd out = VectorXd::Zero(n);
  sweep(geom, params, opts, [&](int p, int g, const Rule& rule, const Vec3& R, const Vec3&) {
    Vec3 fg = Vec3::Zero();
    for (int m = 0; m < n; ++m) fg += rule.interp(g, m) * node(f, m);
    out(p) += rule.w(g) * rot_coeff(R.norm(), rule.near[g], params) * fg.cross(R).dot(node(geom.tau, p));
  });
  return out;
}

VectorXd oversampled_mrr(const FiberGeometry& geom, const KernelParams& params, const VectorXd& npar,
                         const OversampledOptions& opts) {
  const int n = geom.n();
  VectorXd out = VectorXd::Zero(n);
  sweep(geom, params, opts, [&](int p, int g, const Rule& rule, const Vec3& R, const Vec3& tg) {
    double ng = 0.0;
    for (int m = 0; m < n; ++m) ng += rule.interp(g, m) * npar(m);
    out(p) += rule.w(g) * node(geom.tau, p).dot(rr_kernel(R, rule.near[g], params) * (ng * tg));
  });
  return out;
}

MatrixXd oversampled_mtt_matrix(const FiberGeometry& geom, const KernelParams& params,
                                const OversampledOptions& opts) {
  const int n = geom.n();
  MatrixXd M = MatrixXd::Zero(3 * n, 3 * n);
  sweep(geom, params, opts, [&](int p, int g, const Rule& rule, const Vec3& R, const Vec3&) {
    const Mat3 K = rule.w(g) * tt_kernel(R, rule.near[g], params);
    for (int m = 0; m < n; ++m) {
      const double c = rule.interp(g, m);
      if (c != 0.0) M.block<3, 3>(3 * p, 3 * m) += c * K;
    }
  });
  return M;
}

}  // namespace fiberflow::mobility
