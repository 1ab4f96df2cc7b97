#include "fiberflow/mobility.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fiberflow/local_drag.hpp"

namespace fiberflow::mobility {

namespace {

constexpr double kTauUnitTol = 1e-6;

double cheb_t(int k, double x) {
  if (x >= 1.0) return 1.0;
  if (x <= -1.0) return (k % 2 == 0) ? 1.0 : -1.0;
  return std::cos(k * std::acos(x));
}

double adaptive(const std::function<double(double)>& f, double a, double b) {
  if (b <= a) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 14, 1e-13);
}

void check_unit_tangents(const FiberGeometry& geom) {
  for (int p = 0; p < geom.n(); ++p) {
    if (std::abs(node(geom.tau, p).norm() - 1.0) > kTauUnitTol)
      throw std::runtime_error("mobility: fiber state has non-unit tangent vectors");
  }
}

}  // namespace

int default_n2(double ehat) { return ehat >= 5e-3 ? 8 : 4; }

void gauss_legendre(int n, double a, double b, VectorXd& x, VectorXd& w) {
  MatrixXd J = MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    const double bi = i / std::sqrt(4.0 * i * i - 1.0);
    J(i, i - 1) = bi;
    J(i - 1, i) = bi;
  }
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(J);
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    x(i) = 0.5 * (b - a) * (es.eigenvalues()(i) + 1.0) + a;
    const double v = es.eigenvectors()(0, i);
    w(i) = (b - a) * v * v;
  }
}

QuadPrecompute precompute(const spectral::ChebGrid& grid, const spectral::SpectralOps& ops,
                          const KernelParams& params, int n2) {
  if (grid.kind != spectral::GridKind::Type1)
    throw std::invalid_argument("precompute: collocation grid must be type 1");
  const double L = grid.length;
  const double a = params.a_hat;
  if (2.0 * a >= 0.5 * L) throw std::invalid_argument("precompute: slenderness violation, 2 a_hat >= L/2");
  if (n2 < 2 || n2 % 2 != 0) throw std::invalid_argument("precompute: n2 must be a positive even number");

  const int n = grid.n;
  const double win = 4.0 * a / L;  // excluded half-width in eta

  QuadPrecompute pre;
  pre.n = n;
  pre.n2 = n2;
  pre.a_hat = a;

  MatrixXd qS(n, n), qD(n, n);
  for (int p = 0; p < n; ++p) {
    const double eta = grid.eta(p);
    const double el = eta - win;
    const double eh = eta + win;
    for (int k = 0; k < n; ++k) {
      auto tk = [k](double x) { return cheb_t(k, x); };
      double vS = 0.0, vD = 0.0;
      if (el > -1.0) {
        vS -= adaptive(tk, -1.0, el);
        vD -= adaptive([&](double x) { return cheb_t(k, x) / ((eta - x) * (eta - x)); }, -1.0, el);
      }
      if (eh < 1.0) {
        vS += adaptive(tk, eh, 1.0);
        vD += adaptive([&](double x) { return cheb_t(k, x) / ((x - eta) * (x - eta)); }, eh, 1.0);
      }
      qS(k, p) = vS;
      qD(k, p) = vD;
    }
  }
  pre.adjS = ops.vals2coeffs.transpose() * qS;
  pre.adjD = ops.vals2coeffs.transpose() * qD;

  pre.local.resize(n);
  const int half = n2 / 2;
  for (int p = 0; p < n; ++p) {
    const double s = grid.nodes(p);
    std::vector<double> ts, ws;
    auto add_interval = [&](double lo, double hi) {
      if (hi - lo <= 0) return;
      VectorXd x, w;
      gauss_legendre(half, lo, hi, x, w);
      for (int i = 0; i < half; ++i) {
        ts.push_back(x(i));
        ws.push_back(w(i));
      }
    };
    add_interval(std::max(0.0, s - 2.0 * a), s);
    add_interval(s, std::min(L, s + 2.0 * a));
    auto& lq = pre.local[p];
    lq.t = Eigen::Map<VectorXd>(ts.data(), ts.size());
    lq.w = Eigen::Map<VectorXd>(ws.data(), ws.size());
    lq.interp = spectral::interpolation_matrix(grid, lq.t);
  }
  return pre;
}

VectorXd rotrot_diagonal(const VectorXd& s, double L, const KernelParams& params, MobilityModel model) {
  if (model == MobilityModel::EllipsoidalLocalDrag)
    return VectorXd::Constant(s.size(), local_drag::rotrot_ellipsoidal(params));
  return local_drag::rotrot_coefficients(s, L, params);
}

namespace {

void assemble_local_drag(const FiberGeometry& geom, const KernelParams& params, MobilityModel model,
                         MobilitySet& set) {
  const int n = geom.n();
  const double L = geom.grid.length;
  const double pre8 = 1.0 / (8.0 * M_PI * params.mu);
  for (int p = 0; p < n; ++p) {
    const Vec3 tau = node(geom.tau, p);
    local_drag::LocalTT c = (model == MobilityModel::EllipsoidalLocalDrag)
                                ? local_drag::ellipsoidal_tt(L, params)
                                : local_drag::cylindrical_tt(geom.grid.nodes(p), L, params);
    set.Mtt.block<3, 3>(3 * p, 3 * p) =
        pre8 * (c.c_I * Mat3::Identity() + c.c_tau * tau * tau.transpose());
  }
  set.mrr = rotrot_diagonal(geom.grid.nodes, L, params, model);
}

// Overlapping-branch kernels used on the |s-s'| <= 2a subgrids; the branch is
// selected by arclength, so the formulas are applied at the actual distance R.
Mat3 near_tt(const Vec3& R, const KernelParams& kp) {
  const double a = kp.a_hat;
  const double r = R.norm();
  const Vec3 rhat = R / r;
  return (4.0 / (3.0 * a) - 3.0 * r / (8.0 * a * a)) * Mat3::Identity() +
         (r / (8.0 * a * a)) * rhat * rhat.transpose();
}

double near_rot_coeff(double r, double a) { return (1.0 / a - 3.0 * r / (8.0 * a * a)) / (2.0 * a * a); }

}  // namespace

MobilitySet build_mobility(const FiberGeometry& geom, const spectral::SpectralOps& ops,
                           const KernelParams& params, const QuadPrecompute& pre,
                           const MobilityOptions& opts) {
  check_unit_tangents(geom);
  const int n = geom.n();
  MobilitySet set;
  set.Mtt = MatrixXd::Zero(3 * n, 3 * n);
  set.Mtr = MatrixXd::Zero(3 * n, n);
  set.Mrt = MatrixXd::Zero(n, 3 * n);

  if (opts.model != MobilityModel::SpectralRPY) {
    assemble_local_drag(geom, params, opts.model, set);
    return set;  // no trans-rot coupling in the local-drag models
  }

  const double L = geom.grid.length;
  const double a = params.a_hat;
  const double mu = params.mu;
  const double pre8 = 1.0 / (8.0 * M_PI * mu);
  const double wS = 0.5 * L;                       // sign-weight scaling
  const double wD = (2.0 * a * a / 3.0) * 2.0 / L; // doublet-weight scaling

#pragma omp parallel for schedule(dynamic) if (opts.parallel)
  for (int p = 0; p < n; ++p) {
    const double sp = geom.grid.nodes(p);
    const Vec3 Xp = node(geom.X, p);
    const Vec3 tp = node(geom.tau, p);
    const Vec3 tdp = node(geom.dtau, p);
    const Vec3 tddp = node(geom.d2tau, p);
    const Mat3 Itt = Mat3::Identity() + tp * tp.transpose();
    const Mat3 Idd = Mat3::Identity() - 3.0 * tp * tp.transpose();
    const Vec3 txtd = tp.cross(tdp);

    // Closed-form singular parts.
    const double logf = local_drag::stokeslet_log_factor(sp, L, a);
    const double dblt = local_drag::doublet_inner_factor(sp, L, a);
    set.Mtt.block<3, 3>(3 * p, 3 * p) += pre8 * (logf * Itt + (2.0 / 3.0) * dblt * Idd);
    set.Mtr.block<3, 1>(3 * p, p) += pre8 * 0.5 * logf * txtd;
    set.Mrt.block<1, 3>(p, 3 * p) += pre8 * 0.5 * logf * txtd.transpose();

    // Smooth remainders expanded in the Chebyshev basis against the
    // precomputed singular moments.
    for (int j = 0; j < n; ++j) {
      const double cS = wS * pre.adjS(j, p);
      const double cD = wD * pre.adjD(j, p);
      if (j == p) {
        // Finite limits at s' = s; the f' dependence couples through D(p, :).
        Mat3 Att, Btt, Add, Bdd;
        Eigen::RowVector3d Art, Brt;
        for (int d = 0; d < 3; ++d) {
          const Vec3 e = Vec3::Unit(d);
          Att.col(d) = smooth_limits::tt(tp, tdp, e, Vec3::Zero(), mu);
          Btt.col(d) = smooth_limits::tt(tp, tdp, Vec3::Zero(), e, mu);
          Add.col(d) = smooth_limits::doublet_part(tp, tdp, e, Vec3::Zero(), mu);
          Bdd.col(d) = smooth_limits::doublet_part(tp, tdp, Vec3::Zero(), e, mu);
          Art(d) = smooth_limits::rt(tp, tdp, tddp, e, Vec3::Zero(), mu);
          Brt(d) = smooth_limits::rt(tp, tdp, tddp, Vec3::Zero(), e, mu);
        }
        const Vec3 atr = smooth_limits::tr(tp, tdp, tddp, 1.0, 0.0, mu);
        const Vec3 btr = smooth_limits::tr(tp, tdp, tddp, 0.0, 1.0, mu);
        for (int m = 0; m < n; ++m) {
          const double d = ops.D(p, m);
          set.Mtt.block<3, 3>(3 * p, 3 * m) += (cS * d) * Btt + (cD * d) * Bdd;
          set.Mtr.block<3, 1>(3 * p, m) += (cS * d) * btr;
          set.Mrt.block<1, 3>(p, 3 * m) += (cS * d) * Brt;
        }
        set.Mtt.block<3, 3>(3 * p, 3 * p) += cS * Att + cD * Add;
        set.Mtr.block<3, 1>(3 * p, p) += cS * atr;
        set.Mrt.block<1, 3>(p, 3 * p) += cS * Art;
        continue;
      }
      const double ds = geom.grid.nodes(j) - sp;
      const double ads = std::abs(ds);
      const double sgn = ds > 0 ? 1.0 : -1.0;
      const Vec3 Xj = node(geom.X, j);
      const Vec3 tj = node(geom.tau, j);
      const Vec3 R = Xp - Xj;
      const double r = R.norm();
      const double r3 = r * r * r;
      const Vec3 rhat = R / r;
      const Mat3 rr = rhat * rhat.transpose();
      const Mat3 slet = pre8 * (Mat3::Identity() + rr) / r;
      const Mat3 dlet = pre8 * (Mat3::Identity() - 3.0 * rr) / r3;

      set.Mtt.block<3, 3>(3 * p, 3 * j) += cS * sgn * slet + cD * sgn * ds * ds * dlet;
      set.Mtt.block<3, 3>(3 * p, 3 * p) -= (cS / ds) * pre8 * Itt + (cD / ds) * pre8 * Idd;

      const double rot = pre8 * ads / (r3 * ds);
      set.Mtr.block<3, 1>(3 * p, j) += cS * rot * tj.cross(R);
      set.Mtr.block<3, 1>(3 * p, p) -= cS * pre8 / (2.0 * ds) * txtd;
      set.Mrt.block<1, 3>(p, 3 * j) += cS * rot * R.cross(tp).transpose();
      set.Mrt.block<1, 3>(p, 3 * p) -= cS * pre8 / (2.0 * ds) * txtd.transpose();
    }

    // Direct Gauss-Legendre quadrature of the overlapping RPY branch.
    const auto& lq = pre.local[p];
    for (int g = 0; g < lq.t.size(); ++g) {
      Vec3 Xg = Vec3::Zero(), tg = Vec3::Zero();
      for (int m = 0; m < n; ++m) {
        Xg += lq.interp(g, m) * node(geom.X, m);
        tg += lq.interp(g, m) * node(geom.tau, m);
      }
      const Vec3 R = Xp - Xg;
      const double r = R.norm();
      const Mat3 Ktt = pre8 * near_tt(R, params);
      const double crot = pre8 * near_rot_coeff(r, a);
      const Vec3 tr_vec = crot * tg.cross(R);
      const Vec3 rt_vec = crot * R.cross(tp);
      for (int m = 0; m < n; ++m) {
        const double wgt = lq.w(g) * lq.interp(g, m);
        if (wgt == 0.0) continue;
        set.Mtt.block<3, 3>(3 * p, 3 * m) += wgt * Ktt;
        set.Mtr.block<3, 1>(3 * p, m) += wgt * tr_vec;
        set.Mrt.block<1, 3>(p, 3 * m) += wgt * rt_vec.transpose();
      }
    }
  }

  if (!opts.rot_trans) {
    set.Mtr.setZero();
    set.Mrt.setZero();
  }
  set.mrr = rotrot_diagonal(geom.grid.nodes, L, params, MobilityModel::SpectralRPY);
  return set;
}

namespace smooth_limits {

Vec3 tt(const Vec3& tau, const Vec3& dtau, const Vec3& f, const Vec3& df, double mu) {
  const double pre = 1.0 / (8.0 * M_PI * mu);
  return pre * (0.5 * (tau * dtau.transpose() + dtau * tau.transpose()) * f +
                (Mat3::Identity() + tau * tau.transpose()) * df);
}

// The subtracted doublet integrand tends to (I - 3 tau tau) f' - (3/2)(tau
// dtau' + dtau tau') f; verified against one-sided extrapolation of the
// off-diagonal values.
Vec3 doublet_part(const Vec3& tau, const Vec3& dtau, const Vec3& f, const Vec3& df, double mu) {
  const double pre = 1.0 / (8.0 * M_PI * mu);
  return pre * ((Mat3::Identity() - 3.0 * tau * tau.transpose()) * df -
                1.5 * (tau * dtau.transpose() + dtau * tau.transpose()) * f);
}

double rt(const Vec3& tau, const Vec3& dtau, const Vec3& d2tau, const Vec3& f, const Vec3& df,
          double mu) {
  const double pre = 1.0 / (8.0 * M_PI * mu);
  return pre * (-0.5 * df.dot(dtau.cross(tau)) - (1.0 / 6.0) * f.dot(d2tau.cross(tau)));
}

Vec3 tr(const Vec3& tau, const Vec3& dtau, const Vec3& d2tau, double npar, double dnpar, double mu) {
  const double pre = 1.0 / (8.0 * M_PI * mu);
  return pre * (-0.5 * dnpar * dtau.cross(tau) - (1.0 / 3.0) * npar * d2tau.cross(tau));
}

}  // namespace smooth_limits

Eigen::VectorXcd eigenvalues(const MatrixXd& m) {
  Eigen::EigenSolver<MatrixXd> es(m, false);
  Eigen::VectorXcd ev = es.eigenvalues();
  std::sort(ev.data(), ev.data() + ev.size(),
            [](const std::complex<double>& a, const std::complex<double>& b) { return std::abs(a) > std::abs(b); });
  return ev;
}

}  // namespace fiberflow::mobility
