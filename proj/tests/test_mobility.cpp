#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fiberflow/fiber.hpp"
#include "fiberflow/local_drag.hpp"
#include "fiberflow/mobility.hpp"
#include "fiberflow/oversampled.hpp"

using namespace fiberflow;
using namespace fiberflow::mobility;

namespace {

const double kL = 2.0;

FiberGeometry straight_geometry(int n) {
  FiberGeometry g;
  g.grid = spectral::make_grid(n, spectral::GridKind::Type1, kL);
  g.X.setZero(3 * n);
  g.tau.setZero(3 * n);
  g.dtau.setZero(3 * n);
  g.d2tau.setZero(3 * n);
  for (int p = 0; p < n; ++p) {
    g.X(3 * p + 2) = g.grid.nodes(p);
    g.tau(3 * p + 2) = 1.0;
  }
  return g;
}

// Elastic force and torque of the q-family with psi = sin(2 pi s), built from
// the boundary-condition lifts with kappa = gamma = 1.
struct BenchForces {
  fiber::FiberState st;
  FiberGeometry geom;
  VectorXd f;
  VectorXd npar;
};

BenchForces bench_forces(int n, double q) {
  BenchForces b;
  b.st = fiber::make_qfiber(n, kL, q);
  for (int p = 0; p < n; ++p) b.st.psi(p) = std::sin(2.0 * M_PI * b.st.grid.nodes(p));
  fiber::BCLift lift = fiber::build_bc_lift(b.st, fiber::BcKind::FreeFree, {}, 1.0, 1.0);
  b.geom = fiber::lift_geometry(b.st, lift);
  fiber::TwistForces tw = fiber::twist_force_and_torque(b.st, lift);
  b.f = fiber::bending_force(b.st, lift) + tw.f_gamma;
  b.npar = tw.n_par;
  return b;
}

double rel(const VectorXd& a, const VectorXd& b) { return (a - b).norm() / b.norm(); }

}  // namespace

TEST_CASE("precomputed singular moments: symmetry identities") {
  const int n = 33;  // odd so the middle node sits at eta = 0
  spectral::ChebGrid grid = spectral::make_grid(n, spectral::GridKind::Type1, kL);
  spectral::SpectralOps ops(grid);
  rpy::KernelParams params(0.01 * kL, 1.0);
  QuadPrecompute pre = precompute(grid, ops, params, 8);
  MatrixXd qS = ops.coeffs2vals.transpose() * pre.adjS;
  MatrixXd qD = ops.coeffs2vals.transpose() * pre.adjD;
  const double win = 4.0 * params.a_hat / kL;
  for (int p = 0; p < n; ++p) {
    if (grid.eta(p) - win <= -1.0 || grid.eta(p) + win >= 1.0) continue;
    CHECK(qS(0, p) == doctest::Approx(-2.0 * grid.eta(p)).epsilon(1e-10).scale(1.0));
  }
  const int mid = (n - 1) / 2;
  REQUIRE(std::abs(grid.eta(mid)) < 1e-14);
  // sign(eta') T_1(eta') = |eta'| is even: the moment is 1 - win^2, not zero
  CHECK(qS(1, mid) == doctest::Approx(1.0 - win * win).epsilon(1e-10));
  // the doublet weight is odd at eta = 0, so the T_0 moment vanishes
  CHECK(std::abs(qD(0, mid)) < 1e-8);
}

TEST_CASE("precompute rejects slenderness violations") {
  spectral::ChebGrid grid = spectral::make_grid(16, spectral::GridKind::Type1, kL);
  spectral::SpectralOps ops(grid);
  CHECK_THROWS_AS(precompute(grid, ops, rpy::KernelParams(0.3 * kL, 1.0), 8), std::invalid_argument);
}

TEST_CASE("straight fiber: quadrature matches direct oversampled integration") {
  const int n = 32;
  FiberGeometry geom = straight_geometry(n);
  spectral::SpectralOps ops(geom.grid);
  rpy::KernelParams params(0.01 * kL, 1.0);
  QuadPrecompute pre = precompute(geom.grid, ops, params, 8);
  MobilitySet set = build_mobility(geom, ops, params, pre, {});

  VectorXd f = VectorXd::Zero(3 * n);
  for (int p = 0; p < n; ++p) f(3 * p) = 1.0;
  VectorXd u = set.Mtt * f;
  VectorXd u_ref = oversampled_mtt(geom, params, f);
  CHECK(rel(u, u_ref) < 1e-3);

  // force-free input gives zero velocity
  CHECK((set.Mtt * VectorXd::Zero(3 * n)).norm() == 0.0);

  // straight fiber: torque produces no translation, force no spin
  VectorXd npar(n);
  for (int p = 0; p < n; ++p) npar(p) = std::cos(geom.grid.nodes(p));
  CHECK((set.Mtr * npar).cwiseAbs().maxCoeff() < 1e-13);
  CHECK((set.Mrt * f).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("q = 7 fiber: three digits in all slender-body quadratures at N = 32") {
  BenchForces b = bench_forces(32, 7.0);
  spectral::SpectralOps ops(b.geom.grid);
  rpy::KernelParams params(0.01 * kL, 1.0);
  QuadPrecompute pre = precompute(b.geom.grid, ops, params, 8);
  MobilitySet set = build_mobility(b.geom, ops, params, pre, {});

  VectorXd u_ref = oversampled_mtt(b.geom, params, b.f);
  CHECK(rel(set.Mtt * b.f, u_ref) < 1e-3);
  VectorXd utr_ref = oversampled_mtr(b.geom, params, b.npar);
  CHECK(rel(set.Mtr * b.npar, utr_ref) < 1e-3);
  VectorXd ort_ref = oversampled_mrt(b.geom, params, b.f);
  CHECK(rel(set.Mrt * b.f, ort_ref) < 2e-3);
}

TEST_CASE("duality of the rot-trans pair under quadrature") {
  BenchForces b = bench_forces(32, 7.0);
  spectral::SpectralOps ops(b.geom.grid);
  rpy::KernelParams params(0.01 * kL, 1.0);
  QuadPrecompute pre = precompute(b.geom.grid, ops, params, 8);
  MobilitySet set = build_mobility(b.geom, ops, params, pre, {});
  const VectorXd& w = b.geom.grid.weights;
  VectorXd utr = set.Mtr * b.npar;
  VectorXd ort = set.Mrt * b.f;
  double lhs = 0.0, rhs = 0.0;
  for (int p = 0; p < b.geom.n(); ++p) {
    lhs += w(p) * node(utr, p).dot(node(b.f, p));
    rhs += w(p) * ort(p) * b.npar(p);
  }
  CHECK(std::abs(lhs - rhs) / std::abs(rhs) < 1e-3);
}

TEST_CASE("local rot-rot mobility: interior value and accuracy vs full integral") {
  rpy::KernelParams params(0.01, 1.0);
  VectorXd s(1);
  s << 1.0;
  VectorXd m = local_drag::rotrot_coefficients(s, kL, params);
  CHECK(m(0) == doctest::Approx(895.25).epsilon(1e-3));

  // accuracy against the oversampled full rot-rot integral saturates
  for (double eh : {1e-2, 1e-3}) {
    BenchForces b = bench_forces(32, 7.0);
    rpy::KernelParams kp(eh * kL, 1.0);
    VectorXd mloc = local_drag::rotrot_coefficients(b.geom.grid.nodes, kL, kp);
    VectorXd o = mloc.cwiseProduct(b.npar);
    VectorXd o_ref = oversampled_mrr(b.geom, kp, b.npar);
    const double e = rel(o, o_ref);
    if (eh == 1e-2)
      CHECK(e < 3e-2);
    else
      CHECK(e < 1e-3);
  }

  // zero torque gives zero spin
  CHECK((m.cwiseProduct(VectorXd::Zero(1))).norm() == 0.0);
}

TEST_CASE("dense trans-trans eigenvalues stay positive at N = 30") {
  BenchForces b = bench_forces(30, 7.0);
  spectral::SpectralOps ops(b.geom.grid);
  rpy::KernelParams params(0.01 * kL, 1.0);
  QuadPrecompute pre = precompute(b.geom.grid, ops, params, 8);
  MobilitySet set = build_mobility(b.geom, ops, params, pre, {});
  Eigen::VectorXcd ev = eigenvalues(set.Mtt);
  for (int k = 0; k < ev.size(); ++k) CHECK(ev(k).real() > 0.0);
}

TEST_CASE("straight rigid fiber: Mtt positive definite as a bilinear form") {
  // The matrix acts on force densities, so the symmetric object is W Mtt
  // (quadrature applied on both sides); the unweighted symmetric part has
  // harmless small negative eigenvalues even for the oversampled reference.
  FiberGeometry geom = straight_geometry(24);
  spectral::SpectralOps ops(geom.grid);
  rpy::KernelParams params(0.01 * kL, 1.0);
  QuadPrecompute pre = precompute(geom.grid, ops, params, 8);
  MobilitySet set = build_mobility(geom, ops, params, pre, {});
  MatrixXd W = stack3(MatrixXd(geom.grid.weights.asDiagonal()));
  MatrixXd sym = 0.5 * (W * set.Mtt + set.Mtt.transpose() * W);
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(sym);
  CHECK(es.eigenvalues().minCoeff() > 0.0);
}

TEST_CASE("smooth-integrand limits match one-sided extrapolation") {
  // Evaluate the off-diagonal subtracted integrands of a curved fiber near
  // s' = s and Richardson-extrapolate to the diagonal. The displacement is
  // integrated from the analytic tangent so its perpendicular O(h^2) part is
  // fully resolved.
  const double q = 2.0, mu = 1.3, s0 = 0.8;
  auto tau = [&](double s) { return fiber::qfiber_tau(s, kL, q); };
  auto displacement = [&](double sp) {  // X(s0) - X(sp)
    Vec3 acc = Vec3::Zero();
    const int ng = 24;
    VectorXd x, w;
    mobility::gauss_legendre(ng, s0, sp, x, w);
    for (int i = 0; i < ng; ++i) acc += w(i) * tau(x(i));
    return Vec3(-acc);
  };
  auto ffun = [&](double s) { return Vec3(std::sin(s), std::cos(2 * s), s); };
  auto dffun = [&](double s) { return Vec3(std::cos(s), -2 * std::sin(2 * s), 1.0); };
  auto nfun = [&](double s) { return std::sin(2.0 * s); };
  auto dnfun = [&](double s) { return 2.0 * std::cos(2.0 * s); };

  const Vec3 t0 = tau(s0), dt0 = fiber::qfiber_dtau(s0, kL, q), ddt0 = fiber::qfiber_d2tau(s0, kL, q);
  const double pre = 1.0 / (8.0 * M_PI * mu);

  auto g_tt = [&](double sp) {
    const double d = sp - s0;
    const Vec3 R = displacement(sp);
    const double r = R.norm();
    const Vec3 rh = R / r;
    Mat3 S = pre * (Mat3::Identity() + rh * rh.transpose()) / r;
    return Vec3(((S * ffun(sp)) * std::abs(d) -
                 pre * (Mat3::Identity() + t0 * t0.transpose()) * ffun(s0)) /
                d);
  };
  auto g_db = [&](double sp) {
    const double d = sp - s0;
    const Vec3 R = displacement(sp);
    const double r = R.norm();
    const Vec3 rh = R / r;
    Mat3 D = pre * (Mat3::Identity() - 3.0 * rh * rh.transpose()) / (r * r * r);
    return Vec3(((D * ffun(sp)) - pre * (Mat3::Identity() - 3.0 * t0 * t0.transpose()) * ffun(s0) /
                                      std::pow(std::abs(d), 3)) *
                std::pow(std::abs(d), 3) / d);
  };
  auto g_rt = [&](double sp) {
    const double d = sp - s0;
    const Vec3 R = displacement(sp);
    const double r3 = std::pow(R.norm(), 3);
    return pre * (std::abs(d) / r3 * ffun(sp).cross(R).dot(t0) - 0.5 * t0.cross(dt0).dot(ffun(s0))) / d;
  };
  auto g_tr = [&](double sp) {
    const double d = sp - s0;
    const Vec3 R = displacement(sp);
    const double r3 = std::pow(R.norm(), 3);
    return Vec3(
        (pre * std::abs(d) / r3 * nfun(sp) * tau(sp).cross(R) - pre * 0.5 * nfun(s0) * t0.cross(dt0)) /
        d);
  };

  // three-term one-sided Richardson kills the h and h^2 error terms
  const double h = 2e-4;
  auto extrap_v = [&](auto g) {
    return Vec3((8.0 * g(s0 + h) - 6.0 * g(s0 + 2.0 * h) + g(s0 + 4.0 * h)) / 3.0);
  };
  auto extrap_s = [&](auto g) {
    return (8.0 * g(s0 + h) - 6.0 * g(s0 + 2.0 * h) + g(s0 + 4.0 * h)) / 3.0;
  };

  Vec3 lim_tt = smooth_limits::tt(t0, dt0, ffun(s0), dffun(s0), mu);
  CHECK((extrap_v(g_tt) - lim_tt).norm() / lim_tt.norm() < 1e-4);
  Vec3 lim_db = smooth_limits::doublet_part(t0, dt0, ffun(s0), dffun(s0), mu);
  CHECK((extrap_v(g_db) - lim_db).norm() / lim_db.norm() < 1e-4);
  const double lim_rt = smooth_limits::rt(t0, dt0, ddt0, ffun(s0), dffun(s0), mu);
  CHECK(std::abs(extrap_s(g_rt) - lim_rt) / std::abs(lim_rt) < 1e-4);
  Vec3 lim_tr = smooth_limits::tr(t0, dt0, ddt0, nfun(s0), dnfun(s0), mu);
  CHECK((extrap_v(g_tr) - lim_tr).norm() / lim_tr.norm() < 1e-4);
}

TEST_CASE("local-drag models are diagonal and rotation-free") {
  BenchForces b = bench_forces(16, 1.0);
  spectral::SpectralOps ops(b.geom.grid);
  rpy::KernelParams params(0.01 * kL, 1.0);
  QuadPrecompute pre;  // unused for local drag
  MobilityOptions mo;
  mo.model = MobilityModel::EllipsoidalLocalDrag;
  MobilitySet set = build_mobility(b.geom, ops, params, pre, mo);
  CHECK(set.Mtr.cwiseAbs().maxCoeff() == 0.0);
  CHECK(set.Mrt.cwiseAbs().maxCoeff() == 0.0);
  CHECK(set.Mtt.block<3, 3>(0, 3).cwiseAbs().maxCoeff() == 0.0);
  CHECK(set.mrr(0) == doctest::Approx(set.mrr(7)).epsilon(1e-14));
}

TEST_CASE("mobility assembly is identical in serial and parallel") {
  BenchForces b = bench_forces(24, 7.0);
  spectral::SpectralOps ops(b.geom.grid);
  rpy::KernelParams params(0.01 * kL, 1.0);
  QuadPrecompute pre = precompute(b.geom.grid, ops, params, 8);
  MobilityOptions ser, par;
  ser.parallel = false;
  MobilitySet a = build_mobility(b.geom, ops, params, pre, ser);
  MobilitySet c = build_mobility(b.geom, ops, params, pre, par);
  CHECK((a.Mtt - c.Mtt).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.Mtr - c.Mtr).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.Mrt - c.Mrt).cwiseAbs().maxCoeff() == 0.0);
}
