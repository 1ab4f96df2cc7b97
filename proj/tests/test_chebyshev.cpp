#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "fiberflow/chebyshev.hpp"

using namespace fiberflow;
using namespace fiberflow::spectral;

TEST_CASE("type-2 grid includes endpoints") {
  ChebGrid g = make_grid(4, GridKind::Type2, 2.0);
  CHECK(g.nodes(0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(g.nodes(1) == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(g.nodes(2) == doctest::Approx(1.5).epsilon(1e-13));
  CHECK(g.nodes(3) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("type-1 grid excludes endpoints and nodes increase") {
  ChebGrid g = make_grid(16, GridKind::Type1, 2.0);
  CHECK(g.nodes(0) > 0.0);
  CHECK(g.nodes(15) < 2.0);
  for (int p = 1; p < 16; ++p) CHECK(g.nodes(p) > g.nodes(p - 1));
}

TEST_CASE("quadrature weights sum to the length") {
  for (auto kind : {GridKind::Type1, GridKind::Type2}) {
    ChebGrid g = make_grid(16, kind, 2.0);
    CHECK(std::abs(g.weights.sum() - 2.0) < 1e-12);
  }
}

TEST_CASE("weights integrate Chebyshev polynomials exactly") {
  ChebGrid g = make_grid(12, GridKind::Type1, 2.0);
  for (int k = 0; k < 12; ++k) {
    double acc = 0.0;
    for (int p = 0; p < 12; ++p) acc += g.weights(p) * chebyshev_values(g.eta(p), k)(k);
    // scale by L/2 mapping: integral over [0,L] of T_k(eta(s))
    const double expect = (k % 2 == 0) ? 2.0 / (1.0 - k * k) : 0.0;
    CHECK(acc == doctest::Approx(expect).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("differentiation exact on polynomials") {
  ChebGrid g = make_grid(8, GridKind::Type1, 1.0);
  SpectralOps ops(g);
  VectorXd f(8), df(8);
  for (int p = 0; p < 8; ++p) {
    f(p) = std::pow(g.nodes(p), 3);
    df(p) = 3.0 * g.nodes(p) * g.nodes(p);
  }
  CHECK(((ops.D * f) - df).norm() / df.norm() < 1e-10);
}

TEST_CASE("integrate from zero: constants and linears") {
  ChebGrid g = make_grid(10, GridKind::Type1, 2.0);
  SpectralOps ops(g);
  VectorXd one = VectorXd::Ones(10);
  CHECK(((ops.Ddag0 * one) - g.nodes).norm() < 1e-12);
  VectorXd f = 2.0 * g.nodes;
  VectorXd s2 = g.nodes.array().square();
  CHECK(((ops.Ddag0 * f) - s2).norm() < 1e-12);
  // from the far end: integral of 1 from s to L is L - s
  VectorXd back = ops.DdagL * one;
  CHECK((back - (2.0 - g.nodes.array()).matrix()).norm() < 1e-12);
}

TEST_CASE("integrate random degree-6 polynomial against its antiderivative") {
  std::mt19937 rng(1234);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double c[7];
  for (double& v : c) v = u(rng);
  ChebGrid g = make_grid(12, GridKind::Type1, 1.5);
  SpectralOps ops(g);
  VectorXd f(12), F(12);
  for (int p = 0; p < 12; ++p) {
    const double s = g.nodes(p);
    double fv = 0, Fv = 0, sk = 1.0;
    for (int k = 0; k < 7; ++k) {
      fv += c[k] * sk;
      Fv += c[k] * sk * s / (k + 1);
      sk *= s;
    }
    f(p) = fv;
    F(p) = Fv;
  }
  CHECK(((ops.Ddag0 * f) - F).norm() / F.norm() < 1e-10);
}

TEST_CASE("Ddag0 then D recovers functions vanishing at 0") {
  ChebGrid g = make_grid(10, GridKind::Type1, 2.0);
  SpectralOps ops(g);
  // degree < n-1 so the primitive is exactly representable
  VectorXd f(10);
  for (int p = 0; p < 10; ++p) f(p) = std::pow(g.nodes(p), 7) - 3.0 * g.nodes(p);
  CHECK(((ops.D * (ops.Ddag0 * f)) - f).norm() / f.norm() < 1e-10);
}

TEST_CASE("resampling: upsample exact, R E = I on the coarse space") {
  ChebGrid coarse = make_grid(12, GridKind::Type1, 2.0);
  ChebGrid fine = make_grid(24, GridKind::Type1, 2.0);
  MatrixXd E = interpolation_matrix(coarse, fine);
  MatrixXd R = l2_restriction(fine, coarse);
  MatrixXd RE = R * E;
  CHECK((RE - MatrixXd::Identity(12, 12)).cwiseAbs().maxCoeff() < 1e-12);

  VectorXd one = VectorXd::Ones(12);
  CHECK(((E * one) - VectorXd::Ones(24)).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("downsampling matches a dense weighted least-squares solve") {
  const int n = 10;
  ChebGrid coarse = make_grid(n, GridKind::Type1, 2.0);
  ChebGrid fine = make_grid(2 * n, GridKind::Type1, 2.0);
  // samples of T_{2n-1} on the fine grid
  VectorXd f(2 * n);
  for (int p = 0; p < 2 * n; ++p) f(p) = chebyshev_values(fine.eta(p), 2 * n - 1)(2 * n - 1);
  MatrixXd E = interpolation_matrix(coarse, fine);
  // oracle: minimize || W^{1/2}(E c - f) || directly
  MatrixXd W = fine.weights.asDiagonal();
  VectorXd oracle = (E.transpose() * W * E).ldlt().solve(E.transpose() * W * f);
  MatrixXd R = l2_restriction(fine, coarse);
  CHECK(((R * f) - oracle).cwiseAbs().maxCoeff() < 1e-11);
}

TEST_CASE("interpolation evaluates mid-domain points") {
  ChebGrid g = make_grid(14, GridKind::Type1, 2.0);
  VectorXd f(14);
  for (int p = 0; p < 14; ++p) f(p) = std::sin(g.nodes(p));
  CHECK(interp_value(g, f, 1.3) == doctest::Approx(std::sin(1.3)).epsilon(1e-10));
}

TEST_CASE("make_grid rejects bad arguments") {
  CHECK_THROWS_AS(make_grid(3, GridKind::Type1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(8, GridKind::Type1, -1.0), std::invalid_argument);
}
