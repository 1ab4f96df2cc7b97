#include "fiberflow/kinematics.hpp"

namespace fiberflow::kinematics {

KinematicOps build_kinematics(const FiberGeometry& geom, BcKind kind) {
  const int n = geom.n();
  KinematicOps ops;
  ops.kind = kind;
  ops.grid2n = spectral::make_grid(2 * n, spectral::GridKind::Type1, geom.grid.length);
  spectral::SpectralOps sp2n(ops.grid2n);

  MatrixXd E = spectral::interpolation_matrix(geom.grid, ops.grid2n);
  MatrixXd R = spectral::l2_restriction(ops.grid2n, geom.grid);
  ops.tau2n = apply_per_component(E, geom.tau);

  // J = Ddag0 C, J* = C* DdagL on the doubled grid, where C Omega = Omega x tau
  // and C* lambda = tau x lambda.
  const int n2 = 2 * n;
  MatrixXd Cx = MatrixXd::Zero(3 * n2, 3 * n2);   // Omega -> Omega x tau
  MatrixXd Cs = MatrixXd::Zero(3 * n2, 3 * n2);   // lambda -> tau x lambda
  for (int p = 0; p < n2; ++p) {
    const Mat3 cm = cross_matrix(node(ops.tau2n, p));
    Cx.block<3, 3>(3 * p, 3 * p) = -cm;
    Cs.block<3, 3>(3 * p, 3 * p) = cm;
  }
  ops.J = stack3(sp2n.Ddag0) * Cx;
  MatrixXd Jstar = Cs * stack3(sp2n.DdagL);

  MatrixXd E3 = stack3(E), R3 = stack3(R);
  MatrixXd KJ = R3 * ops.J * E3;
  MatrixXd KJs = R3 * Jstar * E3;

  if (kind == BcKind::ClampedFree) {
    ops.K = KJ;
    ops.Kstar = KJs;
    return ops;
  }
  ops.K.resize(3 * n, 3 * n + 3);
  for (int p = 0; p < n; ++p) ops.K.block<3, 3>(3 * p, 0) = Mat3::Identity();
  ops.K.rightCols(3 * n) = KJ;
  ops.Kstar.resize(3 * n + 3, 3 * n);
  ops.Kstar.setZero();
  for (int p = 0; p < n; ++p)
    for (int d = 0; d < 3; ++d) ops.Kstar(d, 3 * p + d) = geom.grid.weights(p);
  ops.Kstar.bottomRows(3 * n) = KJs;
  return ops;
}

VectorXd omega_perp_from_velocity(const FiberGeometry& geom, const spectral::SpectralOps& ops,
                                  const VectorXd& U) {
  VectorXd dU = apply_per_component(ops.D, U);
  return cross_field(geom.tau, dU);
}

VectorXd pinv_solve(const MatrixXd& A, const VectorXd& b, double cutoff_scale) {
  Eigen::BDCSVD<MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double eps = std::numeric_limits<double>::epsilon();
  const double cutoff =
      cutoff_scale * std::max(A.rows(), A.cols()) * eps * svd.singularValues()(0);
  VectorXd utb = svd.matrixU().transpose() * b;
  VectorXd x = VectorXd::Zero(svd.matrixV().rows());
  for (int i = 0; i < svd.singularValues().size(); ++i) {
    if (svd.singularValues()(i) > cutoff) x += svd.matrixV().col(i) * (utb(i) / svd.singularValues()(i));
  }
  return x;
}

}  // namespace fiberflow::kinematics
