#pragma once

#include <vector>

#include "fiberflow/chebyshev.hpp"
#include "fiberflow/geometry.hpp"
#include "fiberflow/rpy.hpp"
#include "fiberflow/types.hpp"

namespace fiberflow::mobility {

using rpy::KernelParams;

enum class MobilityModel { SpectralRPY, EllipsoidalLocalDrag, CylindricalLocalDrag };

struct MobilityOptions {
  MobilityModel model = MobilityModel::SpectralRPY;
  bool rot_trans = true;  ///< include the trans-rot / rot-trans coupling
  int n2 = 8;             ///< Gauss-Legendre points for the |s-s'| <= 2a region
  bool parallel = true;   ///< OpenMP assembly; serial path kept as reference
};

/// Paper default: n2 = 8 for ehat >= 5e-3, n2 = 4 below.
int default_n2(double ehat);

/// Gauss-Legendre nodes and weights on [a, b].
void gauss_legendre(int n, double a, double b, VectorXd& x, VectorXd& w);

/// Per-grid singular-quadrature tables: adjoint vectors V^{-T} q for the
/// sign- and doublet-weighted Chebyshev moments over the excluded-window
/// domain, plus the Gauss-Legendre subgrids covering |s-s'| <= 2a.
struct QuadPrecompute {
  int n = 0;
  int n2 = 8;
  double a_hat = 0;
  MatrixXd adjS;  ///< column p: V^{-T} q^{(S)}(eta_p)
  MatrixXd adjD;  ///< column p: V^{-T} q^{(D)}(eta_p)
  struct LocalQuad {
    VectorXd t;       ///< arclength quadrature nodes
    VectorXd w;       ///< weights
    MatrixXd interp;  ///< interpolation rows from the collocation grid
  };
  std::vector<LocalQuad> local;  ///< one per collocation node
};

QuadPrecompute precompute(const spectral::ChebGrid& grid, const spectral::SpectralOps& ops,
                          const KernelParams& params, int n2);

/// Discrete mobility actions for one fiber configuration, stored as dense
/// matrices on the collocation grid.
struct MobilitySet {
  MatrixXd Mtt;  ///< 3N x 3N, force density -> velocity
  MatrixXd Mtr;  ///< 3N x N, parallel torque density -> velocity
  MatrixXd Mrt;  ///< N x 3N, force density -> parallel angular velocity
  VectorXd mrr;  ///< N, diagonal parallel rot-rot mobility

  VectorXd apply_tt(const VectorXd& f) const { return Mtt * f; }
  VectorXd apply_tr(const VectorXd& npar) const { return Mtr * npar; }
  VectorXd apply_rt(const VectorXd& f) const { return Mrt * f; }
  VectorXd apply_rr(const VectorXd& npar) const { return mrr.cwiseProduct(npar); }
};

MobilitySet build_mobility(const FiberGeometry& geom, const spectral::SpectralOps& ops,
                           const KernelParams& params, const QuadPrecompute& pre,
                           const MobilityOptions& opts);

/// Diagonal rot-rot mobility on an arbitrary node set (used for the N+2 grid).
VectorXd rotrot_diagonal(const VectorXd& s, double L, const KernelParams& params, MobilityModel model);

/// Complex eigenvalues of the (non-symmetric) dense trans-trans matrix,
/// sorted by decreasing magnitude.
Eigen::VectorXcd eigenvalues(const MatrixXd& m);

/// Finite limits of the subtracted smooth integrands at s' = s, in terms of
/// the local tangent data and the force/torque value and derivative there.
namespace smooth_limits {
Vec3 tt(const Vec3& tau, const Vec3& dtau, const Vec3& f, const Vec3& df, double mu);
Vec3 doublet_part(const Vec3& tau, const Vec3& dtau, const Vec3& f, const Vec3& df, double mu);
double rt(const Vec3& tau, const Vec3& dtau, const Vec3& d2tau, const Vec3& f, const Vec3& df,
          double mu);
Vec3 tr(const Vec3& tau, const Vec3& dtau, const Vec3& d2tau, double npar, double dnpar, double mu);
}  // namespace smooth_limits

}  // namespace fiberflow::mobility
