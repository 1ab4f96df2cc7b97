#pragma once

#include <vector>

#include "fiberflow/types.hpp"

namespace fiberflow::spectral {

enum class GridKind {
  Type1,  ///< Chebyshev points of the first kind; endpoints excluded
  Type2,  ///< Chebyshev points of the second kind; endpoints included
};

/// Collocation grid on [0, L] with Clenshaw-Curtis quadrature weights.
/// Nodes are stored ascending in arclength.
struct ChebGrid {
  int n = 0;
  GridKind kind = GridKind::Type1;
  double length = 0;
  VectorXd nodes;    ///< arclength coordinates s_p in [0, L]
  VectorXd eta;      ///< nodes mapped to [-1, 1]
  VectorXd weights;  ///< quadrature weights, sum to L
  VectorXd bary;     ///< barycentric interpolation weights
};

ChebGrid make_grid(int n, GridKind kind, double length);

/// Evaluate T_k(x) for k = 0..kmax.
VectorXd chebyshev_values(double x, int kmax);

/// Interpolation matrix taking values on `from` to values at arbitrary points
/// `targets` (arclength coordinates) via the barycentric formula.
MatrixXd interpolation_matrix(const ChebGrid& from, const VectorXd& targets);

/// Interpolation matrix between two grids on the same domain.
MatrixXd interpolation_matrix(const ChebGrid& from, const ChebGrid& to);

/// L2-optimal restriction from a fine grid to a coarse one,
/// R = (E^T W E)^{-1} E^T W with W the fine-grid quadrature weights.
MatrixXd l2_restriction(const ChebGrid& fine, const ChebGrid& coarse);

/// Evaluate the interpolant of nodal values at a single point.
double interp_value(const ChebGrid& grid, const VectorXd& values, double s);

/// Evaluate the interpolant of a stacked 3-vector field at a single point.
Vec3 interp_vec3(const ChebGrid& grid, const VectorXd& field, double s);

/// Dense spectral operators associated with one grid. Immutable once built.
struct SpectralOps {
  ChebGrid grid;
  MatrixXd D;            ///< differentiation
  MatrixXd Ddag0;        ///< f -> integral of f from 0 to s
  MatrixXd DdagL;        ///< f -> integral of f from s to L
  MatrixXd vals2coeffs;  ///< values -> Chebyshev coefficients (degree < n)
  MatrixXd coeffs2vals;

  explicit SpectralOps(const ChebGrid& g);

  VectorXd integrate_indefinite(const VectorXd& f, bool from_zero) const {
    return from_zero ? Ddag0 * f : DdagL * f;
  }
};

}  // namespace fiberflow::spectral
