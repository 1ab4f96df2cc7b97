#pragma once

#include "fiberflow/chebyshev.hpp"
#include "fiberflow/types.hpp"

namespace fiberflow {

/// Nodal geometry of one fiber configuration: positions, unit tangents and
/// tangent derivatives on the collocation grid. Tangent derivatives come from
/// the boundary-condition lift (or analytically for benchmark fibers).
struct FiberGeometry {
  spectral::ChebGrid grid;
  VectorXd X;      ///< 3N stacked positions
  VectorXd tau;    ///< 3N unit tangents
  VectorXd dtau;   ///< 3N tangent derivative
  VectorXd d2tau;  ///< 3N second tangent derivative

  int n() const { return grid.n; }
};

}  // namespace fiberflow
