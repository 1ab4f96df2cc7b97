#pragma once

#include "fiberflow/geometry.hpp"
#include "fiberflow/mobility.hpp"

namespace fiberflow::mobility {

/// Direct quadrature of the RPY line-integral mobilities by composite
/// Gauss-Legendre panels graded toward the target point, with the domain split
/// at |s - s'| = 2 a_hat. Serial reference path for the slender-body
/// quadrature; accuracy is controlled by the panel refinement level.
struct OversampledOptions {
  int refine = 1;           ///< halve the finest panel width per extra level
  double base_panel = 0.25; ///< finest panel width in units of a_hat
};

VectorXd oversampled_mtt(const FiberGeometry& geom, const KernelParams& params, const VectorXd& f,
                         const OversampledOptions& opts = {});
VectorXd oversampled_mtr(const FiberGeometry& geom, const KernelParams& params, const VectorXd& npar,
                         const OversampledOptions& opts = {});
VectorXd oversampled_mrt(const FiberGeometry& geom, const KernelParams& params, const VectorXd& f,
                         const OversampledOptions& opts = {});
/// Full rot-rot RPY integral (far-field doublet plus overlapping branch),
/// projected on the tangent.
VectorXd oversampled_mrr(const FiberGeometry& geom, const KernelParams& params, const VectorXd& npar,
                         const OversampledOptions& opts = {});

/// Dense trans-trans matrix built from the oversampled quadrature.
MatrixXd oversampled_mtt_matrix(const FiberGeometry& geom, const KernelParams& params,
                                const OversampledOptions& opts = {});

}  // namespace fiberflow::mobility
