#pragma once

#include <functional>

#include "fiberflow/rpy.hpp"
#include "fiberflow/types.hpp"

namespace fiberflow::blob {

using rpy::KernelParams;

/// Staggered second-order discretization: N + 1 nodes at j ds, N links at
/// (j + 1/2) ds. Forces and tangents live at links; the Kirchhoff multiplier
/// lives at nodes.
struct BlobChain {
  int n_links = 0;
  double ds = 0.0;
  double length = 0.0;
  VectorXd s_links;  ///< N
  VectorXd s_nodes;  ///< N+1
  VectorXd X;        ///< 3N link positions
  VectorXd tau;      ///< 3N link tangents
  VectorXd n1, n2;   ///< parallel-transported unit normals at links
};

/// Chain from an analytic centerline: X(s) and tau(s) callables.
BlobChain make_chain(int n_links, double L, const std::function<Vec3(double)>& X,
                     const std::function<Vec3(double)>& tau);

enum class Coupling { TT, TR, RT, RR };

/// Dense 3N x 3N grand mobility: ds-weighted RPY kernel sums over links
/// (self term included). OpenMP-parallel over target links; `parallel = false`
/// is the serial reference path.
MatrixXd mobility_matrix(const BlobChain& chain, const KernelParams& params, Coupling c,
                         bool parallel = true);

// Staggered difference/averaging operators (scalar; stack per component):
MatrixXd d_links_from_nodes(const BlobChain& chain);     ///< N x (N+1)
MatrixXd avg_links_from_nodes(const BlobChain& chain);   ///< N x (N+1)
MatrixXd d_nodes_from_links(const BlobChain& chain);     ///< (N-1) x N
MatrixXd avg_nodes_from_links(const BlobChain& chain);   ///< (N-1) x N

struct EulerBlobSolution {
  VectorXd lambda;     ///< 3N at links
  VectorXd U;          ///< 3N at links
  VectorXd omega_par;  ///< N at links
  VectorXd alpha;      ///< 2N + 3
};

/// Saddle-point solve of the Euler model with the midpoint kinematic matrix
/// (half weight at the current link) and K* = K^T.
EulerBlobSolution solve_euler_blob(const BlobChain& chain, const KernelParams& params,
                                   const VectorXd& f_links, const VectorXd& npar_links);

struct KirchhoffMismatch {
  VectorXd dLambda;    ///< 3(N+1) at nodes, zero at the ends
  VectorXd dU;         ///< 3N at links
  VectorXd dOmega_par; ///< N at links
  VectorXd mismatch;   ///< 3(N-1) at interior nodes
  VectorXd dPsi;       ///< 3N at links
};

/// Solve the mismatch problem for the difference between the Kirchhoff and
/// Euler models, given the Euler solution.
KirchhoffMismatch solve_kirchhoff_mismatch(const BlobChain& chain, const KernelParams& params,
                                           const VectorXd& f_links, const VectorXd& npar_links,
                                           const EulerBlobSolution& euler);

/// Interior L2 norm over 0.05 <= s/L <= 0.95 of a stacked field sampled at
/// the given arclengths (trapezoid-free: plain ds-weighted sum).
double interior_norm(const VectorXd& field, const VectorXd& s, double L, double ds);

/// Fourth-order interpolation of link data from a doubled chain onto the
/// links of the coarse chain.
VectorXd restrict_links(const BlobChain& fine, const BlobChain& coarse, const VectorXd& field,
                        int comps = 3);

/// Richardson extrapolation (4 f_2N - f_N)/3 of link fields on the coarse
/// links.
VectorXd richardson(const BlobChain& coarse, const BlobChain& fine, const VectorXd& f_coarse,
                    const VectorXd& f_fine, int comps = 3);

/// Chebyshev moments int lambda T_k ds with link weights ds (x component by
/// default comp = 0).
VectorXd moments(const BlobChain& chain, const VectorXd& lambda, int kmax, int comp = 0);

}  // namespace fiberflow::blob
