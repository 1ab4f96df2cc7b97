#include "fiberflow/blob.hpp"

#include <cmath>
#include <stdexcept>

#include "fiberflow/chebyshev.hpp"

namespace fiberflow::blob {

BlobChain make_chain(int n_links, double L, const std::function<Vec3(double)>& X,
                     const std::function<Vec3(double)>& tau) {
  BlobChain c;
  c.n_links = n_links;
  c.length = L;
  c.ds = L / n_links;
  c.s_links.resize(n_links);
  c.s_nodes.resize(n_links + 1);
  c.X.resize(3 * n_links);
  c.tau.resize(3 * n_links);
  c.n1.resize(3 * n_links);
  c.n2.resize(3 * n_links);
  for (int j = 0; j <= n_links; ++j) c.s_nodes(j) = j * c.ds;
  for (int j = 0; j < n_links; ++j) {
    c.s_links(j) = (j + 0.5) * c.ds;
    set_node(c.X, j, X(c.s_links(j)));
    set_node(c.tau, j, tau(c.s_links(j)).normalized());
  }
  // Parallel transport a first normal along the links.
  Vec3 t0 = node(c.tau, 0);
  Vec3 e = std::abs(t0.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  Vec3 n1 = (e - e.dot(t0) * t0).normalized();
  set_node(c.n1, 0, n1);
  set_node(c.n2, 0, t0.cross(n1));
  for (int j = 1; j < n_links; ++j) {
    const Vec3 ta = node(c.tau, j - 1), tb = node(c.tau, j);
    Vec3 axis = ta.cross(tb);
    const double sa = axis.norm();
    if (sa > 1e-14) {
      const double ang = std::atan2(sa, ta.dot(tb));
      n1 = rotate_rodrigues(n1, axis / sa * ang, 1.0);
    }
    n1 = (n1 - n1.dot(tb) * tb).normalized();
    set_node(c.n1, j, n1);
    set_node(c.n2, j, tb.cross(n1));
  }
  return c;
}

MatrixXd mobility_matrix(const BlobChain& chain, const KernelParams& params, Coupling c,
                         bool parallel) {
  const int n = chain.n_links;
  MatrixXd M(3 * n, 3 * n);
#pragma omp parallel for schedule(static) if (parallel)
  for (int i = 0; i < n; ++i) {
    const Vec3 xi = node(chain.X, i);
    for (int j = 0; j < n; ++j) {
      const Vec3 xj = node(chain.X, j);
      Mat3 k;
      switch (c) {
        case Coupling::TT: k = rpy::rpy_tt(xi, xj, params); break;
        case Coupling::TR: k = rpy::rpy_tr(xi, xj, params); break;
        case Coupling::RT: k = rpy::rpy_rt(xi, xj, params); break;
        case Coupling::RR: k = rpy::rpy_rr(xi, xj, params); break;
      }
      M.block<3, 3>(3 * i, 3 * j) = chain.ds * k;
    }
  }
  return M;
}

MatrixXd d_links_from_nodes(const BlobChain& chain) {
  const int n = chain.n_links;
  MatrixXd D = MatrixXd::Zero(n, n + 1);
  for (int j = 0; j < n; ++j) {
    D(j, j) = -1.0 / chain.ds;
    D(j, j + 1) = 1.0 / chain.ds;
  }
  return D;
}

MatrixXd avg_links_from_nodes(const BlobChain& chain) {
  const int n = chain.n_links;
  MatrixXd A = MatrixXd::Zero(n, n + 1);
  for (int j = 0; j < n; ++j) {
    A(j, j) = 0.5;
    A(j, j + 1) = 0.5;
  }
  return A;
}

MatrixXd d_nodes_from_links(const BlobChain& chain) {
  const int n = chain.n_links;
  MatrixXd D = MatrixXd::Zero(n - 1, n);
  for (int j = 0; j < n - 1; ++j) {
    D(j, j) = -1.0 / chain.ds;
    D(j, j + 1) = 1.0 / chain.ds;
  }
  return D;
}

MatrixXd avg_nodes_from_links(const BlobChain& chain) {
  const int n = chain.n_links;
  MatrixXd A = MatrixXd::Zero(n - 1, n);
  for (int j = 0; j < n - 1; ++j) {
    A(j, j) = 0.5;
    A(j, j + 1) = 0.5;
  }
  return A;
}

namespace {

MatrixXd kinematic_matrix(const BlobChain& chain) {
  const int n = chain.n_links;
  MatrixXd K = MatrixXd::Zero(3 * n, 2 * n + 3);
  for (int j = 0; j < n; ++j) {
    K.block<3, 3>(3 * j, 0) = Mat3::Identity();
    for (int k = 0; k <= j; ++k) {
      const double w = (k == j ? 0.5 : 1.0) * chain.ds;
      K.block<3, 1>(3 * j, 3 + 2 * k) = w * node(chain.n1, k);
      K.block<3, 1>(3 * j, 3 + 2 * k + 1) = w * node(chain.n2, k);
    }
  }
  return K;
}

}  // namespace

EulerBlobSolution solve_euler_blob(const BlobChain& chain, const KernelParams& params,
                                   const VectorXd& f_links, const VectorXd& npar_links) {
  const int n = chain.n_links;
  MatrixXd Mtt = mobility_matrix(chain, params, Coupling::TT);
  MatrixXd Mtr = mobility_matrix(chain, params, Coupling::TR);
  MatrixXd K = kinematic_matrix(chain);

  VectorXd ntau = scale_field(npar_links, chain.tau);
  VectorXd b = Mtt * f_links + Mtr * ntau;

  Eigen::PartialPivLU<MatrixXd> mlu(Mtt);
  MatrixXd MinvK = mlu.solve(K);
  VectorXd Minvb = mlu.solve(b);
  MatrixXd schur = K.transpose() * MinvK;
  VectorXd rhs = K.transpose() * Minvb;
  VectorXd alpha = schur.ldlt().solve(rhs);

  EulerBlobSolution sol;
  sol.alpha = alpha;
  sol.lambda = MinvK * alpha - Minvb;
  sol.U = K * alpha;
  MatrixXd Mrt = mobility_matrix(chain, params, Coupling::RT);
  MatrixXd Mrr = mobility_matrix(chain, params, Coupling::RR);
  VectorXd psi_full = Mrt * (f_links + sol.lambda) + Mrr * ntau;
  sol.omega_par = dot_field(psi_full, chain.tau);
  return sol;
}

KirchhoffMismatch solve_kirchhoff_mismatch(const BlobChain& chain, const KernelParams& params,
                                           const VectorXd& f_links, const VectorXd& npar_links,
                                           const EulerBlobSolution& euler) {
  const int n = chain.n_links;
  MatrixXd Mtt = mobility_matrix(chain, params, Coupling::TT);
  MatrixXd Mtr = mobility_matrix(chain, params, Coupling::TR);
  MatrixXd Mrt = mobility_matrix(chain, params, Coupling::RT);
  MatrixXd Mrr = mobility_matrix(chain, params, Coupling::RR);

  MatrixXd Dlb = stack3(d_links_from_nodes(chain));
  MatrixXd Alb = stack3(avg_links_from_nodes(chain));
  MatrixXd Dbl = stack3(d_nodes_from_links(chain));
  MatrixXd Abl = stack3(avg_nodes_from_links(chain));
  MatrixXd C = MatrixXd::Zero(3 * n, 3 * n);
  for (int j = 0; j < n; ++j) C.block<3, 3>(3 * j, 3 * j) = cross_matrix(node(chain.tau, j));

  VectorXd ntau = scale_field(npar_links, chain.tau);
  VectorXd ftot = f_links + euler.lambda;
  VectorXd m = (Dbl * Mtt + Abl * C * Mrt) * ftot + (Dbl * Mtr + Abl * C * Mrr) * ntau;

  const int nn = 3 * (n + 1);
  MatrixXd sys = MatrixXd::Zero(nn, nn);
  VectorXd rhs = VectorXd::Zero(nn);
  sys.topRows(3 * (n - 1)) =
      Dbl * (Mtt * Dlb + Mtr * C * Alb) + Abl * C * (Mrt * Dlb + Mrr * C * Alb);
  rhs.head(3 * (n - 1)) = -m;
  // Free-end boundary conditions dLambda(0) = dLambda(L) = 0.
  for (int d = 0; d < 3; ++d) {
    sys(3 * (n - 1) + d, d) = 1.0;
    sys(3 * (n - 1) + 3 + d, 3 * n + d) = 1.0;
  }

  KirchhoffMismatch out;
  out.mismatch = m;
  out.dLambda = sys.partialPivLu().solve(rhs);
  VectorXd dlam = Dlb * out.dLambda;          // force density perturbation at links
  VectorXd dtorq = C * (Alb * out.dLambda);   // tau x dLambda at links
  out.dU = Mtt * dlam + Mtr * dtorq;
  out.dPsi = Mrt * dlam + Mrr * dtorq;
  out.dOmega_par = dot_field(out.dPsi, chain.tau);
  return out;
}

double interior_norm(const VectorXd& field, const VectorXd& s, double L, double ds) {
  const int comps = static_cast<int>(field.size() / s.size());
  double acc = 0.0;
  for (int j = 0; j < s.size(); ++j) {
    if (s(j) < 0.05 * L || s(j) > 0.95 * L) continue;
    double v2 = 0.0;
    for (int d = 0; d < comps; ++d) v2 += field(comps * j + d) * field(comps * j + d);
    acc += ds * v2;
  }
  return std::sqrt(acc);
}

VectorXd restrict_links(const BlobChain& fine, const BlobChain& coarse, const VectorXd& field,
                        int comps) {
  const int nc = coarse.n_links;
  const int nf = fine.n_links;
  VectorXd out(comps * nc);
  for (int j = 0; j < nc; ++j) {
    const double s = coarse.s_links(j);
    // four nearest fine links (cubic Lagrange)
    int k = static_cast<int>(std::floor(s / fine.ds - 0.5));
    k = std::max(0, std::min(nf - 4, k - 1));
    double w[4];
    for (int a = 0; a < 4; ++a) {
      w[a] = 1.0;
      for (int b = 0; b < 4; ++b) {
        if (a == b) continue;
        w[a] *= (s - fine.s_links(k + b)) / (fine.s_links(k + a) - fine.s_links(k + b));
      }
    }
    for (int d = 0; d < comps; ++d) {
      double v = 0.0;
      for (int a = 0; a < 4; ++a) v += w[a] * field(comps * (k + a) + d);
      out(comps * j + d) = v;
    }
  }
  return out;
}

VectorXd richardson(const BlobChain& coarse, const BlobChain& fine, const VectorXd& f_coarse,
                    const VectorXd& f_fine, int comps) {
  VectorXd fine_on_coarse = restrict_links(fine, coarse, f_fine, comps);
  return (4.0 * fine_on_coarse - f_coarse) / 3.0;
}

VectorXd moments(const BlobChain& chain, const VectorXd& lambda, int kmax, int comp) {
  VectorXd out = VectorXd::Zero(kmax + 1);
  for (int j = 0; j < chain.n_links; ++j) {
    const double eta = 2.0 * chain.s_links(j) / chain.length - 1.0;
    VectorXd tk = spectral::chebyshev_values(eta, kmax);
    out += chain.ds * lambda(3 * j + comp) * tk;
  }
  return out;
}

}  // namespace fiberflow::blob
