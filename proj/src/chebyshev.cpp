#include "fiberflow/chebyshev.hpp"

#include <cmath>
#include <stdexcept>

namespace fiberflow {

MatrixXd stack3(const MatrixXd& op) {
  MatrixXd big = MatrixXd::Zero(3 * op.rows(), 3 * op.cols());
  for (int i = 0; i < op.rows(); ++i)
    for (int j = 0; j < op.cols(); ++j)
      for (int d = 0; d < 3; ++d) big(3 * i + d, 3 * j + d) = op(i, j);
  return big;
}

VectorXd apply_per_component(const MatrixXd& op, const VectorXd& field) {
  const int m = static_cast<int>(op.cols());
  const int n = static_cast<int>(op.rows());
  VectorXd out(3 * n);
  for (int d = 0; d < 3; ++d) {
    VectorXd comp(m);
    for (int j = 0; j < m; ++j) comp(j) = field(3 * j + d);
    VectorXd res = op * comp;
    for (int i = 0; i < n; ++i) out(3 * i + d) = res(i);
  }
  return out;
}

VectorXd dot_field(const VectorXd& a, const VectorXd& b) {
  const int n = static_cast<int>(a.size()) / 3;
  VectorXd out(n);
  for (int p = 0; p < n; ++p) out(p) = node(a, p).dot(node(b, p));
  return out;
}

VectorXd cross_field(const VectorXd& a, const VectorXd& b) {
  const int n = static_cast<int>(a.size()) / 3;
  VectorXd out(3 * n);
  for (int p = 0; p < n; ++p) set_node(out, p, node(a, p).cross(node(b, p)));
  return out;
}

VectorXd scale_field(const VectorXd& scalar, const VectorXd& field) {
  const int n = static_cast<int>(scalar.size());
  VectorXd out(3 * n);
  for (int p = 0; p < n; ++p) set_node(out, p, scalar(p) * node(field, p));
  return out;
}

Vec3 rotate_rodrigues(const Vec3& v, const Vec3& omega, double dt) {
  const double w = omega.norm();
  if (w == 0.0) return v;
  const Vec3 axis = omega / w;
  const double th = dt * w;
  return v * std::cos(th) + axis.cross(v) * std::sin(th) + axis * (axis.dot(v)) * (1.0 - std::cos(th));
}

}  // namespace fiberflow

namespace fiberflow::spectral {

ChebGrid make_grid(int n, GridKind kind, double length) {
  if (n < 4) throw std::invalid_argument("make_grid: need at least 4 nodes");
  if (length <= 0) throw std::invalid_argument("make_grid: length must be positive");
  ChebGrid g;
  g.n = n;
  g.kind = kind;
  g.length = length;
  g.eta.resize(n);
  g.bary.resize(n);
  if (kind == GridKind::Type1) {
    for (int p = 0; p < n; ++p) {
      const double theta = (2.0 * p + 1.0) * M_PI / (2.0 * n);
      g.eta(p) = -std::cos(theta);
      g.bary(p) = (p % 2 == 0 ? 1.0 : -1.0) * std::sin(theta);
    }
  } else {
    for (int p = 0; p < n; ++p) {
      g.eta(p) = -std::cos(p * M_PI / (n - 1.0));
      double w = (p % 2 == 0 ? 1.0 : -1.0);
      if (p == 0 || p == n - 1) w *= 0.5;
      g.bary(p) = w;
    }
    g.eta(0) = -1.0;
    g.eta(n - 1) = 1.0;
  }
  g.nodes = 0.5 * length * (g.eta.array() + 1.0);

  // Quadrature weights from w^T = (integrals of T_k)^T * vals2coeffs; this is
  // Fejer's first rule on type-1 grids and Clenshaw-Curtis on type-2 grids.
  MatrixXd c2v(n, n);
  for (int p = 0; p < n; ++p) c2v.row(p) = chebyshev_values(g.eta(p), n - 1).transpose();
  MatrixXd v2c(n, n);
  if (kind == GridKind::Type1) {
    for (int k = 0; k < n; ++k)
      for (int p = 0; p < n; ++p) v2c(k, p) = (k == 0 ? 1.0 : 2.0) / n * c2v(p, k);
  } else {
    for (int k = 0; k < n; ++k)
      for (int p = 0; p < n; ++p) {
        double w = (k == 0 || k == n - 1 ? 1.0 : 2.0) / (n - 1.0) * c2v(p, k);
        if (p == 0 || p == n - 1) w *= 0.5;
        v2c(k, p) = w;
      }
  }
  VectorXd tk_int = VectorXd::Zero(n);
  for (int k = 0; k < n; k += 2) tk_int(k) = 2.0 / (1.0 - k * k);
  g.weights = 0.5 * length * (v2c.transpose() * tk_int);
  return g;
}

VectorXd chebyshev_values(double x, int kmax) {
  VectorXd t(kmax + 1);
  t(0) = 1.0;
  if (kmax >= 1) t(1) = x;
  for (int k = 2; k <= kmax; ++k) t(k) = 2.0 * x * t(k - 1) - t(k - 2);
  return t;
}

MatrixXd interpolation_matrix(const ChebGrid& from, const VectorXd& targets) {
  const int n = from.n;
  const int m = static_cast<int>(targets.size());
  MatrixXd P = MatrixXd::Zero(m, n);
  for (int i = 0; i < m; ++i) {
    const double eta = 2.0 * targets(i) / from.length - 1.0;
    int hit = -1;
    for (int j = 0; j < n; ++j)
      if (eta == from.eta(j)) hit = j;
    if (hit >= 0) {
      P(i, hit) = 1.0;
      continue;
    }
    double denom = 0.0;
    for (int j = 0; j < n; ++j) {
      const double c = from.bary(j) / (eta - from.eta(j));
      P(i, j) = c;
      denom += c;
    }
    P.row(i) /= denom;
  }
  return P;
}

MatrixXd interpolation_matrix(const ChebGrid& from, const ChebGrid& to) {
  return interpolation_matrix(from, to.nodes);
}

MatrixXd l2_restriction(const ChebGrid& fine, const ChebGrid& coarse) {
  MatrixXd E = interpolation_matrix(coarse, fine);
  MatrixXd EtW = E.transpose() * fine.weights.asDiagonal();
  return (EtW * E).ldlt().solve(EtW);
}

double interp_value(const ChebGrid& grid, const VectorXd& values, double s) {
  VectorXd t(1);
  t << s;
  return (interpolation_matrix(grid, t) * values)(0);
}

Vec3 interp_vec3(const ChebGrid& grid, const VectorXd& field, double s) {
  VectorXd t(1);
  t << s;
  MatrixXd P = interpolation_matrix(grid, t);
  Vec3 out = Vec3::Zero();
  for (int j = 0; j < grid.n; ++j) out += P(0, j) * node(field, j);
  return out;
}

SpectralOps::SpectralOps(const ChebGrid& g) : grid(g) {
  const int n = g.n;

  // Differentiation by the barycentric formula with the negative sum trick.
  D.setZero(n, n);
  for (int i = 0; i < n; ++i) {
    double rowsum = 0.0;
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      D(i, j) = (g.bary(j) / g.bary(i)) / (g.nodes(i) - g.nodes(j));
      rowsum += D(i, j);
    }
    D(i, i) = -rowsum;
  }

  coeffs2vals.resize(n, n);
  for (int p = 0; p < n; ++p) coeffs2vals.row(p) = chebyshev_values(g.eta(p), n - 1).transpose();
  if (g.kind == GridKind::Type1) {
    vals2coeffs.resize(n, n);
    for (int k = 0; k < n; ++k)
      for (int p = 0; p < n; ++p) vals2coeffs(k, p) = (k == 0 ? 1.0 : 2.0) / n * coeffs2vals(p, k);
  } else {
    vals2coeffs.resize(n, n);
    for (int k = 0; k < n; ++k)
      for (int p = 0; p < n; ++p) {
        double w = (k == 0 || k == n - 1 ? 1.0 : 2.0) / (n - 1.0) * coeffs2vals(p, k);
        if (p == 0 || p == n - 1) w *= 0.5;
        vals2coeffs(k, p) = w;
      }
  }

  // Indefinite integration via the coefficient-space antiderivative recurrence,
  // pinned so the value at s = 0 vanishes. The antiderivative has degree n and
  // is evaluated exactly at the nodes.
  MatrixXd anti = MatrixXd::Zero(n + 1, n);  // coeffs of f -> coeffs of primitive
  anti(1, 0) = 1.0;                          // T_0 integrates to T_1
  if (n >= 2) anti(2, 1) = 0.25;             // T_1 integrates to T_2 / 4
  for (int k = 2; k < n; ++k) {
    anti(k + 1, k) += 0.5 / (k + 1.0);
    anti(k - 1, k) -= 0.5 / (k - 1.0);
  }
  MatrixXd evaln1(n, n + 1);  // evaluate degree-n coefficients at the nodes
  for (int p = 0; p < n; ++p) evaln1.row(p) = chebyshev_values(g.eta(p), n).transpose();
  VectorXd at_minus1 = chebyshev_values(-1.0, n);
  // Pin the constant: subtract the primitive value at eta = -1.
  MatrixXd pinned = evaln1 * anti;
  Eigen::RowVectorXd c0 = at_minus1.transpose() * anti;
  pinned -= VectorXd::Ones(n) * c0;
  Ddag0 = 0.5 * g.length * pinned * vals2coeffs;
  DdagL = VectorXd::Ones(n) * g.weights.transpose() - Ddag0;
}

}  // namespace fiberflow::spectral
