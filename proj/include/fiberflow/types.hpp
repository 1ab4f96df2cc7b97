#pragma once

#include <Eigen/Dense>

namespace fiberflow {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Node p of a stacked 3-vector field [x0 y0 z0 x1 y1 z1 ...].
inline Vec3 node(const VectorXd& field, int p) { return field.segment<3>(3 * p); }

inline void set_node(VectorXd& field, int p, const Vec3& v) { field.segment<3>(3 * p) = v; }

/// Skew matrix S(v) with S(v) x = v cross x.
inline Mat3 cross_matrix(const Vec3& v) {
  Mat3 s;
  s << 0, -v.z(), v.y(), v.z(), 0, -v.x(), -v.y(), v.x(), 0;
  return s;
}

/// Expand a scalar n x m operator to act per-component on stacked 3-vector fields.
MatrixXd stack3(const MatrixXd& op);

/// Apply a scalar operator per component without forming stack3(op).
VectorXd apply_per_component(const MatrixXd& op, const VectorXd& field);

/// Pointwise dot product of two stacked fields -> scalar field.
VectorXd dot_field(const VectorXd& a, const VectorXd& b);

/// Pointwise cross product of two stacked fields.
VectorXd cross_field(const VectorXd& a, const VectorXd& b);

/// Pointwise scalar * vector field product.
VectorXd scale_field(const VectorXd& scalar, const VectorXd& field);

/// Rotation of v about unit axis by angle (Rodrigues). Identity for |axis| = 0.
Vec3 rotate_rodrigues(const Vec3& v, const Vec3& omega, double dt);

}  // namespace fiberflow
