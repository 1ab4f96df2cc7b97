#include "fiberflow/rpy.hpp"

#include <cmath>
#include <stdexcept>

namespace fiberflow::rpy {

KernelParams::KernelParams(double a_hat_, double mu_) : a_hat(a_hat_), mu(mu_) {
  if (a_hat <= 0 || mu <= 0) throw std::invalid_argument("KernelParams: a_hat and mu must be positive");
}

KernelParams KernelParams::from_true_radius(double a, double mu) {
  return KernelParams(a * std::exp(1.5) / 4.0, mu);
}

Mat3 stokeslet(const Vec3& x, const Vec3& y, double mu) {
  const Vec3 R = x - y;
  const double r = R.norm();
  if (r == 0.0) throw std::domain_error("stokeslet: singular evaluation at x = y");
  const Vec3 rhat = R / r;
  return (Mat3::Identity() + rhat * rhat.transpose()) / (8.0 * M_PI * mu * r);
}

Mat3 doublet(const Vec3& x, const Vec3& y, double mu) {
  const Vec3 R = x - y;
  const double r = R.norm();
  if (r == 0.0) throw std::domain_error("doublet: singular evaluation at x = y");
  const Vec3 rhat = R / r;
  return (Mat3::Identity() - 3.0 * rhat * rhat.transpose()) / (8.0 * M_PI * mu * r * r * r);
}

Mat3 rpy_tt(const Vec3& x, const Vec3& y, const KernelParams& p) {
  const double a = p.a_hat;
  const double pre = 1.0 / (8.0 * M_PI * p.mu);
  const Vec3 R = x - y;
  const double r = R.norm();
  if (r >= 2.0 * a) {
    const Vec3 rhat = R / r;
    const Mat3 rr = rhat * rhat.transpose();
    return pre * ((Mat3::Identity() + rr) / r + (2.0 * a * a / 3.0) * (Mat3::Identity() - 3.0 * rr) / (r * r * r));
  }
  if (r == 0.0) return pre * (4.0 / (3.0 * a)) * Mat3::Identity();
  const Vec3 rhat = R / r;
  return pre * ((4.0 / (3.0 * a) - 3.0 * r / (8.0 * a * a)) * Mat3::Identity() +
                (r / (8.0 * a * a)) * rhat * rhat.transpose());
}

Mat3 rpy_tr(const Vec3& x, const Vec3& y, const KernelParams& p) {
  const double a = p.a_hat;
  const double pre = 1.0 / (8.0 * M_PI * p.mu);
  const Vec3 R = x - y;
  const double r = R.norm();
  if (r == 0.0) return Mat3::Zero();
  // M N = c (N x Rhat) = -c [Rhat] N, with [v] the cross-product matrix.
  if (r >= 2.0 * a) return -pre / (r * r) * cross_matrix(R / r);
  const double c = (r / a - 3.0 * r * r / (8.0 * a * a)) / (2.0 * a * a);
  return -pre * c * cross_matrix(R / r);
}

Mat3 rpy_rt(const Vec3& x, const Vec3& y, const KernelParams& p) {
  return rpy_tr(x, y, p);  // same functional form; adjoint under (x,y) swap
}

Mat3 rpy_rr(const Vec3& x, const Vec3& y, const KernelParams& p) {
  const double a = p.a_hat;
  const double pre = 1.0 / (8.0 * M_PI * p.mu);
  const Vec3 R = x - y;
  const double r = R.norm();
  if (r >= 2.0 * a) {
    const Vec3 rhat = R / r;
    return -0.5 * pre * (Mat3::Identity() - 3.0 * rhat * rhat.transpose()) / (r * r * r);
  }
  if (r == 0.0) return pre / (a * a * a) * Mat3::Identity();
  const Vec3 rhat = R / r;
  const double a3 = a * a * a;
  const double ci = 1.0 - 27.0 * r / (32.0 * a) + 5.0 * r * r * r / (64.0 * a3);
  const double cr = 9.0 * r / (32.0 * a) - 3.0 * r * r * r / (64.0 * a3);
  return pre / a3 * (ci * Mat3::Identity() + cr * rhat * rhat.transpose());
}

}  // namespace fiberflow::rpy
