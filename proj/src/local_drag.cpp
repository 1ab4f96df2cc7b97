#include "fiberflow/local_drag.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

namespace fiberflow::local_drag {

namespace {

using boost::math::quadrature::gauss_kronrod;

double adaptive(const std::function<double(double)>& f, double a, double b) {
  if (b <= a) return 0.0;
  return gauss_kronrod<double, 15>::integrate(f, a, b, 12, 1e-13);
}

}  // namespace

VectorXd rotrot_coefficients(const VectorXd& s, double L, const KernelParams& p) {
  const double a = p.a_hat;
  const double pre = 1.0 / (8.0 * M_PI * p.mu * a * a);
  VectorXd out(s.size());
  for (int i = 0; i < s.size(); ++i) {
    const double si = s(i);
    if (si >= 2.0 * a && si <= L - 2.0 * a) {
      out(i) = pre * (2.25 - a * a / (2.0 * si * si) - a * a / (2.0 * (L - si) * (L - si)));
      continue;
    }
    // xi = (s' - s)/a runs over [-s/a, (L-s)/a]; near branch on |xi| <= 2.
    const double lo = -si / a, hi = (L - si) / a;
    auto near = [](double xi) {
      const double x = std::abs(xi);
      return 1.0 - 9.0 * x / 16.0 + x * x * x / 32.0;
    };
    auto far = [](double xi) {
      const double x = std::abs(xi);
      return 1.0 / (x * x * x);
    };
    double v = adaptive(near, std::max(lo, -2.0), std::min(hi, 2.0));
    v += adaptive(far, lo, -2.0);
    v += adaptive(far, 2.0, hi);
    out(i) = pre * v;
  }
  return out;
}

double rotrot_ellipsoidal(const KernelParams& p) {
  return 9.0 / (32.0 * M_PI * p.mu * p.a_hat * p.a_hat);
}

double stokeslet_log_factor(double s, double L, double a_hat) {
  const double a = a_hat;
  if (s > 2.0 * a && s < L - 2.0 * a) return std::log((L - s) * s / (4.0 * a * a));
  if (s <= 2.0 * a) return std::log((L - s) / (2.0 * a));
  return std::log(s / (2.0 * a));
}

double doublet_inner_factor(double s, double L, double a_hat) {
  const double a = a_hat;
  if (s > 2.0 * a && s < L - 2.0 * a)
    return 0.25 - a * a / (2.0 * s * s) - a * a / (2.0 * (L - s) * (L - s));
  if (s <= 2.0 * a) return 0.125 - a * a / (2.0 * (L - s) * (L - s));
  return 0.125 - a * a / (2.0 * s * s);
}

LocalTT cylindrical_tt(double s, double L, const KernelParams& p) {
  const double a = p.a_hat;
  const double logf = stokeslet_log_factor(s, L, a);
  const double dblt = doublet_inner_factor(s, L, a);
  // Overlapping branch contribution along a locally straight fiber.
  const double lo = std::max(-s / a, -2.0), hi = std::min((L - s) / a, 2.0);
  auto near_i = [](double xi) { return 4.0 / 3.0 - 3.0 * std::abs(xi) / 8.0; };
  auto near_t = [](double xi) { return std::abs(xi) / 8.0; };
  const double ni = adaptive(near_i, lo, hi);
  const double nt = adaptive(near_t, lo, hi);
  LocalTT c;
  c.c_I = logf + (2.0 / 3.0) * dblt + ni;
  c.c_tau = logf - 2.0 * dblt + nt;
  return c;
}

LocalTT ellipsoidal_tt(double L, const KernelParams& p) {
  const double ehat = p.a_hat / L;
  const double cl = std::log(1.0 / (16.0 * ehat * ehat));
  return {cl + 4.0, cl};
}

}  // namespace fiberflow::local_drag
