#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "fractional_laplacian.hpp"

namespace fracburgers {

/// Analytic profile with known derivative on R \ {0}. Outside
/// [-support_radius, support_radius] the function is zero to double precision.
struct AnalyticFunction {
  std::string name;
  std::function<double(double)> f;
  std::function<double(double)> df;
  double support_radius = 1.0;
  bool jump_at_zero = false;
  double value_at_0_plus = 0.0;
};

namespace detail {

template <class F>
double gk(F&& g, double a, double b) {
  if (!(b > a)) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(g, a, b, 12, 1e-11);
}

// int_0^b g(z) dz for g ~ z^(1-lambda) near 0, via z = t^beta with beta = 2/(2-lambda),
// which turns the leading behaviour into a linear one.
template <class F>
double gk_from_zero(F&& g, double b, double lambda) {
  if (!(b > 0.0)) return 0.0;
  const double beta = 2.0 / (2.0 - lambda);
  auto gt = [&](double t) { return t <= 0.0 ? 0.0 : g(std::pow(t, beta)) * beta * std::pow(t, beta - 1.0); };
  return gk(gt, 0.0, std::pow(b, 1.0 / beta));
}

}  // namespace detail

/// -G int_{0 < z < r_max} (phi(x+z) + phi(x-z) - 2 phi(x)) z^(-1-lambda) dz by adaptive
/// Gauss-Kronrod, split at the kinks and, for jump profiles, at z = |x|.
/// r_max = infinity gives L_lambda phi(x) with the far part in closed form.
inline double reference_apply(const AnalyticFunction& phi, double x, double lambda,
                              double r_max = std::numeric_limits<double>::infinity()) {
  if (x == 0.0 && phi.jump_at_zero) throw DomainError("reference_apply at the jump");
  const double G = compute_G(lambda);
  const double fx = phi.f(x);
  const double a = phi.support_radius;
  const double R = std::abs(x) + a;  // beyond R both shifted points leave the support
  auto integrand = [&](double z) {
    return (phi.f(x + z) + phi.f(x - z) - 2.0 * fx) * std::pow(z, -1.0 - lambda);
  };
  std::vector<double> brk{0.0};
  for (double b : {std::abs(x), std::abs(a - x), std::abs(a + x), R})
    if (b > 0.0 && b < std::min(R, r_max)) brk.push_back(b);
  brk.push_back(std::min(R, r_max));
  std::sort(brk.begin(), brk.end());
  brk.erase(std::unique(brk.begin(), brk.end()), brk.end());
  // z^(-1-lambda) spans many decades when x is close to 0: split geometrically
  std::vector<double> pts{brk[0], brk[1]};
  for (std::size_t i = 1; i + 1 < brk.size(); ++i) {
    for (double z = brk[i] * 8.0; z < brk[i + 1] / 2.0; z *= 8.0) pts.push_back(z);
    pts.push_back(brk[i + 1]);
  }
  double s = 0.0;
  s += detail::gk_from_zero(integrand, pts[1], lambda);
  for (std::size_t i = 1; i + 1 < pts.size(); ++i) s += detail::gk(integrand, pts[i], pts[i + 1]);
  if (r_max > R) {
    // only -2 phi(x) survives past R
    const double far_hi = std::isinf(r_max) ? 0.0 : std::pow(r_max, -lambda);
    s += -2.0 * fx * (std::pow(R, -lambda) - far_hi) / lambda;
  }
  return -G * s;
}

/// Reference operator sampled at the full-line cell centers.
inline FullField reference_apply_field(const AnalyticFunction& phi, const GridSpec& grid, double lambda) {
  return FullField::sample(grid, [&](double x) { return reference_apply(phi, x, lambda); });
}

}  // namespace fracburgers
