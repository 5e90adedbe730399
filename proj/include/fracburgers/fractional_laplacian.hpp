#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>
#include <unsupported/Eigen/FFT>

#include "csv.hpp"
#include "errors.hpp"
#include "grid.hpp"

namespace fracburgers {

/// G_lambda = lambda Gamma((1+lambda)/2) / (2 pi^(1/2+lambda) Gamma(1-lambda/2)).
inline double compute_G(double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw DomainError("lambda must lie in (0, 1)");
  const double pi = 3.14159265358979323846;
  return lambda * boost::math::tgamma((1.0 + lambda) / 2.0) /
         (2.0 * std::pow(pi, 0.5 + lambda) * boost::math::tgamma(1.0 - lambda / 2.0));
}

/// Quadrature weights for -G int (f(x+z) - f(x)) |z|^(-1-lambda) dz on a grid.
///
/// Lag j >= 1 carries the exact integral of G |z|^(-1-lambda) over
/// [(j-1/2)h, (j+1/2)h]. Lags run to 2N, so every pair of cells on [-L, L]
/// is covered and the closed-form tail starts at Z = (2N + 1/2) h. The inner
/// cell |z| < h/2 pairs f(x+z) + f(x-z) - 2f(x), which vanishes for a
/// piecewise-constant reconstruction.
struct FracLapKernel {
  double lambda = 0.5;
  double G = 0.0;
  GridSpec grid{1.0, 4};
  std::vector<double> weights;  // weights[j-1] = w_j
  std::vector<double> prefix;   // prefix[j] = w_1 + ... + w_j, prefix[0] = 0
  double split_radius = 0.0;
  double tail_radius = 0.0;
  double tail_coeff = 0.0;  // both sides: (2G/lambda) Z^(-lambda)

  std::size_t max_lag() const noexcept { return weights.size(); }
  double weight(std::size_t lag) const { return weights.at(lag - 1); }
  /// Coefficient of f(x) in the discrete operator.
  double diagonal() const noexcept { return 2.0 * prefix.back() + tail_coeff; }
};

using HalfOrderKernel = FracLapKernel;

inline FracLapKernel build_kernel(const GridSpec& grid, double lambda) {
  FracLapKernel k;
  k.lambda = lambda;
  k.G = compute_G(lambda);
  k.grid = grid;
  const double h = grid.h();
  const std::size_t J = 2 * grid.N();
  k.weights.resize(J);
  k.prefix.assign(J + 1, 0.0);
  const double c = k.G / lambda;
  for (std::size_t j = 1; j <= J; ++j) {
    const double a = (static_cast<double>(j) - 0.5) * h;
    // a^-l - (a+h)^-l without cancellation
    k.weights[j - 1] = -c * std::pow(a, -lambda) * std::expm1(-lambda * std::log1p(h / a));
    k.prefix[j] = k.prefix[j - 1] + k.weights[j - 1];
  }
  k.split_radius = h / 2;
  k.tail_radius = (static_cast<double>(J) + 0.5) * h;
  k.tail_coeff = 2.0 * c * std::pow(k.tail_radius, -lambda);
  return k;
}

/// Kernel of L_{lambda/2} on the same grid.
inline HalfOrderKernel build_half_order_kernel(const GridSpec& grid, double lambda) {
  return build_kernel(grid, lambda / 2.0);
}

/// Constant values read outside [-L, L]; zero is the default tail policy.
struct FarField {
  double left = 0.0;
  double right = 0.0;
};

enum class ApplyMethod { automatic, direct, fft };

/// Circulant embedding of the in-domain Toeplitz part (lags first_lag..2N-1).
class ToeplitzPlan {
 public:
  ToeplitzPlan(const FracLapKernel& k, std::size_t first_lag) : M_(2 * k.grid.N()), first_(first_lag) {
    P_ = 1;
    while (P_ < 2 * M_) P_ <<= 1;
    std::vector<double> c(P_, 0.0);
    for (std::size_t d = std::max<std::size_t>(first_lag, 1); d < M_; ++d) {
      c[d] = k.weights[d - 1];
      c[P_ - d] = k.weights[d - 1];
    }
    fft_.fwd(spec_, c);
  }

  /// y_k = sum_{m != k, |k-m| >= first_lag} w_{|k-m|} u_m.
  std::vector<double> multiply(const std::vector<double>& u) const {
    std::vector<double> pad(P_, 0.0);
    std::copy(u.begin(), u.end(), pad.begin());
    std::vector<std::complex<double>> U;
    fft_.fwd(U, pad);
    for (std::size_t i = 0; i < U.size(); ++i) U[i] *= spec_[i];
    std::vector<double> y;
    fft_.inv(y, U);
    y.resize(M_);
    return y;
  }

  std::size_t first_lag() const noexcept { return first_; }

 private:
  std::size_t M_, P_, first_;
  std::vector<std::complex<double>> spec_;
  mutable Eigen::FFT<double> fft_;
};

namespace detail {

// Adds the diagonal, out-of-domain and tail parts to -y (the in-domain sum).
inline void finish_apply(const FracLapKernel& k, const std::vector<double>& u, const FarField& far,
                         std::size_t first, std::vector<double>& y) {
  const std::size_t M = u.size();
  const std::size_t J = k.max_lag();
  const double SJ = k.prefix[J];
  const double Sfirst = k.prefix[first - 1];
  const double th = k.tail_coeff / 2;
  const double diag = 2.0 * (SJ - Sfirst) + k.tail_coeff;
  for (std::size_t i = 0; i < M; ++i) {
    // right neighbours outside: lags j >= max(first, M - i)
    const std::size_t jr = std::max(first, M - i);
    const std::size_t jl = std::max(first, i + 1);
    const double out_r = jr <= J ? SJ - k.prefix[jr - 1] : 0.0;
    const double out_l = jl <= J ? SJ - k.prefix[jl - 1] : 0.0;
    y[i] = diag * u[i] - y[i] - (out_r + th) * far.right - (out_l + th) * far.left;
  }
}

}  // namespace detail

/// Discrete L_lambda restricted to lags >= first_lag (first_lag = 1 is the full operator).
inline FullField apply(const FracLapKernel& k, const FullField& f, const FarField& far = {},
                       std::size_t first_lag = 1, ApplyMethod method = ApplyMethod::automatic) {
  require_same_grid(k.grid, f.grid(), "apply");
  if (first_lag < 1) throw DomainError("first_lag must be at least 1");
  const auto& u = f.values();
  const std::size_t M = u.size();
  if (method == ApplyMethod::automatic) method = M >= 1024 ? ApplyMethod::fft : ApplyMethod::direct;
  std::vector<double> y(M, 0.0);
  if (method == ApplyMethod::fft) {
    y = ToeplitzPlan(k, first_lag).multiply(u);
  } else {
    const double* w = k.weights.data();
    for (std::size_t i = 0; i < M; ++i) {
      double s = 0.0;
      for (std::size_t j = first_lag; j <= i; ++j) s += w[j - 1] * u[i - j];
      for (std::size_t j = first_lag; i + j < M; ++j) s += w[j - 1] * u[i + j];
      y[i] = s;
    }
  }
  detail::finish_apply(k, u, far, first_lag, y);
  return FullField(f.grid(), std::move(y));
}

/// Same as apply(FullField) with a prebuilt FFT plan.
inline FullField apply(const FracLapKernel& k, const ToeplitzPlan& plan, const FullField& f,
                       const FarField& far = {}) {
  require_same_grid(k.grid, f.grid(), "apply");
  auto y = plan.multiply(f.values());
  detail::finish_apply(k, f.values(), far, plan.first_lag(), y);
  return FullField(f.grid(), std::move(y));
}

/// Odd input through the reflection rule. The output trace slot holds the
/// first-cell value since L_lambda f is unbounded at a jump.
inline OddField apply(const FracLapKernel& k, const OddField& f, ApplyMethod method = ApplyMethod::automatic) {
  auto full = apply(k, f.to_full(), FarField{}, 1, method);
  auto half = full.positive_half(0.0);
  half.set_trace_plus(half[0]);
  return half;
}

struct SpectralResult {
  FullField field;
  bool boundary_warning = false;
  double max_imag = 0.0;
};

/// Multiplies the DFT of f by |xi|^lambda, xi_k = k / period, period = 2L * period_factor.
/// period_factor > 1 zero-pads f before transforming.
inline SpectralResult apply_spectral(const FullField& f, double lambda, std::size_t period_factor = 1) {
  if (!(lambda > 0.0 && lambda < 2.0)) throw DomainError("spectral order must lie in (0, 2)");
  if (period_factor < 1) throw DomainError("period_factor must be at least 1");
  const std::size_t M = f.size();
  const std::size_t P = M * period_factor;
  const double period = 2.0 * f.grid().L() * static_cast<double>(period_factor);
  std::vector<double> pad(P, 0.0);
  // keep the cell layout: field occupies the first M slots, the shift is a pure phase
  std::copy(f.values().begin(), f.values().end(), pad.begin());
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> F;
  fft.fwd(F, pad);
  for (std::size_t k = 0; k < P; ++k) {
    const double kk = k <= P / 2 ? static_cast<double>(k) : static_cast<double>(k) - static_cast<double>(P);
    const double xi = std::abs(kk) / period;
    F[k] *= xi == 0.0 ? 0.0 : std::pow(xi, lambda);
  }
  std::vector<std::complex<double>> out;
  fft.inv(out, F);
  std::vector<double> re(M);
  double fmax = 0.0, imax = 0.0;
  for (double v : f.values()) fmax = std::max(fmax, std::abs(v));
  for (std::size_t i = 0; i < M; ++i) {
    re[i] = out[i].real();
    imax = std::max(imax, std::abs(out[i].imag()));
  }
  SpectralResult r{FullField(f.grid(), std::move(re)), false, imax};
  const std::size_t edge = std::max<std::size_t>(2, M / 20);
  for (std::size_t i = 0; i < edge; ++i)
    if (std::abs(f[i]) > 1e-8 * fmax || std::abs(f[M - 1 - i]) > 1e-8 * fmax) r.boundary_warning = true;
  return r;
}

/// a(v, w) = h [ sum_{k<m} w_{m-k} (v_k - v_m)(w_k - w_m) + sum_k e_k v_k w_k ],
/// e_k the kernel mass reaching outside [-L, L] plus the tail. Symmetric in (v, w) bit for bit.
inline double bilinear(const FracLapKernel& k, const FullField& v, const FullField& w) {
  require_same_grid(k.grid, v.grid(), "bilinear");
  require_same_grid(k.grid, w.grid(), "bilinear");
  const std::size_t M = v.size();
  const std::size_t J = k.max_lag();
  const double SJ = k.prefix[J];
  const double* wt = k.weights.data();
  double pair = 0.0, self = 0.0;
  for (std::size_t i = 0; i < M; ++i) {
    const double vi = v[i], wi = w[i];
    double s = 0.0;
    for (std::size_t m = i + 1; m < M; ++m) s += wt[m - i - 1] * ((vi - v[m]) * (wi - w[m]));
    pair += s;
    const double out = (SJ - k.prefix[M - 1 - i]) + (SJ - k.prefix[i]);
    self += (out + k.tail_coeff) * (vi * wi);
  }
  return k.grid.h() * (pair + self);
}

inline double bilinear(const FracLapKernel& k, const OddField& v, const OddField& w) {
  return bilinear(k, v.to_full(), w.to_full());
}

struct ReverseMaxReport {
  double x_star = 0.0;
  double value_at_x_star = 0.0;
  bool max_case = true;
  bool inconclusive = false;
  bool verdict = false;
};

/// Sign of L_lambda f at the dominant extremum of f on (0, L].
inline ReverseMaxReport reverse_max_principle_check(const FracLapKernel& k, const OddField& f) {
  std::size_t imax = 0, imin = 0;
  for (std::size_t i = 1; i < f.size(); ++i) {
    if (f[i] > f[imax]) imax = i;
    if (f[i] < f[imin]) imin = i;
  }
  ReverseMaxReport r;
  if (f[imax] == 0.0 && f[imin] == 0.0) {
    r.inconclusive = true;
    return r;
  }
  r.max_case = f[imax] >= -f[imin];
  const std::size_t is = r.max_case ? imax : imin;
  r.x_star = f.grid().x(is);
  r.inconclusive = is == 0;
  const auto Lf = apply(k, f);
  r.value_at_x_star = Lf[is];
  r.verdict = !r.inconclusive && (r.max_case ? r.value_at_x_star > 0.0 : r.value_at_x_star < 0.0);
  return r;
}

inline CsvTable kernel_to_csv(const FracLapKernel& k) {
  CsvTable t;
  t.add_meta("lambda", k.lambda);
  t.add_meta("G", k.G);
  t.add_meta("r", k.split_radius);
  t.add_meta("tail_radius", k.tail_radius);
  t.add_meta("tail_coeff", k.tail_coeff);
  t.add_meta("h", k.grid.h());
  t.add_meta("N", static_cast<double>(k.grid.N()));
  t.header = {"lag", "weight"};
  for (std::size_t j = 1; j <= k.max_lag(); ++j) t.rows.push_back({static_cast<double>(j), k.weights[j - 1]});
  return t;
}

}  // namespace fracburgers
