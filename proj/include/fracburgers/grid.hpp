#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "csv.hpp"
#include "errors.hpp"

namespace fracburgers {

/// Uniform cell-centered grid on (0, L] with an implied mirror on [-L, 0).
/// Cell i (0-based) is centered at (i + 1/2) h, so x = 0 is an interface.
class GridSpec {
 public:
  GridSpec(double h, std::size_t N) : h_(h), N_(N) {
    if (!(h > 0.0) || !std::isfinite(h)) throw DomainError("grid spacing must be positive");
    if (N < 4) throw DomainError("grid needs at least 4 cells per half-line");
  }

  /// Grid with spacing h on (0, L]; L/h must be an integer up to 1e-9 relative.
  static GridSpec from_extent(double h, double L) {
    if (!(h > 0.0) || !(L > 0.0)) throw DomainError("grid extent and spacing must be positive");
    double ratio = L / h;
    double n = std::round(ratio);
    if (std::abs(ratio - n) > 1e-9 * std::max(1.0, ratio))
      throw DomainError("L must be an integer multiple of h");
    return GridSpec(h, static_cast<std::size_t>(n));
  }

  double h() const noexcept { return h_; }
  std::size_t N() const noexcept { return N_; }
  double L() const noexcept { return static_cast<double>(N_) * h_; }

  /// Center of half-line cell i (0-based).
  double x(std::size_t i) const noexcept { return (static_cast<double>(i) + 0.5) * h_; }
  /// Center of full-line cell k in [0, 2N).
  double x_full(std::size_t k) const noexcept {
    return (static_cast<double>(k) - static_cast<double>(N_) + 0.5) * h_;
  }

  bool operator==(const GridSpec& o) const noexcept { return h_ == o.h_ && N_ == o.N_; }
  bool operator!=(const GridSpec& o) const noexcept { return !(*this == o); }

 private:
  double h_;
  std::size_t N_;
};

inline void require_same_grid(const GridSpec& a, const GridSpec& b, const char* where) {
  if (a != b) throw ContractViolation(std::string("grid mismatch in ") + where);
}

class FullField;

/// Odd grid function: values on the half-line cells plus the one-sided trace at 0+.
/// Beyond L the field is zero.
class OddField {
 public:
  OddField(GridSpec grid, std::vector<double> values, double trace_plus)
      : grid_(grid), values_(std::move(values)), trace_(trace_plus) {
    if (values_.size() != grid_.N()) throw ContractViolation("odd field size does not match grid");
  }

  static OddField zero(GridSpec grid) { return OddField(grid, std::vector<double>(grid.N(), 0.0), 0.0); }

  /// Cell averages approximated by midpoint samples of an analytic profile.
  template <class F>
  static OddField sample(GridSpec grid, F&& f, double trace_plus) {
    std::vector<double> v(grid.N());
    for (std::size_t i = 0; i < grid.N(); ++i) v[i] = f(grid.x(i));
    return OddField(grid, std::move(v), trace_plus);
  }

  /// The lifting profile (1 - |x|)^+ sign x.
  static OddField theta(GridSpec grid) {
    return sample(grid, [](double x) { return std::max(0.0, 1.0 - x); }, 1.0);
  }

  const GridSpec& grid() const noexcept { return grid_; }
  const std::vector<double>& values() const noexcept { return values_; }
  std::vector<double>& values() noexcept { return values_; }
  double trace_plus() const noexcept { return trace_; }
  void set_trace_plus(double t) noexcept { trace_ = t; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  double& operator[](std::size_t i) noexcept { return values_[i]; }
  std::size_t size() const noexcept { return values_.size(); }

  inline FullField to_full() const;

 private:
  GridSpec grid_;
  std::vector<double> values_;
  double trace_;
};

/// Grid function on the 2N cells of [-L, L] with no symmetry assumption.
class FullField {
 public:
  FullField(GridSpec grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
    if (values_.size() != 2 * grid_.N()) throw ContractViolation("full field size does not match grid");
  }

  static FullField zero(GridSpec grid) { return FullField(grid, std::vector<double>(2 * grid.N(), 0.0)); }

  template <class F>
  static FullField sample(GridSpec grid, F&& f) {
    std::vector<double> v(2 * grid.N());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = f(grid.x_full(k));
    return FullField(grid, std::move(v));
  }

  const GridSpec& grid() const noexcept { return grid_; }
  const std::vector<double>& values() const noexcept { return values_; }
  std::vector<double>& values() noexcept { return values_; }
  double operator[](std::size_t k) const noexcept { return values_[k]; }
  double& operator[](std::size_t k) noexcept { return values_[k]; }
  std::size_t size() const noexcept { return values_.size(); }

  /// Positive half as an odd field; only meaningful when the field is odd.
  OddField positive_half(double trace_plus) const {
    const std::size_t N = grid_.N();
    return OddField(grid_, std::vector<double>(values_.begin() + static_cast<std::ptrdiff_t>(N), values_.end()),
                    trace_plus);
  }

 private:
  GridSpec grid_;
  std::vector<double> values_;
};

inline FullField OddField::to_full() const {
  const std::size_t N = grid_.N();
  std::vector<double> u(2 * N);
  for (std::size_t i = 0; i < N; ++i) {
    u[N + i] = values_[i];
    u[N - 1 - i] = -values_[i];
  }
  return FullField(grid_, std::move(u));
}

/// Value of the odd field at signed x; zero beyond L, one ghost cell allowed.
inline double reflect_eval(const OddField& f, double x) {
  const double ax = std::abs(x);
  if (x == 0.0 || !std::isfinite(x)) throw DomainError("reflect_eval at x = 0 or non-finite x");
  const GridSpec& g = f.grid();
  if (ax > g.L() + g.h()) throw DomainError("reflect_eval beyond the ghost margin");
  if (ax > g.L()) return 0.0;
  auto i = std::min(g.N() - 1, static_cast<std::size_t>(std::floor(ax / g.h())));
  const double v = f[i];
  return x < 0.0 ? -v : v;
}

/// Mean of f over (0, w]; w is truncated down to a whole number of cells.
inline double trace_avg(const OddField& f, double w) {
  const GridSpec& g = f.grid();
  if (!(w > 0.0) || w > g.L() * (1.0 + 1e-12)) throw DomainError("trace window outside (0, L]");
  auto m = static_cast<std::size_t>(std::floor(w / g.h() * (1.0 + 1e-12)));
  m = std::min(m, g.N());
  if (m < 1) throw DomainError("trace window smaller than one cell");
  double s = 0.0;
  for (std::size_t i = 0; i < m; ++i) s += f[i];
  return s / static_cast<double>(m);
}

struct Norms {
  double l1 = 0.0;
  double l2 = 0.0;
  double h1_broken = 0.0;
  double bv_seminorm = 0.0;
};

/// Full-line norms of an odd field. The gradient lives on R \ {0}: the first
/// half-cell difference runs from the trace to the first center.
inline Norms norms(const OddField& f) {
  const GridSpec& g = f.grid();
  const double h = g.h();
  const std::size_t N = g.N();
  double s1 = 0.0, s2 = 0.0, grad2 = 0.0, tv = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    s1 += std::abs(f[i]);
    s2 += f[i] * f[i];
  }
  const double d0 = f[0] - f.trace_plus();
  grad2 += (h / 2) * (d0 / (h / 2)) * (d0 / (h / 2));
  tv += std::abs(d0);
  for (std::size_t i = 0; i + 1 < N; ++i) {
    const double d = f[i + 1] - f[i];
    grad2 += h * (d / h) * (d / h);
    tv += std::abs(d);
  }
  Norms n;
  n.l1 = 2.0 * h * s1;
  n.l2 = std::sqrt(2.0 * h * s2);
  n.h1_broken = std::sqrt(2.0 * h * s2 + 2.0 * grad2);
  n.bv_seminorm = 2.0 * std::abs(f.trace_plus()) + 2.0 * tv;
  return n;
}

/// Norms of a full-line field; h1_broken skips the interface at 0.
inline Norms norms(const FullField& f) {
  const GridSpec& g = f.grid();
  const double h = g.h();
  const std::size_t M = f.size();
  double s1 = 0.0, s2 = 0.0, grad2 = 0.0, tv = 0.0;
  for (std::size_t k = 0; k < M; ++k) {
    s1 += std::abs(f[k]);
    s2 += f[k] * f[k];
  }
  for (std::size_t k = 0; k + 1 < M; ++k) {
    const double d = f[k + 1] - f[k];
    tv += std::abs(d);
    if (k + 1 != g.N()) grad2 += h * (d / h) * (d / h);
  }
  Norms n;
  n.l1 = h * s1;
  n.l2 = std::sqrt(h * s2);
  n.h1_broken = std::sqrt(h * s2 + grad2);
  n.bv_seminorm = tv;
  return n;
}

inline CsvTable to_csv(const OddField& f) {
  CsvTable t;
  t.add_meta("trace_plus", f.trace_plus());
  t.add_meta("h", f.grid().h());
  t.add_meta("N", static_cast<double>(f.grid().N()));
  t.header = {"x", "value"};
  for (std::size_t i = 0; i < f.size(); ++i) t.rows.push_back({f.grid().x(i), f[i]});
  return t;
}

inline CsvTable to_csv(const FullField& f, const char* value_name = "value") {
  CsvTable t;
  t.add_meta("h", f.grid().h());
  t.add_meta("N", static_cast<double>(f.grid().N()));
  t.header = {"x", value_name};
  for (std::size_t k = 0; k < f.size(); ++k) t.rows.push_back({f.grid().x_full(k), f[k]});
  return t;
}

/// Inverse of to_csv(OddField). Grid spacing is recovered from the metadata.
inline OddField odd_field_from_csv(const CsvTable& t) {
  const auto* tr = t.find_meta("trace_plus");
  const auto* hs = t.find_meta("h");
  if (!tr || !hs) throw ConfigError("odd field csv lacks trace_plus or h metadata");
  if (t.header.size() != 2) throw ConfigError("odd field csv must have two columns");
  GridSpec g(parse_double(*hs), t.rows.size());
  return OddField(g, t.column(1), parse_double(*tr));
}

}  // namespace fracburgers
