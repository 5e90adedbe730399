#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "diagnostics.hpp"

namespace fracburgers {

struct PropertyResult {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

inline PropertyResult at_most(std::string name, double value, double tol) {
  return {std::move(name), value, tol, value <= tol};
}
inline PropertyResult at_least(std::string name, double value, double tol) {
  return {std::move(name), value, tol, value >= tol};
}

inline bool all_pass(const std::vector<PropertyResult>& r) {
  for (const auto& p : r)
    if (!p.pass) return false;
  return true;
}

inline CsvTable properties_to_csv(const std::vector<PropertyResult>& r) {
  CsvTable t;
  t.header = {"index", "value", "tolerance", "pass"};
  for (std::size_t i = 0; i < r.size(); ++i) {
    t.add_meta("p" + std::to_string(i), r[i].name);
    t.rows.push_back({static_cast<double>(i), r[i].value, r[i].tolerance, r[i].pass ? 1.0 : 0.0});
  }
  return t;
}

namespace detail {

inline double rel_l2_error(const std::vector<double>& a, const std::vector<double>& ref) {
  double d = 0, n = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] - ref[i]) * (a[i] - ref[i]), n += ref[i] * ref[i];
  return std::sqrt(d / n);
}

inline double field_dot(const FullField& a, const FullField& b) {
  return dot(a.values(), b.values()) * a.grid().h();
}

}  // namespace detail

/// L_lambda exp(-pi x^2) at 0 = Gamma((1+l)/2) / pi^((1+l)/2).
inline double gaussian_value_at_zero(double lambda) {
  return std::tgamma((1 + lambda) / 2) / std::pow(3.14159265358979323846, (1 + lambda) / 2);
}

/// Compactly supported piecewise-linear field through 8 random nodes on [-3, 3].
inline FullField random_piecewise_linear(const GridSpec& g, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> y(9, 0.0);
  for (int i = 1; i < 8; ++i) y[i] = 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0;
  return FullField::sample(g, [&](double x) {
    const double s = (x + 3.0) / 0.75;
    if (s <= 0 || s >= 8) return 0.0;
    const int i = static_cast<int>(s);
    return y[i] + (s - i) * (y[i + 1] - y[i]);
  });
}

struct OperatorBatteryConfig {
  double lambda = 0.5;
  double h = 1.0 / 64;  // 2N = 1024 cells on [-8, 8]
  double L = 8.0;
};

inline std::vector<PropertyResult> operator_battery(const OperatorBatteryConfig& c) {
  constexpr double pi = 3.14159265358979323846;
  std::vector<PropertyResult> out;
  const double l = c.lambda;
  const GridSpec g = GridSpec::from_extent(c.h, c.L);
  const auto k = build_kernel(g, l);

  const double G = compute_G(l);
  out.push_back(at_most("G_definition_identity", std::abs(G * 2 * std::pow(pi, 0.5 + l) * std::tgamma(1 - l / 2) /
                                                              (l * std::tgamma((1 + l) / 2)) - 1.0), 1e-12));
  if (l == 0.5) out.push_back(at_most("G_half_equals_1_over_4pi", std::abs(G - 1 / (4 * pi)), 1e-10));

  auto gauss = [](double s) { return [s](double x) { return std::exp(-pi * (x / s) * (x / s)); }; };
  {
    const auto f = FullField::sample(g, gauss(1.0));
    const auto Lf = apply(k, f);
    const double exact = gaussian_value_at_zero(l);
    out.push_back(at_most("gaussian_point_value_rel_error", std::abs(Lf[g.N()] - exact) / exact, 0.01));
  }
  {
    const auto g2 = GridSpec::from_extent(c.h / 2, c.L);
    const auto k2 = build_kernel(g2, l);
    // zero padding keeps the periodization error below the h-dependent part
    constexpr std::size_t kPad = 256;
    double worst = 0.0, worst_fine = 0.0;
    for (double s : {0.5, 1.0, 2.0}) {
      const auto f = FullField::sample(g, gauss(s));
      const auto f2 = FullField::sample(g2, gauss(s));
      worst = std::max(worst, detail::rel_l2_error(apply(k, f).values(), apply_spectral(f, l, kPad).field.values()));
      worst_fine =
          std::max(worst_fine, detail::rel_l2_error(apply(k2, f2).values(), apply_spectral(f2, l, kPad).field.values()));
    }
    const double worst_ratio = worst_fine / worst;
    out.push_back(at_most("spectral_vs_quadrature_rel_l2", worst, 0.02));
    out.push_back(at_most("spectral_vs_quadrature_refinement_ratio", worst_ratio, 1.0 - 1e-3));
  }
  {
    const auto f = OddField::sample(g, [](double x) { return std::exp(-x) * std::cos(x); }, 1.0).to_full();
    const auto e = FullField::sample(g, [](double x) { return 1.0 / (1.0 + x * x) - 0.2; });
    const auto Lf = apply(k, f, FarField{}, 1, ApplyMethod::direct);
    const auto Le = apply(k, e, FarField{}, 1, ApplyMethod::direct);
    double mf = 0, df = 0, me = 0, de = 0;
    const std::size_t M = Lf.size();
    for (std::size_t i = 0; i < M; ++i) {
      mf = std::max(mf, std::abs(Lf[i]));
      df = std::max(df, std::abs(Lf[i] + Lf[M - 1 - i]));
      me = std::max(me, std::abs(Le[i]));
      de = std::max(de, std::abs(Le[i] - Le[M - 1 - i]));
    }
    out.push_back(at_most("odd_preservation_defect", df / mf, 1e-12));
    out.push_back(at_most("even_preservation_defect", de / me, 1e-12));
  }
  {
    const auto v = random_piecewise_linear(g, 1), w = random_piecewise_linear(g, 2);
    const double a = detail::field_dot(apply(k, v), w), b = detail::field_dot(v, apply(k, w));
    out.push_back(at_most("self_adjoint_defect", std::abs(a - b) / std::abs(a), 1e-12));
    out.push_back(at_most("bilinear_symmetry_defect", std::abs(bilinear(k, v, w) - bilinear(k, w, v)), 0.0));
    const auto d = apply(k, v, FarField{0.3, -0.2}, 1, ApplyMethod::direct);
    const auto f = apply(k, v, FarField{0.3, -0.2}, 1, ApplyMethod::fft);
    out.push_back(at_most("fft_vs_direct_rel_l2", detail::rel_l2_error(f.values(), d.values()), 1e-12));
  }
  {
    const auto p = OddField::sample(g, [](double x) { return x * std::exp(-x * x); }, 0.0);
    auto n = p;
    for (auto& x : n.values()) x = -x;
    const auto rp = reverse_max_principle_check(k, p);
    const auto rn = reverse_max_principle_check(k, n);
    out.push_back(at_least("reverse_max_principle_value", rp.value_at_x_star, 1e-300));
    out.push_back(at_least("reverse_min_principle_negated", -rn.value_at_x_star, 1e-300));
  }
  {
    const std::vector<double> rs{0.05, 0.1, 0.2, 0.5, 1.0, 2.0};
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& m : l1_estimate_check(OddField::theta(g).to_full(), k, rs)) worst = std::min(worst, m.margin);
    for (unsigned s = 0; s < 20; ++s)
      for (const auto& m : l1_estimate_check(random_piecewise_linear(g, 100 + s), k, rs))
        worst = std::min(worst, m.margin);
    out.push_back(at_least("L1_estimate_min_margin", worst, 0.0));
    const auto v = OddField::sample(g, [](double x) { return std::exp(-x) * (1 + x); }, 1.0);
    double w_out = std::numeric_limits<double>::infinity();
    for (double R : {1.0, 2.0, 4.0})
      for (double r : {0.25, 0.5}) w_out = std::min(w_out, l2_outside_estimate_check(v, k, r, R).margin);
    out.push_back(at_least("L2_outside_estimate_min_margin", w_out, 0.0));
  }
  {
    const auto gb = GridSpec::from_extent(std::max(c.h, 0.05), 50.0);
    const auto kb = build_kernel(gb, l);
    const double lp = l / 2;
    const auto b = barrier_check(lp, kb);
    out.push_back(at_most("barrier_sup_norm", b.sup_norm, 1e6));
    out.push_back(at_most("barrier_exponent_rel_error", std::abs(b.fitted_exponent - (lp - l)) / std::abs(lp - l), 0.15));
    out.push_back(at_most("barrier_evenness_defect", b.evenness_defect, 1e-10));
  }
  return out;
}

}  // namespace fracburgers
