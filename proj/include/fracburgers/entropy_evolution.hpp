#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "fractional_laplacian.hpp"
#include "grid.hpp"
#include "reference_quadrature.hpp"

namespace fracburgers {

struct EvolutionConfig {
  double epsilon = 0.0;
  double cfl_safety = 0.9;
  double t_end = 1.0;
  std::vector<double> record_times;
  bool fractal_enabled = true;
  std::uint64_t max_steps = 1'000'000'000;

  void validate() const {
    if (!(cfl_safety > 0.0 && cfl_safety <= 1.0)) throw ConfigError("cfl_safety must lie in (0, 1]");
    if (!(t_end > 0.0)) throw ConfigError("t_end must be positive");
    if (!(epsilon >= 0.0)) throw ConfigError("epsilon must be nonnegative");
    for (std::size_t i = 0; i < record_times.size(); ++i) {
      if (!(record_times[i] > 0.0 && record_times[i] <= t_end))
        throw ConfigError("record times must lie in (0, t_end]");
      if (i > 0 && !(record_times[i] > record_times[i - 1])) throw ConfigError("record times must increase");
    }
  }
};

struct EvolutionState {
  double t = 0.0;
  FullField u;
  double dt_last = 0.0;
  double max_abs_u0 = 0.0;
  FarField far;
  double boundary_outflow = 0.0;  // cumulative mass that left [-L, L]
  std::uint64_t steps = 0;

  explicit EvolutionState(FullField u0) : u(std::move(u0)) {
    for (double v : u.values()) max_abs_u0 = std::max(max_abs_u0, std::abs(v));
    far = FarField{u.values().front(), u.values().back()};
  }

  double mass() const {
    double s = 0.0;
    for (double v : u.values()) s += v;
    return s * u.grid().h();
  }
};

/// Kruzhkov entropy |u - k| with its flux for u^2/2, and the cut-off radius.
struct EntropyPair {
  double k = 0.0;
  double r_cut = 0.1;

  double eta(double u) const { return std::abs(u - k); }
  double deta(double u) const { return u > k ? 1.0 : (u < k ? -1.0 : 0.0); }
  double q(double u) const { return deta(u) * (u * u - k * k) / 2.0; }
};

/// Exact Riemann flux for u^2/2.
inline double godunov_flux(double ul, double ur) {
  if (ul > ur) return std::max(ul * ul, ur * ur) / 2.0;
  if (ul > 0.0) return ul * ul / 2.0;
  if (ur < 0.0) return ur * ur / 2.0;
  return 0.0;
}

/// Largest dt keeping the explicit update monotone, times cfl_safety.
inline double stable_dt(const EvolutionState& s, const EvolutionConfig& c, const FracLapKernel& k) {
  double umax = std::max(std::abs(s.far.left), std::abs(s.far.right));
  for (double v : s.u.values()) umax = std::max(umax, std::abs(v));
  const double h = s.u.grid().h();
  double rate = umax / h + 2.0 * c.epsilon / (h * h);
  if (c.fractal_enabled) rate += k.diagonal();
  if (!(rate > 0.0)) return c.cfl_safety * h;
  return c.cfl_safety / rate;
}

/// Explicit Euler / Godunov stepper. Holds the FFT plan of the kernel so
/// repeated steps on large grids stay O(N log N).
class Stepper {
 public:
  Stepper(const EvolutionConfig& cfg, const FracLapKernel& kernel) : cfg_(cfg), k_(kernel) {
    cfg_.validate();
    if (cfg_.fractal_enabled && 2 * k_.grid.N() >= 1024) plan_ = std::make_unique<ToeplitzPlan>(k_, 1);
  }

  const EvolutionConfig& config() const noexcept { return cfg_; }

  void step(EvolutionState& s, double dt) const {
    require_same_grid(k_.grid, s.u.grid(), "step");
    const auto& u = s.u.values();
    const std::size_t M = u.size();
    const double h = s.u.grid().h();
    const double gl = s.far.left, gr = s.far.right;

    std::vector<double> F(M + 1);
    F[0] = godunov_flux(gl, u[0]);
    for (std::size_t i = 1; i < M; ++i) F[i] = godunov_flux(u[i - 1], u[i]);
    F[M] = godunov_flux(u[M - 1], gr);

    std::vector<double> Lu;
    if (cfg_.fractal_enabled) Lu = plan_ ? apply(k_, *plan_, s.u, s.far).values() : apply(k_, s.u, s.far, 1, ApplyMethod::direct).values();

    std::vector<double> next(M);
    double nonlocal_mass = 0.0;
    const double eh2 = cfg_.epsilon / (h * h);
    for (std::size_t i = 0; i < M; ++i) {
      double rhs = (F[i + 1] - F[i]) / h;
      if (!Lu.empty()) {
        rhs += Lu[i];
        nonlocal_mass += Lu[i];
      }
      if (cfg_.epsilon > 0.0) {
        const double ul = i == 0 ? gl : u[i - 1];
        const double ur = i + 1 == M ? gr : u[i + 1];
        rhs -= eh2 * (ur - 2.0 * u[i] + ul);
      }
      next[i] = u[i] - dt * rhs;
      if (!std::isfinite(next[i]))
        throw NumericalError("non-finite value at t = " + format_double(s.t) + " in cell " + std::to_string(i), u);
    }
    double viscous_out = 0.0;
    if (cfg_.epsilon > 0.0) viscous_out = -cfg_.epsilon / h * ((gr - u[M - 1]) - (u[0] - gl));
    s.boundary_outflow += dt * ((F[M] - F[0]) + h * nonlocal_mass + viscous_out);
    s.u.values() = std::move(next);
    s.t += dt;
    s.dt_last = dt;
    ++s.steps;
  }

 private:
  EvolutionConfig cfg_;
  const FracLapKernel& k_;
  std::unique_ptr<ToeplitzPlan> plan_;
};

/// One stable step from s.
inline EvolutionState step(const EvolutionState& s, const EvolutionConfig& c, const FracLapKernel& k) {
  Stepper st(c, k);
  EvolutionState out = s;
  st.step(out, stable_dt(s, c, k));
  return out;
}

struct Trajectory {
  std::vector<EvolutionState> checkpoints;
  bool completed = true;
  std::string abort_reason;
  double initial_mass = 0.0;
  double mass_drift = 0.0;           // mass(t_end) - mass(0)
  double mass_balance_defect = 0.0;  // drift corrected by the boundary outflow
  double min_envelope = 0.0;
  double max_envelope = 0.0;
  std::uint64_t steps = 0;
};

/// Runs to t_end, recording the initial state and every record time exactly.
inline Trajectory evolve(const FullField& u0, const EvolutionConfig& c, const FracLapKernel& k) {
  c.validate();
  Stepper st(c, k);
  EvolutionState s(u0);
  Trajectory tr;
  tr.initial_mass = s.mass();
  tr.min_envelope = *std::min_element(u0.values().begin(), u0.values().end());
  tr.max_envelope = *std::max_element(u0.values().begin(), u0.values().end());
  tr.checkpoints.push_back(s);
  std::vector<double> targets = c.record_times;
  if (targets.empty() || targets.back() < c.t_end) targets.push_back(c.t_end);
  for (double target : targets) {
    while (s.t < target) {
      if (s.steps >= c.max_steps) {
        tr.completed = false;
        tr.abort_reason = "step budget exceeded at t = " + format_double(s.t);
        break;
      }
      double dt = stable_dt(s, c, k);
      const bool last = s.t + dt >= target;
      if (last) dt = target - s.t;
      st.step(s, dt);
      if (last) s.t = target;
      for (double v : s.u.values()) {
        tr.min_envelope = std::min(tr.min_envelope, v);
        tr.max_envelope = std::max(tr.max_envelope, v);
      }
    }
    if (!tr.completed) break;
    tr.checkpoints.push_back(s);
  }
  tr.steps = s.steps;
  tr.mass_drift = s.mass() - tr.initial_mass;
  tr.mass_balance_defect = tr.mass_drift + s.boundary_outflow;
  return tr;
}

struct OleinikReport {
  double t = 0.0;
  double max_slope = 0.0;
  double x_at_max = 0.0;
  double bound = 0.0;  // 1/t
  double slack = 0.0;  // C_ole h / t
  double window = 0.0;
  bool verdict = false;
};

/// Largest difference quotient (u[i+m] - u[i]) / (m h) against 1/t + C_ole h/t,
/// with m = round(window / h) >= 1. window <= h gives forward differences.
inline OleinikReport oleinik_max_slope(const FullField& u, double t, double C_ole, double window = 0.0) {
  if (!(t > 0.0)) throw DomainError("Oleinik check needs t > 0");
  const double h = u.grid().h();
  const std::size_t m = static_cast<std::size_t>(std::max(1.0, std::round(window / h)));
  if (m >= u.size()) throw DomainError("Oleinik window wider than the grid");
  OleinikReport r;
  r.t = t;
  r.window = static_cast<double>(m) * h;
  r.max_slope = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + m < u.size(); ++i) {
    const double s = (u[i + m] - u[i]) / r.window;
    if (s > r.max_slope) {
      r.max_slope = s;
      r.x_at_max = u.grid().x_full(i) + r.window / 2;
    }
  }
  r.bound = 1.0 / t;
  r.slack = C_ole * h / t;
  r.verdict = r.max_slope <= r.bound + r.slack;
  return r;
}

/// phi(t, x) = chi(t) psi(x) with chi(t) = (1 + cos(pi t / T)) / 2 on [0, T], zero after.
struct SpaceTimeTest {
  AnalyticFunction psi;
  double T = 0.5;

  double chi(double t) const {
    constexpr double pi = 3.14159265358979323846;
    return t >= T ? 0.0 : 0.5 * (1.0 + std::cos(pi * t / T));
  }
  double dchi(double t) const {
    constexpr double pi = 3.14159265358979323846;
    return t >= T ? 0.0 : -0.5 * pi / T * std::sin(pi * t / T);
  }
};

struct AuditRow {
  double k = 0.0;
  double r = 0.0;
  double residual = 0.0;
};

struct AuditReport {
  std::vector<AuditRow> rows;
  double worst = std::numeric_limits<double>::infinity();
};

/// Snaps r to the nearest (m + 1/2) h with m >= 1, so the outer lag set is exact.
inline std::size_t audit_inner_lags(double r, double h) {
  const double m = std::round(r / h - 0.5);
  return static_cast<std::size_t>(std::max(1.0, m));
}

/// Left side of the entropy inequality for each (k, r): initial term, transport
/// term, outer nonlocal term through the production kernel restricted to |z| > r,
/// inner term through the reference operator on psi. Time integrals use the
/// trapezoid rule over the checkpoints, which must run from t = 0 to at least T.
inline AuditReport entropy_inequality_audit(const std::vector<EvolutionState>& traj,
                                            const std::vector<EntropyPair>& pairs, const SpaceTimeTest& test,
                                            const FracLapKernel& k) {
  if (traj.empty() || traj.front().t != 0.0) throw ContractViolation("audit trajectory must start at t = 0");
  if (traj.back().t < test.T) throw DomainError("audit trajectory ends before the test function's time support");
  const GridSpec& g = k.grid;
  const double h = g.h();
  const std::size_t M = 2 * g.N();
  std::vector<double> psi(M), dpsi(M);
  for (std::size_t i = 0; i < M; ++i) {
    psi[i] = test.psi.f(g.x_full(i));
    dpsi[i] = test.psi.df(g.x_full(i));
  }
  std::vector<double> wts(traj.size(), 0.0);
  for (std::size_t n = 0; n + 1 < traj.size(); ++n) {
    const double dt = traj[n + 1].t - traj[n].t;
    wts[n] += dt / 2;
    wts[n + 1] += dt / 2;
  }
  AuditReport rep;
  for (const auto& p : pairs) {
    const std::size_t m = audit_inner_lags(p.r_cut, h);
    const double r = (static_cast<double>(m) + 0.5) * h;
    std::vector<double> inner_psi(M);
    for (std::size_t i = 0; i < M; ++i) {
      const double x = g.x_full(i);
      inner_psi[i] = std::abs(x) > test.psi.support_radius + r ? 0.0 : reference_apply(test.psi, x, k.lambda, r);
    }
    double total = 0.0;
    {
      const auto& u0 = traj.front().u;
      double s = 0.0;
      for (std::size_t i = 0; i < M; ++i) s += p.eta(u0[i]) * psi[i];
      total += h * s * test.chi(0.0);
    }
    for (std::size_t n = 0; n < traj.size(); ++n) {
      if (wts[n] == 0.0) continue;
      const auto& st = traj[n];
      const double chi = test.chi(st.t), dchi = test.dchi(st.t);
      if (chi == 0.0 && dchi == 0.0) continue;
      const auto outer = apply(k, st.u, st.far, m + 1).values();
      double s = 0.0;
      for (std::size_t i = 0; i < M; ++i) {
        const double ui = st.u[i];
        s += p.eta(ui) * psi[i] * dchi + p.q(ui) * dpsi[i] * chi;
        s += chi * psi[i] * (-p.deta(ui) * outer[i]);
        s += chi * p.eta(ui) * (-inner_psi[i]);
      }
      total += wts[n] * h * s;
    }
    rep.rows.push_back({p.k, r, total});
    rep.worst = std::min(rep.worst, total);
  }
  return rep;
}

inline CsvTable audit_to_csv(const AuditReport& a) {
  CsvTable t;
  t.add_meta("worst", a.worst);
  t.header = {"k", "r", "residual"};
  for (const auto& r : a.rows) t.rows.push_back({r.k, r.r, r.residual});
  return t;
}

}  // namespace fracburgers
