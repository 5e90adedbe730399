#pragma once

// End-to-end runs built from a RunConfig. The command-line tool and the
// acceptance binary only call these and write what they return.

#include <optional>
#include <string>
#include <vector>

#include "batteries.hpp"
#include "config.hpp"
#include "diagnostics.hpp"

namespace fracburgers {

inline GridSpec config_grid(const RunConfig& c) { return GridSpec::from_extent(c.grid_h, c.grid_L); }

inline StationaryConfig stationary_config(const RunConfig& c) {
  StationaryConfig s;
  s.epsilon = c.eps_list.front();
  s.n = c.fixed_n();
  s.lambda = c.lambda;
  s.damping = c.damping;
  s.tol_fp = c.tol_fp;
  s.max_iter = static_cast<std::size_t>(c.max_iter);
  s.linear_solver_tol = c.linear_solver_tol;
  return s;
}

inline EvolutionConfig evolution_config(const RunConfig& c) {
  EvolutionConfig e;
  e.epsilon = c.evolution_epsilon;
  e.cfl_safety = c.cfl_safety;
  e.t_end = c.t_end;
  e.record_times = c.record_times();
  e.fractal_enabled = c.fractal_enabled;
  return e;
}

// ---------------------------------------------------------------------------

struct MemberDiagnostics {
  double epsilon = 0.0;
  std::vector<NamedValue> weak;  // regularized weak residual per test function
  double weak_worst_rel = 0.0;   // max |residual| / ||v||
  std::vector<TranslationRow> translation;
  bool translation_holds = false;
  GammaReport gamma;
};

struct StationaryRun {
  GridSpec grid{1.0, 4};
  SweepResult sweep;
  std::vector<MemberDiagnostics> diagnostics;
  double monitor_max = 0.0;
  bool all_ok = false;  // converged, bounds, energy bound, translation
};

inline MemberDiagnostics member_diagnostics(const StationarySolution& s, const FracLapKernel& k,
                                            const std::vector<ReferenceOperatorTable>& tables) {
  MemberDiagnostics d;
  d.epsilon = s.epsilon;
  const double vn = std::sqrt(s.energy.norm2);
  for (const auto& t : tables) {
    const double r = stationary_weak_residual(s.v, s.epsilon, t);
    d.weak.push_back({t.phi.name, r});
    d.weak_worst_rel = std::max(d.weak_worst_rel, std::abs(r) / vn);
  }
  d.translation = translation_continuity_check(s.v, k);
  d.translation_holds = true;
  for (const auto& r : d.translation) d.translation_holds = d.translation_holds && r.holds;
  d.gamma = gamma_v2(s.v);
  return d;
}

inline std::vector<ReferenceOperatorTable> stationary_tables(const GridSpec& g, double lambda) {
  std::vector<ReferenceOperatorTable> out;
  for (auto& phi : stationary_battery()) out.emplace_back(phi, g, lambda);
  return out;
}

inline StationaryRun run_stationary(const RunConfig& c, bool parallel = false) {
  c.validate();
  StationaryRun r;
  r.grid = config_grid(c);
  const auto k = build_kernel(r.grid, c.lambda);
  r.sweep = epsilon_sweep(c.eps_list, stationary_config(c), k, c.warm_start, parallel && !c.warm_start);
  const auto tables = stationary_tables(r.grid, c.lambda);
  r.all_ok = !r.sweep.aborted;
  for (const auto& m : r.sweep.members) {
    r.diagnostics.push_back(member_diagnostics(m, k, tables));
    r.monitor_max = std::max(r.monitor_max, m.energy.monitor);
    r.all_ok = r.all_ok && m.converged && m.bounds_ok && m.energy_bound_ok && r.diagnostics.back().translation_holds;
  }
  return r;
}

inline CsvTable sweep_manifest(const StationaryRun& r) {
  CsvTable t;
  t.add_meta("aborted", r.sweep.aborted ? "true" : "false");
  if (r.sweep.aborted) t.add_meta("aborted_at", r.sweep.aborted_at);
  t.add_meta("monitor_max", r.monitor_max);
  t.header = {"epsilon", "n", "iterations", "converged", "residual_fp", "final_damping", "norm2",
              "monitor", "energy_bound", "bounds_ok", "energy_bound_ok", "v_first_cell", "weak_worst_rel",
              "translation_holds", "gamma_v2"};
  for (std::size_t i = 0; i < r.sweep.members.size(); ++i) {
    const auto& m = r.sweep.members[i];
    const auto& d = r.diagnostics[i];
    t.rows.push_back({m.epsilon, static_cast<double>(m.n), static_cast<double>(m.iterations), m.converged ? 1.0 : 0.0,
                      m.residual_fp, m.final_damping, m.energy.norm2, m.energy.monitor, m.energy.energy_bound,
                      m.bounds_ok ? 1.0 : 0.0, m.energy_bound_ok ? 1.0 : 0.0, m.v[0], d.weak_worst_rel,
                      d.translation_holds ? 1.0 : 0.0, d.gamma.extrapolant});
  }
  return t;
}

// ---------------------------------------------------------------------------

inline std::vector<EntropyPair> standard_audit_pairs() {
  return {{-0.5, 0.05}, {0.0, 0.05}, {0.5, 0.05}, {-0.5, 0.2}, {0.0, 0.2}, {0.5, 0.2}};
}

inline SpaceTimeTest standard_audit_test() {
  return {{"bump_1", [](double x) { return testfn::bump(x, 1.0); }, [](double x) { return testfn::dbump(x, 1.0); }, 1.0,
           false, 0.0},
          0.5};
}

/// The stationary profile v, held fixed at the given times (t = 0 first).
inline std::vector<EvolutionState> frozen_trajectory(const OddField& v, const std::vector<double>& times) {
  std::vector<EvolutionState> out;
  EvolutionState s0(v.to_full());
  out.push_back(s0);
  for (double t : times) {
    EvolutionState s(v.to_full());
    s.t = t;
    out.push_back(s);
  }
  return out;
}

/// Initial profile named by evolution.initial_data, on the config grid.
/// "stationary" takes v from demo.stationary_input, or solves inline when allowed.
inline OddField initial_profile(const RunConfig& c, bool parallel = false) {
  const auto g = config_grid(c);
  if (c.initial_data == "sign") return OddField::sample(g, [](double) { return 1.0; }, 1.0);
  if (c.initial_data == "minus_sign") return OddField::sample(g, [](double) { return -1.0; }, -1.0);
  if (!c.stationary_input.empty()) {
    auto v = odd_field_from_csv(read_csv(c.stationary_input));
    if (!(v.grid() == g)) throw ConfigError("stationary input grid does not match grid.h / grid.L");
    return v;
  }
  if (!c.inline_solve) throw ConfigError("no stationary input given and demo.inline_solve is false");
  auto r = run_stationary(c, parallel);
  if (r.sweep.aborted || r.sweep.members.empty())
    throw NumericalError("stationary sweep did not converge", {});
  return r.sweep.final_member().v;
}

struct EvolveRun {
  Trajectory trajectory;
  std::vector<OleinikReport> oleinik;
  bool oleinik_ok = true;
};

inline EvolveRun run_evolve(const RunConfig& c, const FullField& u0) {
  EvolveRun r;
  const auto k = build_kernel(u0.grid(), c.lambda);
  r.trajectory = evolve(u0, evolution_config(c), k);
  for (const auto& s : r.trajectory.checkpoints) {
    if (s.t < thresholds::kOleinikTMin - 1e-12) continue;
    r.oleinik.push_back(oleinik_max_slope(s.u, s.t, thresholds::kCOle, thresholds::kOleinikWindow));
    r.oleinik_ok = r.oleinik_ok && r.oleinik.back().verdict;
  }
  r.oleinik_ok = r.oleinik_ok && r.trajectory.completed;
  return r;
}

inline CsvTable oleinik_to_csv(const std::vector<OleinikReport>& v) {
  CsvTable t;
  if (!v.empty()) t.add_meta("window", v.front().window);
  t.add_meta("C_ole", thresholds::kCOle);
  t.header = {"t", "max_slope", "x_at_max", "bound", "slack", "pass"};
  for (const auto& o : v) t.rows.push_back({o.t, o.max_slope, o.x_at_max, o.bound, o.slack, o.verdict ? 1.0 : 0.0});
  return t;
}

struct DemoRun {
  OddField v;
  Trajectory trajectory;
  AuditReport audit_frozen;
  AuditReport audit_evolved;
  AdmissibilityReport report;
};

inline DemoRun run_nonuniq_demo(const RunConfig& c, const OddField& v) {
  const auto k = build_kernel(v.grid(), c.lambda);
  DemoRun d{v, {}, {}, {}, {}};
  d.trajectory = evolve(v.to_full(), evolution_config(c), k);
  const auto pairs = standard_audit_pairs();
  const auto test = standard_audit_test();
  std::vector<double> times;
  for (const auto& s : d.trajectory.checkpoints)
    if (s.t > 0) times.push_back(s.t);
  d.audit_frozen = entropy_inequality_audit(frozen_trajectory(v, times), pairs, test, k);
  d.audit_evolved = entropy_inequality_audit(d.trajectory.checkpoints, pairs, test, k);
  d.report = nonuniqueness_certificate(v, d.trajectory, k, standard_test_functions(), {}, &d.audit_frozen,
                                       &d.audit_evolved, c.fractal_enabled);
  return d;
}

}  // namespace fracburgers
