// Command-line front end: operator-check, stationary, evolve, nonuniq-demo.
// Exit status: 0 pass, 2 property failure, 3 configuration error, 4 numerical fatal.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "fracburgers/pipelines.hpp"

namespace fb = fracburgers;
namespace fs = std::filesystem;

namespace {

enum Exit { kPass = 0, kPropertyFailure = 2, kConfigError = 3, kNumericalFatal = 4 };

struct Options {
  std::string config;
  std::string out;
  bool parallel = false;
};

fb::RunConfig load(const Options& o) {
  fb::RunConfig c = o.config.empty() ? fb::RunConfig{} : fb::parse_config(o.config, true);
  if (!o.out.empty()) c.output_dir = o.out;
  c.validate();
  return c;
}

fs::path prepare_out(const fb::RunConfig& c) {
  fs::path dir(c.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw fb::ConfigError("cannot create output directory " + c.output_dir + ": " + ec.message());
  std::ofstream(dir / "config.txt", std::ios::binary) << fb::serialize_config(c);
  return dir;
}

void write(const fs::path& p, const fb::CsvTable& t) { fb::write_csv(p.string(), t); }

void write_summary(const fs::path& dir, const std::string& text) {
  std::ofstream(dir / "summary.txt", std::ios::binary) << text;
  std::cout << text;
}

std::string num(double x) { return fb::format_double(x); }

std::string checkpoint_name(double t) { return "u_t" + num(t) + ".csv"; }

int cmd_operator_check(const Options& o) {
  const auto c = load(o);
  const auto dir = prepare_out(c);
  fb::OperatorBatteryConfig bc;
  bc.lambda = c.lambda;
  const auto props = fb::operator_battery(bc);
  write(dir / "operator_check.csv", fb::properties_to_csv(props));
  write(dir / "kernel.csv", fb::kernel_to_csv(fb::build_kernel(fb::config_grid(c), c.lambda)));
  std::ostringstream s;
  s << "command: operator-check\nexperiment: " << c.experiment << "\nlambda: " << num(c.lambda) << '\n';
  for (const auto& p : props)
    s << (p.pass ? "PASS " : "FAIL ") << p.name << " value=" << num(p.value) << " tolerance=" << num(p.tolerance)
      << '\n';
  const bool ok = fb::all_pass(props);
  s << "result: " << (ok ? "pass" : "fail") << '\n';
  write_summary(dir, s.str());
  return ok ? kPass : kPropertyFailure;
}

int cmd_stationary(const Options& o) {
  const auto c = load(o);
  const auto dir = prepare_out(c);
  const auto r = fb::run_stationary(c, o.parallel);
  write(dir / "manifest.csv", fb::sweep_manifest(r));
  fb::CsvTable weak, trans;
  weak.header = {"epsilon", "function_index", "residual"};
  trans.header = {"epsilon", "shift", "lhs", "rhs", "holds"};
  for (std::size_t i = 0; i < r.sweep.members.size(); ++i) {
    const auto& m = r.sweep.members[i];
    write(dir / ("v_eps" + num(m.epsilon) + ".csv"), fb::solution_to_csv(m));
    const auto& d = r.diagnostics[i];
    for (std::size_t j = 0; j < d.weak.size(); ++j) {
      if (i == 0) weak.add_meta("f" + std::to_string(j), d.weak[j].name);
      weak.rows.push_back({d.epsilon, static_cast<double>(j), d.weak[j].value});
    }
    for (const auto& t : d.translation) trans.rows.push_back({d.epsilon, t.s, t.lhs, t.rhs, t.holds ? 1.0 : 0.0});
  }
  write(dir / "weak_residuals.csv", weak);
  write(dir / "translation.csv", trans);
  if (!r.sweep.members.empty()) write(dir / "v.csv", fb::solution_to_csv(r.sweep.final_member()));
  std::ostringstream s;
  s << "command: stationary\nexperiment: " << c.experiment << "\nlambda: " << num(c.lambda)
    << "\ngrid: h=" << num(c.grid_h) << " L=" << num(c.grid_L) << '\n';
  for (std::size_t i = 0; i < r.sweep.members.size(); ++i) {
    const auto& m = r.sweep.members[i];
    s << "eps=" << num(m.epsilon) << " n=" << m.n << " iterations=" << m.iterations
      << " converged=" << (m.converged ? "yes" : "no") << " residual_fp=" << num(m.residual_fp)
      << " bounds=" << (m.bounds_ok ? "ok" : "violated") << " energy_bound=" << (m.energy_bound_ok ? "ok" : "violated")
      << " monitor=" << num(m.energy.monitor) << " weak_rel=" << num(r.diagnostics[i].weak_worst_rel)
      << " gamma_v2=" << num(r.diagnostics[i].gamma.extrapolant) << '\n';
  }
  if (r.sweep.aborted) s << "sweep aborted at eps=" << num(r.sweep.aborted_at) << '\n';
  s << "monitor_max: " << num(r.monitor_max) << "\nresult: " << (r.all_ok ? "pass" : "fail") << '\n';
  write_summary(dir, s.str());
  return r.all_ok ? kPass : kPropertyFailure;
}

int cmd_evolve(const Options& o) {
  const auto c = load(o);
  const auto dir = prepare_out(c);
  const auto v = fb::initial_profile(c, o.parallel);
  const auto r = fb::run_evolve(c, v.to_full());
  for (const auto& st : r.trajectory.checkpoints) write(dir / checkpoint_name(st.t), fb::to_csv(st.u, "u"));
  write(dir / "oleinik.csv", fb::oleinik_to_csv(r.oleinik));
  const auto& tr = r.trajectory;
  std::ostringstream s;
  s << "command: evolve\nexperiment: " << c.experiment << "\ninitial_data: " << c.initial_data
    << "\nfractal_enabled: " << (c.fractal_enabled ? "true" : "false") << "\nsteps: " << tr.steps
    << "\ncompleted: " << (tr.completed ? "yes" : "no") << '\n';
  if (!tr.completed) s << "abort_reason: " << tr.abort_reason << '\n';
  s << "mass_drift: " << num(tr.mass_drift) << "\nmass_balance_defect: " << num(tr.mass_balance_defect)
    << "\nmin_envelope: " << num(tr.min_envelope) << "\nmax_envelope: " << num(tr.max_envelope) << '\n';
  for (const auto& ol : r.oleinik)
    s << "oleinik t=" << num(ol.t) << " max_slope=" << num(ol.max_slope) << " bound=" << num(ol.bound + ol.slack)
      << (ol.verdict ? " pass" : " FAIL") << '\n';
  s << "result: " << (r.oleinik_ok ? "pass" : "fail") << '\n';
  write_summary(dir, s.str());
  return r.oleinik_ok ? kPass : kPropertyFailure;
}

int cmd_nonuniq_demo(const Options& o) {
  const auto c = load(o);
  const auto dir = prepare_out(c);
  const auto v = fb::initial_profile(c, o.parallel);
  const auto d = fb::run_nonuniq_demo(c, v);
  write(dir / "v.csv", fb::to_csv(v));
  for (const auto& st : d.trajectory.checkpoints) write(dir / checkpoint_name(st.t), fb::to_csv(st.u, "u"));
  write(dir / "report.csv", fb::report_to_csv(d.report));
  write(dir / "audit_frozen.csv", fb::audit_to_csv(d.audit_frozen));
  write(dir / "audit_evolved.csv", fb::audit_to_csv(d.audit_evolved));
  write(dir / "oleinik.csv", fb::oleinik_to_csv(d.report.oleinik_run));
  const auto& rep = d.report;
  std::ostringstream s;
  s << "command: nonuniq-demo\nexperiment: " << c.experiment << "\nlambda: " << num(c.lambda)
    << "\ninitial_data: " << c.initial_data << "\nfractal_enabled: " << (c.fractal_enabled ? "true" : "false") << '\n'
    << "gamma_v2: " << num(rep.gamma.extrapolant) << (rep.gamma.low_confidence ? " (low confidence)" : "") << '\n';
  for (const auto& w : rep.weak_jump) s << "weak_residual " << w.name << ": " << num(w.value) << '\n';
  for (const auto& w : rep.weak_free) s << "weak_residual " << w.name << ": " << num(w.value) << '\n';
  s << "oleinik_violation_by_v: " << (rep.oleinik_v.verdict ? "yes" : "no") << " (trace "
    << num(rep.oleinik_v.trace_plus) << ")\n";
  double worst_slack = std::numeric_limits<double>::infinity();
  for (const auto& ol : rep.oleinik_run) worst_slack = std::min(worst_slack, ol.bound + ol.slack - ol.max_slope);
  s << "oleinik_run_min_headroom: " << num(worst_slack) << '\n'
    << "separation_l1: " << num(rep.separation) << '\n'
    << "audit_frozen_worst: " << num(d.audit_frozen.worst) << '\n'
    << "audit_evolved_worst: " << num(d.audit_evolved.worst) << '\n'
    << "(a) " << (rep.pass_a ? "pass" : "fail") << "\n(b) " << (rep.pass_b ? "pass" : "fail") << "\n(c) "
    << (rep.pass_c ? "pass" : "fail") << "\n(d) " << (rep.pass_d ? "pass" : "fail") << '\n';
  for (const auto& f : rep.failing) s << "withheld: " << f << '\n';
  s << "certificate: " << (rep.nonuniqueness_verdict ? "pass" : "withheld") << '\n';
  write_summary(dir, s.str());
  return rep.nonuniqueness_verdict ? kPass : kPropertyFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fractal Burgers non-uniqueness laboratory"};
  app.require_subcommand(1);
  Options opt;
  auto add = [&](const char* name, const char* help) {
    auto* sc = app.add_subcommand(name, help);
    sc->add_option("--config", opt.config, "configuration file (key = value)");
    sc->add_option("--out", opt.out, "output directory (overrides output.dir)");
    sc->add_flag("--parallel", opt.parallel, "solve sweep members concurrently (cold starts only)");
    return sc;
  };
  auto* op = add("operator-check", "operator and estimate property battery");
  auto* st = add("stationary", "epsilon sweep for the odd stationary solution");
  auto* ev = add("evolve", "entropy solution from the configured initial data");
  auto* de = add("nonuniq-demo", "non-uniqueness certificate");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kPass : kConfigError;
  }
  try {
    if (op->parsed()) return cmd_operator_check(opt);
    if (st->parsed()) return cmd_stationary(opt);
    if (ev->parsed()) return cmd_evolve(opt);
    if (de->parsed()) return cmd_nonuniq_demo(opt);
  } catch (const fb::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kConfigError;
  } catch (const fb::DomainError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kConfigError;
  } catch (const fb::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumericalFatal;
  } catch (const std::exception& e) {
    std::cerr << "fatal: " << e.what() << '\n';
    return kNumericalFatal;
  }
  return kConfigError;
}
