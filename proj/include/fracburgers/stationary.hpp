#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <future>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "entropy_evolution.hpp"
#include "errors.hpp"
#include "fractional_laplacian.hpp"
#include "grid.hpp"

namespace fracburgers {

struct StationaryConfig {
  double epsilon = 0.1;
  int n = 2;
  double lambda = 0.5;
  double damping = 0.5;
  double tol_fp = 1e-10;
  std::size_t max_iter = 20000;
  double linear_solver_tol = 1e-10;

  double C_n_eps() const { return static_cast<double>(n) * n / epsilon; }

  void validate() const {
    if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
    if (n < 2) throw ConfigError("truncation index n must be at least 2");
    if (!(lambda > 0.0 && lambda < 1.0)) throw ConfigError("lambda must lie in (0, 1)");
    if (!(damping > 0.0 && damping <= 1.0)) throw ConfigError("damping must lie in (0, 1]");
    if (!(tol_fp > 0.0) || !(linear_solver_tol > 0.0)) throw ConfigError("tolerances must be positive");
    if (max_iter == 0) throw ConfigError("max_iter must be positive");
  }

  /// Smallest n >= 2 with n^2/epsilon >= 2L, so rho_n == 1 on [-L, L].
  static int auto_n(double epsilon, double L) {
    int n = std::max(2, static_cast<int>(std::ceil(std::sqrt(2.0 * L * epsilon))));
    while (static_cast<double>(n) * n / epsilon < 2.0 * L) ++n;
    return n;
  }
};

/// Value clamp T_n and spatial cutoff rho_n(x) = rho(x / C(n, eps)).
///
/// T_n is the identity on [-(n-1), n-1] and continues as n - 1 + tanh(|u| - n + 1),
/// which is C^2 at the junction and stays below n. rho is 1 on [-1/2, 1/2] and
/// drops to 0 at |x| = 3 through a C-infinity step of slope at most 0.8.
struct TruncationProfiles {
  int n = 2;
  double C = 1.0;

  static constexpr double kFlat = 0.5;
  static constexpr double kWidth = 2.5;

  TruncationProfiles(int n_, double C_) : n(n_), C(C_) {}
  explicit TruncationProfiles(const StationaryConfig& c) : n(c.n), C(c.C_n_eps()) {}

  double T(double u) const {
    const double m = n - 1.0;
    const double a = std::abs(u);
    if (a <= m) return u;
    return std::copysign(m + std::tanh(a - m), u);
  }

  static double step(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / t), b = std::exp(-1.0 / (1.0 - t));
    return a / (a + b);
  }
  static double dstep(double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    const double a = std::exp(-1.0 / t), b = std::exp(-1.0 / (1.0 - t));
    const double da = a / (t * t), db = -b / ((1.0 - t) * (1.0 - t));
    return (da * (a + b) - a * (da + db)) / ((a + b) * (a + b));
  }

  static double rho(double x) { return 1.0 - step((std::abs(x) - kFlat) / kWidth); }
  static double drho(double x) { return -std::copysign(dstep((std::abs(x) - kFlat) / kWidth) / kWidth, x); }

  double rho_n(double x) const { return rho(x / C); }
};

namespace detail {

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace detail

/// Odd-subspace matrix of the discrete L_lambda on the half-line unknowns:
/// M_ik = -w_|i-k| + w_(i+k+1), M_ii = diag + w_(2i+1). The second lag is the
/// mirror image of cell k across 0.
inline Eigen::MatrixXd odd_operator_matrix(const FracLapKernel& k) {
  const std::size_t N = k.grid.N();
  Eigen::MatrixXd M(N, N);
  const double D = k.diagonal();
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) {
      const double image = k.weights[i + j];  // lag i + j + 1
      M(i, j) = i == j ? D + image : -k.weights[(i > j ? i - j : j - i) - 1] + image;
    }
  return M;
}

struct InnerProductParts {
  double l2 = 0.0;        // 2 eps h sum u w
  double gradient = 0.0;  // eps times broken-gradient pairing on R \ {0}
  double nonlocal = 0.0;  // a(u, w)
  double total() const { return l2 + gradient + nonlocal; }
};

/// eps (u w + u' w') + a(u, w) over the full line for odd fields. The
/// gradient uses the half cell from the trace, interior differences, and the
/// zero ghost beyond L.
inline InnerProductParts inner_product_parts(const OddField& u, const OddField& w, double epsilon,
                                             const FracLapKernel& k) {
  require_same_grid(u.grid(), w.grid(), "inner product");
  require_same_grid(u.grid(), k.grid, "inner product");
  const double h = u.grid().h();
  const std::size_t N = u.size();
  InnerProductParts p;
  p.l2 = 2.0 * epsilon * h * detail::dot(u.values(), w.values());
  double g = 2.0 / h * ((u[0] - u.trace_plus()) * (w[0] - w.trace_plus()));
  for (std::size_t i = 0; i + 1 < N; ++i) g += ((u[i + 1] - u[i]) * (w[i + 1] - w[i])) / h;
  g += (u[N - 1] * w[N - 1]) / h;
  p.gradient = 2.0 * epsilon * g;
  p.nonlocal = bilinear(k, u, w);
  return p;
}

inline double discrete_inner_product(const OddField& u, const OddField& w, double epsilon, const FracLapKernel& k) {
  return inner_product_parts(u, w, epsilon, k).total();
}

/// A = eps (I + T / h^2) + M on the half-line unknowns; T is the Dirichlet
/// second difference with ghost 2 t - v_0 at 0 and 0 beyond L. The trace
/// enters only through the load (2 eps / h^2) t e_0.
class StationaryOperator {
 public:
  StationaryOperator(double epsilon, const FracLapKernel& k) : eps_(epsilon), k_(k) {
    if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
    const double h = k.grid.h();
    const std::size_t N = k.grid.N();
    A_ = odd_operator_matrix(k);
    const double c = epsilon / (h * h);
    for (std::size_t i = 0; i < N; ++i) {
      A_(i, i) += epsilon + (i == 0 ? 3.0 : 2.0) * c;
      if (i + 1 < N) {
        A_(i, i + 1) -= c;
        A_(i + 1, i) -= c;
      }
    }
    llt_.compute(A_);
    if (llt_.info() != Eigen::Success)
      throw NumericalError("Cholesky factorization failed (operator not positive definite)");
  }

  const Eigen::MatrixXd& matrix() const noexcept { return A_; }
  double epsilon() const noexcept { return eps_; }
  const FracLapKernel& kernel() const noexcept { return k_; }

  /// Load from the trace constraint.
  double trace_load(double trace) const {
    const double h = k_.grid.h();
    return 2.0 * eps_ / (h * h) * trace;
  }

  Eigen::VectorXd solve(const Eigen::VectorXd& b, double tol) const {
    Eigen::VectorXd x = llt_.solve(b);
    const double bn = b.norm();
    const double res = (A_ * x - b).norm();
    if (!std::isfinite(res) || res > tol * std::max(bn, 1e-300)) {
      const double lmin = A_.diagonal().minCoeff();
      throw NumericalError("linear solve residual " + format_double(res / std::max(bn, 1e-300)) +
                           " above tolerance; min diagonal " + format_double(lmin) + ", N = " +
                           std::to_string(A_.rows()));
    }
    return x;
  }

  Eigen::VectorXd solve_unchecked(const Eigen::VectorXd& b) const { return llt_.solve(b); }

 private:
  double eps_;
  const FracLapKernel& k_;
  Eigen::MatrixXd A_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
};

inline StationaryOperator assemble_operator(double epsilon, const FracLapKernel& k, const GridSpec& grid) {
  require_same_grid(k.grid, grid, "assemble_operator");
  return StationaryOperator(epsilon, k);
}

/// Convective load r_i = -rho_n(x_i) (F_{i+1/2} - F_{i-1/2}) / h with Godunov
/// fluxes of g = rho_n T_n(v_bar). The state left of the first cell is the
/// trace; the state beyond L is 0.
inline std::vector<double> rhs_from(const OddField& v_bar, const TruncationProfiles& p) {
  const GridSpec& g = v_bar.grid();
  const std::size_t N = g.N();
  const double h = g.h();
  std::vector<double> gv(N), rho(N);
  for (std::size_t i = 0; i < N; ++i) {
    rho[i] = p.rho_n(g.x(i));
    gv[i] = rho[i] * p.T(v_bar[i]);
  }
  const double g0 = p.rho_n(0.0) * p.T(v_bar.trace_plus());
  std::vector<double> r(N);
  double left = godunov_flux(g0, gv[0]);
  for (std::size_t i = 0; i < N; ++i) {
    const double right = godunov_flux(gv[i], i + 1 < N ? gv[i + 1] : 0.0);
    r[i] = -rho[i] * (right - left) / h;
    left = right;
  }
  return r;
}

namespace detail {

inline Eigen::VectorXd to_eigen(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}
inline std::vector<double> to_std(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

}  // namespace detail

/// Minimizer of J_{v_bar, n} over fields with trace 1.
inline OddField F_n(const OddField& v_bar, const StationaryConfig& c, const StationaryOperator& A) {
  TruncationProfiles p(c);
  auto r = rhs_from(v_bar, p);
  Eigen::VectorXd b = detail::to_eigen(r);
  b(0) += A.trace_load(1.0);
  return OddField(v_bar.grid(), detail::to_std(A.solve(b, c.linear_solver_tol)), 1.0);
}

/// J(u) = ||u||^2 / 2 - 2h sum_i r_i(v_bar) u_i, the quadratic whose minimizer is F_n(v_bar).
inline double energy_J(const OddField& u, const OddField& v_bar, const StationaryConfig& c, const FracLapKernel& k) {
  TruncationProfiles p(c);
  const double nrm2 = discrete_inner_product(u, u, c.epsilon, k);
  const auto r = rhs_from(v_bar, p);
  return 0.5 * nrm2 - 2.0 * u.grid().h() * detail::dot(r, u.values());
}

struct EnergyRecord {
  double norm2 = 0.0;          // ||v||^2
  double monitor = 0.0;        // eps ||v'||^2 + a(v, v)
  double energy_J = 0.0;       // J_{v, n}(v)
  double theta_norm2 = 0.0;    // ||theta||^2
  double energy_bound = 0.0;   // ||theta||^2 + 4/3 + 2 eps / n^2
};

struct StationarySolution {
  OddField v;
  double epsilon = 0.0;
  int n = 2;
  std::size_t iterations = 0;
  bool converged = false;
  double residual_fp = 0.0;
  double final_damping = 0.0;
  std::vector<double> damping_changes;  // iteration numbers where damping was halved
  std::vector<double> residual_history;
  std::vector<double> contraction_history;  // ||F(v_k) - F(v_{k-1})|| / ||v_k - v_{k-1}||
  std::vector<double> energy_history;       // J_{v_k}(F(v_k))
  EnergyRecord energy;
  bool bounds_ok = false;       // 0 <= v <= 1 on (0, L]
  bool truncation_inactive = false;
  bool energy_bound_ok = false;
  double min_v = 0.0;
  double max_v = 0.0;

  explicit StationarySolution(OddField v_) : v(std::move(v_)) {}
};

inline EnergyRecord energy_record(const OddField& v, const StationaryConfig& c, const FracLapKernel& k) {
  EnergyRecord e;
  const auto parts = inner_product_parts(v, v, c.epsilon, k);
  e.norm2 = parts.total();
  e.monitor = parts.gradient + parts.nonlocal;
  e.energy_J = energy_J(v, v, c, k);
  const auto th = OddField::theta(v.grid());
  e.theta_norm2 = discrete_inner_product(th, th, c.epsilon, k);
  e.energy_bound = e.theta_norm2 + 4.0 / 3.0 + 2.0 * c.epsilon / (static_cast<double>(c.n) * c.n);
  return e;
}

/// Damped Picard iteration v <- v + d (F_n(v) - v). When the residual exceeds
/// twice the best one seen, the damping is halved and the iteration restarts
/// from the best iterate. A window of 100 iterations that fails to halve the
/// residual also halves the damping (down to 1/64), since the iteration matrix
/// has nearly imaginary eigenvalues for small epsilon.
inline StationarySolution solve_fixed_point(const StationaryConfig& c, const FracLapKernel& k,
                                            const StationaryOperator& A,
                                            const std::optional<OddField>& warm_start = std::nullopt) {
  c.validate();
  if (std::abs(A.epsilon() - c.epsilon) > 0.0) throw ContractViolation("operator built for a different epsilon");
  const GridSpec& g = k.grid;
  const double h = g.h();
  const std::size_t N = g.N();
  TruncationProfiles p(c);
  const double tl = A.trace_load(1.0);
  const Eigen::MatrixXd& Am = A.matrix();

  OddField v = warm_start ? *warm_start : OddField::theta(g);
  require_same_grid(v.grid(), g, "solve_fixed_point");
  v.set_trace_plus(1.0);
  Eigen::VectorXd ve = detail::to_eigen(v.values());
  Eigen::VectorXd Av = Am * ve;

  auto load = [&](const Eigen::VectorXd& x) {
    OddField f(g, detail::to_std(x), 1.0);
    Eigen::VectorXd b = detail::to_eigen(rhs_from(f, p));
    b(0) += tl;
    return b;
  };

  StationarySolution sol{OddField(g, detail::to_std(ve), 1.0)};
  double damping = c.damping;
  double best = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_v = ve, best_Av = Av;
  Eigen::VectorXd prev_F, prev_b, prev_v;
  constexpr std::size_t kWindow = 100;
  std::size_t window_start = 0;
  double window_res = std::numeric_limits<double>::infinity();
  std::size_t it = 0;
  for (; it < c.max_iter; ++it) {
    Eigen::VectorXd b = load(ve);
    Eigen::VectorXd Fv = (it % 50 == 0) ? A.solve(b, c.linear_solver_tol) : A.solve_unchecked(b);
    Eigen::VectorXd d = Fv - ve;
    Eigen::VectorXd Ad = b - Av;
    const double res = std::sqrt(std::max(0.0, 2.0 * h * d.dot(Ad)));
    if (!std::isfinite(res)) throw NumericalError("non-finite Picard residual at iteration " + std::to_string(it));
    sol.residual_history.push_back(res);
    // J_{v}(F(v)) with ||F||^2 = 2h F.(A F) - 8 eps F_0 / h + 4 eps / h and A F = b
    {
      const double nF = 2.0 * h * Fv.dot(b) - 8.0 * c.epsilon * Fv(0) / h + 4.0 * c.epsilon / h;
      const double P = 2.0 * h * (Fv.dot(b) - tl * Fv(0));
      sol.energy_history.push_back(0.5 * nF - P);
    }
    if (prev_F.size() > 0) {
      const Eigen::VectorXd dF = Fv - prev_F, dbv = b - prev_b, dv = ve - prev_v;
      const double num = std::sqrt(std::max(0.0, 2.0 * h * dF.dot(dbv)));
      const double den = std::sqrt(std::max(0.0, 2.0 * h * dv.dot(Am * dv)));
      sol.contraction_history.push_back(den > 0.0 ? num / den : 0.0);
    }
    if (res <= c.tol_fp) {
      sol.converged = true;
      sol.residual_fp = res;
      break;
    }
    if (res < best) {
      best = res;
      best_v = ve;
      best_Av = Av;
    } else if (res > 2.0 * best) {
      damping /= 2.0;
      sol.damping_changes.push_back(static_cast<double>(it));
      if (damping < 1e-4) break;
      ve = best_v;
      Av = best_Av;
      prev_F.resize(0);
      window_start = it;
      window_res = std::numeric_limits<double>::infinity();
      continue;
    }
    if (it == window_start) {
      window_res = res;
    } else if (it - window_start >= kWindow) {
      if (res > 0.5 * window_res && damping > 1.0 / 64) {
        damping /= 2.0;
        sol.damping_changes.push_back(static_cast<double>(it));
      }
      window_start = it;
      window_res = res;
    }
    prev_F = Fv;
    prev_b = b;
    prev_v = ve;
    ve += damping * d;
    Av += damping * Ad;
    sol.residual_fp = res;
  }
  sol.iterations = it;
  sol.final_damping = damping;
  if (!sol.converged) {
    ve = best_v;
    sol.residual_fp = best;
  }
  sol.v = OddField(g, detail::to_std(ve), 1.0);
  sol.epsilon = c.epsilon;
  sol.n = c.n;
  sol.min_v = *std::min_element(sol.v.values().begin(), sol.v.values().end());
  sol.max_v = *std::max_element(sol.v.values().begin(), sol.v.values().end());
  const double round = 1e-12;
  sol.bounds_ok = sol.min_v >= -round && sol.max_v <= 1.0 + round;
  sol.truncation_inactive = std::max(std::abs(sol.min_v), std::abs(sol.max_v)) <= c.n - 1.0;
  sol.energy = energy_record(sol.v, c, k);
  sol.energy_bound_ok = sol.energy.norm2 <= sol.energy.energy_bound;
  (void)N;
  return sol;
}

inline StationarySolution solve_fixed_point(const StationaryConfig& c, const FracLapKernel& k,
                                            const std::optional<OddField>& warm_start = std::nullopt) {
  StationaryOperator A(c.epsilon, k);
  return solve_fixed_point(c, k, A, warm_start);
}

struct SweepResult {
  std::vector<StationarySolution> members;
  bool aborted = false;
  double aborted_at = 0.0;
  const StationarySolution& final_member() const { return members.back(); }
};

/// Solves for each epsilon in descending order, picking n per epsilon so
/// that rho_n == 1 on [-L, L]. Warm starts carry the previous profile and
/// damping; with warm_start off and parallel on, members run concurrently.
inline SweepResult epsilon_sweep(const std::vector<double>& eps_list, const StationaryConfig& base,
                                 const FracLapKernel& k, bool warm_start = true, bool parallel = false) {
  if (eps_list.empty()) throw ConfigError("empty epsilon list");
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    if (!(eps_list[i] > 0.0)) throw ConfigError("epsilon values must be positive");
    if (i > 0 && !(eps_list[i] < eps_list[i - 1])) throw ConfigError("epsilon list must be strictly descending");
  }
  auto member_config = [&](double eps) {
    StationaryConfig c = base;
    c.epsilon = eps;
    c.n = std::max(base.n, StationaryConfig::auto_n(eps, k.grid.L()));
    return c;
  };
  SweepResult out;
  if (!warm_start && parallel) {
    std::vector<std::future<StationarySolution>> fut;
    for (double eps : eps_list)
      fut.push_back(std::async(std::launch::async, [&, eps] { return solve_fixed_point(member_config(eps), k); }));
    for (std::size_t i = 0; i < fut.size(); ++i) {
      auto s = fut[i].get();
      const bool ok = s.converged;
      out.members.push_back(std::move(s));
      if (!ok) {
        out.aborted = true;
        out.aborted_at = eps_list[i];
        break;
      }
    }
    return out;
  }
  std::optional<OddField> start;
  double damping = base.damping;
  for (double eps : eps_list) {
    auto c = member_config(eps);
    if (warm_start) c.damping = damping;
    auto s = solve_fixed_point(c, k, warm_start ? start : std::nullopt);
    const bool ok = s.converged;
    if (warm_start) {
      start = s.v;
      damping = s.final_damping;
    }
    out.members.push_back(std::move(s));
    if (!ok) {
      out.aborted = true;
      out.aborted_at = eps;
      break;
    }
  }
  return out;
}

inline CsvTable solution_to_csv(const StationarySolution& s) {
  CsvTable t;
  t.add_meta("trace_plus", s.v.trace_plus());
  t.add_meta("h", s.v.grid().h());
  t.add_meta("N", static_cast<double>(s.v.grid().N()));
  t.add_meta("epsilon", s.epsilon);
  t.add_meta("n", static_cast<double>(s.n));
  t.add_meta("iterations", static_cast<double>(s.iterations));
  t.add_meta("converged", s.converged ? "true" : "false");
  t.add_meta("residual_fp", s.residual_fp);
  t.add_meta("final_damping", s.final_damping);
  t.add_meta("norm2", s.energy.norm2);
  t.add_meta("monitor", s.energy.monitor);
  t.add_meta("energy_J", s.energy.energy_J);
  t.add_meta("energy_bound", s.energy.energy_bound);
  t.add_meta("bounds_ok", s.bounds_ok ? "true" : "false");
  t.add_meta("energy_bound_ok", s.energy_bound_ok ? "true" : "false");
  t.header = {"x", "v"};
  for (std::size_t i = 0; i < s.v.size(); ++i) t.rows.push_back({s.v.grid().x(i), s.v[i]});
  return t;
}

}  // namespace fracburgers
