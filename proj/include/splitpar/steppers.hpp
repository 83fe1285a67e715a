#pragma once

#include <chrono>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "splitpar/decomposition.hpp"
#include "splitpar/errors.hpp"
#include "splitpar/grid.hpp"
#include "splitpar/linsolve.hpp"
#include "splitpar/problem.hpp"
#include "splitpar/sparse_operator.hpp"
#include "splitpar/split_operators.hpp"

namespace splitpar {

enum class Method { cn, be, dr, douglas, dg_adi, dk_adi, dg_dd, dk_dd };

inline std::string to_string(Method m) {
  static constexpr const char* names[] = {"cn", "be", "dr", "douglas", "dg-adi", "dk-adi", "dg-dd", "dk-dd"};
  return names[static_cast<int>(m)];
}

inline Method parse_method(std::string s) {
  for (auto& ch : s)
    if (ch == '_') ch = '-';
  for (Method m : {Method::cn, Method::be, Method::dr, Method::douglas, Method::dg_adi, Method::dk_adi,
                   Method::dg_dd, Method::dk_dd})
    if (to_string(m) == s) return m;
  throw InvalidInput("unknown method '" + s + "' (expected cn|be|dr|douglas|dg-adi|dk-adi|dg-dd|dk-dd)");
}

inline bool uses_adi(Method m) {
  return m == Method::dr || m == Method::douglas || m == Method::dg_adi || m == Method::dk_adi;
}
inline bool uses_dd(Method m) { return m == Method::dg_dd || m == Method::dk_dd; }
inline bool is_improved(Method m) { return m == Method::dk_adi || m == Method::dk_dd; }

/// Fixed theta of the named schemes; the generalized splittings default to 1/2.
inline double default_theta(Method m) {
  switch (m) {
    case Method::be:
    case Method::dr:
      return 1.0;
    default:
      return 0.5;
  }
}

inline void check_theta(double theta) {
  if (!(theta > 0.0 && theta <= 1.0)) throw InvalidInput("theta must lie in (0, 1], got " + std::to_string(theta));
}

/// F^{n+theta} = theta F(t_{n+1}) + (1 - theta) F(t_n).
inline Vector theta_average(double theta, const Vector& f_now, const Vector& f_next) {
  return theta * f_next + (1.0 - theta) * f_now;
}

/// (I + theta tau A) U^{n+1} = (I - (1 - theta) tau A) U^n + tau F^{n+theta},
/// with the left-hand matrix factored once.
class ThetaScheme {
 public:
  ThetaScheme(SparseOperator A, double theta, double tau, const SolverSettings& s = {})
      : A_(std::move(A)), theta_(theta), tau_(tau), solver_(A_, theta * tau, s) {
    check_theta(theta);
    if (!(tau > 0.0)) throw InvalidInput("time step must be positive");
  }

  Vector step(const Vector& u, const Vector& f) const {
    if (static_cast<std::size_t>(u.size()) != A_.size() || f.size() != u.size())
      throw InvalidInput("theta step: vector size mismatch");
    Vector rhs = u + tau_ * f;
    if (theta_ != 1.0) rhs -= (1.0 - theta_) * tau_ * A_.apply(u);
    return solver_.solve(rhs);
  }

 private:
  SparseOperator A_;
  double theta_, tau_;
  ShiftedSolver solver_;
};

/// Multi-stage splitting schemes over A_h = A_1h + ... + A_mh. The stage
/// matrices I + theta tau A_kh are factored once, block by block.
class SplitScheme {
 public:
  SplitScheme(SplitOperators split, double theta, double tau, const SolverSettings& s = {})
      : split_(std::move(split)), theta_(theta), tau_(tau) {
    check_theta(theta);
    if (!(tau > 0.0)) throw InvalidInput("time step must be positive");
    for (std::size_t k = 0; k < split_.stages(); ++k) {
      if (k < split_.components.size()) {
        std::vector<std::vector<std::size_t>> blocks;
        for (const auto& b : split_.components[k]) blocks.push_back(b.indices);
        stages_.emplace_back(split_.parts[k], theta * tau, std::move(blocks), s);
      } else {
        stages_.emplace_back(split_.parts[k], theta * tau, s);
      }
    }
  }

  const SplitOperators& split() const noexcept { return split_; }
  double theta() const noexcept { return theta_; }
  double tau() const noexcept { return tau_; }
  const BlockSolver& stage_solver(std::size_t k) const { return stages_.at(k); }

  /// Generalized (Douglas-Gunn) splitting:
  ///   (I + theta tau A_1) W^{n,1} = (I - (1-theta) tau A_1 - tau sum_{i>=2} A_i) W^n + tau F,
  ///   (I + theta tau A_k) W^{n,k} = W^{n,k-1} + theta tau A_k W^n,  k = 2..m.
  Vector dg_step(const Vector& w, const Vector& f) const {
    check_sizes(w, f);
    std::vector<Vector> Aw;
    Aw.reserve(split_.stages());
    for (const auto& A : split_.parts) Aw.push_back(A.apply(w));

    Vector rhs = w + tau_ * f - (1.0 - theta_) * tau_ * Aw[0];
    for (std::size_t i = 1; i < Aw.size(); ++i) rhs -= tau_ * Aw[i];
    Vector stage = stages_[0].solve(rhs);
    for (std::size_t k = 1; k < stages_.size(); ++k) stage = stages_[k].solve(stage + theta_ * tau_ * Aw[k]);
    return stage;
  }

  /// Improved splitting: dg_step with F + B_h (Z^n - Z^{n-1}).
  Vector dk_step(const Vector& z, const Vector& z_prev, const Vector& f) const {
    if (z_prev.size() != z.size()) throw StateError("improved step needs the previous solution Z^{n-1}");
    return dg_step(z, f + bh_apply(split_, theta_, tau_, z - z_prev));
  }

  /// (I + tau A_1) V^{n,1} = (I - tau A_2) V^n + tau F^{n+1},
  /// (I + tau A_2) V^{n+1} = V^{n,1} + tau A_2 V^n.
  Vector douglas_rachford_step(const Vector& v, const Vector& f) const {
    require_two_stage(1.0, "Douglas-Rachford");
    check_sizes(v, f);
    const Vector A2v = split_.parts[1].apply(v);
    const Vector v1 = stages_[0].solve(v - tau_ * A2v + tau_ * f);
    return stages_[1].solve(v1 + tau_ * A2v);
  }

  /// (I + tau/2 A_1) V^{n,1} = (I - tau/2 A_1 - tau A_2) V^n + tau F^{n+1/2},
  /// (I + tau/2 A_2) V^{n+1} = V^{n,1} + tau/2 A_2 V^n.
  Vector douglas_step(const Vector& v, const Vector& f) const {
    require_two_stage(0.5, "Douglas");
    check_sizes(v, f);
    const Vector A1v = split_.parts[0].apply(v);
    const Vector A2v = split_.parts[1].apply(v);
    const Vector v1 = stages_[0].solve(v - 0.5 * tau_ * A1v - tau_ * A2v + tau_ * f);
    return stages_[1].solve(v1 + 0.5 * tau_ * A2v);
  }

 private:
  void check_sizes(const Vector& w, const Vector& f) const {
    if (static_cast<std::size_t>(w.size()) != split_.size() || f.size() != w.size())
      throw InvalidInput("splitting step: vector size mismatch");
  }
  void require_two_stage(double theta, const char* name) const {
    if (split_.stages() != 2) throw InvalidInput(std::string(name) + " is a two-operator scheme; got m = " +
                                                 std::to_string(split_.stages()));
    if (theta_ != theta)
      throw InvalidInput(std::string(name) + " scheme requires theta = " + std::to_string(theta));
  }

  SplitOperators split_;
  double theta_, tau_;
  std::vector<BlockSolver> stages_;
};

// One-shot forms; each call factors its matrices afresh.

inline Vector theta_step(const SparseOperator& A, double theta, double tau, const Vector& u, const Vector& f,
                         const SolverSettings& s = {}) {
  return ThetaScheme(A, theta, tau, s).step(u, f);
}
inline Vector douglas_rachford_step(const SplitOperators& split, double tau, const Vector& v, const Vector& f) {
  return SplitScheme(split, 1.0, tau).douglas_rachford_step(v, f);
}
inline Vector douglas_step(const SplitOperators& split, double tau, const Vector& v, const Vector& f) {
  return SplitScheme(split, 0.5, tau).douglas_step(v, f);
}
inline Vector dg_step(const SplitOperators& split, double theta, double tau, const Vector& w, const Vector& f) {
  return SplitScheme(split, theta, tau).dg_step(w, f);
}
inline Vector dk_step(const SplitOperators& split, double theta, double tau, const Vector& z, const Vector& z_prev,
                      const Vector& f) {
  return SplitScheme(split, theta, tau).dk_step(z, z_prev, f);
}

struct StepperConfig {
  Method method = Method::cn;
  std::optional<double> theta;  // defaults per method
  std::optional<double> tau;    // defaults to h
  int q = 4;                    // dd only
  double xi = 0.125;            // dd only
  SolverSettings solver;

  double effective_theta() const { return theta.value_or(default_theta(method)); }
};

struct RunReport {
  Method method = Method::cn;
  std::string coefficient;
  int M = 0;
  int q = 0;
  double xi = 0.0;
  double theta = 0.5;
  double tau = 0.0;
  int steps = 0;
  /// ||e^n|| (grid-weighted l2) for n = 1..N_T+1.
  std::vector<double> step_errors;
  /// max over 1 <= n <= N_T.
  double error = 0.0;
  /// max over every computed step, including t = T.
  double error_all_steps = 0.0;
  double seconds = 0.0;
};

/// sqrt(sum_i e_i^2 h^2).
inline double discrete_l2(const Vector& e, double h) { return std::sqrt(e.squaredNorm()) * h; }

/// Called after each step with (n, t_n, solution).
using StepObserver = std::function<void(int, double, const Vector&)>;

/// Number of time levels after t_0: N_T + 1 with N_T = round(T / tau) - 1.
inline int step_count(double final_time, double tau) {
  const double r = final_time / tau;
  const double n = std::round(r);
  return static_cast<int>(std::abs(r - n) < 1e-9 * r ? n : std::ceil(r));
}

/// Builds the operators the method needs and advances from U^0 = P_h u_0
/// (nodal sampling) to t = T, calling `observer` at every level n >= 1.
inline void integrate(const ManufacturedProblem& p, const Grid& g, const StepperConfig& cfg,
                      const StepObserver& observer) {
  const double theta = cfg.effective_theta();
  check_theta(theta);
  const double tau = cfg.tau.value_or(g.h());
  const int levels = step_count(p.final_time, tau);
  const Method m = cfg.method;

  if ((m == Method::cn && theta != 0.5) || (m == Method::be && theta != 1.0) || (m == Method::dr && theta != 1.0) ||
      (m == Method::douglas && theta != 0.5))
    throw InvalidInput("method " + to_string(m) + " has a fixed theta = " + std::to_string(default_theta(m)));

  Vector u = sample_on_grid(ManufacturedProblem::initial, g);
  Vector f_now = sample_forcing(p, g, 0.0);

  auto advance = [&](auto&& step) {
    for (int n = 0; n < levels; ++n) {
      const double t_next = (n + 1) * tau;
      Vector f_next = sample_forcing(p, g, t_next);
      u = step(n, u, theta_average(theta, f_now, f_next));
      f_now = std::move(f_next);
      observer(n + 1, t_next, u);
    }
  };

  if (m == Method::cn || m == Method::be) {
    const ThetaScheme scheme(assemble_operator(g, p.diffusion, p.c), theta, tau, cfg.solver);
    advance([&](int, const Vector& v, const Vector& f) { return scheme.step(v, f); });
    return;
  }

  SplitOperators split;
  if (uses_adi(m)) {
    split = build_adi_split(g, p.diffusion, p.c);
  } else {
    split = build_dd_split(g, p.diffusion, p.c, make_partition_of_unity(make_strip_decomposition(cfg.q, cfg.xi)));
  }
  const SplitScheme scheme(split, theta, tau, cfg.solver);

  switch (m) {
    case Method::dr:
      advance([&](int, const Vector& v, const Vector& f) { return scheme.douglas_rachford_step(v, f); });
      return;
    case Method::douglas:
      advance([&](int, const Vector& v, const Vector& f) { return scheme.douglas_step(v, f); });
      return;
    case Method::dg_adi:
    case Method::dg_dd:
      advance([&](int, const Vector& v, const Vector& f) { return scheme.dg_step(v, f); });
      return;
    default:
      break;
  }

  // Improved splittings: Z^1 from one unsplit theta-scheme step (Crank-Nicolson
  // for theta = 1/2), then two-level steps.
  const ThetaScheme start(split.full, theta, tau, cfg.solver);
  Vector prev;
  advance([&](int n, const Vector& z, const Vector& f) {
    Vector next = n == 0 ? start.step(z, f) : scheme.dk_step(z, prev, f);
    prev = z;
    return next;
  });
}

inline RunReport run(const ManufacturedProblem& p, const Grid& g, const StepperConfig& cfg) {
  RunReport r;
  r.method = cfg.method;
  r.coefficient = p.diffusion.name;
  r.M = g.M();
  r.theta = cfg.effective_theta();
  r.tau = cfg.tau.value_or(g.h());
  if (uses_dd(cfg.method)) {
    r.q = cfg.q;
    r.xi = cfg.xi;
  }
  const int levels = step_count(p.final_time, r.tau);
  r.steps = levels;
  r.step_errors.reserve(static_cast<std::size_t>(levels));

  const auto t0 = std::chrono::steady_clock::now();
  integrate(p, g, cfg, [&](int n, double t, const Vector& u) {
    const double e = discrete_l2(sample_exact(g, t) - u, g.h());
    r.step_errors.push_back(e);
    r.error_all_steps = std::max(r.error_all_steps, e);
    if (n <= levels - 1) r.error = std::max(r.error, e);
  });
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace splitpar
