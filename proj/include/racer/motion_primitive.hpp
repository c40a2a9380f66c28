#pragma once

// Closed-form per-axis time-optimal double-integrator primitives and their
// synchronization across axes.
//
// Per axis the minimum-time input is bang-bang between the acceleration
// bounds; with an active velocity bound it becomes bang-singular-bang with a
// constant-velocity cruise arc. The slowest axis fixes the total time T*, and
// the faster axes are stretched to T* by scaling their acceleration bounds
// with a per-axis factor alpha in (0, 1].

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "racer/errors.hpp"
#include "racer/geometry.hpp"

namespace racer {

struct AxisBounds {
  double u_min{-1.0}, u_max{1.0};  // acceleration bounds, u_min < 0 < u_max [m/s^2]
  double v_min{-std::numeric_limits<double>::infinity()};
  double v_max{std::numeric_limits<double>::infinity()};

  bool has_velocity_bounds() const { return std::isfinite(v_min) || std::isfinite(v_max); }

  AxisBounds scaled(double alpha) const { return {alpha * u_min, alpha * u_max, v_min, v_max}; }

  void validate() const {
    if (!(u_min < 0.0 && 0.0 < u_max)) throw ContractError("AxisBounds: need u_min < 0 < u_max");
    if (!(v_min < 0.0 && 0.0 < v_max)) throw ContractError("AxisBounds: need v_min < 0 < v_max");
  }
};

struct AxisPhase {
  double accel{0.0};
  double duration{0.0};
};

/// Piecewise-constant acceleration profile for one axis.
struct AxisProfile {
  double x0{0.0}, v0{0.0};
  double xf{0.0}, vf{0.0};
  std::vector<AxisPhase> phases;  // at most 3
  double total_time{0.0};
  double alpha{1.0};

  struct Sample {
    double x, v, a;
  };

  /// Exact piecewise evaluation; t is clamped to [0, total_time].
  Sample at(double t) const {
    double x = x0, v = v0;
    double remaining = std::clamp(t, 0.0, total_time);
    for (const auto& ph : phases) {
      const double dt = std::min(remaining, ph.duration);
      if (dt > 0.0 || remaining > 0.0) {
        x += v * dt + 0.5 * ph.accel * dt * dt;
        v += ph.accel * dt;
        remaining -= dt;
      }
      if (remaining <= 0.0) return {x, v, ph.accel};
    }
    return {x, v, phases.empty() ? 0.0 : phases.back().accel};
  }

  double end_position() const { return at(total_time).x; }
  double end_velocity() const { return at(total_time).v; }
};

namespace detail {

inline constexpr double kTimeSlack = 1e-9;  // tolerance on negative phase durations

struct BranchResult {
  double total{std::numeric_limits<double>::infinity()};
  std::array<AxisPhase, 3> phases{};
  int n_phases{0};
  bool feasible{false};
};

/// One switch ordering: accelerate with `a`, optionally cruise at `v_cruise`,
/// finish with `b`. `dir` is +1 for the u_max-first branch, -1 otherwise.
inline BranchResult solve_branch(double dx, double v0, double vf, double a, double b,
                                 double v_cruise, int dir) {
  BranchResult r;
  const double den = b - a;
  double vp2 = (2.0 * a * b * dx + b * v0 * v0 - a * vf * vf) / den;
  if (vp2 < 0.0) {
    if (vp2 < -1e-9) return r;
    vp2 = 0.0;
  }
  const double vp = dir * std::sqrt(vp2);

  const bool capped = (dir > 0) ? (vp > v_cruise) : (vp < v_cruise);
  if (!capped) {
    double t1 = (vp - v0) / a;
    double t2 = (vf - vp) / b;
    if (t1 < -kTimeSlack || t2 < -kTimeSlack) return r;
    t1 = std::max(t1, 0.0);
    t2 = std::max(t2, 0.0);
    r.phases = {AxisPhase{a, t1}, AxisPhase{b, t2}, AxisPhase{}};
    r.n_phases = 2;
    r.total = t1 + t2;
    r.feasible = true;
    return r;
  }

  // Velocity bound active: bang-singular-bang with cruise at v_cruise.
  const double vc = v_cruise;
  double t1 = (vc - v0) / a;
  double t3 = (vf - vc) / b;
  if (t1 < -kTimeSlack || t3 < -kTimeSlack) return r;
  t1 = std::max(t1, 0.0);
  t3 = std::max(t3, 0.0);
  const double d13 = (vc * vc - v0 * v0) / (2.0 * a) + (vf * vf - vc * vc) / (2.0 * b);
  double t2 = (dx - d13) / vc;
  if (t2 < -kTimeSlack) return r;
  t2 = std::max(t2, 0.0);
  r.phases = {AxisPhase{a, t1}, AxisPhase{0.0, t2}, AxisPhase{b, t3}};
  r.n_phases = 3;
  r.total = t1 + t2 + t3;
  r.feasible = true;
  return r;
}

inline AxisProfile to_profile(double x0, double v0, double xf, double vf,
                              const BranchResult& br, double alpha) {
  AxisProfile p;
  p.x0 = x0;
  p.v0 = v0;
  p.xf = xf;
  p.vf = vf;
  p.alpha = alpha;
  p.total_time = br.total;
  for (int i = 0; i < br.n_phases; ++i)
    if (br.phases[i].duration > 0.0) p.phases.push_back(br.phases[i]);
  return p;
}

}  // namespace detail

/// Minimum time to steer (x0, v0) to (xf, vf) under the given bounds.
/// Ties between switch orderings go to the u_max-first branch.
inline AxisProfile min_time_axis(double x0, double v0, double xf, double vf,
                                 const AxisBounds& b) {
  b.validate();
  if (v0 < b.v_min - 1e-12 || v0 > b.v_max + 1e-12 || vf < b.v_min - 1e-12 ||
      vf > b.v_max + 1e-12)
    throw DomainError("min_time_axis: boundary velocity outside bounds");

  const double dx = xf - x0;
  if (dx == 0.0 && v0 == vf) {
    AxisProfile p;
    p.x0 = x0;
    p.v0 = v0;
    p.xf = xf;
    p.vf = vf;
    return p;  // already at the goal state
  }

  const auto up = detail::solve_branch(dx, v0, vf, b.u_max, b.u_min, b.v_max, +1);
  const auto down = detail::solve_branch(dx, v0, vf, b.u_min, b.u_max, b.v_min, -1);
  if (!up.feasible && !down.feasible)
    throw DomainError("min_time_axis: no feasible switch ordering");
  const bool pick_up = up.feasible && (!down.feasible || up.total <= down.total);
  return detail::to_profile(x0, v0, xf, vf, pick_up ? up : down, 1.0);
}

/// Minimum time across both switch orderings, infinity if infeasible.
/// Cheap path for graph edge weights; does not build the profile.
inline double min_time_axis_value(double x0, double v0, double xf, double vf,
                                  const AxisBounds& b) {
  const double dx = xf - x0;
  if (dx == 0.0 && v0 == vf) return 0.0;
  const auto up = detail::solve_branch(dx, v0, vf, b.u_max, b.u_min, b.v_max, +1);
  const auto down = detail::solve_branch(dx, v0, vf, b.u_min, b.u_max, b.v_min, -1);
  return std::min(up.feasible ? up.total : std::numeric_limits<double>::infinity(),
                  down.feasible ? down.total : std::numeric_limits<double>::infinity());
}

/// Finds alpha in (0, 1] so that the minimum time under alpha-scaled
/// acceleration bounds equals T_target. Monotonicity in alpha holds by set
/// inclusion of the feasible input sets.
inline std::pair<double, AxisProfile> stretch_axis(double x0, double v0, double xf, double vf,
                                                   const AxisBounds& b, double T_target) {
  const AxisProfile fastest = min_time_axis(x0, v0, xf, vf, b);
  const double t_min = fastest.total_time;
  if (T_target < t_min - 1e-9)
    throw ContractError("stretch_axis: T_target below the axis minimum time");

  // Degenerate axis: holds position under zero input for any duration.
  if (x0 == xf && v0 == 0.0 && vf == 0.0) {
    AxisProfile p = fastest;
    p.phases = {AxisPhase{0.0, T_target}};
    p.total_time = T_target;
    return {1.0, p};
  }
  if (std::abs(T_target - t_min) <= 1e-9) {
    AxisProfile p = fastest;
    p.total_time = T_target;
    return {1.0, p};
  }

  const auto time_at = [&](double alpha) {
    return min_time_axis(x0, v0, xf, vf, b.scaled(alpha)).total_time;
  };

  // Rest-to-rest without an active velocity cap scales as T ~ 1/sqrt(alpha).
  if (v0 == 0.0 && vf == 0.0) {
    const double alpha_cf = (t_min / T_target) * (t_min / T_target);
    if (std::abs(time_at(alpha_cf) - T_target) <= 1e-9) {
      AxisProfile p = min_time_axis(x0, v0, xf, vf, b.scaled(alpha_cf));
      p.alpha = alpha_cf;
      return {alpha_cf, p};
    }
  }

  // Bracket: T(1) = t_min <= T_target, scan down for T(alpha_lo) >= T_target.
  // T(alpha) is non-increasing in alpha but may jump where the direct switch
  // ordering loses feasibility and the optimum becomes a reverse-and-return
  // trajectory; targets inside such a gap are unreachable.
  double alpha_hi = 1.0;  // achievable side below the target
  double t_hi = t_min;
  double alpha_lo = 1.0;  // side at or above the target once bracketed
  double t_lo = t_min;
  bool bracketed = false;
  double ceiling = t_min;  // best achievable time seen below the target
  // Stop at alpha ~ 1e-12: below that the closed form loses the bound scale
  // to rounding and reported times collapse.
  for (int i = 0; i < 40 && !bracketed; ++i) {
    alpha_lo *= 0.5;
    t_lo = time_at(alpha_lo);
    if (t_lo >= T_target) {
      bracketed = true;
    } else {
      ceiling = std::max(ceiling, t_lo);
      alpha_hi = alpha_lo;
      t_hi = t_lo;
    }
  }
  if (!bracketed)
    throw StretchError(ceiling, "stretch_axis: target beyond the achievable time ceiling");

  for (int i = 0; i < 200; ++i) {
    const double alpha_mid = 0.5 * (alpha_lo + alpha_hi);
    const double t_mid = time_at(alpha_mid);
    if (std::abs(t_mid - T_target) <= 1e-12 * std::max(1.0, T_target)) {
      alpha_lo = alpha_hi = alpha_mid;
      t_lo = t_hi = t_mid;
      break;
    }
    if (t_mid > T_target) {
      alpha_lo = alpha_mid;
      t_lo = t_mid;
    } else {
      alpha_hi = alpha_mid;
      t_hi = t_mid;
    }
  }
  const bool below_closer = (T_target - t_hi) <= (t_lo - T_target);
  const double alpha_best = below_closer ? alpha_hi : alpha_lo;
  AxisProfile p = min_time_axis(x0, v0, xf, vf, b.scaled(alpha_best));
  p.alpha = alpha_best;
  if (std::abs(p.total_time - T_target) > 1e-6)
    throw StretchError(p.total_time, "stretch_axis: target time falls in an unreachable gap");
  p.total_time = T_target;  // absorb residual well below the 1e-6 contract
  if (!p.phases.empty()) {
    // Put the absorbed residual in the longest phase to keep endpoints exact.
    auto longest = std::max_element(p.phases.begin(), p.phases.end(),
                                    [](const AxisPhase& a, const AxisPhase& b) {
                                      return a.duration < b.duration;
                                    });
    double sum = 0.0;
    for (const auto& ph : p.phases) sum += ph.duration;
    longest->duration += T_target - sum;
  }
  return {alpha_best, p};
}

/// Point-mass state used by the planner.
struct PointState {
  Vector3d position{Vector3d::Zero()};
  Vector3d velocity{Vector3d::Zero()};
};

/// Three per-axis profiles sharing one total time.
struct MotionPrimitive {
  std::array<AxisProfile, 3> axes;
  double total_time{0.0};

  struct Sample {
    Vector3d position, velocity, acceleration;
    bool clamped{false};
  };

  Sample at(double t) const {
    Sample s;
    s.clamped = (t < 0.0 || t > total_time);
    for (int i = 0; i < 3; ++i) {
      const auto a = axes[i].at(t);
      s.position[i] = a.x;
      s.velocity[i] = a.v;
      s.acceleration[i] = a.a;
    }
    return s;
  }

  PointState end_state() const {
    const Sample s = at(total_time);
    return {s.position, s.velocity};
  }
};

/// T* = max over per-axis minimum times; infinity when any axis is infeasible.
inline double min_total_time(const PointState& start, const PointState& goal,
                             const std::array<AxisBounds, 3>& bounds) {
  double t = 0.0;
  for (int i = 0; i < 3; ++i) {
    t = std::max(t, min_time_axis_value(start.position[i], start.velocity[i], goal.position[i],
                                        goal.velocity[i], bounds[i]));
    if (!std::isfinite(t)) return t;
  }
  return t;
}

/// Full synchronized primitive: the slowest axis keeps its minimum-time
/// profile, the others are stretched to end at the same T*.
inline MotionPrimitive synchronize_axes(const PointState& start, const PointState& goal,
                                        const std::array<AxisBounds, 3>& bounds) {
  std::array<AxisProfile, 3> fastest;
  double t_star = 0.0;
  for (int i = 0; i < 3; ++i) {
    fastest[i] = min_time_axis(start.position[i], start.velocity[i], goal.position[i],
                               goal.velocity[i], bounds[i]);
    t_star = std::max(t_star, fastest[i].total_time);
  }
  MotionPrimitive mp;
  mp.total_time = t_star;
  for (int i = 0; i < 3; ++i) {
    if (fastest[i].total_time >= t_star) {
      mp.axes[i] = fastest[i];
      mp.axes[i].total_time = t_star;
    } else {
      mp.axes[i] = stretch_axis(start.position[i], start.velocity[i], goal.position[i],
                                goal.velocity[i], bounds[i], t_star)
                       .second;
    }
  }
  return mp;
}

}  // namespace racer
