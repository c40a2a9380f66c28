#pragma once

// Rigid-body quadrotor model with linear rotor drag:
//   m * pddot = R f e_z - R D R^T v - m g,   qdot = 0.5 * q * (0, omega).
// Thrust f and bodyrates omega are the inputs; the vendor rate loop is not modeled.

#include <Eigen/Dense>

#include <cmath>

#include "racer/errors.hpp"
#include "racer/geometry.hpp"

namespace racer {

struct DroneParams {
  double mass{3.4};                           // [kg]
  Vector3d drag_diag{0.5, 0.25, 0.0};         // rotor drag D = diag(d_x, d_y, 0) [kg/s]
  Vector3d gravity{0.0, 0.0, 9.81};           // [m/s^2], subtracted along -z
  double f_max{1.4 * 3.4 * 9.81};             // thrust ceiling, thrust-to-weight 1.4 [N]
  double omega_max{6.0};                      // per-axis bodyrate ceiling [rad/s]

  double hover_thrust() const { return mass * gravity.norm(); }

  void validate() const {
    if (mass <= 0) throw ContractError("DroneParams: mass must be positive");
    if (drag_diag.minCoeff() < 0) throw ContractError("DroneParams: negative drag");
    if (f_max < mass * gravity.norm())
      throw ContractError("DroneParams: thrust-to-weight below 1");
  }
};

struct DroneState {
  Vector3d position{Vector3d::Zero()};   // p_B in the inertial frame [m]
  Vector3d velocity{Vector3d::Zero()};   // v_B in the inertial frame [m/s]
  Quat attitude{};                       // q_IB

  bool finite() const {
    return position.allFinite() && velocity.allFinite() &&
           std::isfinite(attitude.w + attitude.x + attitude.y + attitude.z);
  }
};

struct ControlInput {
  double thrust{0.0};                    // collective f [N]
  Vector3d bodyrates{Vector3d::Zero()};  // omega in the body frame [rad/s]
};

namespace detail {

struct StateDeriv {
  Vector3d pdot, vdot;
  Quat qdot;  // unnormalized quaternion derivative
};

inline StateDeriv dynamics_deriv(const DroneState& x, const ControlInput& u,
                                 const DroneParams& params) {
  const Matrix3d r = x.attitude.to_rotation_matrix();
  const Vector3d thrust_acc = r.col(2) * (u.thrust / params.mass);
  const Vector3d drag_acc =
      r * (params.drag_diag.asDiagonal() * (r.transpose() * x.velocity)) / params.mass;
  StateDeriv d;
  d.pdot = x.velocity;
  d.vdot = thrust_acc - drag_acc - params.gravity;
  const Quat omega_q(0.0, u.bodyrates);
  const Quat qd = x.attitude * omega_q;
  d.qdot = Quat(0.5 * qd.w, 0.5 * qd.x, 0.5 * qd.y, 0.5 * qd.z);
  return d;
}

}  // namespace detail

/// One RK4 step of the equations of motion; the quaternion is renormalized.
inline DroneState step_dynamics(const DroneState& x, const ControlInput& u, double dt,
                                const DroneParams& params) {
  if (!(dt > 0.0 && dt <= 0.02)) throw ContractError("step_dynamics: dt outside (0, 0.02]");
  if (u.thrust < -1e-9 || u.thrust > params.f_max + 1e-9 ||
      u.bodyrates.cwiseAbs().maxCoeff() > params.omega_max + 1e-9)
    throw ContractError("step_dynamics: input outside bounds");

  auto advance = [](const DroneState& s, const detail::StateDeriv& d, double h) {
    DroneState out;
    out.position = s.position + h * d.pdot;
    out.velocity = s.velocity + h * d.vdot;
    out.attitude = Quat(s.attitude.w + h * d.qdot.w, s.attitude.x + h * d.qdot.x,
                        s.attitude.y + h * d.qdot.y, s.attitude.z + h * d.qdot.z);
    return out;
  };

  const auto k1 = detail::dynamics_deriv(x, u, params);
  const auto k2 = detail::dynamics_deriv(advance(x, k1, 0.5 * dt), u, params);
  const auto k3 = detail::dynamics_deriv(advance(x, k2, 0.5 * dt), u, params);
  const auto k4 = detail::dynamics_deriv(advance(x, k3, dt), u, params);

  DroneState out;
  out.position =
      x.position + dt / 6.0 * (k1.pdot + 2.0 * k2.pdot + 2.0 * k3.pdot + k4.pdot);
  out.velocity =
      x.velocity + dt / 6.0 * (k1.vdot + 2.0 * k2.vdot + 2.0 * k3.vdot + k4.vdot);
  out.attitude = Quat(x.attitude.w + dt / 6.0 * (k1.qdot.w + 2 * k2.qdot.w + 2 * k3.qdot.w + k4.qdot.w),
                      x.attitude.x + dt / 6.0 * (k1.qdot.x + 2 * k2.qdot.x + 2 * k3.qdot.x + k4.qdot.x),
                      x.attitude.y + dt / 6.0 * (k1.qdot.y + 2 * k2.qdot.y + 2 * k3.qdot.y + k4.qdot.y),
                      x.attitude.z + dt / 6.0 * (k1.qdot.z + 2 * k2.qdot.z + 2 * k3.qdot.z + k4.qdot.z))
                     .normalized();
  if (!out.finite()) throw SimDivergedError("step_dynamics: non-finite state");
  return out;
}

/// First-order lag on the actuator commands; tau = 0 passes commands through.
struct ActuatorLag {
  double tau{0.0};  // [s]
  ControlInput state{};
  bool initialized{false};

  ControlInput apply(const ControlInput& cmd, double dt) {
    if (tau <= 0.0) return cmd;
    if (!initialized) {
      state = cmd;
      initialized = true;
      return cmd;
    }
    const double a = 1.0 - std::exp(-dt / tau);
    state.thrust += a * (cmd.thrust - state.thrust);
    state.bodyrates += a * (cmd.bodyrates - state.bodyrates);
    return state;
  }
};

}  // namespace racer
