#pragma once

// Synthetic sensors standing in for the VIO pipeline and the downward
// laser rangefinder. VIO is modeled as the true pose seen through a slowly
// drifting frame misalignment (position + yaw), which is exactly the error
// the estimator can observe and correct.

#include <Eigen/Dense>

#include <cmath>
#include <optional>
#include <random>

#include "racer/dynamics.hpp"
#include "racer/geometry.hpp"

namespace racer {

inline constexpr double kLrfMinRange = 1.0;    // [m]
inline constexpr double kLrfMaxRange = 40.0;   // [m]
inline constexpr double kLrfMinLevel = 0.1;    // min [R e_z]_z for a valid return

struct VioDriftModel {
  double pos_walk_intensity{0.0};   // [m/sqrt(s)] per axis
  double yaw_walk_intensity{0.0};   // [rad/sqrt(s)]
  Vector3d drift_velocity{Vector3d::Zero()};  // deterministic component [m/s]
  double yaw_drift_rate{0.0};                 // deterministic component [rad/s]
  Vector3d initial_offset{Vector3d::Zero()};  // p_V at t = 0 [m]
  double initial_yaw{0.0};                    // yaw of q_IV at t = 0 [rad]
};

/// True alignment of the VIO frame: p_V and yaw so that q_IV = R_z(yaw).
struct VioDriftState {
  Vector3d p_V{Vector3d::Zero()};
  double yaw_V{0.0};

  static VioDriftState init(const VioDriftModel& m) { return {m.initial_offset, m.initial_yaw}; }

  Quat q_IV() const { return Quat::from_yaw(yaw_V); }
};

struct VioSample {
  Pose pose;            // (p_VB, q_VB), frame V <- B
  Vector3d velocity;    // v_VB expressed in V [m/s]
};

/// Advances the misalignment random walk and returns the drifted pose,
/// i.e. the true pose expressed in the (drifting) VIO frame.
inline VioSample simulate_vio(const DroneState& truth, VioDriftState& drift,
                              const VioDriftModel& model, double dt, std::mt19937_64& rng) {
  if (!(dt > 0.0)) throw ContractError("simulate_vio: dt must be positive");
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double sq = std::sqrt(dt);
  drift.p_V += model.drift_velocity * dt +
               model.pos_walk_intensity * sq * Vector3d(gauss(rng), gauss(rng), gauss(rng));
  drift.yaw_V += model.yaw_drift_rate * dt + model.yaw_walk_intensity * sq * gauss(rng);

  const Quat q_VI = drift.q_IV().inverse();
  VioSample out;
  out.pose.position = quat_rotate(q_VI, truth.position - drift.p_V);
  out.pose.attitude = q_VI * truth.attitude;
  out.pose.parent = Frame::Vio;
  out.pose.child = Frame::Body;
  out.velocity = quat_rotate(q_VI, truth.velocity);
  return out;
}

/// Range along the body -z axis to flat ground at height 0. Returns nullopt
/// when the drone is too tilted or the range leaves the sensor interval.
inline std::optional<double> measure_lrf(const DroneState& truth, double noise_std,
                                         std::mt19937_64& rng) {
  const Matrix3d r = truth.attitude.to_rotation_matrix();
  const double cos_tilt = r(2, 2);  // [R_IB e_z]_z
  if (cos_tilt <= kLrfMinLevel) return std::nullopt;
  double range = truth.position.z() / cos_tilt;
  if (noise_std > 0.0) {
    std::normal_distribution<double> gauss(0.0, noise_std);
    range += gauss(rng);
  }
  if (range < kLrfMinRange || range > kLrfMaxRange) return std::nullopt;
  return range;
}

}  // namespace racer
