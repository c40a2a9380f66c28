#pragma once

// Gate geometry shared by perception, estimation and planning.
// Gate frame: x along the gate normal, y left, z up; the four inner corners
// sit at 0.5 * (0, +/-w, +/-h).

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <vector>

#include "racer/errors.hpp"
#include "racer/geometry.hpp"

namespace racer {

enum class CornerClass : std::uint8_t { TL = 0, TR = 1, BL = 2, BR = 3 };
inline constexpr int kNumCornerClasses = 4;

/// Edge classes form the 4-cycle TL -> TR -> BR -> BL -> TL.
struct EdgeClass {
  CornerClass from, to;
};
inline constexpr std::array<EdgeClass, 4> kEdgeClasses{{
    {CornerClass::TL, CornerClass::TR},
    {CornerClass::TR, CornerClass::BR},
    {CornerClass::BR, CornerClass::BL},
    {CornerClass::BL, CornerClass::TL},
}};
inline constexpr int kNumEdgeClasses = 4;

struct GateSpec {
  Vector3d position{Vector3d::Zero()};  // gate center in the inertial frame [m]
  double heading{0.0};                  // yaw of the gate normal [rad]
  double width{1.4};                    // inner opening [m]
  double height{1.4};                   // inner opening [m]
  int id{0};                            // ordinal in the race sequence

  void validate() const {
    if (width <= 0 || height <= 0) throw ContractError("GateSpec: non-positive opening");
  }

  /// Corner offset in the gate frame. Top = +z, left = +y.
  Vector3d corner_offset(CornerClass c) const {
    const double hw = 0.5 * width, hh = 0.5 * height;
    switch (c) {
      case CornerClass::TL: return {0.0, hw, hh};
      case CornerClass::TR: return {0.0, -hw, hh};
      case CornerClass::BL: return {0.0, hw, -hh};
      case CornerClass::BR: return {0.0, -hw, -hh};
    }
    return Vector3d::Zero();
  }

  Quat rotation() const { return Quat::from_yaw(heading); }

  Vector3d normal() const { return quat_rotate(rotation(), Vector3d::UnitX()); }

  Vector3d corner_position(CornerClass c) const {
    return position + quat_rotate(rotation(), corner_offset(c));
  }
};

using GateMap = std::vector<GateSpec>;

}  // namespace racer
