#pragma once

// Quaternion algebra, frames and the pinhole camera shared by all modules.
//
// Conventions (used consistently everywhere):
//  - Hamilton product, scalar-first storage q = (w, x, y, z).
//  - R(q_AB) maps a vector expressed in frame B to frame A; for the drone,
//    q_IB rotates body-frame vectors into the inertial frame.
//  - Body rates enter the kinematics as qdot = 0.5 * q * (0, omega_body).
//  - Pixel origin at the top-left corner, x right, y down.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>

#include "racer/errors.hpp"

namespace racer {

using Eigen::Matrix2d;
using Eigen::Matrix3d;
using Eigen::MatrixXd;
using Eigen::Vector2d;
using Eigen::Vector3d;
using Eigen::Vector4d;
using Eigen::VectorXd;

inline constexpr double kUnitQuatTol = 1e-6;   // contract tolerance on |q| - 1
inline constexpr double kMinCameraDepth = 1e-6;  // [m]

struct Quat {
  double w{1.0}, x{0.0}, y{0.0}, z{0.0};

  Quat() = default;
  Quat(double w, double x, double y, double z) : w(w), x(x), y(y), z(z) {}
  Quat(double w, const Vector3d& v) : w(w), x(v.x()), y(v.y()), z(v.z()) {}

  static Quat identity() { return {}; }

  static Quat from_axis_angle(const Vector3d& axis, double angle) {
    const double n = axis.norm();
    if (n < 1e-15) return identity();
    const double half = 0.5 * angle;
    return Quat(std::cos(half), std::sin(half) * (axis / n));
  }

  static Quat from_yaw(double yaw) { return from_axis_angle(Vector3d::UnitZ(), yaw); }

  Vector3d vec() const { return {x, y, z}; }
  Vector4d coeffs() const { return {w, x, y, z}; }

  double norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }

  Quat normalized() const {
    const double n = norm();
    return {w / n, x / n, y / n, z / n};
  }

  Quat conjugate() const { return {w, -x, -y, -z}; }
  Quat inverse() const { return conjugate(); }  // unit quaternions only

  /// Hamilton product.
  Quat operator*(const Quat& r) const {
    return {w * r.w - x * r.x - y * r.y - z * r.z,
            w * r.x + x * r.w + y * r.z - z * r.y,
            w * r.y - x * r.z + y * r.w + z * r.x,
            w * r.z + x * r.y - y * r.x + z * r.w};
  }

  /// Rotation matrix R(q); for q_AB this maps frame-B vectors into frame A.
  Matrix3d to_rotation_matrix() const {
    Matrix3d r;
    const double ww = w * w, xx = x * x, yy = y * y, zz = z * z;
    r << ww + xx - yy - zz, 2 * (x * y - w * z), 2 * (x * z + w * y),
        2 * (x * y + w * z), ww - xx + yy - zz, 2 * (y * z - w * x),
        2 * (x * z - w * y), 2 * (y * z + w * x), ww - xx - yy + zz;
    return r;
  }

  /// Yaw of the rotated x-axis projected to the horizontal plane.
  double yaw() const {
    const Matrix3d r = to_rotation_matrix();
    return std::atan2(r(1, 0), r(0, 0));
  }
};

inline Matrix3d skew(const Vector3d& v) {
  Matrix3d m;
  m << 0, -v.z(), v.y(), v.z(), 0, -v.x(), -v.y(), v.x(), 0;
  return m;
}

/// R(q) * v without forming the matrix.
inline Vector3d quat_rotate(const Quat& q, const Vector3d& v) {
  if (std::abs(q.norm() - 1.0) > kUnitQuatTol)
    throw ContractError("quat_rotate: quaternion not unit norm");
  const Vector3d qv = q.vec();
  const Vector3d t = qv.cross(v);
  return v + 2.0 * (q.w * t + qv.cross(t));
}

/// Tangent-space error vector lifted back to a unit quaternion (sqrt(1-|e|^2), e).
inline Quat quat_error_lift(const Vector3d& q_tilde) {
  const double nn = q_tilde.squaredNorm();
  if (nn > 1.0) throw DomainError("quat_error_lift: |q_tilde| > 1 (filter divergence)");
  return Quat(std::sqrt(1.0 - nn), q_tilde);
}

/// 4x4 matrix L(q) with q (x) p = L(q) * p on (w,x,y,z) coefficient vectors.
inline Eigen::Matrix4d quat_left_product_matrix(const Quat& q) {
  Eigen::Matrix4d l;
  l << q.w, -q.x, -q.y, -q.z,
       q.x,  q.w, -q.z,  q.y,
       q.y,  q.z,  q.w, -q.x,
       q.z, -q.y,  q.x,  q.w;
  return l;
}

/// d(R(q) u)/dq as a 3x4 block, columns ordered (w, x, y, z).
inline Eigen::Matrix<double, 3, 4> rotate_jacobian_quat(const Quat& q, const Vector3d& u) {
  Eigen::Matrix<double, 3, 4> j;
  const Vector3d qv = q.vec();
  j.col(0) = 2.0 * (q.w * u + qv.cross(u));
  j.rightCols<3>() =
      2.0 * (qv.dot(u) * Matrix3d::Identity() + qv * u.transpose() - u * qv.transpose() -
             q.w * skew(u));
  return j;
}

/// d(R(q)^T u)/dq, columns ordered (w, x, y, z).
inline Eigen::Matrix<double, 3, 4> rotate_transpose_jacobian_quat(const Quat& q,
                                                                  const Vector3d& u) {
  // R(q)^T = R(conj q); chain through the conjugation flips the vector columns.
  Eigen::Matrix<double, 3, 4> j = rotate_jacobian_quat(q.conjugate(), u);
  j.rightCols<3>() *= -1.0;
  return j;
}

enum class Frame : std::uint8_t { None, Inertial, Vio, Body, Camera, Gate };

/// Rigid transform taking child-frame vectors into the parent frame.
struct Pose {
  Vector3d position{Vector3d::Zero()};
  Quat attitude{};
  Frame parent{Frame::None};
  Frame child{Frame::None};

  /// Composition: (A<-B) * (B<-C) = (A<-C). Frame tags must chain when set.
  Pose operator*(const Pose& rhs) const {
    if (child != Frame::None && rhs.parent != Frame::None && child != rhs.parent)
      throw ContractError("Pose composition: frame tags do not chain");
    return {position + quat_rotate(attitude, rhs.position), attitude * rhs.attitude, parent,
            rhs.child};
  }

  Pose inverse() const {
    const Quat qi = attitude.inverse();
    return {-quat_rotate(qi, position), qi, child, parent};
  }

  /// Child-frame point expressed in the parent frame.
  Vector3d transform(const Vector3d& p) const { return position + quat_rotate(attitude, p); }
};

struct CameraModel {
  double fx{280.0}, fy{280.0};   // focal lengths [px]
  double cx{296.0}, cy{176.0};   // optical center [px]
  int width{592}, height{352};   // image size [px]
  Vector3d p_BC{Vector3d::Zero()};  // camera position in the body frame [m]
  Quat q_BC{};                      // camera-to-body rotation

  bool valid() const {
    return fx > 0 && fy > 0 && cx >= 0 && cx < width && cy >= 0 && cy < height;
  }

  /// Pinhole projection of a camera-frame point. No clipping to image bounds.
  Vector2d project(const Vector3d& p_C) const {
    if (p_C.z() <= kMinCameraDepth) throw ContractError("project: point behind camera");
    const double inv_z = 1.0 / p_C.z();
    return {fx * p_C.x() * inv_z + cx, fy * p_C.y() * inv_z + cy};
  }

  bool in_image(const Vector2d& px, double margin = 0.0) const {
    return px.x() >= margin && px.x() <= width - 1 - margin && px.y() >= margin &&
           px.y() <= height - 1 - margin;
  }
};

/// Forward-looking camera mounted with the given yaw about the body z-axis.
/// Camera axes in the body frame: z ahead, x right, y down.
inline Quat camera_mount_rotation(double yaw_rad) {
  Matrix3d base;
  base << 0, 0, 1,   // x_cam -> -y_body, y_cam -> -z_body, z_cam -> +x_body (columns)
      -1, 0, 0,
      0, -1, 0;
  const Matrix3d r = Quat::from_yaw(yaw_rad).to_rotation_matrix() * base;
  // Matrix -> quaternion via Eigen, then back to scalar-first storage.
  const Eigen::Quaterniond eq(r);
  return Quat(eq.w(), eq.x(), eq.y(), eq.z());
}

}  // namespace racer
