#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <numbers>

namespace surfmeas {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline constexpr double kPi = std::numbers::pi;

/// A direction on S². Construction normalizes; the stored components satisfy
/// |x² + y² + z² − 1| ≤ 1e−12.
class UnitVector {
public:
  UnitVector() : v_(0.0, 0.0, 1.0) {}
  explicit UnitVector(const Vec3 &v);
  UnitVector(double x, double y, double z) : UnitVector(Vec3(x, y, z)) {}

  const Vec3 &vec() const noexcept { return v_; }
  double x() const noexcept { return v_.x(); }
  double y() const noexcept { return v_.y(); }
  double z() const noexcept { return v_.z(); }
  double dot(const Vec3 &w) const { return v_.dot(w); }
  UnitVector operator-() const { return fromNormalized(-v_); }

  /// Wraps a vector already known to be unit length (no renormalization).
  static UnitVector fromNormalized(const Vec3 &v) {
    UnitVector u;
    u.v_ = v;
    return u;
  }

private:
  Vec3 v_;
};

/// Angle between two directions, stable for tiny angles.
double angleBetween(const UnitVector &a, const UnitVector &b);

/// Right-handed orthonormal frame (axis, e1, e2). For axis = +x this is
/// (x, y, z), so that the half-plane angle φ matches y = r cos φ, z = r sin φ.
struct AxisFrame {
  Vec3 axis;
  Vec3 e1;
  Vec3 e2;

  static AxisFrame fromAxis(const Vec3 &axis);
  Vec3 toLocal(const Vec3 &world) const { return {axis.dot(world), e1.dot(world), e2.dot(world)}; }
  Vec3 toWorld(const Vec3 &local) const { return local.x() * axis + local.y() * e1 + local.z() * e2; }
};

} // namespace surfmeas
