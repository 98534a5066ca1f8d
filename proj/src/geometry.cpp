#include "surfmeas/geometry.hpp"

#include "surfmeas/errors.hpp"

namespace surfmeas {

UnitVector::UnitVector(const Vec3 &v) {
  const double n = v.norm();
  if (!(n > 0.0) || !std::isfinite(n))
    throw InvalidInput("zero or non-finite direction");
  v_ = v / n;
}

double angleBetween(const UnitVector &a, const UnitVector &b) {
  return std::atan2(a.vec().cross(b.vec()).norm(), a.vec().dot(b.vec()));
}

AxisFrame AxisFrame::fromAxis(const Vec3 &axisIn) {
  AxisFrame f;
  f.axis = axisIn.normalized();
  // world axis least aligned with the frame axis; ties resolve to the lower index
  int k = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(f.axis[i]) < std::abs(f.axis[k]) - 1e-15)
      k = i;
  if (k == 0 && std::abs(std::abs(f.axis[0]) - 1.0) < 1e-15)
    k = 1;
  Vec3 helper = Vec3::Zero();
  helper[k] = 1.0;
  f.e1 = (helper - helper.dot(f.axis) * f.axis).normalized();
  f.e2 = f.axis.cross(f.e1);
  return f;
}

} // namespace surfmeas
