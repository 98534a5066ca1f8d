#include "surfmeas/partition.hpp"

#include "surfmeas/errors.hpp"

#include <algorithm>

namespace surfmeas {

SphericalPartition::SphericalPartition(const Vec3 &axis, std::size_t latBins, std::size_t lonBins)
    : frame_(AxisFrame::fromAxis(axis)), latBins_(latBins), lonBins_(lonBins),
      dPolar_(kPi / static_cast<double>(latBins)),
      dLon_(2.0 * kPi / static_cast<double>(lonBins)) {
  if (latBins == 0 || lonBins == 0)
    throw InvalidInput("partition needs at least one bin per direction");
  if (!(axis.norm() > 0.0))
    throw InvalidInput("partition axis must be nonzero");
}

namespace {

// index of the half-open-from-below cell containing value; a value exactly on
// an interior boundary goes to the lower cell
std::size_t cellIndex(double value, double width, std::size_t count) {
  const double q = value / width;
  double c = std::ceil(q) - 1.0;
  if (c < 0.0)
    c = 0.0;
  return std::min(static_cast<std::size_t>(c), count - 1);
}

} // namespace

std::size_t SphericalPartition::binOf(const UnitVector &n) const {
  const Vec3 local = frame_.toLocal(n.vec());
  const double polar = std::atan2(std::hypot(local.y(), local.z()), local.x());
  double lon = std::atan2(local.z(), local.y());
  if (lon < 0.0)
    lon += 2.0 * kPi;
  if (lon >= 2.0 * kPi)
    lon = 0.0;
  const std::size_t lat = cellIndex(polar, dPolar_, latBins_);
  const std::size_t lo = cellIndex(lon, dLon_, lonBins_);
  return lat * lonBins_ + lo;
}

BinRegion SphericalPartition::region(std::size_t id) const {
  if (id >= size())
    throw InvalidInput("bin id out of range");
  const std::size_t lat = id / lonBins_;
  const std::size_t lon = id % lonBins_;
  return {static_cast<double>(lat) * dPolar_, static_cast<double>(lat + 1) * dPolar_,
          static_cast<double>(lon) * dLon_, static_cast<double>(lon + 1) * dLon_};
}

UnitVector SphericalPartition::direction(double polar, double lon) const {
  const Vec3 local(std::cos(polar), std::sin(polar) * std::cos(lon), std::sin(polar) * std::sin(lon));
  return UnitVector(frame_.toWorld(local));
}

UnitVector SphericalPartition::center(std::size_t id) const {
  const BinRegion b = region(id);
  return direction(0.5 * (b.polarLo + b.polarHi), 0.5 * (b.lonLo + b.lonHi));
}

bool SphericalPartition::sameAs(const SphericalPartition &other) const {
  return latBins_ == other.latBins_ && lonBins_ == other.lonBins_ &&
         (frame_.axis - other.frame_.axis).norm() <= 1e-12;
}

} // namespace surfmeas
