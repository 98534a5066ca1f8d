#pragma once

#include "surfmeas/geometry.hpp"

#include <array>
#include <cstddef>

namespace surfmeas {

/// Latitude/longitude region of one bin, angles relative to the partition axis.
/// polar ∈ [0, π] is the angle from the axis; lon ∈ [0, 2π) is measured from
/// the frame's e1 towards e2.
struct BinRegion {
  double polarLo, polarHi;
  double lonLo, lonHi;
};

/// Partition of S² into latBins × lonBins bands-by-sectors about an axis.
/// Bin id = lat · lonBins + lon, lat counted from the +axis pole. A direction
/// on a bin boundary belongs to the bin with the smaller id.
class SphericalPartition {
public:
  static constexpr std::size_t kDefaultLatBins = 64;
  static constexpr std::size_t kDefaultLonBins = 128;

  SphericalPartition(const Vec3 &axis, std::size_t latBins = kDefaultLatBins,
                     std::size_t lonBins = kDefaultLonBins);

  std::size_t size() const noexcept { return latBins_ * lonBins_; }
  std::size_t latBins() const noexcept { return latBins_; }
  std::size_t lonBins() const noexcept { return lonBins_; }
  const AxisFrame &frame() const noexcept { return frame_; }
  const Vec3 &axis() const noexcept { return frame_.axis; }

  std::size_t binOf(const UnitVector &n) const;
  BinRegion region(std::size_t id) const;
  UnitVector direction(double polar, double lon) const;
  UnitVector center(std::size_t id) const;

  /// True if both partitions describe the same bins (axis within 1e−12).
  bool sameAs(const SphericalPartition &other) const;

private:
  AxisFrame frame_;
  std::size_t latBins_;
  std::size_t lonBins_;
  double dPolar_;
  double dLon_;
};

} // namespace surfmeas
