#pragma once

#include "surfmeas/geometry.hpp"
#include "surfmeas/partition.hpp"

#include <vector>

namespace surfmeas {

struct Atom {
  UnitVector n;
  double w;
};

/// Finite signed combination of point masses on S² (no merging, any sign).
class SignedDiscreteMeasure {
public:
  SignedDiscreteMeasure() = default;
  explicit SignedDiscreteMeasure(std::vector<Atom> atoms);

  const std::vector<Atom> &atoms() const noexcept { return atoms_; }
  std::size_t size() const noexcept { return atoms_.size(); }
  bool empty() const noexcept { return atoms_.empty(); }
  double totalVariation() const;

  SignedDiscreteMeasure operator+(const SignedDiscreteMeasure &o) const;
  SignedDiscreteMeasure operator*(double a) const;

private:
  std::vector<Atom> atoms_;
};

/// Nonnegative atomic measure. Directions closer than kMergeAngle are merged
/// into one atom carrying the summed weight.
class DiscreteMeasure {
public:
  static constexpr double kMergeAngle = 1e-9;

  DiscreteMeasure() = default;
  explicit DiscreteMeasure(const std::vector<Atom> &atoms);

  const std::vector<Atom> &atoms() const noexcept { return atoms_; }
  std::size_t size() const noexcept { return atoms_.size(); }
  bool empty() const noexcept { return atoms_.empty(); }
  double totalMass() const;

  /// Weight of the atom within kMergeAngle of n, 0 if none.
  double weightAt(const UnitVector &n) const;

  DiscreteMeasure operator+(const DiscreteMeasure &o) const;
  DiscreteMeasure scaled(double a) const;
  SignedDiscreteMeasure asSigned() const { return SignedDiscreteMeasure(atoms_); }

private:
  std::vector<Atom> atoms_;
};

struct AlexandrovReport {
  double closureResidual = 0.0;    ///< |Σ wᵢ nᵢ| / Σ wᵢ
  double smallestEigenvalue = 0.0; ///< of Σ wᵢ nᵢnᵢᵀ / Σ wᵢ
  bool planeConcentration = false; ///< all mass on one great circle
};

inline constexpr double kPlaneConcentrationTol = 1e-10;

/// Conditions (a), (b) characterizing surface measures. Throws on empty input.
AlexandrovReport checkAlexandrov(const DiscreteMeasure &mu, double tol = kPlaneConcentrationTol);

/// Per-bin masses of a measure on a SphericalPartition, together with the
/// per-bin first moments Σ w n of the mass routed into each bin.
class BinnedMeasure {
public:
  explicit BinnedMeasure(SphericalPartition partition);
  BinnedMeasure(SphericalPartition partition, std::vector<double> masses, std::vector<Vec3> moments);

  const SphericalPartition &partition() const noexcept { return partition_; }
  const std::vector<double> &masses() const noexcept { return masses_; }
  const std::vector<Vec3> &moments() const noexcept { return moments_; }
  std::size_t size() const noexcept { return masses_.size(); }
  double mass(std::size_t bin) const { return masses_[bin]; }

  void add(const UnitVector &n, double w);
  void addToBin(std::size_t bin, double w, const Vec3 &moment);

  double totalMass() const;
  double totalVariation() const;
  Vec3 firstMoment() const;
  bool isNonnegative() const;

  /// Mean normal of the bin: normalized first moment, or the bin center when
  /// the moment vanishes.
  UnitVector meanNormal(std::size_t bin) const;

  BinnedMeasure operator+(const BinnedMeasure &o) const;
  BinnedMeasure operator-(const BinnedMeasure &o) const;
  BinnedMeasure operator*(double a) const;

private:
  void requireSamePartition(const BinnedMeasure &o) const;

  SphericalPartition partition_;
  std::vector<double> masses_;
  std::vector<Vec3> moments_;
};

/// Signed measures share the binned representation; masses may be negative.
using SignedBinnedMeasure = BinnedMeasure;

/// μ₀ + s·Δ bin by bin. Throws on partition mismatch.
BinnedMeasure combine(const BinnedMeasure &mu0, const SignedBinnedMeasure &delta, double s);

/// Routes every atom to its bin; total mass is conserved.
BinnedMeasure binMeasure(const DiscreteMeasure &mu, const SphericalPartition &partition);
BinnedMeasure binMeasure(const SignedDiscreteMeasure &mu, const SphericalPartition &partition);

} // namespace surfmeas
