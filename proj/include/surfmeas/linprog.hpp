#pragma once

#include "surfmeas/geometry.hpp"

#include <span>

namespace surfmeas {

struct ChebyshevCenter {
  enum class Status { Optimal, Unbounded };
  Status status = Status::Optimal;
  Vec3 center = Vec3::Zero();
  double radius = 0.0; ///< maxₓ minⱼ (hⱼ − ⟨x, nⱼ⟩); negative when infeasible
};

/// Solves max t s.t. ⟨nⱼ, x⟩ + t ≤ hⱼ through its 4-row dual
///   min Σ hⱼ yⱼ  s.t.  Σ yⱼ nⱼ = 0, Σ yⱼ = 1, y ≥ 0
/// with a two-phase revised simplex. Status::Unbounded means the dual is
/// infeasible (0 ∉ conv{nⱼ}), i.e. the region has unbounded inradius.
ChebyshevCenter chebyshevCenter(std::span<const Vec3> normals, std::span<const double> offsets);

} // namespace surfmeas
