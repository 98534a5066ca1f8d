#pragma once

#include "surfmeas/measures.hpp"
#include "surfmeas/polytope.hpp"

#include <cstdint>
#include <optional>

namespace surfmeas {

enum class ReconstructionSolver {
  Newton,           ///< damped Newton on w·h − log V(h)
  SupportIteration, ///< multiplicative hⱼ ← hⱼ (Aⱼ/wⱼ)^(damping/2), areas normalized
};

struct ReconstructionSettings {
  double areaTolerance = 1e-8; ///< relative L1 area residual
  int maxIterations = 10000;
  double damping = 0.5;        ///< exponent scale of the multiplicative scheme
  ReconstructionSolver solver = ReconstructionSolver::Newton;
  /// Perturbs the starting support numbers (hⱼ = 1 otherwise).
  std::optional<std::uint64_t> randomSeed;

  void validate() const;
};

struct ReconstructionInfo {
  int iterations = 0;
  double residual = 0.0;
};

/// Polytope whose facet normals are the atom directions and whose facet areas
/// are the weights, translated so its centroid is the origin.
/// Throws InvalidInput("not a valid surface measure") if μ fails conditions
/// (a)/(b) or has fewer than 4 atoms, NoConvergence("no convergence") when the
/// tolerance is not reached.
Polytope reconstruct(const DiscreteMeasure &mu, const ReconstructionSettings &settings = {},
                     ReconstructionInfo *info = nullptr);

/// reconstruct(ν_P + ν_Q).
Polytope blaschkeSum(const Polytope &p, const Polytope &q, const ReconstructionSettings &settings = {});

/// Relative L1 distance Σ|ν_P(nᵢ) − wᵢ| / Σ wᵢ over the atoms of μ, plus any
/// facet mass of P on directions absent from μ.
double measureResidual(const Polytope &p, const DiscreteMeasure &mu);

/// Hausdorff distance after moving both centroids to the origin.
double distanceUpToTranslation(const Polytope &a, const Polytope &b);

} // namespace surfmeas
