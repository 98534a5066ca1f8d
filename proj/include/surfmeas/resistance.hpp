#pragma once

#include "surfmeas/graph_body.hpp"
#include "surfmeas/measures.hpp"
#include "surfmeas/perturb.hpp"

#include <cstdint>
#include <functional>
#include <string>

namespace surfmeas {

/// ⟨n, e₃⟩₊³
double newtonDrag(const UnitVector &n);

struct DirectionFunctional {
  std::string name;
  std::function<double(const UnitVector &)> evaluate;
  double bound = 1.0; ///< sup |evaluate|
};

DirectionFunctional newtonDragFunctional();
DirectionFunctional constantFunctional(double value = 1.0);
/// Σᵢ aᵢ cos(bᵢ·n + cᵢ), four random terms; bounded by Σ |aᵢ|.
DirectionFunctional randomFunctional(std::uint64_t seed);
/// Lookup by CLI name: "newton", "one", "random:<seed>".
DirectionFunctional functionalByName(const std::string &name);

double functional(const DiscreteMeasure &mu, const DirectionFunctional &f);
double functional(const SignedDiscreteMeasure &mu, const DirectionFunctional &f);
/// Σ_bins f(mean normal) · mass; empty bins are skipped.
double functional(const BinnedMeasure &mu, const DirectionFunctional &f);

struct GraphQuadrature {
  double value = 0.0;
  int cells = 0;           ///< grid cells per side
  int supersample = 0;     ///< per-side samples for boundary-cell coverage
  double coveredArea = 0.0; ///< quadrature area of the disk
};

/// ∫∫_{x²+y²≤1} 1/(1 + |∇u|²) dx dy on the body's grid; ∇u at cell centers by
/// central differences of the four corner heights.
GraphQuadrature graphResistanceDetailed(const GraphBody &b, int supersample = 8);
double graphResistance(const GraphBody &b);

struct AffineReport {
  std::vector<double> s;
  std::vector<double> values;
  double slope = 0.0;
  double intercept = 0.0;
  double maxResidual = 0.0; ///< max |value − fit|
  double reference = 0.0;   ///< |𝓕(ν_C)|
  bool ok = false;          ///< maxResidual ≤ relTolerance · reference
};

/// 𝓕(ν_{C(s)}) on the profile atoms (exactly linear in s) plus the fixed Ω₊
/// part, with a least-squares affine fit over sList.
AffineReport affineCheck(const PerturbedFamily &family, const DirectionFunctional &f, const std::vector<double> &sList,
                         double relTolerance = 1e-8);

} // namespace surfmeas
