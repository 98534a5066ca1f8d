#pragma once

#include "surfmeas/capbody.hpp"

#include <Eigen/Dense>

namespace surfmeas {

/// θ(t) = amplitude·exp(1 − 1/(1−u²)), u = (t − center)/width, zero for |u| ≥ 1.
struct BumpShape {
  double center = 0.45;
  double width = 0.3;
  double amplitude = 0.5;

  double value(double t) const;
  double derivative(double t) const;
};

struct AdmissibleModulation {
  BumpShape shape; ///< amplitude is the accepted (possibly halved) one
  double requestedAmplitude = 0.0;
  int halvings = 0;
  double T = 0.0;
  double c = 0.0;            ///< c(T)
  std::vector<double> theta; ///< θ on the profile's t grid

  double eta(double t, double s) const { return std::sqrt(1.0 + s * shape.value(t)); }
  /// max over [0, T] of |d/dt ½ ln(1 ± θ)|, dense sampling.
  double logSlope() const;
};

/// c(T) = min(γ(T)/(2 diam), ln(|OB′|/|OB|)/T · (1 − 1e−9)).
/// Throws InvalidInput("degenerate profile") if γ(T) ≤ 0.
double lemma7Constant(const CylindricalProfile &p, double T);

/// Builds the bump modulation, halving the amplitude until |½ ln(1 ± θ)|′ ≤ c(T)
/// and the family stays admissible for every s ∈ [−1, 1].
AdmissibleModulation makeModulation(const BumpShape &shape, double T, const CylindricalProfile &p);

/// γ̃(τ) = min(c e^{−cT} min_φ r(T, φ), e^{−cT} γ(τ)).
double gammaTilde(const AdmissibleModulation &mod, const CylindricalProfile &p, double tau);

/// α̃(tⱼ) = ∫₀^{tⱼ} η(ξ, s) dα(ξ); α piecewise linear between nodes, η
/// integrated by 5-point Gauss–Legendre per cell. Throws
/// InvalidInput("admissibility breach") if α̃(1) ≥ |OB′|.
std::vector<double> tildeAlpha(const AdmissibleModulation &mod, const CylindricalProfile &p, double s);

/// Base profile, modulation and director measure Δ = ν_{C(1)} − ν_C.
class PerturbedFamily {
public:
  PerturbedFamily(CylindricalProfile base, AdmissibleModulation mod, SphericalPartition partition,
                  QuadratureOptions quadrature = {});

  const CylindricalProfile &base() const noexcept { return base_; }
  const AdmissibleModulation &modulation() const noexcept { return mod_; }
  const SphericalPartition &partition() const noexcept { return partition_; }
  const QuadratureOptions &quadrature() const noexcept { return quadrature_; }
  const SignedBinnedMeasure &director() const noexcept { return director_; }
  const BinnedMeasure &omegaPlus() const noexcept { return omegaPlus_; }
  const BinnedMeasure &baseMeasure() const noexcept { return baseMeasure_; }

  /// η²(tⱼ, s) = 1 + sθ(tⱼ).
  std::vector<double> weights(double s) const;
  /// ν_{C(s)} recomputed from the profile with m = η²(·, s), plus ν_C on Ω₊.
  BinnedMeasure measureAt(double s) const;
  /// r̃ = η r.
  Eigen::MatrixXd rTilde(double s) const;
  std::vector<double> alphaTilde(double s) const { return tildeAlpha(mod_, base_, s); }
  /// The perturbed profile: r̃, α̃, σ̃ = σ, σ̃_φ = σ_φ.
  CylindricalProfile profileAt(double s) const;

private:
  CylindricalProfile base_;
  AdmissibleModulation mod_;
  SphericalPartition partition_;
  QuadratureOptions quadrature_;
  SignedBinnedMeasure director_;
  BinnedMeasure omegaPlus_;
  BinnedMeasure baseMeasure_;
};

PerturbedFamily makeFamily(const CylindricalProfile &base, const BumpShape &shape, double T,
                           const SphericalPartition &partition, const QuadratureOptions &quadrature = {});

struct MeshOptions {
  int tNodes = 33;          ///< t rows sampled for K̃ₜ halfspaces
  int phiNodes = 64;        ///< φ columns sampled
  int plusDirections = 3000; ///< spiral directions tested for ∂₊C support planes
};

struct PerturbedBody {
  CylindricalProfile profile;
  Polytope mesh;
  std::vector<Vec3> supportPoints; ///< M̃ at the sampled nodes (world coordinates)
  std::vector<UnitVector> plusNormals;
  std::vector<double> plusOffsets;
};

/// Polytopal outer approximation of C(s). Throws InvalidInput for s ∉ [−1, 1].
PerturbedBody perturbBody(const PerturbedFamily &family, double s, const MeshOptions &opt = {});

/// Δ on the given partition: the profile quadrature with signed m = θ; exact zeros off Ω₋.
SignedBinnedMeasure directorMeasure(const PerturbedFamily &family, const SphericalPartition &partition);

struct SegmentReport {
  std::vector<double> s;
  std::vector<double> residual; ///< max_bin |ν_{C(s)} − ν_C − sΔ|
  std::vector<double> closure;  ///< |Σ n dν_{C(s)}|
  double totalMass = 0.0;
  double tolerance = 0.0;
  bool affineOK = false;
  double midpointResidual = 0.0;
  bool midpointOK = false;
  bool omegaPlusIdentical = false;
};

SegmentReport verifySegment(const PerturbedFamily &family, const std::vector<double> &sList,
                            double relTolerance = 1e-8);

/// Largest violation of the r̃/α̃ sandwich over all grid pairs and columns.
double lemma8Check(const PerturbedFamily &family, double s);

/// Largest r̃(tⱼ₊₁) − r̃(tⱼ) over all columns and s in the grid (negative = admissible).
double admissibilityMargin(const PerturbedFamily &family, const std::vector<double> &sGrid);

struct CurvatureCheck {
  double bound = 0.0;    ///< k̃(τ)
  double measured = 0.0; ///< max discrete curvature of M̃ chains on [τ, 1]
  bool ok() const { return measured <= bound; }
};
CurvatureCheck lemma10Check(const PerturbedFamily &family, double s, double tau);

struct RankReport {
  int rank = 0;
  Eigen::VectorXd singularValues;
};
/// Numerical rank of the bins × families director matrix.
RankReport rankProbe(const CylindricalProfile &base, const std::vector<BumpShape> &bumps, double T,
                     const SphericalPartition &partition, double relTolerance = 1e-8);

} // namespace surfmeas
