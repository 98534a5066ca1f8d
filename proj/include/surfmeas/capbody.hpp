#pragma once

#include "surfmeas/body.hpp"
#include "surfmeas/measures.hpp"

#include <functional>
#include <memory>
#include <vector>

namespace surfmeas {

/// Cone apex O and axis points B, B′. Local coordinates put O at the origin
/// and the axis along +x; (r, φ) are polar coordinates in the (e1, e2) plane.
struct SceneFrame {
  Vec3 O, B, Bprime;
  AxisFrame frame;
  double ob = 0.0;      ///< |OB|
  double obPrime = 0.0; ///< |OB′|

  /// Throws InvalidInput unless B, B′ lie on one ray from O with |OB| < |OB′|.
  static SceneFrame make(const Vec3 &O, const Vec3 &B, const Vec3 &Bprime);

  Vec3 toLocal(const Vec3 &world) const { return frame.toLocal(world - O); }
  Vec3 toWorld(const Vec3 &local) const { return O + frame.toWorld(local); }
  /// World point with axial coordinate x and polar coordinates (r, φ).
  Vec3 point(double x, double r, double phi) const {
    return toWorld(Vec3(x, r * std::cos(phi), r * std::sin(phi)));
  }
};

/// Open segment (O, B) outside the body, [B, B′] inside.
void validateScene(const SceneFrame &scene, const BodyModel &body);

/// α(t): C¹, increasing, α(0) = 0, α(1) = |OB|.
struct AlphaSpec {
  std::function<double(double)> value;
  std::function<double(double)> derivative;
  static AlphaSpec linear(double ob);
};

/// n equally spaced nodes on [0, 1].
std::vector<double> uniformTGrid(int nodes);

class SectionSet;

struct CylindricalProfile {
  SceneFrame scene;
  std::shared_ptr<const BodyModel> body;
  std::vector<double> t;          ///< t₀ = 0 < … < t_N = 1
  std::vector<double> phi;        ///< uniform on [0, 2π)
  std::vector<double> alpha;      ///< α(tⱼ)
  std::vector<double> alphaPrime; ///< α′(tⱼ)
  Eigen::MatrixXd r;              ///< r(tⱼ, φₖ)
  Eigen::MatrixXd sigma;          ///< σ(tⱼ, φₖ)
  Eigen::MatrixXd sigmaPhi;       ///< ∂σ/∂φ, central periodic differences
  Eigen::MatrixXd xTangent;       ///< axial coordinate of M_{t,φ}
  double diam = 0.0;
  std::shared_ptr<const SectionSet> sections;

  std::size_t nt() const noexcept { return t.size(); }
  std::size_t nphi() const noexcept { return phi.size(); }
  double dphi() const noexcept { return 2.0 * kPi / static_cast<double>(phi.size()); }

  /// Max |x(M_{t,φ}) − σ r − α| over the grid.
  double supportIdentityResidual() const;
  /// Curvature bound k(τ) of the lower arcs between M_{τ,φ} and the axis.
  double curvatureBound(double tau) const;
  /// x-coordinate of the lower boundary curve of the section at φₖ at radius r.
  double lowerX(std::size_t k, double r) const;
  /// r(τ, φₖ) by linear interpolation in t.
  double rAt(double tau, std::size_t k) const;
};

/// Per-(t, φ) support rays from Bₜ = (α(t), 0, 0) to the sections.
/// Throws InvalidInput("tangency violation at φ=…") when a support ray only
/// touches at the axis for t < 1, and InvalidInput("invalid body…") for
/// non-convex input.
struct ProfileOptions {
  /// Use boundary sampling (membership bisection) even where a closed form
  /// or exact polygon section exists.
  bool forceSampled = false;
  int sectionSamples = 2048;
};

CylindricalProfile buildProfile(const BodyModel &body, const SceneFrame &scene, const std::vector<double> &tGrid,
                                int phiCount, const AlphaSpec &alpha, const ProfileOptions &options = {});
CylindricalProfile buildProfile(const BodyModel &body, const SceneFrame &scene, int tNodes, int phiCount);

struct ProfileConditions {
  bool tangencyOK = false;
  double k = 0.0;           ///< k(τ)
  double gamma = 0.0;       ///< γ(τ)
  double maxSigma = 0.0;    ///< c = max |σ|
  double minAlphaPrime = 0.0;
};
ProfileConditions validateConditions(const CylindricalProfile &p, double tau);

/// Max over grid pairs t₁ < t₂ ≤ τ of r(t₂) − r(t₁) + γ (t₂ − t₁); ≤ 0 when
/// r decreases with slope at most −γ.
double lipschitzViolation(const CylindricalProfile &p, double tau, double gamma);

/// Largest violation of r(t₂)(σ₁−σ₂) ≤ α₂−α₁ ≤ r(t₁)(σ₁−σ₂) over grid pairs.
double sandwichViolation(const Eigen::MatrixXd &r, const Eigen::MatrixXd &sigma, const std::vector<double> &alpha);

struct MonotonicityReport {
  double rIncrease = 0.0;     ///< max r(tⱼ₊₁) − r(tⱼ), should be < 0
  double sigmaIncrease = 0.0; ///< max σ(tⱼ₊₁) − σ(tⱼ), should be ≤ 0
};
MonotonicityReport checkMonotonicity(const CylindricalProfile &p);

struct SigmaPhiResult {
  Eigen::MatrixXd sigmaPhi;
  double keyFormulaResidual = 0.0; ///< max |(1/r) ∂x/∂φ − ∂σ/∂φ|, t < 1
};
SigmaPhiResult sigmaPhiDerivative(const CylindricalProfile &p);

/// Outer normal of the circumscribed cone along the generator (σ, σ_φ, φ),
/// in the local frame (axis, e1, e2).
UnitVector coneNormal(double sigma, double sigmaPhi, double phi);
/// Same normal in world coordinates.
UnitVector coneNormalWorld(const CylindricalProfile &p, std::size_t j, std::size_t k);

enum class OmegaSide { Minus, Plus };

/// Ω₋ / Ω₊ split from the generators of the cone K with apex O.
class OmegaSplit {
public:
  explicit OmegaSplit(const CylindricalProfile &p);
  OmegaSide classify(const UnitVector &n) const;
  const std::vector<Vec3> &generators() const noexcept { return generators_; }

  enum class BinClass { Minus, Plus, Mixed };
  /// By 5×5 samples including the bin edges.
  BinClass classifyBin(const SphericalPartition &partition, std::size_t bin) const;

private:
  std::vector<Vec3> generators_; // unit, world coordinates
};
OmegaSide omegaClassify(const OmegaSplit &split, const UnitVector &n);

enum class StieltjesRule {
  Midpoint,     ///< σ, σ_φ interpolated at S×S/2 interior points per (t, φ) cell
  LeftEndpoint, ///< σ, σ_φ at the cell start
};

struct QuadratureOptions {
  StieltjesRule rule = StieltjesRule::Midpoint;
  int subSamples = 8;
  bool allowSigned = false; ///< accept negative increments (director measures)
};

/// Visits the quadrature atoms of ∫ √(1+σ²+σ_φ²) d(−½ m r²) dφ over Ω₋:
/// visit(worldNormal, weight). Throws InvalidInput("non-admissible
/// weighting") on a negative increment unless allowSigned.
void forEachProfileAtom(const CylindricalProfile &p, const std::vector<double> &m, const QuadratureOptions &opt,
                        const std::function<void(const UnitVector &, double)> &visit);

/// Binned ν over Ω₋ with per-t multiplier m (m ≡ 1 for ν_C).
BinnedMeasure measureFromProfile(const CylindricalProfile &p, const SphericalPartition &partition,
                                 const std::vector<double> &m, const QuadratureOptions &opt = {});
/// Atoms of the same quadrature (unmerged, signed).
SignedDiscreteMeasure profileAtoms(const CylindricalProfile &p, const std::vector<double> &m,
                                   const QuadratureOptions &opt = {});

/// ν_C restricted to Ω₊, from the body itself.
BinnedMeasure omegaPlusMeasure(const CylindricalProfile &p, const SphericalPartition &partition);
/// ν_C = profile part on Ω₋ + body part on Ω₊.
BinnedMeasure bodyMeasure(const CylindricalProfile &p, const SphericalPartition &partition,
                          const QuadratureOptions &opt = {});
std::vector<double> unitWeights(const CylindricalProfile &p);

} // namespace surfmeas
