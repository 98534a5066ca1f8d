#include "surfmeas/perturb.hpp"

#include "surfmeas/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace surfmeas {

namespace {

constexpr int kMaxHalvings = 60;

// 5-point Gauss–Legendre on [−1, 1]
constexpr double kGLx[5] = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                            0.9061798459386640};
constexpr double kGLw[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889, 0.4786286704993665,
                            0.2369268850561891};

double supportValue(const BodyModel &body, const Vec3 &n, const Polytope *mesh) {
  if (const auto *b = std::get_if<Ball>(&body))
    return n.dot(b->center) + b->radius;
  if (const auto *e = std::get_if<Ellipsoid>(&body))
    return n.dot(e->center) + e->semiAxes.cwiseProduct(n).norm();
  const Polytope &P = std::holds_alternative<Polytope>(body) ? std::get<Polytope>(body) : *mesh;
  double h = -std::numeric_limits<double>::infinity();
  for (const auto &v : P.vertices())
    h = std::max(h, n.dot(v));
  return h;
}

std::vector<std::size_t> sampleIndices(std::size_t count, std::size_t nodes, bool periodic) {
  std::vector<std::size_t> idx;
  const std::size_t n = std::max<std::size_t>(2, std::min(nodes, count));
  for (std::size_t i = 0; i < n; ++i) {
    const double pos = periodic ? double(i) * double(count) / double(n) : double(i) * double(count - 1) / double(n - 1);
    const auto j = static_cast<std::size_t>(std::lround(pos)) % (periodic ? count : count + 1);
    if (idx.empty() || idx.back() != j)
      idx.push_back(j);
  }
  return idx;
}

bool admissible(const AdmissibleModulation &mod, const CylindricalProfile &p) {
  for (int i = 0; i <= 20; ++i) {
    const double s = -1.0 + 0.1 * i;
    for (Eigen::Index k = 0; k < p.r.cols(); ++k)
      for (std::size_t j = 0; j + 1 < p.nt(); ++j) {
        const double a = mod.eta(p.t[j], s) * p.r(static_cast<Eigen::Index>(j), k);
        const double b = mod.eta(p.t[j + 1], s) * p.r(static_cast<Eigen::Index>(j + 1), k);
        if (!(b < a))
          return false;
      }
  }
  for (double s : {-1.0, 1.0}) {
    try {
      tildeAlpha(mod, p, s);
    } catch (const InvalidInput &) {
      return false;
    }
  }
  return true;
}

} // namespace

double BumpShape::value(double t) const {
  const double u = (t - center) / width;
  if (std::abs(u) >= 1.0)
    return 0.0;
  return amplitude * std::exp(1.0 - 1.0 / (1.0 - u * u));
}

double BumpShape::derivative(double t) const {
  const double u = (t - center) / width;
  if (std::abs(u) >= 1.0)
    return 0.0;
  const double q = 1.0 - u * u;
  return value(t) * (-2.0 * u / (q * q)) / width;
}

double AdmissibleModulation::logSlope() const {
  constexpr int kSamples = 20000;
  const double lo = std::max(0.0, shape.center - shape.width), hi = std::min(T, shape.center + shape.width);
  double worst = 0.0;
  for (int i = 0; i <= kSamples; ++i) {
    const double t = lo + (hi - lo) * i / kSamples;
    const double th = shape.value(t);
    worst = std::max(worst, std::abs(shape.derivative(t)) / (2.0 * (1.0 - std::abs(th))));
  }
  return worst;
}

double lemma7Constant(const CylindricalProfile &p, double T) {
  if (!(T > 0.0 && T < 1.0))
    throw InvalidInput("T must lie in (0, 1)");
  const double gamma = validateConditions(p, T).gamma;
  if (!(gamma > 0.0))
    throw InvalidInput("degenerate profile");
  return std::min(gamma / (2.0 * p.diam), std::log(p.scene.obPrime / p.scene.ob) / T * (1.0 - 1e-9));
}

AdmissibleModulation makeModulation(const BumpShape &shape, double T, const CylindricalProfile &p) {
  if (!(std::abs(shape.amplitude) < 1.0))
    throw InvalidInput("bump amplitude must satisfy |amplitude| < 1");
  if (!(shape.width > 0.0))
    throw InvalidInput("bump width must be positive");
  if (!(T > 0.0 && T < 1.0))
    throw InvalidInput("T must lie in (0, 1)");
  if (shape.center - shape.width < 0.0 || shape.center + shape.width > T)
    throw InvalidInput("bump support must lie in [0, T]");

  AdmissibleModulation mod;
  mod.shape = shape;
  mod.requestedAmplitude = shape.amplitude;
  mod.T = T;
  mod.c = lemma7Constant(p, T);
  while (mod.shape.amplitude != 0.0 && !(mod.logSlope() <= mod.c && admissible(mod, p))) {
    if (++mod.halvings > kMaxHalvings)
      throw InvalidInput("admissibility breach");
    mod.shape.amplitude *= 0.5;
  }
  mod.theta.resize(p.nt());
  for (std::size_t j = 0; j < p.nt(); ++j)
    mod.theta[j] = mod.shape.value(p.t[j]);
  return mod;
}

double gammaTilde(const AdmissibleModulation &mod, const CylindricalProfile &p, double tau) {
  double minR = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < p.nphi(); ++k)
    minR = std::min(minR, p.rAt(mod.T, k));
  const double decay = std::exp(-mod.c * mod.T);
  return std::min(mod.c * decay * minR, decay * validateConditions(p, tau).gamma);
}

std::vector<double> tildeAlpha(const AdmissibleModulation &mod, const CylindricalProfile &p, double s) {
  // α plus the accumulated excess ∫ (η − 1) dα, so that η ≡ 1 returns α exactly
  std::vector<double> out(p.alpha);
  double excess = 0.0;
  for (std::size_t j = 0; j + 1 < p.nt(); ++j) {
    const double a = p.t[j], b = p.t[j + 1];
    double mean = 0.0;
    for (int q = 0; q < 5; ++q)
      mean += 0.5 * kGLw[q] * (mod.eta(0.5 * (a + b) + 0.5 * (b - a) * kGLx[q], s) - 1.0);
    excess += mean * (p.alpha[j + 1] - p.alpha[j]);
    out[j + 1] += excess;
  }
  if (!(out.back() < p.scene.obPrime))
    throw InvalidInput("admissibility breach");
  return out;
}

// ---------------------------------------------------------------------------

PerturbedFamily::PerturbedFamily(CylindricalProfile base, AdmissibleModulation mod, SphericalPartition partition,
                                 QuadratureOptions quadrature)
    : base_(std::move(base)), mod_(std::move(mod)), partition_(std::move(partition)), quadrature_(quadrature),
      director_(partition_), omegaPlus_(partition_), baseMeasure_(partition_) {
  if (mod_.theta.size() != base_.nt())
    throw InvalidInput("modulation does not match the profile grid");
  director_ = directorMeasure(*this, partition_);
  omegaPlus_ = omegaPlusMeasure(base_, partition_);
  baseMeasure_ = measureFromProfile(base_, partition_, unitWeights(base_), quadrature_) + omegaPlus_;
}

std::vector<double> PerturbedFamily::weights(double s) const {
  std::vector<double> m(mod_.theta.size());
  for (std::size_t j = 0; j < m.size(); ++j)
    m[j] = 1.0 + s * mod_.theta[j];
  return m;
}

BinnedMeasure PerturbedFamily::measureAt(double s) const {
  return measureFromProfile(base_, partition_, weights(s), quadrature_) + omegaPlus_;
}

Eigen::MatrixXd PerturbedFamily::rTilde(double s) const {
  Eigen::MatrixXd r = base_.r;
  for (std::size_t j = 0; j < base_.nt(); ++j)
    r.row(static_cast<Eigen::Index>(j)) *= std::sqrt(1.0 + s * mod_.theta[j]);
  return r;
}

CylindricalProfile PerturbedFamily::profileAt(double s) const {
  CylindricalProfile p = base_;
  p.r = rTilde(s);
  p.alpha = alphaTilde(s);
  for (std::size_t j = 0; j < p.nt(); ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    p.alphaPrime[j] = std::sqrt(1.0 + s * mod_.theta[j]) * base_.alphaPrime[j];
    p.xTangent.row(jj) = (p.sigma.row(jj).array() * p.r.row(jj).array() + p.alpha[j]).matrix();
  }
  p.sections.reset(); // section curves belong to the base body only
  return p;
}

PerturbedFamily makeFamily(const CylindricalProfile &base, const BumpShape &shape, double T,
                           const SphericalPartition &partition, const QuadratureOptions &quadrature) {
  return PerturbedFamily(base, makeModulation(shape, T, base), partition, quadrature);
}

// ---------------------------------------------------------------------------

PerturbedBody perturbBody(const PerturbedFamily &family, double s, const MeshOptions &opt) {
  if (!(s >= -1.0 && s <= 1.0))
    throw InvalidInput("s must lie in [-1, 1]");
  if (opt.tNodes < 2 || opt.phiNodes < 3 || opt.plusDirections < 0)
    throw InvalidInput("invalid mesh options");
  PerturbedBody out{family.profileAt(s), Polytope(), {}, {}, {}};
  const CylindricalProfile &p = out.profile;

  std::vector<UnitVector> normals;
  std::vector<double> offsets;
  for (std::size_t j : sampleIndices(p.nt(), static_cast<std::size_t>(opt.tNodes), false))
    for (std::size_t k : sampleIndices(p.nphi(), static_cast<std::size_t>(opt.phiNodes), true)) {
      const auto jj = static_cast<Eigen::Index>(j), kk = static_cast<Eigen::Index>(k);
      const Vec3 m = p.scene.point(p.xTangent(jj, kk), p.r(jj, kk), p.phi[k]);
      const UnitVector n = coneNormalWorld(p, j, k);
      normals.push_back(n);
      offsets.push_back(n.dot(m));
      out.supportPoints.push_back(m);
    }

  // ∂₊C is untouched: its support planes come from the base body
  const BodyModel &body = *family.base().body;
  const OmegaSplit split(family.base());
  if (const auto *P = std::get_if<Polytope>(&body)) {
    for (std::size_t f = 0; f < P->facets().size(); ++f)
      if (split.classify(P->facetNormals()[f]) == OmegaSide::Plus) {
        out.plusNormals.push_back(P->facetNormals()[f]);
        out.plusOffsets.push_back(P->facetOffsets()[f]);
      }
  } else {
    std::optional<Polytope> mesh;
    if (std::holds_alternative<GraphBody>(body))
      mesh = bodyMesh(body);
    for (const auto &n : spiralDirections(opt.plusDirections))
      if (split.classify(n) == OmegaSide::Plus) {
        out.plusNormals.push_back(n);
        out.plusOffsets.push_back(supportValue(body, n.vec(), mesh ? &*mesh : nullptr));
      }
  }
  normals.insert(normals.end(), out.plusNormals.begin(), out.plusNormals.end());
  offsets.insert(offsets.end(), out.plusOffsets.begin(), out.plusOffsets.end());
  out.mesh = halfspaceIntersection(HalfspaceSystem(normals, offsets));
  return out;
}

SignedBinnedMeasure directorMeasure(const PerturbedFamily &family, const SphericalPartition &partition) {
  QuadratureOptions q = family.quadrature();
  q.allowSigned = true;
  return measureFromProfile(family.base(), partition, family.modulation().theta, q);
}

SegmentReport verifySegment(const PerturbedFamily &family, const std::vector<double> &sList, double relTolerance) {
  SegmentReport rep;
  const BinnedMeasure &mu0 = family.baseMeasure();
  const SignedBinnedMeasure &delta = family.director();
  rep.totalMass = mu0.totalMass();
  rep.tolerance = relTolerance * rep.totalMass;
  rep.omegaPlusIdentical = true;

  const OmegaSplit split(family.base());
  std::vector<bool> plusBin(family.partition().size());
  for (std::size_t b = 0; b < plusBin.size(); ++b)
    plusBin[b] = split.classifyBin(family.partition(), b) == OmegaSplit::BinClass::Plus;

  rep.affineOK = true;
  for (double s : sList) {
    if (!(s >= -1.0 && s <= 1.0))
      throw InvalidInput("s must lie in [-1, 1]");
    const BinnedMeasure mu = family.measureAt(s);
    double res = 0.0;
    for (std::size_t b = 0; b < mu.size(); ++b) {
      res = std::max(res, std::abs(mu.mass(b) - mu0.mass(b) - s * delta.mass(b)));
      if (plusBin[b] && mu.mass(b) != mu0.mass(b))
        rep.omegaPlusIdentical = false;
    }
    rep.s.push_back(s);
    rep.residual.push_back(res);
    rep.closure.push_back(mu.firstMoment().norm());
    if (!(res <= rep.tolerance))
      rep.affineOK = false;
  }

  const BinnedMeasure lo = family.measureAt(-1.0), hi = family.measureAt(1.0);
  for (std::size_t b = 0; b < mu0.size(); ++b)
    rep.midpointResidual = std::max(rep.midpointResidual, std::abs(mu0.mass(b) - 0.5 * (lo.mass(b) + hi.mass(b))));
  rep.midpointOK = rep.midpointResidual <= rep.tolerance;
  return rep;
}

double lemma8Check(const PerturbedFamily &family, double s) {
  return sandwichViolation(family.rTilde(s), family.base().sigma, family.alphaTilde(s));
}

double admissibilityMargin(const PerturbedFamily &family, const std::vector<double> &sGrid) {
  double worst = -std::numeric_limits<double>::infinity();
  for (double s : sGrid) {
    const Eigen::MatrixXd r = family.rTilde(s);
    for (Eigen::Index j = 0; j + 1 < r.rows(); ++j)
      worst = std::max(worst, (r.row(j + 1) - r.row(j)).maxCoeff());
  }
  return worst;
}

CurvatureCheck lemma10Check(const PerturbedFamily &family, double s, double tau) {
  const CylindricalProfile &base = family.base();
  const AdmissibleModulation &mod = family.modulation();
  const CylindricalProfile p = family.profileAt(s);
  CurvatureCheck out;

  double minR = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < base.nphi(); ++k)
    minR = std::min(minR, mod.eta(tau, s) * base.rAt(tau, k));
  const double maxAlphaPrime = *std::max_element(base.alphaPrime.begin(), base.alphaPrime.end());
  out.bound = maxAlphaPrime / (gammaTilde(mod, base, tau) * minR);

  const auto first = static_cast<std::size_t>(std::lower_bound(p.t.begin(), p.t.end(), tau) - p.t.begin());
  for (Eigen::Index k = 0; k < p.r.cols(); ++k)
    for (std::size_t j = first; j + 1 < p.nt(); ++j) {
      const auto a = static_cast<Eigen::Index>(j), b = a + 1;
      const double chord = std::hypot(p.xTangent(b, k) - p.xTangent(a, k), p.r(b, k) - p.r(a, k));
      if (chord <= 0.0)
        continue;
      // the support ray of inverse slope σ is tangent to the section at M̃
      const double turn = std::abs(std::atan2(1.0, p.sigma(b, k)) - std::atan2(1.0, p.sigma(a, k)));
      out.measured = std::max(out.measured, turn / chord);
    }
  return out;
}

RankReport rankProbe(const CylindricalProfile &base, const std::vector<BumpShape> &bumps, double T,
                     const SphericalPartition &partition, double relTolerance) {
  Eigen::MatrixXd D(static_cast<Eigen::Index>(partition.size()), static_cast<Eigen::Index>(bumps.size()));
  QuadratureOptions q;
  q.allowSigned = true;
  for (std::size_t i = 0; i < bumps.size(); ++i) {
    const auto mod = makeModulation(bumps[i], T, base);
    const auto delta = measureFromProfile(base, partition, mod.theta, q);
    for (std::size_t b = 0; b < partition.size(); ++b)
      D(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(i)) = delta.mass(b);
  }
  RankReport out;
  if (bumps.empty())
    return out;
  out.singularValues = Eigen::JacobiSVD<Eigen::MatrixXd>(D).singularValues();
  const double top = out.singularValues[0];
  for (Eigen::Index i = 0; i < out.singularValues.size(); ++i)
    if (out.singularValues[i] > relTolerance * top)
      ++out.rank;
  return out;
}

} // namespace surfmeas
