#include "surfmeas/measures.hpp"

#include "surfmeas/errors.hpp"

#include <cmath>
#include <cstdint>
#include <unordered_map>

namespace surfmeas {

SignedDiscreteMeasure::SignedDiscreteMeasure(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  for (const auto &a : atoms_)
    if (!std::isfinite(a.w))
      throw InvalidInput("non-finite atom weight");
}

double SignedDiscreteMeasure::totalVariation() const {
  double tv = 0.0;
  for (const auto &a : atoms_)
    tv += std::abs(a.w);
  return tv;
}

SignedDiscreteMeasure SignedDiscreteMeasure::operator+(const SignedDiscreteMeasure &o) const {
  std::vector<Atom> all = atoms_;
  all.insert(all.end(), o.atoms_.begin(), o.atoms_.end());
  return SignedDiscreteMeasure(std::move(all));
}

SignedDiscreteMeasure SignedDiscreteMeasure::operator*(double a) const {
  std::vector<Atom> all = atoms_;
  for (auto &at : all)
    at.w *= a;
  return SignedDiscreteMeasure(std::move(all));
}

namespace {

// Spatial hash over direction coordinates; cells are a few times the merge
// radius so only the 27 neighbouring cells need checking.
struct DirectionIndex {
  static constexpr double kCell = 1e-8;

  static std::int64_t key(std::int64_t i, std::int64_t j, std::int64_t k) {
    return (i * 73856093) ^ (j * 19349663) ^ (k * 83492791);
  }
  static std::array<std::int64_t, 3> cellOf(const Vec3 &v) {
    return {static_cast<std::int64_t>(std::floor(v.x() / kCell)),
            static_cast<std::int64_t>(std::floor(v.y() / kCell)),
            static_cast<std::int64_t>(std::floor(v.z() / kCell))};
  }

  std::unordered_map<std::int64_t, std::vector<std::size_t>> cells;

  template <class Pred> long find(const Vec3 &v, Pred &&match) const {
    const auto c = cellOf(v);
    for (int di = -1; di <= 1; ++di)
      for (int dj = -1; dj <= 1; ++dj)
        for (int dk = -1; dk <= 1; ++dk) {
          auto it = cells.find(key(c[0] + di, c[1] + dj, c[2] + dk));
          if (it == cells.end())
            continue;
          for (std::size_t idx : it->second)
            if (match(idx))
              return static_cast<long>(idx);
        }
    return -1;
  }
  void insert(const Vec3 &v, std::size_t idx) {
    const auto c = cellOf(v);
    cells[key(c[0], c[1], c[2])].push_back(idx);
  }
};

std::vector<Atom> mergeAtoms(const std::vector<Atom> &in) {
  std::vector<Atom> out;
  out.reserve(in.size());
  DirectionIndex index;
  for (const auto &a : in) {
    if (!std::isfinite(a.w) || a.w < 0.0)
      throw InvalidInput("discrete measure weights must be finite and nonnegative");
    const long hit = index.find(a.n.vec(), [&](std::size_t idx) {
      return angleBetween(out[idx].n, a.n) <= DiscreteMeasure::kMergeAngle;
    });
    if (hit >= 0) {
      out[static_cast<std::size_t>(hit)].w += a.w;
    } else {
      index.insert(a.n.vec(), out.size());
      out.push_back(a);
    }
  }
  return out;
}

} // namespace

DiscreteMeasure::DiscreteMeasure(const std::vector<Atom> &atoms) : atoms_(mergeAtoms(atoms)) {}

double DiscreteMeasure::totalMass() const {
  double m = 0.0;
  for (const auto &a : atoms_)
    m += a.w;
  return m;
}

double DiscreteMeasure::weightAt(const UnitVector &n) const {
  for (const auto &a : atoms_)
    if (angleBetween(a.n, n) <= kMergeAngle)
      return a.w;
  return 0.0;
}

DiscreteMeasure DiscreteMeasure::operator+(const DiscreteMeasure &o) const {
  std::vector<Atom> all = atoms_;
  all.insert(all.end(), o.atoms_.begin(), o.atoms_.end());
  return DiscreteMeasure(all);
}

DiscreteMeasure DiscreteMeasure::scaled(double a) const {
  if (a < 0.0)
    throw InvalidInput("cannot scale a nonnegative measure by a negative factor");
  DiscreteMeasure out = *this;
  for (auto &at : out.atoms_)
    at.w *= a;
  return out;
}

AlexandrovReport checkAlexandrov(const DiscreteMeasure &mu, double tol) {
  if (mu.empty())
    throw InvalidInput("empty measure");
  Vec3 sum = Vec3::Zero();
  Mat3 second = Mat3::Zero();
  double mass = 0.0;
  for (const auto &a : mu.atoms()) {
    sum += a.w * a.n.vec();
    second += a.w * a.n.vec() * a.n.vec().transpose();
    mass += a.w;
  }
  if (!(mass > 0.0))
    throw InvalidInput("empty measure");
  AlexandrovReport rep;
  rep.closureResidual = sum.norm() / mass;
  Eigen::SelfAdjointEigenSolver<Mat3> eig(second / mass, Eigen::EigenvaluesOnly);
  rep.smallestEigenvalue = eig.eigenvalues()(0);
  rep.planeConcentration = rep.smallestEigenvalue < tol;
  return rep;
}

BinnedMeasure::BinnedMeasure(SphericalPartition partition)
    : partition_(std::move(partition)), masses_(partition_.size(), 0.0),
      moments_(partition_.size(), Vec3::Zero()) {}

BinnedMeasure::BinnedMeasure(SphericalPartition partition, std::vector<double> masses,
                             std::vector<Vec3> moments)
    : partition_(std::move(partition)), masses_(std::move(masses)), moments_(std::move(moments)) {
  if (masses_.size() != partition_.size())
    throw InvalidInput("mass count does not match the partition");
  if (moments_.empty()) {
    moments_.resize(masses_.size());
    for (std::size_t b = 0; b < masses_.size(); ++b)
      moments_[b] = masses_[b] * partition_.center(b).vec();
  }
  if (moments_.size() != masses_.size())
    throw InvalidInput("moment count does not match the partition");
  for (double m : masses_)
    if (!std::isfinite(m))
      throw InvalidInput("non-finite bin mass");
}

void BinnedMeasure::add(const UnitVector &n, double w) { addToBin(partition_.binOf(n), w, w * n.vec()); }

void BinnedMeasure::addToBin(std::size_t bin, double w, const Vec3 &moment) {
  masses_[bin] += w;
  moments_[bin] += moment;
}

double BinnedMeasure::totalMass() const {
  double m = 0.0;
  for (double x : masses_)
    m += x;
  return m;
}

double BinnedMeasure::totalVariation() const {
  double m = 0.0;
  for (double x : masses_)
    m += std::abs(x);
  return m;
}

Vec3 BinnedMeasure::firstMoment() const {
  Vec3 s = Vec3::Zero();
  for (const auto &m : moments_)
    s += m;
  return s;
}

bool BinnedMeasure::isNonnegative() const {
  for (double x : masses_)
    if (x < 0.0)
      return false;
  return true;
}

UnitVector BinnedMeasure::meanNormal(std::size_t bin) const {
  const Vec3 &m = moments_[bin];
  const double scale = std::abs(masses_[bin]);
  if (m.norm() > 1e-14 * std::max(scale, 1e-300) && m.norm() > 0.0) {
    // a negative-mass bin routes its moment reversed; orient by mass sign
    return UnitVector(masses_[bin] < 0.0 ? Vec3(-m) : m);
  }
  return partition_.center(bin);
}

void BinnedMeasure::requireSamePartition(const BinnedMeasure &o) const {
  if (!partition_.sameAs(o.partition_))
    throw InvalidInput("partition mismatch");
}

BinnedMeasure BinnedMeasure::operator+(const BinnedMeasure &o) const {
  requireSamePartition(o);
  BinnedMeasure r = *this;
  for (std::size_t b = 0; b < size(); ++b) {
    r.masses_[b] += o.masses_[b];
    r.moments_[b] += o.moments_[b];
  }
  return r;
}

BinnedMeasure BinnedMeasure::operator-(const BinnedMeasure &o) const { return *this + o * -1.0; }

BinnedMeasure BinnedMeasure::operator*(double a) const {
  BinnedMeasure r = *this;
  for (std::size_t b = 0; b < size(); ++b) {
    r.masses_[b] *= a;
    r.moments_[b] *= a;
  }
  return r;
}

BinnedMeasure combine(const BinnedMeasure &mu0, const SignedBinnedMeasure &delta, double s) {
  if (!mu0.partition().sameAs(delta.partition()))
    throw InvalidInput("partition mismatch");
  std::vector<double> masses(mu0.size());
  std::vector<Vec3> moments(mu0.size());
  for (std::size_t b = 0; b < mu0.size(); ++b) {
    masses[b] = mu0.mass(b) + s * delta.mass(b);
    moments[b] = mu0.moments()[b] + s * delta.moments()[b];
  }
  return BinnedMeasure(mu0.partition(), std::move(masses), std::move(moments));
}

BinnedMeasure binMeasure(const DiscreteMeasure &mu, const SphericalPartition &partition) {
  BinnedMeasure out(partition);
  for (const auto &a : mu.atoms())
    out.add(a.n, a.w);
  return out;
}

BinnedMeasure binMeasure(const SignedDiscreteMeasure &mu, const SphericalPartition &partition) {
  BinnedMeasure out(partition);
  for (const auto &a : mu.atoms())
    out.add(a.n, a.w);
  return out;
}

} // namespace surfmeas
