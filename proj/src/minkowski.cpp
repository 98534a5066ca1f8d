#include "surfmeas/minkowski.hpp"

#include "surfmeas/errors.hpp"

#include <cstdint>
#include <limits>
#include <random>
#include <unordered_map>

namespace surfmeas {

void ReconstructionSettings::validate() const {
  if (!(areaTolerance > 0.0))
    throw InvalidInput("areaTolerance must be positive");
  if (!(damping > 0.0 && damping <= 1.0))
    throw InvalidInput("damping must lie in (0, 1]");
  if (maxIterations < 1)
    throw InvalidInput("maxIterations must be at least 1");
}

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct State {
  bool ok = false;
  Polytope poly;
  VectorXd area;   // per atom, 0 for vanished facets
  double volume = 0.0;
  MatrixXd jac;    // ∂Aᵢ/∂hⱼ
};

State evaluate(const std::vector<UnitVector> &normals, const VectorXd &h, bool withJacobian) {
  State s;
  const std::size_t m = normals.size();
  s.area = VectorXd::Zero(static_cast<Eigen::Index>(m));
  HalfspaceResult res;
  try {
    res = halfspaceIntersectionDetailed(HalfspaceSystem(normals, std::vector<double>(h.data(), h.data() + h.size())));
  } catch (const InvalidInput &) {
    return s;
  }
  s.poly = std::move(res.polytope);
  s.volume = s.poly.volume();
  if (!(s.volume > 0.0))
    return s;
  for (std::size_t f = 0; f < s.poly.facetCount(); ++f)
    s.area[res.sourcePlane[f]] += s.poly.facetAreas()[f];
  s.ok = true;
  if (!withJacobian)
    return s;

  s.jac = MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  std::unordered_map<std::uint64_t, int> owner;
  const auto &facets = s.poly.facets();
  auto key = [](int a, int b) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) | static_cast<std::uint32_t>(b);
  };
  for (std::size_t f = 0; f < facets.size(); ++f)
    for (std::size_t k = 0; k < facets[f].size(); ++k)
      owner[key(facets[f][k], facets[f][(k + 1) % facets[f].size()])] = static_cast<int>(f);
  const auto &verts = s.poly.vertices();
  for (std::size_t f = 0; f < facets.size(); ++f) {
    const int i = res.sourcePlane[f];
    for (std::size_t k = 0; k < facets[f].size(); ++k) {
      const int a = facets[f][k], b = facets[f][(k + 1) % facets[f].size()];
      auto it = owner.find(key(b, a));
      if (it == owner.end())
        continue;
      const int j = res.sourcePlane[it->second];
      const Vec3 &ni = normals[i].vec();
      const Vec3 &nj = normals[j].vec();
      const double sinT = ni.cross(nj).norm();
      if (sinT <= 1e-14)
        continue;
      const double len = (verts[a] - verts[b]).norm();
      s.jac(i, j) += len / sinT;
      s.jac(i, i) -= len * ni.dot(nj) / sinT;
    }
  }
  return s;
}

double areaResidual(const VectorXd &area, const VectorXd &w) {
  const double total = area.sum();
  if (!(total > 0.0))
    return std::numeric_limits<double>::infinity();
  return (area * (w.sum() / total) - w).lpNorm<1>() / w.sum();
}

double objective(const State &s, const VectorXd &w, const VectorXd &h) {
  if (!s.ok)
    return std::numeric_limits<double>::infinity();
  return w.dot(h) - std::log(s.volume);
}

VectorXd newtonSolve(const std::vector<UnitVector> &normals, const VectorXd &w, VectorXd h,
                     const ReconstructionSettings &settings, ReconstructionInfo &info) {
  const Eigen::Index m = w.size();
  MatrixXd nmat(m, 3);
  for (Eigen::Index j = 0; j < m; ++j)
    nmat.row(j) = normals[j].vec().transpose();
  // projector onto translations h ↦ h + N t
  const MatrixXd proj = nmat * (nmat.transpose() * nmat).inverse() * nmat.transpose();
  const MatrixXd eye = MatrixXd::Identity(m, m);

  State s = evaluate(normals, h, true);
  if (!s.ok)
    throw NoConvergence("no convergence", std::numeric_limits<double>::infinity());
  double shift = 0.0;
  for (int it = 0; it < settings.maxIterations; ++it) {
    info.iterations = it;
    info.residual = areaResidual(s.area, w);
    if (info.residual <= settings.areaTolerance)
      return h;

    // Vanished facets: moving the plane onto the body leaves V unchanged and
    // lowers w·h; slightly past it when that lowers the objective further.
    if ((s.area.array() <= 0.0).any()) {
      VectorXd pulled = h;
      const double eps = 1e-3 * h.cwiseAbs().mean();
      for (Eigen::Index j = 0; j < m; ++j) {
        if (s.area[j] > 0.0)
          continue;
        double support = -std::numeric_limits<double>::infinity();
        for (const Vec3 &v : s.poly.vertices())
          support = std::max(support, normals[j].dot(v));
        if (support - eps < pulled[j])
          pulled[j] = support - eps;
      }
      State t = evaluate(normals, pulled, true);
      if (objective(t, w, pulled) < objective(s, w, h)) {
        h = pulled;
        s = std::move(t);
        continue;
      }
    }

    const VectorXd grad = (eye - proj) * (w - s.area / s.volume);
    MatrixXd hess = s.area * s.area.transpose() / (s.volume * s.volume) - s.jac / s.volume;
    hess = 0.5 * (hess + hess.transpose());
    const double scale = std::max(hess.diagonal().cwiseAbs().maxCoeff(), 1e-300);
    for (Eigen::Index j = 0; j < m; ++j)
      if (s.area[j] <= 0.0)
        hess(j, j) += scale; // vanished facet: only the linear term acts
    hess += scale * proj;

    VectorXd dir;
    for (int attempt = 0;; ++attempt) {
      Eigen::LDLT<MatrixXd> ldlt(hess + shift * scale * eye);
      dir = -ldlt.solve(grad);
      if (ldlt.info() == Eigen::Success && dir.allFinite() && grad.dot(dir) < 0.0)
        break;
      shift = std::max(1e-8, shift * 10.0);
      if (attempt > 30)
        throw NoConvergence("no convergence", info.residual);
    }

    const double f0 = objective(s, w, h);
    double step = 1.0;
    State next;
    VectorXd trial;
    for (;;) {
      trial = h + step * dir;
      next = evaluate(normals, trial, true);
      const double f1 = objective(next, w, trial);
      if (f1 <= f0 + 1e-4 * step * grad.dot(dir))
        break;
      // the final steps sit at round-off level of f; accept area progress
      if (next.ok && f1 <= f0 + 1e-13 * std::abs(f0) && areaResidual(next.area, w) < info.residual)
        break;
      step *= 0.5;
      if (step < 1e-12) {
        shift = std::max(1e-6, shift * 10.0);
        if (shift > 1e6)
          throw NoConvergence("no convergence", info.residual);
        next = s;
        trial = h;
        break;
      }
    }
    if (step >= 1.0)
      shift *= 0.1;
    h = trial;
    s = std::move(next);
  }
  info.residual = areaResidual(s.area, w);
  if (info.residual <= settings.areaTolerance)
    return h;
  throw NoConvergence("no convergence", info.residual);
}

VectorXd supportIteration(const std::vector<UnitVector> &normals, const VectorXd &w, VectorXd h,
                          const ReconstructionSettings &settings, ReconstructionInfo &info) {
  constexpr double kEps = 1e-14;
  const double wTotal = w.sum();
  for (int it = 0; it < settings.maxIterations; ++it) {
    State s = evaluate(normals, h, false);
    if (!s.ok)
      throw NoConvergence("no convergence", std::numeric_limits<double>::infinity());
    // keep volume 1 and the centroid at the origin, so all hⱼ stay positive
    const Vec3 c = s.poly.centroid();
    for (Eigen::Index j = 0; j < h.size(); ++j)
      h[j] -= normals[j].dot(c);
    h /= std::cbrt(s.volume);
    const VectorXd area = s.area / std::pow(s.volume, 2.0 / 3.0);
    info.iterations = it;
    info.residual = areaResidual(area, w);
    if (info.residual <= settings.areaTolerance)
      return h;
    const VectorXd target = w * (area.sum() / wTotal);
    for (Eigen::Index j = 0; j < h.size(); ++j) {
      if (area[j] <= 0.0)
        h[j] *= 1.0 - settings.damping / 4.0;
      else
        h[j] *= std::pow(std::max(area[j], kEps) / target[j], settings.damping / 2.0);
    }
  }
  throw NoConvergence("no convergence", info.residual);
}

} // namespace

Polytope reconstruct(const DiscreteMeasure &mu, const ReconstructionSettings &settings, ReconstructionInfo *info) {
  settings.validate();
  if (mu.size() < 4)
    throw InvalidInput("not a valid surface measure");
  const auto report = checkAlexandrov(mu);
  if (report.closureResidual > 1e-8 || report.planeConcentration)
    throw InvalidInput("not a valid surface measure");
  for (const auto &a : mu.atoms())
    if (!(a.w > 0.0))
      throw InvalidInput("not a valid surface measure");

  std::vector<UnitVector> normals;
  VectorXd w(static_cast<Eigen::Index>(mu.size()));
  for (std::size_t i = 0; i < mu.size(); ++i) {
    normals.push_back(mu.atoms()[i].n);
    w[static_cast<Eigen::Index>(i)] = mu.atoms()[i].w;
  }
  VectorXd h = VectorXd::Ones(w.size());
  if (settings.randomSeed) {
    std::mt19937_64 rng(*settings.randomSeed);
    std::uniform_real_distribution<double> u(0.0, 0.5);
    for (Eigen::Index j = 0; j < h.size(); ++j)
      h[j] += u(rng);
  }
  // At the optimum of w·h − log V one has w·h = 3.
  h *= 3.0 / w.dot(h);

  ReconstructionInfo local;
  ReconstructionInfo &inf = info ? *info : local;
  h = settings.solver == ReconstructionSolver::Newton ? newtonSolve(normals, w, h, settings, inf)
                                                      : supportIteration(normals, w, h, settings, inf);

  State s = evaluate(normals, h, false);
  h *= std::sqrt(w.sum() / s.area.sum());
  s = evaluate(normals, h, false);
  const Vec3 c = s.poly.centroid();
  for (Eigen::Index j = 0; j < h.size(); ++j)
    h[j] -= normals[j].dot(c);
  s = evaluate(normals, h, false);
  if (!s.ok)
    throw NoConvergence("no convergence", inf.residual);
  inf.residual = areaResidual(s.area, w);
  return s.poly;
}

Polytope blaschkeSum(const Polytope &p, const Polytope &q, const ReconstructionSettings &settings) {
  const auto mp = surfaceMeasure(p);
  const auto mq = surfaceMeasure(q);
  if (mp.size() < 4 || mq.size() < 4)
    throw InvalidInput("not a valid surface measure");
  return reconstruct(mp + mq, settings);
}

double measureResidual(const Polytope &p, const DiscreteMeasure &mu) {
  const auto mp = surfaceMeasure(p);
  double err = 0.0;
  for (const auto &a : mu.atoms())
    err += std::abs(mp.weightAt(a.n) - a.w);
  for (const auto &a : mp.atoms())
    if (mu.weightAt(a.n) == 0.0)
      err += a.w;
  return err / mu.totalMass();
}

double distanceUpToTranslation(const Polytope &a, const Polytope &b) {
  return hausdorffDistance(a.translated(-a.centroid()), b.translated(-b.centroid()));
}

} // namespace surfmeas
