#include "surfmeas/capbody.hpp"

#include "surfmeas/errors.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>

namespace surfmeas {

// ---------------------------------------------------------------------------
// Scene

SceneFrame SceneFrame::make(const Vec3 &O, const Vec3 &B, const Vec3 &Bprime) {
  SceneFrame s;
  s.O = O;
  s.B = B;
  s.Bprime = Bprime;
  s.ob = (B - O).norm();
  if (!(s.ob > 0.0) || !std::isfinite(s.ob))
    throw InvalidInput("scene: B must differ from O");
  s.frame = AxisFrame::fromAxis(B - O);
  const Vec3 w = Bprime - O;
  s.obPrime = w.norm();
  if (w.cross(s.frame.axis).norm() > 1e-9 * std::max(1.0, s.obPrime) || w.dot(s.frame.axis) <= 0.0)
    throw InvalidInput("scene: B' must lie on the ray OB");
  if (!(s.obPrime > s.ob))
    throw InvalidInput("scene: |OB| must be smaller than |OB'|");
  return s;
}

void validateScene(const SceneFrame &scene, const BodyModel &body) {
  const double tol = 1e-9 * bodyDiameter(body);
  constexpr int kSamples = 512;
  for (int i = 1; i < kSamples; ++i) {
    const double lam = static_cast<double>(i) / kSamples;
    if (bodyContains(body, scene.O + lam * (scene.B - scene.O) * (1.0 - 1e-9)))
      throw InvalidInput("scene: segment (O, B) meets the body");
  }
  if (bodyContains(body, scene.O))
    throw InvalidInput("scene: O lies in the body");
  for (int i = 0; i <= kSamples; ++i) {
    const double lam = static_cast<double>(i) / kSamples;
    if (!bodyContains(body, scene.B + lam * (scene.Bprime - scene.B), tol))
      throw InvalidInput("scene: segment [B, B'] leaves the body");
  }
}

AlphaSpec AlphaSpec::linear(double ob) {
  return {[ob](double t) { return ob * t; }, [ob](double) { return ob; }};
}

std::vector<double> uniformTGrid(int nodes) {
  if (nodes < 2)
    throw InvalidInput("t grid needs at least 2 nodes");
  std::vector<double> t(static_cast<std::size_t>(nodes));
  for (int j = 0; j < nodes; ++j)
    t[j] = static_cast<double>(j) / (nodes - 1);
  t.back() = 1.0;
  return t;
}

// ---------------------------------------------------------------------------
// Sections: the body cut by the half-plane Π_φ, in coordinates (x, ρ ≥ 0).

struct Tangent {
  double sigma = 0.0;
  double r = 0.0;
  double x = 0.0;
};

class Section {
public:
  virtual ~Section() = default;
  /// Support ray from (α, 0). atB: α = |OB|, the apex sits on the body.
  virtual Tangent tangency(double alpha, bool atB) const = 0;
  /// x on the lower (near-O) boundary curve at radius r.
  virtual double lowerX(double r) const = 0;
  /// Max curvature of the lower arc between radius rFrom and the axis.
  virtual double curvature(double rFrom) const = 0;
};

class SectionSet {
public:
  std::vector<std::unique_ptr<Section>> columns;
};

namespace {

[[noreturn]] void tangencyViolation(double phi) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "tangency violation at phi=%.6f", phi);
  throw InvalidInput(buf);
}

class CircleSection final : public Section {
public:
  CircleSection(double cx, double rhoC, double radius, double phi)
      : cx_(cx), rhoC_(rhoC), radius_(radius), phi_(phi) {}

  Tangent tangency(double alpha, bool atB) const override {
    const double vx = cx_ - alpha, vr = rhoC_;
    const double len = std::hypot(vx, vr);
    const double psiQ = std::atan2(vr, vx);
    if (atB || len <= radius_ * (1.0 + 1e-13)) {
      if (len < radius_ * (1.0 - 1e-9))
        throw InvalidInput("scene: apex inside the body");
      const double psi = psiQ + 0.5 * kPi;
      return {std::cos(psi) / std::sin(psi), 0.0, alpha};
    }
    const double psi = psiQ + std::asin(radius_ / len);
    if (!(psi > 0.0 && psi < kPi))
      tangencyViolation(phi_);
    const double tl = std::sqrt(len * len - radius_ * radius_);
    return {std::cos(psi) / std::sin(psi), tl * std::sin(psi), alpha + tl * std::cos(psi)};
  }

  double lowerX(double r) const override {
    const double d = r - rhoC_;
    return cx_ - std::sqrt(std::max(0.0, radius_ * radius_ - d * d));
  }

  double curvature(double) const override { return 1.0 / radius_; }

private:
  double cx_, rhoC_, radius_, phi_;
};

// Ellipse centered on the axis: semi-axis a along x, rho across.
class EllipseSection final : public Section {
public:
  EllipseSection(double c, double a, double rho, double phi) : c_(c), a_(a), rho_(rho), phi_(phi) {}

  Tangent tangency(double alpha, bool atB) const override {
    const double D = (c_ - alpha) / a_;
    if (atB || D <= 1.0 + 1e-14) {
      if (D < 1.0 - 1e-9)
        throw InvalidInput("scene: apex inside the body");
      return {0.0, 0.0, alpha};
    }
    const double r = rho_ * std::sqrt(1.0 - 1.0 / (D * D));
    if (!(r > 0.0))
      tangencyViolation(phi_);
    return {a_ * std::sqrt(D * D - 1.0) / rho_, r, c_ - a_ / D};
  }

  double lowerX(double r) const override {
    const double q = r / rho_;
    return c_ - a_ * std::sqrt(std::max(0.0, 1.0 - q * q));
  }

  // (x, ρ) = (c + a cos u, ρ sin u); the lower arc is u ∈ [π − asin(r/ρ), π].
  double curvature(double rFrom) const override {
    const double u0 = kPi - std::asin(std::clamp(rFrom / rho_, 0.0, 1.0));
    double k = 0.0;
    constexpr int kSamples = 512;
    for (int i = 0; i <= kSamples; ++i) {
      const double u = u0 + (kPi - u0) * i / kSamples;
      const double s = std::sin(u), c = std::cos(u);
      k = std::max(k, a_ * rho_ / std::pow(a_ * a_ * s * s + rho_ * rho_ * c * c, 1.5));
    }
    return k;
  }

private:
  double c_, a_, rho_, phi_;
};

// Turning angle per mean chord at the interior nodes of a polyline.
double discreteCurvature(const std::vector<std::pair<double, double>> &pts) {
  double k = 0.0;
  for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
    const double ax = pts[i].first - pts[i - 1].first, ar = pts[i].second - pts[i - 1].second;
    const double bx = pts[i + 1].first - pts[i].first, br = pts[i + 1].second - pts[i].second;
    const double la = std::hypot(ax, ar), lb = std::hypot(bx, br);
    if (la <= 0.0 || lb <= 0.0)
      continue;
    const double ang = std::atan2(std::abs(ax * br - ar * bx), ax * bx + ar * br);
    k = std::max(k, ang / (0.5 * (la + lb)));
  }
  return k;
}

class PolygonSection final : public Section {
public:
  PolygonSection(std::vector<std::pair<double, double>> poly, double scale, double phi)
      : poly_(std::move(poly)), eps_(1e-12 * scale), phi_(phi) {
    if (poly_.size() < 3)
      throw InvalidInput("invalid body: empty section");
  }

  Tangent tangency(double alpha, bool atB) const override {
    double best = std::numeric_limits<double>::infinity();
    for (const auto &[x, r] : poly_)
      if (r > eps_)
        best = std::min(best, (x - alpha) / r);
    if (!std::isfinite(best))
      tangencyViolation(phi_);
    if (atB)
      return {best, 0.0, alpha};
    // nearest touching vertex
    double rMin = std::numeric_limits<double>::infinity(), xMin = 0.0;
    for (const auto &[x, r] : poly_)
      if (r > eps_ && (x - alpha) / r <= best + 1e-12 * (1.0 + std::abs(best)) && r < rMin) {
        rMin = r;
        xMin = x;
      }
    return {best, rMin, xMin};
  }

  double lowerX(double r) const override {
    double x = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < poly_.size(); ++i) {
      const auto [x0, r0] = poly_[i];
      const auto [x1, r1] = poly_[(i + 1) % poly_.size()];
      if ((r0 - r) * (r1 - r) > 0.0 || r0 == r1) {
        if (r0 == r)
          x = std::min(x, x0);
        continue;
      }
      const double lam = (r - r0) / (r1 - r0);
      x = std::min(x, x0 + lam * (x1 - x0));
    }
    return x;
  }

  double curvature(double rFrom) const override {
    std::vector<std::pair<double, double>> lower;
    for (const auto &p : poly_)
      if (p.second <= rFrom + eps_ && p.first <= lowerX(p.second) + 1e-9)
        lower.push_back(p);
    std::sort(lower.begin(), lower.end(), [](auto &a, auto &b) { return a.second < b.second; });
    return discreteCurvature(lower);
  }

private:
  std::vector<std::pair<double, double>> poly_;
  double eps_, phi_;
};

// Boundary found by membership bisection along rays from an interior point.
class SampledSection final : public Section {
public:
  SampledSection(std::shared_ptr<const BodyModel> body, const SceneFrame &scene, double phi, int samples,
                 double diam)
      : body_(std::move(body)), scene_(scene), phi_(phi), reach_(2.0 * diam + scene.obPrime),
        x0_(0.5 * (scene.ob + scene.obPrime)), eps_(1e-12 * diam) {
    if (samples < 16)
      throw InvalidInput("section sampling needs at least 16 samples");
    psi_.resize(static_cast<std::size_t>(samples));
    pts_.resize(psi_.size());
    for (int i = 0; i < samples; ++i) {
      psi_[i] = kPi * i / (samples - 1);
      pts_[i] = boundary(psi_[i]);
    }
    // near chain: from ψ = π (towards O) while ρ grows
    std::size_t i = pts_.size() - 1;
    lower_.push_back(pts_[i]);
    while (i > 0 && pts_[i - 1].second >= pts_[i].second) {
      --i;
      lower_.push_back(pts_[i]);
    }
  }

  Tangent tangency(double alpha, bool atB) const override {
    std::size_t best = pts_.size();
    double f = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pts_.size(); ++i)
      if (pts_[i].second > eps_) {
        const double v = ratio(pts_[i], alpha);
        if (v < f) {
          f = v;
          best = i;
        }
      }
    if (best == pts_.size())
      tangencyViolation(phi_);
    // golden-section refinement on the bracketing ray interval
    double lo = psi_[best > 0 ? best - 1 : 0];
    double hi = psi_[std::min(best + 1, psi_.size() - 1)];
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = hi - g * (hi - lo), b = lo + g * (hi - lo);
    auto eval = [&](double psi) {
      const auto p = boundary(psi);
      return p.second > eps_ ? ratio(p, alpha) : std::numeric_limits<double>::infinity();
    };
    double fa = eval(a), fb = eval(b);
    for (int it = 0; it < 40; ++it) {
      if (fa < fb) {
        hi = b;
        b = a;
        fb = fa;
        a = hi - g * (hi - lo);
        fa = eval(a);
      } else {
        lo = a;
        a = b;
        fa = fb;
        b = lo + g * (hi - lo);
        fb = eval(b);
      }
    }
    auto p = pts_[best];
    const double psiStar = fa < fb ? a : b;
    if (std::min(fa, fb) < f) {
      f = std::min(fa, fb);
      p = boundary(psiStar);
    }
    if (atB)
      return {f, 0.0, alpha};
    if (!(p.second > eps_))
      tangencyViolation(phi_);
    return {f, p.second, p.first};
  }

  double lowerX(double r) const override {
    for (std::size_t i = 0; i + 1 < lower_.size(); ++i) {
      const auto [xa, ra] = lower_[i];
      const auto [xb, rb] = lower_[i + 1];
      if (r >= ra && r <= rb) {
        const double lam = rb > ra ? (r - ra) / (rb - ra) : 0.0;
        return xa + lam * (xb - xa);
      }
    }
    return lower_.back().first;
  }

  double curvature(double rFrom) const override {
    std::vector<std::pair<double, double>> arc;
    for (const auto &p : lower_)
      if (p.second <= rFrom + eps_)
        arc.push_back(p);
    return discreteCurvature(arc);
  }

private:
  static double ratio(const std::pair<double, double> &p, double alpha) { return (p.first - alpha) / p.second; }

  std::pair<double, double> boundary(double psi) const {
    const double cx = std::cos(psi), cr = std::max(0.0, std::sin(psi));
    double lo = 0.0, hi = reach_;
    for (int it = 0; it < 64 && hi - lo > 1e-15 * reach_; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (bodyContains(*body_, scene_.point(x0_ + mid * cx, mid * cr, phi_)))
        lo = mid;
      else
        hi = mid;
    }
    return {x0_ + lo * cx, lo * cr};
  }

  std::shared_ptr<const BodyModel> body_;
  SceneFrame scene_;
  double phi_, reach_, x0_, eps_;
  std::vector<double> psi_;
  std::vector<std::pair<double, double>> pts_;
  std::vector<std::pair<double, double>> lower_; // from the axis outwards
};

// Section polygon of a polytope: edge crossings of the plane through the
// axis, convex hull in (x, ρ), clipped to ρ ≥ 0.
std::vector<std::pair<double, double>> polytopeSection(const Polytope &p, const SceneFrame &scene, double phi) {
  const double c = std::cos(phi), s = std::sin(phi);
  std::vector<Vec3> local;
  local.reserve(p.vertices().size());
  for (const auto &v : p.vertices())
    local.push_back(scene.toLocal(v));
  auto side = [&](const Vec3 &q) { return -q.y() * s + q.z() * c; };
  auto flat = [&](const Vec3 &q) { return std::pair<double, double>{q.x(), q.y() * c + q.z() * s}; };
  std::vector<std::pair<double, double>> pts;
  for (const auto &f : p.facets())
    for (std::size_t i = 0; i < f.size(); ++i) {
      const Vec3 &a = local[f[i]], &b = local[f[(i + 1) % f.size()]];
      const double da = side(a), db = side(b);
      if (da == 0.0)
        pts.push_back(flat(a));
      if ((da < 0.0 && db > 0.0) || (da > 0.0 && db < 0.0)) {
        const double lam = da / (da - db);
        pts.push_back(flat(a + lam * (b - a)));
      }
    }
  // Andrew's monotone chain, counter-clockwise
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3)
    return {};
  auto cross = [](const auto &o, const auto &a, const auto &b) {
    return (a.first - o.first) * (b.second - o.second) - (a.second - o.second) * (b.first - o.first);
  };
  std::vector<std::pair<double, double>> hull(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0)
      --k;
    hull[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i > 0; --i) {
    while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i - 1]) <= 0.0)
      --k;
    hull[k++] = pts[i - 1];
  }
  hull.resize(k - 1);
  // clip to ρ ≥ 0
  std::vector<std::pair<double, double>> out;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const auto &a = hull[i];
    const auto &b = hull[(i + 1) % hull.size()];
    if (a.second >= 0.0)
      out.push_back(a);
    if ((a.second < 0.0) != (b.second < 0.0)) {
      const double lam = a.second / (a.second - b.second);
      out.push_back({a.first + lam * (b.first - a.first), 0.0});
    }
  }
  return out;
}

std::unique_ptr<Section> makeSection(const std::shared_ptr<const BodyModel> &bodyPtr, const SceneFrame &scene,
                                     double phi, double diam, const ProfileOptions &opt) {
  const BodyModel &body = *bodyPtr;
  if (opt.forceSampled)
    return std::make_unique<SampledSection>(bodyPtr, scene, phi, opt.sectionSamples, diam);
  if (const auto *b = std::get_if<Ball>(&body)) {
    const Vec3 c = scene.toLocal(b->center);
    const double off = -c.y() * std::sin(phi) + c.z() * std::cos(phi);
    const double rad2 = b->radius * b->radius - off * off;
    if (!(rad2 > 0.0))
      throw InvalidInput("invalid body: section misses the ball");
    return std::make_unique<CircleSection>(c.x(), c.y() * std::cos(phi) + c.z() * std::sin(phi), std::sqrt(rad2),
                                           phi);
  }
  if (const auto *e = std::get_if<Ellipsoid>(&body)) {
    const Vec3 c = scene.toLocal(e->center);
    auto principal = [](const Vec3 &d) {
      for (int i = 0; i < 3; ++i)
        if (std::abs(std::abs(d[i]) - 1.0) <= 1e-12)
          return i;
      return -1;
    };
    const int ia = principal(scene.frame.axis), i1 = principal(scene.frame.e1), i2 = principal(scene.frame.e2);
    const double tol = 1e-12 * std::max(1.0, diam);
    if (ia >= 0 && i1 >= 0 && i2 >= 0 && std::abs(c.y()) <= tol && std::abs(c.z()) <= tol) {
      const double b1 = e->semiAxes[i1], b2 = e->semiAxes[i2];
      const double cs = std::cos(phi), sn = std::sin(phi);
      const double rho = 1.0 / std::sqrt(cs * cs / (b1 * b1) + sn * sn / (b2 * b2));
      return std::make_unique<EllipseSection>(c.x(), e->semiAxes[ia], rho, phi);
    }
    return std::make_unique<SampledSection>(bodyPtr, scene, phi, opt.sectionSamples, diam);
  }
  if (const auto *p = std::get_if<Polytope>(&body))
    return std::make_unique<PolygonSection>(polytopeSection(*p, scene, phi), diam, phi);
  return std::make_unique<SampledSection>(bodyPtr, scene, phi, opt.sectionSamples, diam);
}

Eigen::MatrixXd periodicCentralDifference(const Eigen::MatrixXd &m, double dphi) {
  const Eigen::Index nk = m.cols();
  Eigen::MatrixXd d(m.rows(), nk);
  for (Eigen::Index k = 0; k < nk; ++k)
    d.col(k) = (m.col((k + 1) % nk) - m.col((k + nk - 1) % nk)) / (2.0 * dphi);
  return d;
}

} // namespace

// ---------------------------------------------------------------------------
// Profile

CylindricalProfile buildProfile(const BodyModel &body, const SceneFrame &scene, const std::vector<double> &tGrid,
                                int phiCount, const AlphaSpec &alphaSpec, const ProfileOptions &options) {
  validateBody(body);
  validateScene(scene, body);
  if (tGrid.size() < 2 || tGrid.front() != 0.0 || tGrid.back() != 1.0)
    throw InvalidInput("t grid must start at 0 and end at 1");
  for (std::size_t j = 1; j < tGrid.size(); ++j)
    if (!(tGrid[j] > tGrid[j - 1]))
      throw InvalidInput("t grid must be strictly increasing");
  if (phiCount < 4)
    throw InvalidInput("phi grid needs at least 4 nodes");

  CylindricalProfile p;
  p.scene = scene;
  p.body = std::make_shared<const BodyModel>(body);
  p.t = tGrid;
  p.diam = bodyDiameter(body);
  for (double t : tGrid) {
    p.alpha.push_back(alphaSpec.value(t));
    p.alphaPrime.push_back(alphaSpec.derivative(t));
  }
  if (std::abs(p.alpha.front()) > 1e-12 * scene.ob || std::abs(p.alpha.back() - scene.ob) > 1e-12 * scene.ob)
    throw InvalidInput("alpha must satisfy alpha(0) = 0 and alpha(1) = |OB|");
  p.alpha.front() = 0.0;
  p.alpha.back() = scene.ob;
  for (std::size_t j = 1; j < p.alpha.size(); ++j)
    if (!(p.alpha[j] > p.alpha[j - 1]))
      throw InvalidInput("alpha must be increasing");

  const std::size_t nt = tGrid.size(), nk = static_cast<std::size_t>(phiCount);
  p.phi.resize(nk);
  for (std::size_t k = 0; k < nk; ++k)
    p.phi[k] = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(nk);

  auto sections = std::make_shared<SectionSet>();
  for (std::size_t k = 0; k < nk; ++k)
    sections->columns.push_back(makeSection(p.body, p.scene, p.phi[k], p.diam, options));

  p.r.resize(static_cast<Eigen::Index>(nt), static_cast<Eigen::Index>(nk));
  p.sigma.resizeLike(p.r);
  p.xTangent.resizeLike(p.r);
  const double rTol = 1e-12 * p.diam;
  for (std::size_t k = 0; k < nk; ++k) {
    const Section &sec = *sections->columns[k];
    for (std::size_t j = 0; j < nt; ++j) {
      const bool atB = j + 1 == nt;
      const Tangent tg = sec.tangency(p.alpha[j], atB);
      if (!atB && !(tg.r > rTol))
        tangencyViolation(p.phi[k]);
      p.r(j, k) = atB ? 0.0 : tg.r;
      p.sigma(j, k) = tg.sigma;
      p.xTangent(j, k) = tg.x;
    }
  }
  p.sigmaPhi = periodicCentralDifference(p.sigma, p.dphi());
  p.sections = std::move(sections);
  return p;
}

CylindricalProfile buildProfile(const BodyModel &body, const SceneFrame &scene, int tNodes, int phiCount) {
  return buildProfile(body, scene, uniformTGrid(tNodes), phiCount, AlphaSpec::linear(scene.ob));
}

double CylindricalProfile::supportIdentityResidual() const {
  double res = 0.0;
  for (Eigen::Index j = 0; j < r.rows(); ++j)
    for (Eigen::Index k = 0; k < r.cols(); ++k)
      res = std::max(res, std::abs(xTangent(j, k) - sigma(j, k) * r(j, k) - alpha[j]));
  return res;
}

double CylindricalProfile::rAt(double tau, std::size_t k) const {
  if (tau <= t.front())
    return r(0, static_cast<Eigen::Index>(k));
  if (tau >= t.back())
    return r(r.rows() - 1, static_cast<Eigen::Index>(k));
  const auto it = std::upper_bound(t.begin(), t.end(), tau);
  const std::size_t j = static_cast<std::size_t>(it - t.begin()) - 1;
  const double lam = (tau - t[j]) / (t[j + 1] - t[j]);
  return (1.0 - lam) * r(j, k) + lam * r(j + 1, k);
}

double CylindricalProfile::lowerX(std::size_t k, double rr) const { return sections->columns[k]->lowerX(rr); }

double CylindricalProfile::curvatureBound(double tau) const {
  double k = 0.0;
  for (std::size_t c = 0; c < nphi(); ++c)
    k = std::max(k, sections->columns[c]->curvature(rAt(tau, c)));
  return k;
}

ProfileConditions validateConditions(const CylindricalProfile &p, double tau) {
  ProfileConditions c;
  c.tangencyOK = true;
  for (Eigen::Index j = 0; j + 1 < p.r.rows(); ++j)
    for (Eigen::Index k = 0; k < p.r.cols(); ++k)
      if (!(p.r(j, k) > 0.0))
        c.tangencyOK = false;
  c.k = p.curvatureBound(tau);
  c.maxSigma = p.sigma.cwiseAbs().maxCoeff();
  c.minAlphaPrime = *std::min_element(p.alphaPrime.begin(), p.alphaPrime.end());
  c.gamma = c.minAlphaPrime / (p.diam * c.k * std::pow(1.0 + c.maxSigma * c.maxSigma, 1.5));
  return c;
}

double lipschitzViolation(const CylindricalProfile &p, double tau, double gamma) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t j2 = 1; j2 < p.nt() && p.t[j2] <= tau; ++j2)
    for (std::size_t j1 = 0; j1 < j2; ++j1)
      for (Eigen::Index k = 0; k < p.r.cols(); ++k)
        worst = std::max(worst, p.r(j2, k) - p.r(j1, k) + gamma * (p.t[j2] - p.t[j1]));
  return worst;
}

double sandwichViolation(const Eigen::MatrixXd &r, const Eigen::MatrixXd &sigma, const std::vector<double> &alpha) {
  double worst = 0.0;
  const Eigen::Index nt = r.rows();
  for (Eigen::Index k = 0; k < r.cols(); ++k)
    for (Eigen::Index j1 = 0; j1 < nt; ++j1)
      for (Eigen::Index j2 = j1 + 1; j2 < nt; ++j2) {
        const double ds = sigma(j1, k) - sigma(j2, k);
        const double da = alpha[j2] - alpha[j1];
        worst = std::max(worst, r(j2, k) * ds - da);
        worst = std::max(worst, da - r(j1, k) * ds);
      }
  return worst;
}

MonotonicityReport checkMonotonicity(const CylindricalProfile &p) {
  MonotonicityReport m;
  m.rIncrease = -std::numeric_limits<double>::infinity();
  m.sigmaIncrease = -std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j + 1 < p.r.rows(); ++j)
    for (Eigen::Index k = 0; k < p.r.cols(); ++k) {
      m.rIncrease = std::max(m.rIncrease, p.r(j + 1, k) - p.r(j, k));
      m.sigmaIncrease = std::max(m.sigmaIncrease, p.sigma(j + 1, k) - p.sigma(j, k));
    }
  return m;
}

SigmaPhiResult sigmaPhiDerivative(const CylindricalProfile &p) {
  SigmaPhiResult out;
  out.sigmaPhi = periodicCentralDifference(p.sigma, p.dphi());
  const std::size_t nk = p.nphi();
  for (Eigen::Index j = 0; j + 1 < p.r.rows(); ++j)
    for (std::size_t k = 0; k < nk; ++k) {
      const double rr = p.r(j, static_cast<Eigen::Index>(k));
      const double dx = (p.lowerX((k + 1) % nk, rr) - p.lowerX((k + nk - 1) % nk, rr)) / (2.0 * p.dphi());
      out.keyFormulaResidual =
          std::max(out.keyFormulaResidual, std::abs(dx / rr - out.sigmaPhi(j, static_cast<Eigen::Index>(k))));
    }
  return out;
}

UnitVector coneNormal(double sigma, double sigmaPhi, double phi) {
  const double c = std::cos(phi), s = std::sin(phi);
  const double norm = std::sqrt(1.0 + sigma * sigma + sigmaPhi * sigmaPhi);
  return UnitVector::fromNormalized(Vec3(-1.0, sigma * c - sigmaPhi * s, sigma * s + sigmaPhi * c) / norm);
}

UnitVector coneNormalWorld(const CylindricalProfile &p, std::size_t j, std::size_t k) {
  const auto n = coneNormal(p.sigma(j, k), p.sigmaPhi(j, k), p.phi[k]);
  return UnitVector(p.scene.frame.toWorld(n.vec()));
}

// ---------------------------------------------------------------------------
// Ω split

OmegaSplit::OmegaSplit(const CylindricalProfile &p) {
  for (std::size_t k = 0; k < p.nphi(); ++k) {
    const Vec3 g(p.sigma(0, k), std::cos(p.phi[k]), std::sin(p.phi[k]));
    generators_.push_back(p.scene.frame.toWorld(g.normalized()));
  }
}

OmegaSide OmegaSplit::classify(const UnitVector &n) const {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto &g : generators_) {
    m = std::max(m, n.dot(g));
    if (m >= -1e-12)
      return OmegaSide::Plus;
  }
  return OmegaSide::Minus;
}

OmegaSplit::BinClass OmegaSplit::classifyBin(const SphericalPartition &partition, std::size_t bin) const {
  const BinRegion b = partition.region(bin);
  bool minus = false, plus = false;
  for (int i = 0; i <= 4; ++i)
    for (int j = 0; j <= 4; ++j) {
      const double polar = b.polarLo + (b.polarHi - b.polarLo) * i / 4.0;
      const double lon = b.lonLo + (b.lonHi - b.lonLo) * j / 4.0;
      (classify(partition.direction(polar, lon)) == OmegaSide::Minus ? minus : plus) = true;
    }
  if (minus && plus)
    return BinClass::Mixed;
  return minus ? BinClass::Minus : BinClass::Plus;
}

OmegaSide omegaClassify(const OmegaSplit &split, const UnitVector &n) { return split.classify(n); }

// ---------------------------------------------------------------------------
// Integral formula over Ω₋

std::vector<double> unitWeights(const CylindricalProfile &p) { return std::vector<double>(p.nt(), 1.0); }

void forEachProfileAtom(const CylindricalProfile &p, const std::vector<double> &m, const QuadratureOptions &opt,
                        const std::function<void(const UnitVector &, double)> &visit) {
  if (m.size() != p.nt())
    throw InvalidInput("weighting length must match the t grid");
  if (opt.subSamples < 1)
    throw InvalidInput("subSamples must be positive");
  const double dphi = p.dphi();
  const int S = opt.rule == StieltjesRule::Midpoint ? opt.subSamples : 1;
  const int Q = std::max(1, S / 2);
  const Mat3 toWorld = (Mat3() << p.scene.frame.axis, p.scene.frame.e1, p.scene.frame.e2).finished();
  for (std::size_t k = 0; k < p.nphi(); ++k) {
    const auto kk = static_cast<Eigen::Index>(k);
    for (std::size_t j = 0; j + 1 < p.nt(); ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      const double a = m[j] * p.r(jj, kk) * p.r(jj, kk);
      const double b = m[j + 1] * p.r(jj + 1, kk) * p.r(jj + 1, kk);
      const double inc = 0.5 * (a - b) * dphi;
      if (inc < 0.0 && !opt.allowSigned && inc < -1e-14 * std::max(std::abs(a), std::abs(b)) * dphi)
        throw InvalidInput("non-admissible weighting");
      if (inc == 0.0)
        continue;
      if (S == 1) {
        const double sg = p.sigma(jj, kk), sp = p.sigmaPhi(jj, kk);
        const UnitVector n = coneNormal(sg, sp, p.phi[k]);
        visit(UnitVector::fromNormalized(toWorld * n.vec()), inc * std::sqrt(1.0 + sg * sg + sp * sp));
        continue;
      }
      // Sub-cells are uniform in r rather than t: near the axis tangency σ is
      // smooth in r but has a square-root singularity in t.
      const double r0 = p.r(jj, kk), r1 = p.r(jj + 1, kk);
      auto mr2 = [&](double lam) {
        const double rr = r0 + lam * (r1 - r0);
        return (m[j] + lam * (m[j + 1] - m[j])) * rr * rr;
      };
      // Each column also spreads over Q angular sub-samples, so columns that
      // sit on a bin boundary split their mass instead of rounding to one side.
      const auto kL = static_cast<Eigen::Index>((k + p.nphi() - 1) % p.nphi());
      const auto kR = static_cast<Eigen::Index>((k + 1) % p.nphi());
      for (int s = 0; s < S; ++s) {
        const double lam = (s + 0.5) / S;
        const double sub = 0.5 * (mr2(double(s) / S) - mr2(double(s + 1) / S)) * dphi / Q;
        auto at = [&](const Eigen::MatrixXd &f, Eigen::Index col) {
          return (1.0 - lam) * f(jj, col) + lam * f(jj + 1, col);
        };
        const double sg0 = at(p.sigma, kk), sp0 = at(p.sigmaPhi, kk);
        for (int q = 0; q < Q; ++q) {
          const double off = (q + 0.5) / Q - 0.5; // in units of Δφ
          const auto nb = off < 0.0 ? kL : kR;
          const double wq = std::abs(off);
          const double sg = (1.0 - wq) * sg0 + wq * at(p.sigma, nb);
          const double sp = (1.0 - wq) * sp0 + wq * at(p.sigmaPhi, nb);
          const UnitVector n = coneNormal(sg, sp, p.phi[k] + off * dphi);
          visit(UnitVector::fromNormalized(toWorld * n.vec()), sub * std::sqrt(1.0 + sg * sg + sp * sp));
        }
      }
    }
  }
}

BinnedMeasure measureFromProfile(const CylindricalProfile &p, const SphericalPartition &partition,
                                 const std::vector<double> &m, const QuadratureOptions &opt) {
  BinnedMeasure out(partition);
  forEachProfileAtom(p, m, opt, [&](const UnitVector &n, double w) { out.add(n, w); });
  return out;
}

SignedDiscreteMeasure profileAtoms(const CylindricalProfile &p, const std::vector<double> &m,
                                   const QuadratureOptions &opt) {
  std::vector<Atom> atoms;
  forEachProfileAtom(p, m, opt, [&](const UnitVector &n, double w) { atoms.push_back({n, w}); });
  return SignedDiscreteMeasure(std::move(atoms));
}

// ---------------------------------------------------------------------------
// Ω₊ part from the body

namespace {

// Area and first moment of the unit-sphere cell polar ∈ [a, b], lon ∈ [c, d],
// moment in partition-local coordinates.
void sphereCell(double a, double b, double c, double d, double &area, Vec3 &moment) {
  area = (d - c) * (std::cos(a) - std::cos(b));
  const double sa = std::sin(a), sb = std::sin(b);
  const double band = 0.5 * (b - a) - 0.25 * (std::sin(2.0 * b) - std::sin(2.0 * a));
  moment = Vec3(0.5 * (d - c) * (sb * sb - sa * sa), (std::sin(d) - std::sin(c)) * band,
                (std::cos(c) - std::cos(d)) * band);
}

// ∫ density dΩ over the Ω₊ part of each bin by 16×16 sub-cells.
BinnedMeasure densityOmegaPlus(const CylindricalProfile &p, const SphericalPartition &partition,
                               const std::function<double(const Vec3 &)> &density) {
  const OmegaSplit split(p);
  BinnedMeasure out(partition);
  const Mat3 toWorld =
      (Mat3() << partition.frame().axis, partition.frame().e1, partition.frame().e2).finished();
  constexpr int kSub = 16;
  for (std::size_t bin = 0; bin < partition.size(); ++bin) {
    const auto cls = split.classifyBin(partition, bin);
    if (cls == OmegaSplit::BinClass::Minus)
      continue;
    const BinRegion b = partition.region(bin);
    double mass = 0.0;
    Vec3 moment = Vec3::Zero();
    for (int i = 0; i < kSub; ++i)
      for (int j = 0; j < kSub; ++j) {
        const double a0 = b.polarLo + (b.polarHi - b.polarLo) * i / kSub;
        const double a1 = b.polarLo + (b.polarHi - b.polarLo) * (i + 1) / kSub;
        const double c0 = b.lonLo + (b.lonHi - b.lonLo) * j / kSub;
        const double c1 = b.lonLo + (b.lonHi - b.lonLo) * (j + 1) / kSub;
        const UnitVector n = partition.direction(0.5 * (a0 + a1), 0.5 * (c0 + c1));
        if (cls == OmegaSplit::BinClass::Mixed && split.classify(n) == OmegaSide::Minus)
          continue;
        double area;
        Vec3 mom;
        sphereCell(a0, a1, c0, c1, area, mom);
        const double rho = density(n.vec());
        mass += rho * area;
        moment += rho * (toWorld * mom);
      }
    if (mass > 0.0)
      out.addToBin(bin, mass, moment);
  }
  return out;
}

BinnedMeasure meshOmegaPlus(const CylindricalProfile &p, const SphericalPartition &partition, const Polytope &mesh) {
  const OmegaSplit split(p);
  BinnedMeasure out(partition);
  for (std::size_t f = 0; f < mesh.facetCount(); ++f)
    if (split.classify(mesh.facetNormals()[f]) == OmegaSide::Plus)
      out.add(mesh.facetNormals()[f], mesh.facetAreas()[f]);
  return out;
}

} // namespace

BinnedMeasure omegaPlusMeasure(const CylindricalProfile &p, const SphericalPartition &partition) {
  const BodyModel &body = *p.body;
  if (const auto *ball = std::get_if<Ball>(&body)) {
    const double R2 = ball->radius * ball->radius;
    const Vec3 c = p.scene.toLocal(ball->center);
    const Eigen::VectorXd row0 = p.sigma.row(0);
    const bool symmetric = std::abs(c.y()) <= 1e-12 * p.diam && std::abs(c.z()) <= 1e-12 * p.diam &&
                           row0.maxCoeff() - row0.minCoeff() <= 1e-12 * (1.0 + row0.cwiseAbs().maxCoeff()) &&
                           (partition.axis() - p.scene.frame.axis).norm() <= 1e-12;
    if (!symmetric)
      return densityOmegaPlus(p, partition, [R2](const Vec3 &) { return R2; });
    // Ω₊ is the polar cap up to the angle of the t = 0 cone normals
    const double s0 = row0[0];
    const double cut = std::acos(-1.0 / std::sqrt(1.0 + s0 * s0));
    BinnedMeasure out(partition);
    const Mat3 toWorld =
        (Mat3() << partition.frame().axis, partition.frame().e1, partition.frame().e2).finished();
    for (std::size_t bin = 0; bin < partition.size(); ++bin) {
      const BinRegion b = partition.region(bin);
      if (b.polarLo >= cut)
        continue;
      double area;
      Vec3 mom;
      sphereCell(b.polarLo, std::min(b.polarHi, cut), b.lonLo, b.lonHi, area, mom);
      out.addToBin(bin, R2 * area, R2 * (toWorld * mom));
    }
    return out;
  }
  if (const auto *e = std::get_if<Ellipsoid>(&body)) {
    const Vec3 ax = e->semiAxes;
    const double abc2 = std::pow(ax.x() * ax.y() * ax.z(), 2);
    return densityOmegaPlus(p, partition, [ax, abc2](const Vec3 &n) {
      const double h2 = (ax.cwiseProduct(n)).squaredNorm();
      return abc2 / (h2 * h2);
    });
  }
  if (const auto *poly = std::get_if<Polytope>(&body))
    return meshOmegaPlus(p, partition, *poly);
  return meshOmegaPlus(p, partition, bodyMesh(body, 20000));
}

BinnedMeasure bodyMeasure(const CylindricalProfile &p, const SphericalPartition &partition,
                          const QuadratureOptions &opt) {
  return measureFromProfile(p, partition, unitWeights(p), opt) + omegaPlusMeasure(p, partition);
}

} // namespace surfmeas
