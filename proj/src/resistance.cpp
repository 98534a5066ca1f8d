#include "surfmeas/resistance.hpp"

#include "surfmeas/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace surfmeas {

double newtonDrag(const UnitVector &n) {
  const double z = std::max(0.0, n.z());
  return z * z * z;
}

DirectionFunctional newtonDragFunctional() { return {"newton", newtonDrag, 1.0}; }

DirectionFunctional constantFunctional(double value) {
  return {"one", [value](const UnitVector &) { return value; }, std::abs(value)};
}

DirectionFunctional randomFunctional(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> amp(-1.0, 1.0), freq(-3.0, 3.0), phase(0.0, 2.0 * kPi);
  struct Term {
    double a;
    Vec3 b;
    double c;
  };
  std::vector<Term> terms;
  double bound = 0.0;
  for (int i = 0; i < 4; ++i) {
    Term t{amp(rng), Vec3(freq(rng), freq(rng), freq(rng)), phase(rng)};
    bound += std::abs(t.a);
    terms.push_back(t);
  }
  auto eval = [terms](const UnitVector &n) {
    double v = 0.0;
    for (const auto &t : terms)
      v += t.a * std::cos(t.b.dot(n.vec()) + t.c);
    return v;
  };
  return {"random:" + std::to_string(seed), eval, bound};
}

DirectionFunctional functionalByName(const std::string &name) {
  if (name == "newton")
    return newtonDragFunctional();
  if (name == "one")
    return constantFunctional(1.0);
  if (name.rfind("random:", 0) == 0) {
    const std::string digits = name.substr(7);
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
      throw InvalidInput("invalid functional seed: " + digits);
    return randomFunctional(std::stoull(digits));
  }
  throw InvalidInput("unknown functional: " + name);
}

double functional(const DiscreteMeasure &mu, const DirectionFunctional &f) {
  double v = 0.0;
  for (const auto &a : mu.atoms())
    v += f.evaluate(a.n) * a.w;
  return v;
}

double functional(const SignedDiscreteMeasure &mu, const DirectionFunctional &f) {
  double v = 0.0;
  for (const auto &a : mu.atoms())
    v += f.evaluate(a.n) * a.w;
  return v;
}

double functional(const BinnedMeasure &mu, const DirectionFunctional &f) {
  double v = 0.0;
  for (std::size_t b = 0; b < mu.size(); ++b)
    if (mu.mass(b) != 0.0)
      v += f.evaluate(mu.meanNormal(b)) * mu.mass(b);
  return v;
}

GraphQuadrature graphResistanceDetailed(const GraphBody &b, int supersample) {
  if (supersample < 1)
    throw InvalidInput("supersample must be positive");
  GraphQuadrature q;
  q.cells = b.cells();
  q.supersample = supersample;
  const int n = b.cells();
  const double h = b.spacing();
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const double x0 = -1.0 + i * h, y0 = -1.0 + j * h;
      // nearest and farthest cell points from the origin
      const double nx = std::max({x0, -x0 - h, 0.0}), ny = std::max({y0, -y0 - h, 0.0});
      const double fx = std::max(std::abs(x0), std::abs(x0 + h)), fy = std::max(std::abs(y0), std::abs(y0 + h));
      if (nx * nx + ny * ny >= 1.0)
        continue;
      double frac = 1.0;
      if (fx * fx + fy * fy > 1.0) {
        int inside = 0;
        for (int a = 0; a < supersample; ++a)
          for (int c = 0; c < supersample; ++c) {
            const double x = x0 + (a + 0.5) * h / supersample, y = y0 + (c + 0.5) * h / supersample;
            inside += x * x + y * y <= 1.0;
          }
        frac = static_cast<double>(inside) / (supersample * supersample);
      }
      if (frac == 0.0)
        continue;
      const double u00 = b.node(i, j), u10 = b.node(i + 1, j), u01 = b.node(i, j + 1), u11 = b.node(i + 1, j + 1);
      const double gx = 0.5 * ((u10 - u00) + (u11 - u01)) / h;
      const double gy = 0.5 * ((u01 - u00) + (u11 - u10)) / h;
      const double area = frac * h * h;
      q.coveredArea += area;
      q.value += area / (1.0 + gx * gx + gy * gy);
    }
  return q;
}

double graphResistance(const GraphBody &b) { return graphResistanceDetailed(b).value; }

AffineReport affineCheck(const PerturbedFamily &family, const DirectionFunctional &f, const std::vector<double> &sList,
                         double relTolerance) {
  AffineReport rep;
  const double plus = functional(family.omegaPlus(), f);
  rep.reference = std::abs(functional(profileAtoms(family.base(), unitWeights(family.base()), family.quadrature()), f) + plus);
  for (double s : sList) {
    if (!(s >= -1.0 && s <= 1.0))
      throw InvalidInput("s must lie in [-1, 1]");
    rep.s.push_back(s);
    rep.values.push_back(functional(profileAtoms(family.base(), family.weights(s), family.quadrature()), f) + plus);
  }
  const std::size_t n = rep.s.size();
  if (n == 0) {
    rep.ok = true;
    return rep;
  }
  double ms = 0.0, mv = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ms += rep.s[i] / n;
    mv += rep.values[i] / n;
  }
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (rep.s[i] - ms) * (rep.s[i] - ms);
    sxy += (rep.s[i] - ms) * (rep.values[i] - mv);
  }
  rep.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  rep.intercept = mv - rep.slope * ms;
  for (std::size_t i = 0; i < n; ++i)
    rep.maxResidual = std::max(rep.maxResidual, std::abs(rep.values[i] - (rep.intercept + rep.slope * rep.s[i])));
  rep.ok = rep.maxResidual <= relTolerance * rep.reference;
  return rep;
}

} // namespace surfmeas
