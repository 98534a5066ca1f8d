#include "surfmeas/json_io.hpp"

#include "surfmeas/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace surfmeas {

namespace {

void emit(const Json &j, std::string &out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string padIn(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (j.type()) {
  case Json::value_t::object: {
    if (j.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    bool first = true;
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (!first)
        out += ",\n";
      first = false;
      out += padIn + Json(it.key()).dump() + ": ";
      emit(it.value(), out, indent + 1);
    }
    out += "\n" + pad + "}";
    return;
  }
  case Json::value_t::array: {
    if (j.empty()) {
      out += "[]";
      return;
    }
    // arrays of scalars stay on one line
    const bool flat = std::all_of(j.begin(), j.end(), [](const Json &e) { return e.is_primitive(); });
    out += flat ? "[" : "[\n";
    bool first = true;
    for (const auto &e : j) {
      if (!first)
        out += flat ? ", " : ",\n";
      first = false;
      if (!flat)
        out += padIn;
      emit(e, out, indent + 1);
    }
    out += flat ? "]" : "\n" + pad + "]";
    return;
  }
  case Json::value_t::number_float: {
    const double v = j.get<double>();
    if (!std::isfinite(v)) {
      out += "null";
      return;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
    return;
  }
  default:
    out += j.dump();
  }
}

const Json &field(const Json &j, const char *key) {
  if (!j.is_object() || !j.contains(key))
    throw InvalidInput(std::string("missing JSON field \"") + key + "\"");
  return j.at(key);
}

double number(const Json &j, const char *key) {
  const Json &v = field(j, key);
  if (!v.is_number())
    throw InvalidInput(std::string("JSON field \"") + key + "\" must be a number");
  return v.get<double>();
}

} // namespace

std::string dumpJson(const Json &j) {
  std::string out;
  emit(j, out, 0);
  out += "\n";
  return out;
}

Json parseJson(const std::string &text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error &e) {
    throw InvalidInput(std::string("malformed JSON: ") + e.what());
  }
}

std::string readTextFile(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw InvalidInput("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void writeFileAtomic(const std::string &path, const std::string &content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path() && !fs::exists(target.parent_path()))
    throw InvalidInput("output directory does not exist: " + target.parent_path().string());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw InvalidInput("cannot write " + tmp.string());
    out << content;
    if (!out.flush())
      throw InvalidInput("cannot write " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw InvalidInput("cannot write " + path + ": " + ec.message());
  }
}

Json toJson(const Vec3 &v) { return Json::array({v.x(), v.y(), v.z()}); }

Vec3 vec3FromJson(const Json &j) {
  if (!j.is_array() || j.size() != 3 || !j[0].is_number() || !j[1].is_number() || !j[2].is_number())
    throw InvalidInput("expected a 3-vector");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

Json toJson(const DiscreteMeasure &mu) {
  Json atoms = Json::array();
  for (const auto &a : mu.atoms())
    atoms.push_back(Json{{"n", toJson(a.n.vec())}, {"w", a.w}});
  return Json{{"kind", "discrete"}, {"atoms", atoms}};
}

DiscreteMeasure discreteMeasureFromJson(const Json &j) {
  if (j.is_object() && j.contains("kind") && j["kind"] != "discrete")
    throw InvalidInput("expected a discrete measure");
  const Json &atoms = field(j, "atoms");
  if (!atoms.is_array())
    throw InvalidInput("\"atoms\" must be an array");
  std::vector<Atom> out;
  for (const auto &a : atoms)
    out.push_back({UnitVector(vec3FromJson(field(a, "n"))), number(a, "w")});
  return DiscreteMeasure(out);
}

Json toJson(const SphericalPartition &p) {
  return Json{{"axis", toJson(p.axis())}, {"latBins", p.latBins()}, {"lonBins", p.lonBins()}};
}

SphericalPartition partitionFromJson(const Json &j) {
  const double lat = number(j, "latBins"), lon = number(j, "lonBins");
  if (!(lat >= 1 && lon >= 1) || lat != std::floor(lat) || lon != std::floor(lon))
    throw InvalidInput("partition bin counts must be positive integers");
  return SphericalPartition(vec3FromJson(field(j, "axis")), static_cast<std::size_t>(lat),
                            static_cast<std::size_t>(lon));
}

Json toJson(const BinnedMeasure &mu) {
  Json masses = Json::array(), moments = Json::array();
  for (std::size_t b = 0; b < mu.size(); ++b) {
    masses.push_back(mu.mass(b));
    moments.push_back(toJson(mu.moments()[b]));
  }
  return Json{{"kind", "binned"}, {"partition", toJson(mu.partition())}, {"masses", masses}, {"moments", moments}};
}

BinnedMeasure binnedMeasureFromJson(const Json &j) {
  SphericalPartition part = partitionFromJson(field(j, "partition"));
  const Json &masses = field(j, "masses");
  const Json &moments = field(j, "moments");
  if (!masses.is_array() || !moments.is_array() || masses.size() != part.size() || moments.size() != part.size())
    throw InvalidInput("binned measure size does not match its partition");
  std::vector<double> m;
  std::vector<Vec3> mom;
  for (std::size_t b = 0; b < part.size(); ++b) {
    if (!masses[b].is_number())
      throw InvalidInput("bin masses must be numbers");
    m.push_back(masses[b].get<double>());
    mom.push_back(vec3FromJson(moments[b]));
  }
  return BinnedMeasure(std::move(part), std::move(m), std::move(mom));
}

Json toJson(const SceneFrame &scene) {
  return Json{{"O", toJson(scene.O)}, {"B", toJson(scene.B)}, {"Bprime", toJson(scene.Bprime)}};
}

SceneFrame sceneFromJson(const Json &j) {
  return SceneFrame::make(vec3FromJson(field(j, "O")), vec3FromJson(field(j, "B")), vec3FromJson(field(j, "Bprime")));
}

Json toJson(const BodyModel &body) {
  if (const auto *b = std::get_if<Ball>(&body))
    return Json{{"type", "ball"}, {"center", toJson(b->center)}, {"radius", b->radius}};
  if (const auto *e = std::get_if<Ellipsoid>(&body))
    return Json{{"type", "ellipsoid"}, {"center", toJson(e->center)}, {"semiAxes", toJson(e->semiAxes)}};
  if (const auto *p = std::get_if<Polytope>(&body)) {
    Json verts = Json::array(), facets = Json::array();
    for (const auto &v : p->vertices())
      verts.push_back(toJson(v));
    for (const auto &f : p->facets())
      facets.push_back(f);
    return Json{{"type", "polytope"}, {"vertices", verts}, {"facets", facets}};
  }
  const auto &g = std::get<GraphBody>(body);
  return Json{{"type", "graph"}, {"cells", g.cells()}, {"maxHeight", g.maxHeight()}, {"heights", g.heights()}};
}

BodyModel bodyFromJson(const Json &j) {
  const Json &type = field(j, "type");
  if (!type.is_string())
    throw InvalidInput("body \"type\" must be a string");
  const std::string t = type.get<std::string>();
  BodyModel body;
  if (t == "ball") {
    body = Ball{vec3FromJson(field(j, "center")), number(j, "radius")};
  } else if (t == "ellipsoid") {
    body = Ellipsoid{vec3FromJson(field(j, "center")), vec3FromJson(field(j, "semiAxes"))};
  } else if (t == "polytope") {
    std::vector<Vec3> verts;
    for (const auto &v : field(j, "vertices"))
      verts.push_back(vec3FromJson(v));
    std::vector<std::vector<int>> facets;
    try {
      facets = field(j, "facets").get<std::vector<std::vector<int>>>();
    } catch (const Json::exception &) {
      throw InvalidInput("polytope facets must be integer index lists");
    }
    body = Polytope(std::move(verts), std::move(facets));
  } else if (t == "graph") {
    const double cells = number(j, "cells");
    std::vector<double> h;
    try {
      const Json &hj = field(j, "heights");
      if (!hj.empty() && hj.front().is_array()) {
        for (const auto &row : hj) // nested rows, row j holds u(·, −1 + j h)
          for (const auto &v : row)
            h.push_back(v.get<double>());
      } else {
        h = hj.get<std::vector<double>>();
      }
    } catch (const Json::exception &) {
      throw InvalidInput("graph heights must be numbers");
    }
    body = GraphBody(static_cast<int>(cells), std::move(h), number(j, "maxHeight"));
  } else {
    throw InvalidInput("unknown body type: " + t);
  }
  validateBody(body);
  return body;
}

BodyModel loadBody(const std::string &path) {
  const std::string text = readTextFile(path);
  if (std::filesystem::path(path).extension() == ".off") {
    BodyModel body = readOFF(text);
    validateBody(body);
    return body;
  }
  return bodyFromJson(parseJson(text));
}

Json toJson(const BumpShape &b) { return Json{{"center", b.center}, {"width", b.width}, {"amplitude", b.amplitude}}; }

BumpShape bumpFromJson(const Json &j) { return {number(j, "center"), number(j, "width"), number(j, "amplitude")}; }

Json toJson(const SegmentReport &r) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < r.s.size(); ++i)
    rows.push_back(Json{{"s", r.s[i]}, {"residual", r.residual[i]}, {"closure", r.closure[i]}});
  return Json{{"totalMass", r.totalMass},
              {"tolerance", r.tolerance},
              {"perS", rows},
              {"affineOK", r.affineOK},
              {"midpointResidual", r.midpointResidual},
              {"midpointOK", r.midpointOK},
              {"omegaPlusIdentical", r.omegaPlusIdentical}};
}

} // namespace surfmeas
