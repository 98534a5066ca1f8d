#pragma once

#include "surfmeas/body.hpp"
#include "surfmeas/capbody.hpp"
#include "surfmeas/measures.hpp"
#include "surfmeas/perturb.hpp"

#include <json.hpp>

#include <string>

namespace surfmeas {

using Json = nlohmann::ordered_json;

/// Two-space indented JSON with every floating-point value printed as %.17g.
std::string dumpJson(const Json &j);
Json parseJson(const std::string &text);

std::string readTextFile(const std::string &path);
/// Writes to a sibling temporary file and renames it over `path`.
void writeFileAtomic(const std::string &path, const std::string &content);

Json toJson(const Vec3 &v);
Vec3 vec3FromJson(const Json &j);

Json toJson(const DiscreteMeasure &mu);
Json toJson(const BinnedMeasure &mu);
/// {"kind": "discrete", "atoms": [{"n": [x, y, z], "w": w}, ...]}
DiscreteMeasure discreteMeasureFromJson(const Json &j);
BinnedMeasure binnedMeasureFromJson(const Json &j);

Json toJson(const SphericalPartition &p);
SphericalPartition partitionFromJson(const Json &j);

/// {"O": [...], "B": [...], "Bprime": [...]}
Json toJson(const SceneFrame &scene);
SceneFrame sceneFromJson(const Json &j);

/// {"type": "ball" | "ellipsoid" | "polytope" | "graph", ...}
Json toJson(const BodyModel &body);
BodyModel bodyFromJson(const Json &j);
/// .off files hold polytopes; anything else is parsed as body JSON.
BodyModel loadBody(const std::string &path);

Json toJson(const BumpShape &b);
BumpShape bumpFromJson(const Json &j);

Json toJson(const SegmentReport &r);

} // namespace surfmeas
