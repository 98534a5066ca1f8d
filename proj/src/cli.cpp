#include "surfmeas/cli.hpp"

#include "surfmeas/demos.hpp"
#include "surfmeas/errors.hpp"
#include "surfmeas/json_io.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>

namespace surfmeas {

namespace {

constexpr const char *kCsvHelp = "CSV columns: s, F (functional value at s), bin (partition id), mass. "
                                 "First line is the header.";

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<double> parseList(const std::string &text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size())
        throw std::invalid_argument(item);
    } catch (const std::exception &) {
      throw InvalidInput("invalid number in list: \"" + item + "\"");
    }
  }
  if (out.empty())
    throw InvalidInput("empty number list");
  return out;
}

BumpShape parseBump(const std::string &text) {
  if (text.rfind("bump:", 0) != 0)
    throw InvalidInput("--theta must look like bump:center,width,amplitude");
  const auto v = parseList(text.substr(5));
  if (v.size() != 3)
    throw InvalidInput("--theta needs exactly three numbers");
  return {v[0], v[1], v[2]};
}

Json profileSource(const BodyModel &body, const SceneFrame &scene, int tNodes, int phiCount) {
  return Json{{"body", toJson(body)}, {"scene", toJson(scene)}, {"tNodes", tNodes}, {"phiCount", phiCount}};
}

CylindricalProfile profileFromSource(const Json &j) {
  const BodyModel body = bodyFromJson(j.at("body"));
  const SceneFrame scene = sceneFromJson(j.at("scene"));
  const int tNodes = j.at("tNodes").get<int>(), phiCount = j.at("phiCount").get<int>();
  if (tNodes < 3 || phiCount < 3)
    throw InvalidInput("profile grid needs at least 3 nodes per direction");
  return buildProfile(body, scene, tNodes, phiCount);
}

Json matrixJson(const Eigen::MatrixXd &m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k)
      row.push_back(m(i, k));
    rows.push_back(row);
  }
  return rows;
}

std::string measureCsv(const std::vector<double> &s, const std::vector<double> &F,
                       const std::vector<BinnedMeasure> &measures) {
  std::string csv = "s,F,bin,mass\n";
  const std::size_t bins = measures.empty() ? 0 : measures.front().size();
  std::vector<bool> used(bins, false);
  for (const auto &m : measures)
    for (std::size_t b = 0; b < bins; ++b)
      used[b] = used[b] || m.mass(b) != 0.0;
  for (std::size_t i = 0; i < measures.size(); ++i)
    for (std::size_t b = 0; b < bins; ++b)
      if (used[b])
        csv += fmt(s[i]) + "," + fmt(F[i]) + "," + std::to_string(b) + "," + fmt(measures[i].mass(b)) + "\n";
  return csv;
}

// Family file: the profile source plus the modulation request; everything
// else is recomputed deterministically on load.
struct FamilyFile {
  Json source;
  BumpShape bump;
  double T = 0.9;
  std::vector<double> s;
  SphericalPartition partition{Vec3(1, 0, 0)};
};

FamilyFile familyFromJson(const Json &j) {
  FamilyFile f;
  f.source = j.at("profile");
  f.bump = bumpFromJson(j.at("bump"));
  f.T = j.at("T").get<double>();
  f.s = j.at("s").get<std::vector<double>>();
  f.partition = partitionFromJson(j.at("partition"));
  return f;
}

class Commands {
public:
  Commands(std::ostream &out, std::ostream &err) : out_(out), err_(err) {}

  void install(CLI::App &app) {
    installMeasure(app);
    installReconstruct(app);
    installBlaschke(app);
    installProfile(app);
    installPerturb(app);
    installVerify(app);
    installResist(app);
    installResistGraph(app);
    installDemos(app);
  }

  int run() { return action_ ? action_() : 1; }

private:
  std::ostream &out_;
  std::ostream &err_;
  std::function<int()> action_;

  // options (one subcommand runs per invocation)
  std::string in_, outPath_, measurePath_, aPath_, bPath_, bodyPath_, scenePath_, profilePath_, familyPath_,
      reportPath_, csvPath_, meshDir_, theta_ = "bump:0.45,0.3,0.5", sList_ = "-1,-0.5,0,0.5,1", fName_ = "newton",
      solver_ = "newton", uPath_;
  int tNodes_ = 257, phiCount_ = 512, maxIterations_ = 10000, supersample_ = 8;
  std::size_t latBins_ = SphericalPartition::kDefaultLatBins, lonBins_ = SphericalPartition::kDefaultLonBins;
  double T_ = 0.9, tolerance_ = 1e-8, damping_ = 0.5, segmentTol_ = 1e-8;
  std::uint64_t seed_ = 0;

  ReconstructionSettings settings() const {
    ReconstructionSettings s;
    s.areaTolerance = tolerance_;
    s.maxIterations = maxIterations_;
    s.damping = damping_;
    s.solver = solver_ == "support" ? ReconstructionSolver::SupportIteration : ReconstructionSolver::Newton;
    if (seed_ != 0)
      s.randomSeed = seed_;
    s.validate();
    return s;
  }

  void reconstructionFlags(CLI::App *sub) {
    sub->add_option("--solver", solver_, "newton | support")->check(CLI::IsMember({"newton", "support"}));
    sub->add_option("--tolerance", tolerance_, "relative L1 area tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--max-iterations", maxIterations_)->check(CLI::PositiveNumber);
    sub->add_option("--damping", damping_)->check(CLI::Range(1e-12, 1.0));
    sub->add_option("--seed", seed_, "random initialization seed (0 = unperturbed start)");
  }

  void installMeasure(CLI::App &app) {
    auto *sub = app.add_subcommand("measure", "surface measure of an OFF polytope");
    sub->add_option("--in", in_, "input .off")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", outPath_, "output measure JSON")->required();
    sub->callback([this] {
      action_ = [this] {
        const Polytope p = readOFF(readTextFile(in_));
        const DiscreteMeasure mu = surfaceMeasure(p);
        writeFileAtomic(outPath_, dumpJson(toJson(mu)));
        out_ << mu.size() << " atoms, total area " << fmt(mu.totalMass()) << "\n";
        return 0;
      };
    });
  }

  void installReconstruct(CLI::App &app) {
    auto *sub = app.add_subcommand("reconstruct", "polytope with a prescribed discrete surface measure");
    sub->add_option("--measure", measurePath_, "measure JSON")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", outPath_, "output .off")->required();
    reconstructionFlags(sub);
    sub->callback([this] {
      action_ = [this] {
        const DiscreteMeasure mu = discreteMeasureFromJson(parseJson(readTextFile(measurePath_)));
        ReconstructionInfo info;
        const Polytope p = reconstruct(mu, settings(), &info);
        writeFileAtomic(outPath_, writeOFF(p));
        out_ << p.facetCount() << " facets, residual " << fmt(info.residual) << ", iterations " << info.iterations
             << "\n";
        return 0;
      };
    });
  }

  void installBlaschke(CLI::App &app) {
    auto *sub = app.add_subcommand("blaschke", "Blaschke sum of two OFF polytopes");
    sub->add_option("--a", aPath_)->required()->check(CLI::ExistingFile);
    sub->add_option("--b", bPath_)->required()->check(CLI::ExistingFile);
    sub->add_option("--out", outPath_, "output .off")->required();
    reconstructionFlags(sub);
    sub->callback([this] {
      action_ = [this] {
        const Polytope p = blaschkeSum(readOFF(readTextFile(aPath_)), readOFF(readTextFile(bPath_)), settings());
        writeFileAtomic(outPath_, writeOFF(p));
        out_ << p.facetCount() << " facets\n";
        return 0;
      };
    });
  }

  void installProfile(CLI::App &app) {
    auto *sub = app.add_subcommand("profile", "cylindrical profile r, sigma of a body around the axis O-B");
    sub->add_option("--body", bodyPath_, "body .off or JSON")->required()->check(CLI::ExistingFile);
    sub->add_option("--scene", scenePath_, "scene JSON {O, B, Bprime}")->required()->check(CLI::ExistingFile);
    sub->add_option("--t", tNodes_, "t grid nodes")->check(CLI::Range(3, 1 << 20));
    sub->add_option("--phi", phiCount_, "phi columns")->check(CLI::Range(3, 1 << 20));
    sub->add_option("--out", outPath_, "output profile JSON")->required();
    sub->callback([this] {
      action_ = [this] {
        const BodyModel body = loadBody(bodyPath_);
        const SceneFrame scene = sceneFromJson(parseJson(readTextFile(scenePath_)));
        const auto p = buildProfile(body, scene, tNodes_, phiCount_);
        const auto cond = validateConditions(p, 0.9);
        Json j = profileSource(body, scene, tNodes_, phiCount_);
        j["t"] = p.t;
        j["phi"] = p.phi;
        j["alpha"] = p.alpha;
        j["r"] = matrixJson(p.r);
        j["sigma"] = matrixJson(p.sigma);
        j["sigmaPhi"] = matrixJson(p.sigmaPhi);
        j["diam"] = p.diam;
        j["supportIdentityResidual"] = p.supportIdentityResidual();
        j["conditions"] = Json{{"tau", 0.9},      {"tangencyOK", cond.tangencyOK}, {"k", cond.k},
                               {"gamma", cond.gamma}, {"maxSigma", cond.maxSigma}, {"minAlphaPrime", cond.minAlphaPrime}};
        writeFileAtomic(outPath_, dumpJson(j));
        out_ << "profile " << p.nt() << "x" << p.nphi() << ", gamma(0.9) " << fmt(cond.gamma) << "\n";
        return 0;
      };
    });
  }

  void installPerturb(CLI::App &app) {
    auto *sub = app.add_subcommand("perturb", "bump-modulated family C(s) of a profiled body");
    sub->add_option("--profile", profilePath_, "profile JSON")->required()->check(CLI::ExistingFile);
    sub->add_option("--theta", theta_, "bump:center,width,amplitude");
    sub->add_option("--T", T_, "support window of theta")->check(CLI::Range(1e-12, 1.0 - 1e-12));
    sub->add_option("--s", sList_, "comma-separated s values in [-1, 1]");
    sub->add_option("--lat", latBins_, "latitude bins")->check(CLI::PositiveNumber);
    sub->add_option("--lon", lonBins_, "longitude bins")->check(CLI::PositiveNumber);
    sub->add_option("--out", outPath_, "output family JSON")->required();
    sub->add_option("--mesh-out", meshDir_, "directory for C(s) meshes (.off)")->check(CLI::ExistingDirectory);
    sub->add_option("--csv", csvPath_, kCsvHelp);
    sub->callback([this] {
      action_ = [this] {
        const BumpShape bump = parseBump(theta_);
        const auto s = parseList(sList_);
        const Json src = parseJson(readTextFile(profilePath_));
        const auto p = profileFromSource(src);
        const SphericalPartition part(p.scene.frame.axis, latBins_, lonBins_);
        const auto fam = makeFamily(p, bump, T_, part);
        const auto &mod = fam.modulation();
        Json alphaTilde = Json::array();
        std::vector<BinnedMeasure> measures;
        std::vector<double> F;
        const auto drag = newtonDragFunctional();
        for (double si : s) {
          if (!(si >= -1.0 && si <= 1.0))
            throw InvalidInput("s must lie in [-1, 1]");
          alphaTilde.push_back(Json{{"s", si}, {"alphaTilde", fam.alphaTilde(si)}});
          measures.push_back(fam.measureAt(si));
          F.push_back(functional(measures.back(), drag));
        }
        Json j{{"profile", profileSource(*p.body, p.scene, static_cast<int>(p.nt()), static_cast<int>(p.nphi()))},
               {"bump", toJson(bump)},
               {"T", T_},
               {"s", s},
               {"partition", toJson(part)},
               {"c", mod.c},
               {"acceptedAmplitude", mod.shape.amplitude},
               {"halvings", mod.halvings},
               {"alphaTilde", alphaTilde},
               {"director", toJson(fam.director())}};
        if (!meshDir_.empty()) {
          Json meshes = Json::array();
          for (std::size_t i = 0; i < s.size(); ++i) {
            const std::string path = (std::filesystem::path(meshDir_) / ("C_s" + std::to_string(i) + ".off")).string();
            writeFileAtomic(path, writeOFF(perturbBody(fam, s[i]).mesh));
            meshes.push_back(Json{{"s", s[i]}, {"path", path}});
          }
          j["meshes"] = meshes;
        }
        writeFileAtomic(outPath_, dumpJson(j));
        if (!csvPath_.empty())
          writeFileAtomic(csvPath_, measureCsv(s, F, measures));
        out_ << "accepted amplitude " << fmt(mod.shape.amplitude) << " after " << mod.halvings << " halvings\n";
        return 0;
      };
    });
  }

  void installVerify(CLI::App &app) {
    auto *sub = app.add_subcommand("verify-segment", "check that s -> nu_C(s) is a segment with midpoint nu_C");
    sub->add_option("--family", familyPath_, "family JSON from perturb")->required()->check(CLI::ExistingFile);
    sub->add_option("--report", reportPath_, "output report JSON")->required();
    sub->add_option("--tolerance", segmentTol_, "relative per-bin tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--f", fName_, "functional for the affine check: newton | one | random:<seed>");
    sub->add_option("--csv", csvPath_, kCsvHelp);
    sub->callback([this] {
      action_ = [this] {
        const FamilyFile ff = familyFromJson(parseJson(readTextFile(familyPath_)));
        const auto f = functionalByName(fName_);
        const auto p = profileFromSource(ff.source);
        const auto fam = makeFamily(p, ff.bump, ff.T, ff.partition);
        const auto seg = verifySegment(fam, ff.s, segmentTol_);
        const auto aff = affineCheck(fam, f, ff.s);
        double l8 = 0.0;
        for (double s : ff.s)
          l8 = std::max(l8, lemma8Check(fam, s));
        const bool l8ok = l8 <= 1e-9 * p.diam;
        Json j{{"segment", toJson(seg)},
               {"affine", Json{{"functional", f.name},
                               {"values", aff.values},
                               {"slope", aff.slope},
                               {"intercept", aff.intercept},
                               {"maxResidual", aff.maxResidual},
                               {"ok", aff.ok}}},
               {"lemma8", Json{{"maxViolation", l8}, {"ok", l8ok}}}};
        const bool pass = seg.affineOK && seg.midpointOK && seg.omegaPlusIdentical && aff.ok && l8ok;
        j["pass"] = pass;
        writeFileAtomic(reportPath_, dumpJson(j));
        if (!csvPath_.empty()) {
          std::vector<BinnedMeasure> measures;
          for (double s : ff.s)
            measures.push_back(fam.measureAt(s));
          writeFileAtomic(csvPath_, measureCsv(ff.s, aff.values, measures));
        }
        out_ << (pass ? "segment verified" : "segment verification FAILED") << "\n";
        if (!pass)
          err_ << "verification failed; see " << reportPath_ << "\n";
        return pass ? 0 : 1;
      };
    });
  }

  void installResist(CLI::App &app) {
    auto *sub = app.add_subcommand("resist", "linear functional of a surface measure");
    sub->add_option("--measure", measurePath_, "measure JSON (discrete or binned)")->required()->check(CLI::ExistingFile);
    sub->add_option("--f", fName_, "newton | one | random:<seed>");
    sub->add_option("--report", reportPath_, "optional report JSON");
    sub->callback([this] {
      action_ = [this] {
        const Json j = parseJson(readTextFile(measurePath_));
        const auto f = functionalByName(fName_);
        const bool binned = j.is_object() && j.value("kind", std::string()) == "binned";
        const double v =
            binned ? functional(binnedMeasureFromJson(j), f) : functional(discreteMeasureFromJson(j), f);
        out_ << fmt(v) << "\n";
        if (!reportPath_.empty())
          writeFileAtomic(reportPath_, dumpJson(Json{{"functional", f.name},
                                                     {"measureKind", binned ? "binned" : "discrete"},
                                                     {"value", v}}));
        return 0;
      };
    });
  }

  void installResistGraph(CLI::App &app) {
    auto *sub = app.add_subcommand("resist-graph", "resistance integral of a concave graph over the unit disk");
    sub->add_option("--u", uPath_, "graph JSON {cells, maxHeight, heights}")->required()->check(CLI::ExistingFile);
    sub->add_option("--supersample", supersample_, "boundary-cell samples per side")->check(CLI::Range(1, 1024));
    sub->add_option("--report", reportPath_, "optional report JSON");
    sub->callback([this] {
      action_ = [this] {
        Json j = parseJson(readTextFile(uPath_));
        if (j.is_object() && !j.contains("type"))
          j["type"] = "graph";
        const BodyModel body = bodyFromJson(j);
        const auto *g = std::get_if<GraphBody>(&body);
        if (!g)
          throw InvalidInput("--u must describe a graph body");
        const auto q = graphResistanceDetailed(*g, supersample_);
        out_ << fmt(q.value) << "\n";
        if (!reportPath_.empty())
          writeFileAtomic(reportPath_, dumpJson(Json{{"value", q.value},
                                                     {"cells", q.cells},
                                                     {"supersample", q.supersample},
                                                     {"coveredArea", q.coveredArea},
                                                     {"rule", "cell-center gradient, midpoint"}}));
        return 0;
      };
    });
  }

  void installDemos(CLI::App &app) {
    auto *ch = app.add_subcommand("demo-cube-house", "cube and house: equal measures off three directions");
    ch->add_option("--report", reportPath_, "output report JSON");
    ch->callback([this] {
      action_ = [this] {
        const auto rep = cubeHouseDemo();
        const bool pass = rep.measuresAgree() && rep.bodiesDiffer();
        out_ << "measures agree off {e3, v+, v-}: " << (rep.measuresAgree() ? "yes" : "no") << "\n"
             << "centered Hausdorff distance of reconstructions: " << fmt(rep.centeredHausdorff) << "\n"
             << "bodies are translations of each other: " << (rep.bodiesDiffer() ? "no" : "yes") << "\n"
             << "preimage areas: cube " << fmt(rep.cubePreimageArea) << ", house " << fmt(rep.housePreimageArea)
             << "\n";
        if (!reportPath_.empty())
          writeFileAtomic(reportPath_, dumpJson(Json{{"cube", toJson(rep.cube)},
                                                     {"house", toJson(rep.house)},
                                                     {"offExceptionalDifference", rep.offExceptionalDifference},
                                                     {"measuresAgree", rep.measuresAgree()},
                                                     {"centeredHausdorff", rep.centeredHausdorff},
                                                     {"bodiesDiffer", rep.bodiesDiffer()},
                                                     {"cubePreimageArea", rep.cubePreimageArea},
                                                     {"housePreimageArea", rep.housePreimageArea},
                                                     {"pass", pass}}));
        return pass ? 0 : 1;
      };
    });

    auto *bf = app.add_subcommand("demo-ball-family", "segment of surface measures for the off-center ball");
    bf->add_option("--report", reportPath_, "output report JSON");
    bf->add_option("--csv", csvPath_, kCsvHelp);
    bf->add_option("--t", tNodes_, "t grid nodes")->check(CLI::Range(3, 1 << 20));
    bf->add_option("--phi", phiCount_, "phi columns")->check(CLI::Range(3, 1 << 20));
    bf->callback([this] {
      action_ = [this] {
        BallFamilyOptions opt;
        opt.tNodes = tNodes_;
        opt.phiCount = phiCount_;
        const auto rep = ballFamilyDemo(opt);
        out_ << "accepted amplitude " << fmt(rep.acceptedAmplitude) << "\n"
             << "affineOK=" << (rep.segment.affineOK ? "true" : "false")
             << " midpointOK=" << (rep.segment.midpointOK ? "true" : "false")
             << " newtonAffine=" << (rep.newton.ok ? "true" : "false") << "\n";
        if (!reportPath_.empty())
          writeFileAtomic(reportPath_,
                          dumpJson(Json{{"acceptedAmplitude", rep.acceptedAmplitude},
                                        {"segment", toJson(rep.segment)},
                                        {"affineOK", rep.segment.affineOK},
                                        {"midpointOK", rep.segment.midpointOK},
                                        {"newton", Json{{"values", rep.newton.values},
                                                        {"maxResidual", rep.newton.maxResidual},
                                                        {"ok", rep.newton.ok}}},
                                        {"lemma8", rep.lemma8},
                                        {"lemma10", Json{{"bound", rep.lemma10.bound},
                                                         {"measured", rep.lemma10.measured}}},
                                        {"pass", rep.ok()}}));
        if (!csvPath_.empty())
          writeFileAtomic(csvPath_, measureCsv(rep.segment.s, rep.newton.values, rep.measures));
        return rep.ok() ? 0 : 1;
      };
    });
  }
};

} // namespace

int runCli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app{"Surface measures of convex bodies: reconstruction, profiles, perturbation families.", "surfmeas"};
  app.require_subcommand(1, 1);
  Commands commands(out, err);
  commands.install(app);
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp &) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError &e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  }
  try {
    return commands.run();
  } catch (const NoConvergence &e) {
    err << "error: " << e.what() << " (residual " << fmt(e.residual()) << ")\n";
    return 2;
  } catch (const InvalidInput &e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const Json::exception &e) {
    err << "error: malformed input: " << e.what() << "\n";
    return 1;
  }
}

int runCli(int argc, char **argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return runCli(args, std::cout, std::cerr);
}

} // namespace surfmeas
