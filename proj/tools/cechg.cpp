// Batch verification tool: loads JSON descriptions, runs the checks, and
// prints a deterministic report.  Exit codes: 0 all checks pass, 1 a check
// failed (with witness), 2 input or schema error, 3 budget exceeded.
#include <chrono>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cechg/fixtures.hpp"
#include "cechg/json_io.hpp"

namespace {

using namespace cechg;

// Deterministic report: command echo, input digests, one line per check.
// Timing goes to stderr so identical inputs produce byte-identical stdout.
struct RunReport {
  std::vector<std::string> lines;
  bool failed = false;

  void echo(int argc, char** argv) {
    std::string cmd = "command:";
    for (int i = 0; i < argc; ++i) cmd += std::string(" ") + argv[i];
    lines.push_back(cmd);
  }
  void digest(const std::string& label, const json& j) {
    lines.push_back("input " + label + ": digest " + json_digest(j));
  }
  void check(const std::string& name, const Report& r) {
    if (r.ok()) {
      lines.push_back("check " + name + ": pass");
    } else {
      failed = true;
      lines.push_back("check " + name + ": FAIL");
      for (const auto& issue : r.issues) lines.push_back("  " + issue);
    }
  }
  void note(const std::string& line) { lines.push_back(line); }
  void fail(const std::string& line) {
    failed = true;
    lines.push_back(line);
  }
  int finish() const {
    for (const auto& line : lines) std::cout << line << "\n";
    return failed ? 1 : 0;
  }
};

std::string dirOf(const std::string& path) {
  auto parent = std::filesystem::path(path).parent_path();
  return parent.empty() ? std::string(".") : parent.string();
}

json loadInput(RunReport& report, const std::string& label,
               const std::string& path) {
  json j = load_json_file(path);
  report.digest(label, j);
  return j;
}

void writeFixture(const std::string& outDir, const std::string& name,
                  const json& j, RunReport& report) {
  std::filesystem::create_directories(outDir);
  std::string path = outDir + "/" + name;
  save_json_file(path, j);
  report.note("wrote " + path);
}

int runFixture(const std::string& name, const std::string& outDir,
               RunReport& report) {
  if (name == "unit") {
    FiniteGroupoid z2 = group_as_groupoid(cyclic_group(2));
    writeFixture(outDir, "groupoid.json", groupoid_to_json(z2), report);
    writeFixture(outDir, "bundle.json", bundle_to_json(unit_bundle(z2)),
                 report);
    writeFixture(outDir, "genmor.json", genmor_to_json(unit_genmor(z2)),
                 report);
    return 0;
  }
  if (name == "pair-groupoid") {
    FiniteGroupoid pg = pair_groupoid({"x", "y"});
    Cover cover = two_set_cover(named_set("m", 3));
    Rng rng(7);
    LocalTrivData d = random_trivdata(rng, cover, pg);
    writeFixture(outDir, "trivdata.json", trivdata_to_json(d), report);
    return 0;
  }
  if (name == "action-swap") {
    ActionGroupoid swap = z2_swap_action();
    writeFixture(outDir, "groupoid.json", groupoid_to_json(swap.groupoid),
                 report);
    Cover cover = singleton_cover(named_set("m", 1));
    Rng rng(11);
    LocalTrivData d = random_trivdata(rng, cover, swap.groupoid);
    writeFixture(outDir, "trivdata.json", trivdata_to_json(d), report);
    return 0;
  }
  if (name == "gauge-z2") {
    PrincipalBundle p = trivial_group_bundle(cyclic_group(2), 2);
    GaugeGroupoid gauge = gauge_groupoid(p);
    writeFixture(outDir, "bundle.json", bundle_to_json(p), report);
    writeFixture(outDir, "groupoid.json", groupoid_to_json(gauge.groupoid),
                 report);
    Cover cover = two_set_cover(p.base);
    SectionFamily sections = canonical_sections(p, cover);
    GaugeTransformationFamily tau =
        gauge_tau_from_transitions(p, cover, sections);
    LocalTrivData d = gauge_cocycles(p, cover, sections, tau, gauge);
    writeFixture(outDir, "trivdata.json", trivdata_to_json(d), report);
    writeFixture(outDir, "genmor.json",
                 genmor_to_json(pair_to_gauge(p, gauge)), report);
    return 0;
  }
  if (name == "descent-2x2") {
    FiniteMap f;
    f.domain = named_set("x", 4);
    f.codomain = named_set("y", 2);
    f.map = {0, 0, 1, 1};
    writeFixture(outDir, "f.json", finite_map_to_json(f), report);
    writeFixture(outDir, "g.json", group_to_json(cyclic_group(2)), report);
    return 0;
  }
  if (name == "gauge-morita") {
    PrincipalBundle p = trivial_group_bundle(cyclic_group(2), 2);
    Cover cover = two_set_cover(p.base);
    SectionFamily sections = canonical_sections(p, cover);
    LocalMoritaEquivalence m = gauge_group_fixture(p, cover, sections, 0);
    writeFixture(outDir, "localmorita.json", local_morita_to_json(m), report);
    return 0;
  }
  report.fail("unknown fixture: " + name);
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite groupoid-bundle verification toolkit"};
  app.require_subcommand(1);

  std::string groupoidPath, bundlePath, trivdataPath, coverPath, outPath;
  std::string aPath, bPath, pPath, qPath, thetaPath, etaPath, filePath;
  std::string mapPath, groupPath, fixtureName, outDir = ".";
  long long budgetOverride = 0;
  int degree = 2;
  std::uint64_t seed = 1;

  auto* validate = app.add_subcommand("validate", "validate a description");
  validate->add_option("--groupoid", groupoidPath);
  validate->add_option("--bundle", bundlePath);
  validate->add_option("--trivdata", trivdataPath);
  validate->add_option("--locgenmor", filePath);

  auto* glue = app.add_subcommand("glue", "glue data and check the round trip");
  glue->add_option("--trivdata", trivdataPath)->required();
  glue->add_option("--out", outPath);

  auto* extract = app.add_subcommand(
      "extract", "extract data from a bundle with canonical sections");
  extract->add_option("--bundle", bundlePath)->required();
  extract->add_option("--cover", coverPath)->required();
  extract->add_option("--out", outPath);

  auto* cohom = app.add_subcommand("cohomologous",
                                   "decide whether two data are cohomologous");
  cohom->add_option("--a", aPath)->required();
  cohom->add_option("--b", bPath)->required();

  auto* h1 = app.add_subcommand("h1", "cohomology classes at a fixed cover");
  h1->add_option("--cover", coverPath)->required();
  h1->add_option("--groupoid", groupoidPath)->required();
  h1->add_option("--budget", budgetOverride);

  auto* localize = app.add_subcommand("genmor-localize",
                                      "localize a bibundle over a cover");
  localize->add_option("--genmor", pPath)->required();
  localize->add_option("--cover", coverPath)->required();
  localize->add_option("--out", outPath);

  auto* globalizeCmd = app.add_subcommand("genmor-globalize",
                                          "globalize a local morphism");
  globalizeCmd->add_option("--locgenmor", filePath)->required();
  globalizeCmd->add_option("--out", outPath);

  auto* compG = app.add_subcommand("compose-global", "compose two bibundles");
  compG->add_option("--p", pPath)->required();
  compG->add_option("--q", qPath)->required();
  compG->add_option("--out", outPath);

  auto* compL = app.add_subcommand("compose-local",
                                   "compose two local morphisms");
  compL->add_option("--theta", thetaPath)->required();
  compL->add_option("--eta", etaPath)->required();
  compL->add_option("--out", outPath);

  auto* compat = app.add_subcommand(
      "compat-check", "composition compatibility, local against global");
  compat->add_option("--p", pPath)->required();
  compat->add_option("--q", qPath)->required();
  compat->add_option("--seed", seed);

  auto* mv = app.add_subcommand("morita-validate", "validate a bibundle as a "
                                                   "Morita equivalence");
  mv->add_option("--genmor", pPath)->required();

  auto* mc = app.add_subcommand("morita-criterion",
                                "certify through a companion bibundle");
  mc->add_option("--p", pPath)->required();
  mc->add_option("--q", qPath);

  auto* fact = app.add_subcommand("factorization-check",
                                  "division-map factorization identities");
  fact->add_option("--genmor", pPath)->required();

  auto* lmv = app.add_subcommand("local-morita-validate",
                                 "validate a local Morita equivalence");
  lmv->add_option("--file", filePath)->required();

  auto* gf = app.add_subcommand("gauge-fixture",
                                "build and validate the gauge fixture");
  int gfPoints = 2, gfOrder = 2, gfBase = 0;
  gf->add_option("--points", gfPoints);
  gf->add_option("--order", gfOrder);
  gf->add_option("--basepoint", gfBase);
  gf->add_option("--out", outDir);

  auto* nerveCheck = app.add_subcommand("nerve-check",
                                        "nerve coherence of a local morphism");
  nerveCheck->add_option("--locgenmor", filePath)->required();
  nerveCheck->add_option("--degree", degree);

  auto* descent = app.add_subcommand("descent", "descent round trip");
  descent->add_option("--map", mapPath)->required();
  descent->add_option("--group", groupPath)->required();
  descent->add_option("--budget", budgetOverride);

  auto* fixture = app.add_subcommand("fixture", "write a named fixture");
  fixture->add_option("name", fixtureName)->required();
  fixture->add_option("--out", outDir);

  CLI11_PARSE(app, argc, argv);

  RunReport report;
  report.echo(argc, argv);
  auto start = std::chrono::steady_clock::now();
  int code = 0;
  try {
    Budget budget = budgetOverride > 0 ? Budget(budgetOverride)
                                       : Budget::fromEnv();
    if (validate->parsed()) {
      if (!groupoidPath.empty()) {
        FiniteGroupoid g = groupoid_from_json(
            loadInput(report, "groupoid", groupoidPath));
        report.check("groupoid axioms", validate_groupoid(g));
      }
      if (!bundlePath.empty()) {
        PrincipalBundle b = bundle_from_json(
            loadInput(report, "bundle", bundlePath), dirOf(bundlePath));
        report.check("bundle axioms", validate_bundle(b));
        if (validate_bundle(b).ok())
          report.check("division equivariance",
                       check_division_equivariance(b));
      }
      if (!trivdataPath.empty()) {
        LocalTrivData d = trivdata_from_json(
            loadInput(report, "trivdata", trivdataPath), dirOf(trivdataPath));
        report.check("cocycle conditions", validate_trivdata(d));
      }
      if (!filePath.empty()) {
        LocalGeneralizedMorphism m = locgenmor_from_json(
            loadInput(report, "locgenmor", filePath), dirOf(filePath));
        report.check("local generalized morphism", validate_local_genmor(m));
      }
    } else if (glue->parsed()) {
      LocalTrivData d = trivdata_from_json(
          loadInput(report, "trivdata", trivdataPath), dirOf(trivdataPath));
      report.check("cocycle conditions", validate_trivdata(d));
      GluedBundle gb = glue_bundle(d);
      report.note("glued bundle: " + std::to_string(gb.bundle.total.size()) +
                  " elements over " + std::to_string(gb.bundle.base.size()) +
                  " base points");
      report.check("glued bundle axioms", validate_bundle(gb.bundle));
      LocalTrivData back =
          extract_trivdata(gb.bundle, d.cover, canonical_glued_sections(gb));
      Report round;
      if (back != d) round.fail("extracted data differ from the input");
      report.check("round trip", round);
      if (!outPath.empty()) {
        save_json_file(outPath, bundle_to_json(gb.bundle));
        report.note("wrote " + outPath);
      }
    } else if (extract->parsed()) {
      PrincipalBundle b = bundle_from_json(
          loadInput(report, "bundle", bundlePath), dirOf(bundlePath));
      Cover cover = cover_from_json(loadInput(report, "cover", coverPath));
      report.check("bundle axioms", validate_bundle(b));
      LocalTrivData d = extract_trivdata(b, cover, canonical_sections(b, cover));
      report.check("extracted cocycle", validate_trivdata(d));
      if (!outPath.empty()) {
        save_json_file(outPath, trivdata_to_json(d));
        report.note("wrote " + outPath);
      }
    } else if (cohom->parsed()) {
      LocalTrivData d1 =
          trivdata_from_json(loadInput(report, "a", aPath), dirOf(aPath));
      LocalTrivData d2 =
          trivdata_from_json(loadInput(report, "b", bPath), dirOf(bPath));
      auto witness = are_cohomologous(d1, d2);
      if (witness) {
        report.note("verdict: cohomologous");
        report.check("witness", validate_local_morphism(*witness));
      } else {
        report.fail("verdict: not cohomologous");
      }
    } else if (h1->parsed()) {
      Cover cover = cover_from_json(loadInput(report, "cover", coverPath));
      FiniteGroupoid g =
          groupoid_from_json(loadInput(report, "groupoid", groupoidPath));
      H1Result result = h1_at_cover(cover, g, budget);
      report.note("cocycles: " + std::to_string(result.cocycleCount));
      report.note("classes: " + std::to_string(result.classes.size()));
      for (const auto& rep : result.representatives)
        report.note("representative digest " +
                    json_digest(trivdata_to_json(rep)));
    } else if (localize->parsed()) {
      GeneralizedMorphism m =
          genmor_from_json(loadInput(report, "genmor", pPath), dirOf(pPath));
      Cover cover = cover_from_json(loadInput(report, "cover", coverPath));
      report.check("bibundle axioms", validate_genmor(m));
      LocalGeneralizedMorphism local =
          cechg::localize(m, cover, canonical_sections(m.bundle, cover));
      report.check("localized morphism", validate_local_genmor(local));
      if (!outPath.empty()) {
        save_json_file(outPath, locgenmor_to_json(local));
        report.note("wrote " + outPath);
      }
    } else if (globalizeCmd->parsed()) {
      LocalGeneralizedMorphism local = locgenmor_from_json(
          loadInput(report, "locgenmor", filePath), dirOf(filePath));
      report.check("local generalized morphism", validate_local_genmor(local));
      Globalized glob = globalize(local);
      report.check("globalized bibundle", validate_genmor(glob.gm));
      if (!outPath.empty()) {
        save_json_file(outPath, genmor_to_json(glob.gm));
        report.note("wrote " + outPath);
      }
    } else if (compG->parsed()) {
      GeneralizedMorphism p =
          genmor_from_json(loadInput(report, "p", pPath), dirOf(pPath));
      GeneralizedMorphism q =
          genmor_from_json(loadInput(report, "q", qPath), dirOf(qPath));
      ComposedGenMor c = compose_global(p, q);
      report.note("composite classes: " +
                  std::to_string(c.gm.bundle.total.size()));
      report.check("composite bibundle", validate_genmor(c.gm));
      if (!outPath.empty()) {
        save_json_file(outPath, genmor_to_json(c.gm));
        report.note("wrote " + outPath);
      }
    } else if (compL->parsed()) {
      LocalGeneralizedMorphism theta = locgenmor_from_json(
          loadInput(report, "theta", thetaPath), dirOf(thetaPath));
      LocalGeneralizedMorphism eta = locgenmor_from_json(
          loadInput(report, "eta", etaPath), dirOf(etaPath));
      LocalGeneralizedMorphism composed = compose_local(theta, eta);
      report.check("composite local morphism", validate_local_genmor(composed));
      if (!outPath.empty()) {
        save_json_file(outPath, locgenmor_to_json(composed));
        report.note("wrote " + outPath);
      }
    } else if (compat->parsed()) {
      GeneralizedMorphism p =
          genmor_from_json(loadInput(report, "p", pPath), dirOf(pPath));
      GeneralizedMorphism q =
          genmor_from_json(loadInput(report, "q", qPath), dirOf(qPath));
      Rng rng(seed);
      Cover coverU = random_cover(rng, p.bundle.base, 2);
      Cover coverV = random_cover(rng, q.bundle.base, 2);
      SectionFamily sp = random_sections(rng, p.bundle, coverU);
      SectionFamily sq = random_sections(rng, q.bundle, coverV);
      report.check("local against global composition",
                   check_local_global_compat(p, q, coverU, sp, coverV, sq));
    } else if (mv->parsed()) {
      GeneralizedMorphism m =
          genmor_from_json(loadInput(report, "genmor", pPath), dirOf(pPath));
      report.check("Morita axioms", validate_morita(m));
    } else if (mc->parsed()) {
      GeneralizedMorphism p =
          genmor_from_json(loadInput(report, "p", pPath), dirOf(pPath));
      CriterionResult result;
      if (!qPath.empty()) {
        GeneralizedMorphism q =
            genmor_from_json(loadInput(report, "q", qPath), dirOf(qPath));
        result = morita_criterion(p, q);
      } else {
        result = morita_criterion(p);
      }
      if (result.certified) {
        report.note("verdict: certified");
      } else {
        report.fail("verdict: not certified");
      }
      report.check("criterion details", result.report);
    } else if (fact->parsed()) {
      GeneralizedMorphism m =
          genmor_from_json(loadInput(report, "genmor", pPath), dirOf(pPath));
      report.check("Morita axioms", validate_morita(m));
      MoritaEquivalence me = make_morita(m);
      report.check("factorization identities", factorization_check(me));
    } else if (lmv->parsed()) {
      LocalMoritaEquivalence m = local_morita_from_json(
          loadInput(report, "file", filePath), dirOf(filePath));
      report.check("local Morita equivalence", validate_local_morita(m));
    } else if (gf->parsed()) {
      PrincipalBundle p =
          trivial_group_bundle(cyclic_group(gfOrder), gfPoints);
      Cover cover = gfPoints >= 2 ? two_set_cover(p.base)
                                  : singleton_cover(p.base);
      SectionFamily sections = canonical_sections(p, cover);
      LocalMoritaEquivalence m =
          gauge_group_fixture(p, cover, sections, gfBase);
      report.check("fixture validity", validate_local_morita(m));
      LocalToGlobal glob = local_to_global(m);
      report.check("certification", glob.report);
      writeFixture(outDir, "localmorita.json", local_morita_to_json(m),
                   report);
    } else if (nerveCheck->parsed()) {
      LocalGeneralizedMorphism m = locgenmor_from_json(
          loadInput(report, "locgenmor", filePath), dirOf(filePath));
      report.check("nerve coherence", check_theta_coherence(m));
      report.check("face identities", check_face_identities(m.source));
      if (degree >= 1)
        report.check("face refinement of the simplicial cover",
                     simplicial_cover_refines_faces(m.data.cover, m.source,
                                                    std::min(degree, 3)));
    } else if (descent->parsed()) {
      FiniteMap f = finite_map_from_json(loadInput(report, "map", mapPath));
      GroupTable g = group_from_json(loadInput(report, "group", groupPath));
      DescentReport result =
          descent_roundtrip(f.domain, f.codomain, f.map, g, budget);
      report.note("classes on the domain: " +
                  std::to_string(result.classesOnX));
      report.note("classes on the codomain: " +
                  std::to_string(result.classesOnY));
      report.check("descent round trip", result.report);
    } else if (fixture->parsed()) {
      code = runFixture(fixtureName, outDir, report);
    }
  } catch (const BudgetError& e) {
    report.note(std::string("budget error: ") + e.what());
    report.finish();
    return 3;
  } catch (const SchemaError& e) {
    report.note(std::string("schema error: ") + e.what());
    report.finish();
    return 2;
  } catch (const DomainError& e) {
    report.note(std::string("input error: ") + e.what());
    report.finish();
    return 2;
  }
  auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - start);
  std::cerr << "elapsed: " << elapsed.count() << " ms\n";
  int rc = report.finish();
  return code != 0 ? code : rc;
}
