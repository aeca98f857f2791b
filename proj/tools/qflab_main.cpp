// qflab: runs the PBR no-go verification chain, the relational scenarios, and
// ontological-model classification from the command line. Human summaries go
// to stdout; machine-readable JSON goes to a file via --json (or to stdout
// with --json -, in which case the summary moves to stderr).
//
// Exit codes: 0 success, 1 verdict mismatch, 2 internal inconsistency,
// 64 usage, 65 bad data.

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "qflab/feasibility.hpp"
#include "qflab/json_io.hpp"
#include "qflab/ontmodel.hpp"
#include "qflab/rqm.hpp"

namespace {

using qflab::json_io::Json;

constexpr int kExitOk = 0;
constexpr int kExitVerdictMismatch = 1;
constexpr int kExitInternal = 2;
constexpr int kExitUsage = 64;
constexpr int kExitData = 65;

std::string resolve_output_path(const std::string& path) {
  if (path.empty() || path == "-" || path.front() == '/') return path;
  const char* dir = std::getenv("QFLAB_OUT_DIR");
  if (dir == nullptr || *dir == '\0') return path;
  return std::string(dir) + "/" + path;
}

// Routes the report and the human summary depending on --json.
void emit(const Json& report, const std::string& json_path, const std::string& summary) {
  if (json_path == "-") {
    std::cerr << summary;
    std::cout << qflab::json_io::dump(report);
    return;
  }
  if (!json_path.empty()) {
    std::string resolved = resolve_output_path(json_path);
    std::ofstream out(resolved, std::ios::binary | std::ios::trunc);
    if (!out) throw qflab::json_io::ParseError("cannot write " + resolved);
    out << qflab::json_io::dump(report);
  }
  std::cout << summary;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw qflab::json_io::ParseError("cannot read " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// ---- pbr verify ------------------------------------------------------------------

int run_pbr_verify(bool no_pi, bool no_overlap, double tol, const std::string& json_path) {
  namespace hb = qflab::hilbert;
  namespace fz = qflab::feasibility;

  Json report;
  report["command"] = "pbr verify";
  report["tolerance"] = tol;
  std::ostringstream summary;
  summary.precision(3);

  // Antidistinguishability and basis checks, gated at the requested tolerance.
  std::vector<hb::StateVector> omegas = hb::pbr_product_states();
  std::vector<hb::StateVector> chis = hb::pbr_basis_states();
  double orth = 0.0;
  for (std::size_t k = 0; k < 4; ++k) {
    orth = std::max(orth, std::abs(hb::inner_product(omegas[k], chis[k])));
  }
  double gram = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      qflab::Complex want = (i == j) ? qflab::Complex(1.0) : qflab::Complex(0.0);
      gram = std::max(gram, std::abs(hb::inner_product(chis[i], chis[j]) - want));
    }
  }
  report["orthogonality_deviation"] = orth;
  report["gram_deviation"] = gram;
  if (orth > tol || gram > tol) {
    throw fz::InternalInconsistency("antidistinguishing basis validation failed at tolerance " +
                                    std::to_string(tol));
  }
  summary << "antidistinguishability: max |<omega_k|chi_k>| = " << orth << "\n";
  summary << "basis orthonormality: max Gram deviation = " << gram << "\n";

  struct RunSpec {
    const char* name;
    bool pi;
    bool overlap;
  };
  std::vector<RunSpec> specs;
  specs.push_back({"main", !no_pi, !no_overlap});
  if (!no_pi && !no_overlap) {
    specs.push_back({"relaxed-preparation-independence", false, true});
    specs.push_back({"relaxed-overlap", true, false});
  }

  bool all_ok = true;
  Json runs = Json::array();
  for (const RunSpec& spec : specs) {
    fz::NoGoReport run = fz::pbr_no_go(spec.pi, spec.overlap, tol);
    bool expect_infeasible = spec.pi && spec.overlap;
    bool ok;
    if (expect_infeasible) {
      ok = run.verdict.status == fz::Status::Infeasible;
    } else {
      ok = run.verdict.status == fz::Status::Feasible && run.witness_zeros_exact &&
           run.witness_born_deviation <= 1e-10;
    }
    all_ok = all_ok && ok;

    Json jr = qflab::json_io::no_go_report_to_json(run);
    jr["name"] = spec.name;
    jr["expected"] = expect_infeasible ? "INFEASIBLE" : "FEASIBLE";
    jr["as_expected"] = ok;
    runs.push_back(std::move(jr));

    summary << spec.name << " (independence=" << (spec.pi ? "on" : "off")
            << ", overlap=" << (spec.overlap ? "on" : "off")
            << "): " << fz::to_string(run.verdict.status);
    if (run.verdict.status == fz::Status::Infeasible) {
      summary << ", certificate of " << run.verdict.certificate.size() << " constraints";
    } else {
      summary << ", witness Born deviation " << run.witness_born_deviation;
    }
    summary << (ok ? "  [as expected]" : "  [UNEXPECTED]") << "\n";
  }
  report["runs"] = std::move(runs);
  report["expected_verdicts_hold"] = all_ok;
  summary << "result: " << (all_ok ? "PASS" : "FAIL") << "\n";

  emit(report, json_path, summary.str());
  return all_ok ? kExitOk : kExitVerdictMismatch;
}

// ---- pbr feasibility ----------------------------------------------------------------

int run_pbr_feasibility(const std::string& system_path, const std::string& json_path) {
  namespace fz = qflab::feasibility;
  fz::ConstraintSystem system =
      qflab::json_io::system_from_json(qflab::json_io::parse(read_file(system_path)));
  fz::Verdict verdict = fz::solve(system);

  Json report;
  report["command"] = "pbr feasibility";
  report["input"] = system_path;
  report["variables"] = system.variables().size();
  report["constraints"] = system.constraints().size();
  report["verdict"] = qflab::json_io::verdict_to_json(verdict);

  std::ostringstream summary;
  summary << system_path << ": " << fz::to_string(verdict.status);
  if (verdict.status == fz::Status::Infeasible) {
    summary << ", certificate:";
    for (const std::string& id : verdict.certificate) summary << " " << id;
  }
  summary << "\n";
  emit(report, json_path, summary.str());
  return kExitOk;
}

// ---- rqm run -------------------------------------------------------------------------

int run_rqm_scenario(const std::string& scenario, const std::string& config_path,
                     std::uint64_t seed, bool seed_given, bool collapse,
                     const std::string& json_path) {
  namespace rq = qflab::rqm;

  rq::ScenarioConfig config;
  if (!config_path.empty()) {
    config = qflab::json_io::scenario_config_from_json(
        qflab::json_io::parse(read_file(config_path)));
  }
  if (seed_given) config.seed = seed;
  if (collapse) config.collapse_indices = true;

  rq::ScenarioReport report;
  if (scenario == "third-person") {
    report = rq::third_person_scenario(config);
  } else if (scenario == "relational-pbr-single") {
    report = rq::relational_pbr_single_observer(config);
  } else if (scenario == "relational-pbr-alice-bob") {
    report = rq::relational_pbr_alice_bob(config);
  } else {
    std::cerr << "unknown scenario: " << scenario
              << " (expected third-person, relational-pbr-single,"
                 " relational-pbr-alice-bob)\n";
    return kExitUsage;
  }

  std::ostringstream summary;
  summary << "scenario " << report.scenario << "\n";
  for (const rq::Assertion& a : report.assertions) {
    summary << "  [" << a.verdict << "] " << a.name;
    if (!a.detail.empty()) summary << " -- " << a.detail;
    summary << "\n";
  }
  summary << "verdict: " << (report.pass ? "PASS" : "FAIL") << "\n";

  emit(qflab::json_io::scenario_report_to_json(report), json_path, summary.str());
  return report.pass ? kExitOk : kExitVerdictMismatch;
}

// ---- model check ----------------------------------------------------------------------

int run_model_check(const std::string& model_path, double tol, const std::string& json_path) {
  namespace om = qflab::ontmodel;
  om::OntologicalModel model =
      qflab::json_io::model_from_json(qflab::json_io::parse(read_file(model_path)));

  om::PsiClass cls;
  try {
    cls = om::classify(model);
  } catch (const qflab::ValidationError& e) {
    std::cerr << "classification undefined: " << e.what() << "\n";
    return kExitData;
  }

  bool complete = cls == om::PsiClass::PsiOntic && om::is_psi_complete(model);

  Json report;
  report["command"] = "model check";
  report["input"] = model_path;
  report["classification"] = om::to_string(cls);
  report["psi_complete"] = complete;

  std::ostringstream summary;
  summary.precision(3);
  summary << om::to_string(cls);
  if (cls == om::PsiClass::PsiOntic) {
    summary << (complete ? ", psi_complete" : ", psi_supplemented");
  }

  if (!model.measurements().empty()) {
    om::BornCheck born = om::reproduces_born(model, tol);
    Json jb;
    jb["ok"] = born.ok;
    jb["max_deviation"] = born.worst_deviation;
    if (!born.prep_id.empty()) {
      jb["worst_preparation"] = born.prep_id;
      jb["worst_measurement"] = born.measurement_id;
      jb["worst_outcome"] = born.outcome;
    }
    report["born"] = std::move(jb);
    summary << (born.ok ? ", Born OK (max dev " : ", Born FAIL (max dev ")
            << born.worst_deviation << ")";
  } else {
    report["born"] = nullptr;
    summary << ", Born check skipped (no measurement matrices)";
  }
  summary << "\n";

  emit(report, json_path, summary.str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verification lab for the PBR no-go argument and its relational counterpart"};
  app.require_subcommand(1);

  std::function<int()> action;

  std::string json_path;
  double tol = 1e-12;
  std::uint64_t seed = 0;
  bool seed_given = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--json", json_path,
                    "write the JSON report to this path ('-' for stdout)");
    cmd->add_option("--tol", tol, "float-side validation tolerance")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--seed", seed, "seed for sampled outcomes")
        ->each([&](const std::string&) { seed_given = true; });
  };

  // pbr
  CLI::App* pbr = app.add_subcommand("pbr", "no-go chain and feasibility solving");
  pbr->require_subcommand(1);

  bool no_pi = false;
  bool no_overlap = false;
  CLI::App* verify = pbr->add_subcommand("verify", "run the full verification chain");
  verify->add_flag("--no-preparation-independence", no_pi,
                   "drop the preparation-independence assumption");
  verify->add_flag("--no-overlap", no_overlap, "drop the single-system overlap hypothesis");
  add_common(verify);
  verify->callback([&]() {
    action = [&]() { return run_pbr_verify(no_pi, no_overlap, tol, json_path); };
  });

  std::string system_path;
  CLI::App* feas = pbr->add_subcommand("feasibility", "solve a constraint system file");
  feas->add_option("system", system_path, "constraint system JSON")->required();
  add_common(feas);
  feas->callback([&]() {
    action = [&]() { return run_pbr_feasibility(system_path, json_path); };
  });

  // rqm
  CLI::App* rqm_cmd = app.add_subcommand("rqm", "relational scenarios");
  rqm_cmd->require_subcommand(1);

  std::string scenario;
  std::string config_path;
  bool collapse = false;
  CLI::App* run = rqm_cmd->add_subcommand("run", "run a scenario");
  run->add_option("scenario", scenario,
                  "third-person | relational-pbr-single | relational-pbr-alice-bob")
      ->required();
  run->add_option("--config", config_path, "scenario config JSON");
  run->add_flag("--collapse-indices", collapse,
                "identify all observer indices in the constraint system");
  add_common(run);
  run->callback([&]() {
    action = [&]() {
      return run_rqm_scenario(scenario, config_path, seed, seed_given, collapse, json_path);
    };
  });

  // model
  CLI::App* model_cmd = app.add_subcommand("model", "ontological model tools");
  model_cmd->require_subcommand(1);

  std::string model_path;
  double born_tol = 1e-9;
  CLI::App* check = model_cmd->add_subcommand("check", "classify a model file");
  check->add_option("model", model_path, "ontological model JSON")->required();
  check->add_option("--tol", born_tol, "Born-reproduction tolerance")
      ->check(CLI::PositiveNumber);
  check->add_option("--json", json_path,
                    "write the JSON report to this path ('-' for stdout)");
  check->callback([&]() {
    action = [&]() { return run_model_check(model_path, born_tol, json_path); };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    return action();
  } catch (const qflab::feasibility::InternalInconsistency& e) {
    std::cerr << "internal inconsistency: " << e.what() << "\n";
    return kExitInternal;
  } catch (const qflab::json_io::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const qflab::feasibility::SizeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const qflab::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInternal;
  }
}
