#include "qflab/json_io.hpp"

#include <cmath>

namespace qflab::json_io {

namespace {

Rational rational_from_json(const Json& j, bool* exact) {
  if (j.is_string()) {
    if (exact) *exact = true;
    return Rational::parse(j.get<std::string>());
  }
  if (j.is_number_integer()) {
    if (exact) *exact = true;
    return Rational(j.get<std::int64_t>());
  }
  if (j.is_number_float()) {
    if (exact) *exact = false;
    return Rational::from_double_exact(j.get<double>());
  }
  throw ParseError("expected a rational value, got " + j.dump());
}

const Json& field(const Json& j, const char* name) {
  auto it = j.find(name);
  if (it == j.end()) throw ParseError(std::string("missing field: ") + name);
  return *it;
}

}  // namespace

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json parse(const std::string& text) {
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ParseError("malformed JSON");
  return j;
}

// ---- hilbert -----------------------------------------------------------------

Json state_to_json(const hilbert::StateVector& s) {
  Json j;
  j["dim"] = s.dim();
  Json re = Json::array();
  Json im = Json::array();
  for (std::size_t i = 0; i < s.dim(); ++i) {
    re.push_back(s[i].real());
    im.push_back(s[i].imag());
  }
  j["re"] = std::move(re);
  j["im"] = std::move(im);
  return j;
}

hilbert::StateVector state_from_json(const Json& j) {
  std::size_t dim = field(j, "dim").get<std::size_t>();
  const Json& re = field(j, "re");
  const Json& im = field(j, "im");
  if (re.size() != dim || im.size() != dim) {
    throw ParseError("state vector length does not match dim");
  }
  std::vector<Complex> amp(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    amp[i] = Complex(re[i].get<double>(), im[i].get<double>());
  }
  return hilbert::StateVector(std::move(amp));
}

Json matrix_to_json(const hilbert::ComplexMatrix& m) {
  Json j;
  j["dim"] = m.dim();
  Json re = Json::array();
  Json im = Json::array();
  for (std::size_t r = 0; r < m.dim(); ++r) {
    Json re_row = Json::array();
    Json im_row = Json::array();
    for (std::size_t c = 0; c < m.dim(); ++c) {
      re_row.push_back(m.at(r, c).real());
      im_row.push_back(m.at(r, c).imag());
    }
    re.push_back(std::move(re_row));
    im.push_back(std::move(im_row));
  }
  j["re"] = std::move(re);
  j["im"] = std::move(im);
  return j;
}

hilbert::ComplexMatrix matrix_from_json(const Json& j) {
  std::size_t dim = field(j, "dim").get<std::size_t>();
  const Json& re = field(j, "re");
  const Json& im = field(j, "im");
  if (re.size() != dim || im.size() != dim) throw ParseError("matrix rows do not match dim");
  hilbert::ComplexMatrix m(dim);
  for (std::size_t r = 0; r < dim; ++r) {
    if (re[r].size() != dim || im[r].size() != dim) {
      throw ParseError("matrix columns do not match dim");
    }
    for (std::size_t c = 0; c < dim; ++c) {
      m.at(r, c) = Complex(re[r][c].get<double>(), im[r][c].get<double>());
    }
  }
  return m;
}

Json measurement_to_json(const hilbert::Measurement& m) {
  Json effects = Json::array();
  for (const hilbert::Effect& e : m.effects()) {
    Json je;
    je["label"] = e.label;
    je["matrix"] = matrix_to_json(e.matrix);
    effects.push_back(std::move(je));
  }
  Json j;
  j["effects"] = std::move(effects);
  return j;
}

hilbert::Measurement measurement_from_json(const Json& j) {
  std::vector<hilbert::Effect> effects;
  for (const Json& je : field(j, "effects")) {
    effects.emplace_back(matrix_from_json(field(je, "matrix")),
                         field(je, "label").get<std::string>());
  }
  return hilbert::Measurement(std::move(effects));
}

// ---- ontological models ---------------------------------------------------------

Json model_to_json(const ontmodel::OntologicalModel& model) {
  Json j;
  j["ontic_space"] = model.space().labels();

  Json preps = Json::array();
  for (const ontmodel::Preparation& p : model.preparations()) {
    Json jp;
    jp["id"] = p.id;
    jp["state"] = state_to_json(p.quantum_state);
    Json dist;
    for (const auto& [label, w] : p.distribution) {
      if (p.exact) {
        dist[label] = w.str();
      } else {
        dist[label] = w.to_double();
      }
    }
    jp["distribution"] = std::move(dist);
    preps.push_back(std::move(jp));
  }
  j["preparations"] = std::move(preps);

  Json resps = Json::array();
  for (const ontmodel::ResponseFunction& r : model.responses()) {
    Json jr;
    jr["measurement"] = r.measurement_id;
    jr["outcomes"] = r.outcomes;
    Json values;
    for (const std::string& outcome : r.outcomes) {
      Json row;
      auto it = r.values.find(outcome);
      if (it != r.values.end()) {
        for (const auto& [label, v] : it->second) row[label] = v;
      }
      values[outcome] = std::move(row);
    }
    jr["values"] = std::move(values);
    resps.push_back(std::move(jr));
  }
  j["responses"] = std::move(resps);

  if (!model.measurements().empty()) {
    Json meas;
    for (const auto& [id, m] : model.measurements()) {
      meas[id] = measurement_to_json(m);
    }
    j["measurements"] = std::move(meas);
  }
  return j;
}

ontmodel::OntologicalModel model_from_json(const Json& j) {
  std::vector<std::string> labels;
  for (const Json& l : field(j, "ontic_space")) labels.push_back(l.get<std::string>());

  std::vector<ontmodel::Preparation> preps;
  for (const Json& jp : field(j, "preparations")) {
    ontmodel::Preparation p;
    p.id = field(jp, "id").get<std::string>();
    p.quantum_state = state_from_json(field(jp, "state"));
    p.exact = true;
    for (const auto& [label, value] : field(jp, "distribution").items()) {
      bool exact = true;
      p.distribution[label] = rational_from_json(value, &exact);
      p.exact = p.exact && exact;
    }
    preps.push_back(std::move(p));
  }

  std::vector<ontmodel::ResponseFunction> resps;
  if (j.contains("responses")) {
    for (const Json& jr : j["responses"]) {
      ontmodel::ResponseFunction r;
      r.measurement_id = field(jr, "measurement").get<std::string>();
      for (const Json& o : field(jr, "outcomes")) r.outcomes.push_back(o.get<std::string>());
      for (const auto& [outcome, row] : field(jr, "values").items()) {
        for (const auto& [label, v] : row.items()) {
          r.values[outcome][label] = v.get<double>();
        }
      }
      resps.push_back(std::move(r));
    }
  }

  std::map<std::string, hilbert::Measurement> measurements;
  if (j.contains("measurements")) {
    for (const auto& [id, jm] : j["measurements"].items()) {
      measurements.emplace(id, measurement_from_json(jm));
    }
  }

  try {
    return ontmodel::OntologicalModel(ontmodel::OnticSpace(std::move(labels)),
                                      std::move(preps), std::move(resps),
                                      std::move(measurements));
  } catch (const ValidationError& e) {
    throw ParseError(std::string("invalid model: ") + e.what());
  }
}

// ---- constraint systems ----------------------------------------------------------

Json system_to_json(const feasibility::ConstraintSystem& system) {
  Json j;
  j["variables"] = system.variables();

  Json constraints = Json::array();
  for (const feasibility::Constraint& c : system.constraints()) {
    Json jc;
    jc["id"] = c.id;
    jc["tag"] = c.tag;
    Json terms = Json::array();
    for (const feasibility::LinearTerm& t : c.terms) {
      Json jt;
      jt["var"] = t.var;
      jt["coeff"] = t.coeff.str();
      terms.push_back(std::move(jt));
    }
    jc["terms"] = std::move(terms);
    jc["rel"] = feasibility::to_string(c.rel);
    jc["rhs"] = c.rhs.str();
    constraints.push_back(std::move(jc));
  }
  j["constraints"] = std::move(constraints);

  if (!system.supports.empty()) {
    Json supports;
    for (const auto& [prep, atoms] : system.supports) supports[prep] = atoms;
    j["supports"] = std::move(supports);
  }
  if (!system.info.empty()) {
    Json info;
    for (const auto& [key, value] : system.info) info[key] = value;
    j["info"] = std::move(info);
  }
  return j;
}

feasibility::ConstraintSystem system_from_json(const Json& j) {
  feasibility::ConstraintSystem system;
  for (const Json& v : field(j, "variables")) {
    system.add_variable(v.get<std::string>());
  }
  for (const Json& jc : field(j, "constraints")) {
    feasibility::Constraint c;
    c.id = field(jc, "id").get<std::string>();
    if (jc.contains("tag")) c.tag = jc["tag"].get<std::string>();
    for (const Json& jt : field(jc, "terms")) {
      c.terms.push_back({field(jt, "var").get<std::string>(),
                         rational_from_json(field(jt, "coeff"), nullptr)});
    }
    c.rel = feasibility::relation_from_string(field(jc, "rel").get<std::string>());
    c.rhs = rational_from_json(field(jc, "rhs"), nullptr);
    try {
      system.add_constraint(std::move(c));
    } catch (const std::invalid_argument& e) {
      throw ParseError(std::string("invalid system: ") + e.what());
    }
  }
  if (j.contains("supports")) {
    for (const auto& [prep, atoms] : j["supports"].items()) {
      for (const Json& a : atoms) system.supports[prep].push_back(a.get<std::string>());
    }
  }
  if (j.contains("info")) {
    for (const auto& [key, value] : j["info"].items()) {
      system.info[key] = value.get<std::string>();
    }
  }
  return system;
}

Json verdict_to_json(const feasibility::Verdict& verdict) {
  Json j;
  j["status"] = feasibility::to_string(verdict.status);
  if (verdict.status == feasibility::Status::Feasible) {
    Json witness;
    for (const auto& [var, value] : verdict.witness) witness[var] = value.str();
    j["witness"] = std::move(witness);
  } else {
    j["certificate"] = verdict.certificate;
  }
  return j;
}

Json no_go_report_to_json(const feasibility::NoGoReport& report) {
  Json j;
  j["preparation_independence"] = report.preparation_independence;
  j["single_system_overlap"] = report.single_system_overlap;
  j["orthogonality_deviation"] = report.orthogonality_deviation;
  j["verdict"] = verdict_to_json(report.verdict);
  j["system"] = system_to_json(report.system);
  if (report.witness_model.has_value()) {
    j["witness_zeros_exact"] = report.witness_zeros_exact;
    j["witness_born_deviation"] = report.witness_born_deviation;
    j["witness_model"] = model_to_json(*report.witness_model);
  }
  return j;
}

// ---- scenarios ----------------------------------------------------------------------

Json scenario_report_to_json(const rqm::ScenarioReport& report) {
  Json j;
  j["scenario"] = report.scenario;

  Json steps = Json::array();
  for (int step = 0; step < report.ledger.step_count(); ++step) {
    Json entries = Json::array();
    for (const rqm::RelationalAssignment& a : report.ledger.assignments(step)) {
      Json ja;
      ja["system"] = a.system;
      ja["observer"] = a.observer;
      ja["role"] = rqm::to_string(a.role);
      ja["state"] = state_to_json(a.state);
      entries.push_back(std::move(ja));
    }
    steps.push_back(std::move(entries));
  }
  j["steps"] = std::move(steps);

  Json events = Json::array();
  for (const rqm::InteractionEvent& e : report.ledger.events()) {
    Json je;
    je["step"] = e.step;
    je["observer"] = e.observer;
    je["system"] = e.system;
    je["outcome_value"] = e.outcome_value;
    je["outcome_index"] = e.outcome_index;
    je["sampled"] = e.sampled;
    if (e.sampled) je["seed"] = e.seed;
    events.push_back(std::move(je));
  }
  j["events"] = std::move(events);

  Json assertions = Json::array();
  for (const rqm::Assertion& a : report.assertions) {
    Json ja;
    ja["name"] = a.name;
    ja["verdict"] = a.verdict;
    if (!a.detail.empty()) ja["detail"] = a.detail;
    assertions.push_back(std::move(ja));
  }
  j["assertions"] = std::move(assertions);
  j["verdict"] = report.pass ? "PASS" : "FAIL";

  if (report.constraint_system.has_value()) {
    j["constraint_system"] = system_to_json(*report.constraint_system);
  }
  if (report.feasibility_verdict.has_value()) {
    j["feasibility"] = verdict_to_json(*report.feasibility_verdict);
  }
  return j;
}

rqm::ScenarioConfig scenario_config_from_json(const Json& j) {
  rqm::ScenarioConfig config;
  auto read_complex = [&](const char* name, Complex fallback) {
    if (!j.contains(name)) return fallback;
    const Json& v = j[name];
    if (v.is_number()) return Complex(v.get<double>(), 0.0);
    return Complex(field(v, "re").get<double>(),
                   v.contains("im") ? v["im"].get<double>() : 0.0);
  };
  config.c1 = read_complex("c1", config.c1);
  config.c2 = read_complex("c2", config.c2);
  if (j.contains("seed")) config.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("outcome")) {
    if (j["outcome"].is_null()) {
      config.outcome.reset();
    } else {
      config.outcome = j["outcome"].get<double>();
    }
  }
  if (j.contains("collapse_indices")) {
    config.collapse_indices = j["collapse_indices"].get<bool>();
  }
  if (j.contains("sstar_account")) {
    config.sstar_account = j["sstar_account"].get<std::string>();
    if (config.sstar_account != "post-interaction" && config.sstar_account != "entangled") {
      throw ParseError("sstar_account must be 'post-interaction' or 'entangled'");
    }
  }
  if (j.contains("alice_prep")) config.alice_prep = j["alice_prep"].get<std::string>();
  if (j.contains("bob_prep")) config.bob_prep = j["bob_prep"].get<std::string>();
  if (j.contains("observers")) {
    for (const auto& [key, value] : j["observers"].items()) {
      config.observer_names[key] = value.get<std::string>();
    }
  }
  return config;
}

}  // namespace qflab::json_io
