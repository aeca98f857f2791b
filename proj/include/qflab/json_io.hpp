#pragma once
// JSON serialization for every external surface: states and measurements,
// ontological models, constraint systems and verdicts, scenario configs and
// reports. Key order is insertion order (nlohmann ordered_json) and dumps are
// canonical, so identical inputs serialize to identical bytes.

#include <string>

#include <json.hpp>

#include "qflab/feasibility.hpp"
#include "qflab/hilbert.hpp"
#include "qflab/ontmodel.hpp"
#include "qflab/rqm.hpp"

namespace qflab::json_io {

using Json = nlohmann::ordered_json;

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Canonical dump: two-space indent, trailing newline.
std::string dump(const Json& j);
Json parse(const std::string& text);

// {"dim": n, "re": [...], "im": [...]}
Json state_to_json(const hilbert::StateVector& s);
hilbert::StateVector state_from_json(const Json& j);

Json matrix_to_json(const hilbert::ComplexMatrix& m);
hilbert::ComplexMatrix matrix_from_json(const Json& j);

Json measurement_to_json(const hilbert::Measurement& m);
hilbert::Measurement measurement_from_json(const Json& j);

// Distributions serialize as "p/q" strings when exact, floats otherwise;
// both forms parse back (floats convert to rationals losslessly).
Json model_to_json(const ontmodel::OntologicalModel& model);
ontmodel::OntologicalModel model_from_json(const Json& j);

Json system_to_json(const feasibility::ConstraintSystem& system);
feasibility::ConstraintSystem system_from_json(const Json& j);

Json verdict_to_json(const feasibility::Verdict& verdict);
Json no_go_report_to_json(const feasibility::NoGoReport& report);

Json scenario_report_to_json(const rqm::ScenarioReport& report);
rqm::ScenarioConfig scenario_config_from_json(const Json& j);

}  // namespace qflab::json_io
