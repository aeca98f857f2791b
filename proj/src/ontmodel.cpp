#include "qflab/ontmodel.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace qflab::ontmodel {

namespace {

bool states_distinct(const hilbert::StateVector& a, const hilbert::StateVector& b) {
  if (a.dim() != b.dim()) return true;
  return hilbert::fidelity(a, b) < 1.0 - kStructuralTol;
}

}  // namespace

// ---- types -------------------------------------------------------------------

OnticSpace::OnticSpace(std::vector<std::string> labels) : labels_(std::move(labels)) {
  if (labels_.empty()) throw ValidationError("ontic space must be non-empty");
  std::set<std::string> seen;
  for (const std::string& l : labels_) {
    if (!seen.insert(l).second) {
      throw ValidationError("duplicate ontic label: " + l);
    }
  }
}

bool OnticSpace::contains(const std::string& label) const {
  return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

Rational Preparation::weight(const std::string& label) const {
  auto it = distribution.find(label);
  return it == distribution.end() ? Rational(0) : it->second;
}

std::vector<std::string> Preparation::support() const {
  std::vector<std::string> out;
  for (const auto& [label, w] : distribution) {
    if (!w.is_zero()) out.push_back(label);
  }
  return out;
}

double ResponseFunction::value(const std::string& outcome, const std::string& label) const {
  auto oit = values.find(outcome);
  if (oit == values.end()) throw std::invalid_argument("unknown outcome: " + outcome);
  auto lit = oit->second.find(label);
  return lit == oit->second.end() ? 0.0 : lit->second;
}

OntologicalModel::OntologicalModel(OnticSpace space, std::vector<Preparation> preparations,
                                   std::vector<ResponseFunction> responses,
                                   std::map<std::string, hilbert::Measurement> measurements)
    : space_(std::move(space)),
      preparations_(std::move(preparations)),
      responses_(std::move(responses)),
      measurements_(std::move(measurements)) {
  validate();
}

void OntologicalModel::validate() const {
  for (const Preparation& p : preparations_) {
    Rational sum(0);
    for (const auto& [label, w] : p.distribution) {
      if (!space_.contains(label)) {
        throw ValidationError("preparation " + p.id + " uses unknown label " + label);
      }
      if (w.is_negative()) {
        throw ValidationError("preparation " + p.id + " has a negative weight");
      }
      sum += w;
    }
    if (p.exact) {
      if (!(sum == Rational(1))) {
        throw ValidationError("preparation " + p.id + " weights must sum to 1, got " +
                              sum.str());
      }
    } else if (std::abs(sum.to_double() - 1.0) > kStructuralTol) {
      throw ValidationError("preparation " + p.id + " weights must sum to 1");
    }
  }
  for (const ResponseFunction& r : responses_) {
    for (const auto& [outcome, row] : r.values) {
      for (const auto& [label, v] : row) {
        if (!space_.contains(label)) {
          throw ValidationError("response " + r.measurement_id + " uses unknown label " +
                                label);
        }
        if (v < -kStructuralTol || v > 1.0 + kStructuralTol) {
          throw ValidationError("response value outside [0,1]");
        }
      }
    }
    for (const std::string& label : space_.labels()) {
      double sum = 0.0;
      for (const std::string& k : r.outcomes) sum += r.value(k, label);
      if (std::abs(sum - 1.0) > kStructuralTol) {
        throw ValidationError("response " + r.measurement_id +
                              " must sum to 1 at every ontic state (label " + label + ")");
      }
    }
  }
}

const Preparation& OntologicalModel::preparation(const std::string& id) const {
  for (const Preparation& p : preparations_) {
    if (p.id == id) return p;
  }
  throw std::invalid_argument("unknown preparation: " + id);
}

const ResponseFunction& OntologicalModel::response(const std::string& measurement_id) const {
  for (const ResponseFunction& r : responses_) {
    if (r.measurement_id == measurement_id) return r;
  }
  throw std::invalid_argument("unknown measurement: " + measurement_id);
}

// ---- operations ----------------------------------------------------------------

double predicted_probability(const OntologicalModel& model, const std::string& prep_id,
                             const std::string& measurement_id, const std::string& outcome) {
  const Preparation& prep = model.preparation(prep_id);
  const ResponseFunction& resp = model.response(measurement_id);
  if (std::find(resp.outcomes.begin(), resp.outcomes.end(), outcome) == resp.outcomes.end()) {
    throw std::invalid_argument("unknown outcome: " + outcome);
  }
  double total = 0.0;
  for (const auto& [label, w] : prep.distribution) {
    if (w.is_zero()) continue;
    total += resp.value(outcome, label) * w.to_double();
  }
  return std::clamp(total, 0.0, 1.0);
}

BornCheck reproduces_born(const OntologicalModel& model, double tol) {
  BornCheck check;
  for (const Preparation& prep : model.preparations()) {
    hilbert::DensityOperator rho = hilbert::DensityOperator::pure(prep.quantum_state);
    for (const ResponseFunction& resp : model.responses()) {
      auto mit = model.measurements().find(resp.measurement_id);
      if (mit == model.measurements().end()) {
        throw std::invalid_argument("response " + resp.measurement_id +
                                    " has no attached measurement");
      }
      const hilbert::Measurement& meas = mit->second;
      if (meas.dim() != prep.quantum_state.dim()) {
        throw DimensionError("measurement " + resp.measurement_id +
                             " does not match preparation " + prep.id);
      }
      for (std::size_t k = 0; k < meas.outcome_count(); ++k) {
        const hilbert::Effect& effect = meas.effect(k);
        double predicted = predicted_probability(model, prep.id, resp.measurement_id,
                                                 effect.label);
        double born = hilbert::born_probability(rho, effect);
        double dev = std::abs(predicted - born);
        if (dev > check.worst_deviation) {
          check.worst_deviation = dev;
          check.prep_id = prep.id;
          check.measurement_id = resp.measurement_id;
          check.outcome = effect.label;
        }
      }
    }
  }
  check.ok = check.worst_deviation <= tol;
  return check;
}

OverlapResult overlap_exists(const OntologicalModel& model, const std::string& prep_a,
                             const std::string& prep_b) {
  const Preparation& a = model.preparation(prep_a);
  const Preparation& b = model.preparation(prep_b);
  for (const std::string& label : model.space().labels()) {
    if (!a.weight(label).is_zero() && !b.weight(label).is_zero()) {
      return {true, label};
    }
  }
  return {false, {}};
}

std::string to_string(PsiClass c) {
  return c == PsiClass::PsiOntic ? "psi_ontic" : "psi_epistemic";
}

PsiClass classify(const OntologicalModel& model) {
  const auto& preps = model.preparations();
  bool found_distinct_pair = false;
  for (std::size_t i = 0; i < preps.size(); ++i) {
    for (std::size_t j = i + 1; j < preps.size(); ++j) {
      if (!states_distinct(preps[i].quantum_state, preps[j].quantum_state)) continue;
      found_distinct_pair = true;
      if (overlap_exists(model, preps[i].id, preps[j].id).overlaps) {
        return PsiClass::PsiEpistemic;
      }
    }
  }
  if (!found_distinct_pair) {
    throw ValidationError("classification needs at least two distinct quantum states");
  }
  return PsiClass::PsiOntic;
}

bool is_psi_complete(const OntologicalModel& model) {
  // state -> its singleton atom; equal states must agree, distinct must not.
  std::vector<std::pair<hilbert::StateVector, std::string>> atom_of_state;
  std::set<std::string> used_atoms;
  for (const Preparation& p : model.preparations()) {
    std::vector<std::string> support = p.support();
    if (support.size() != 1) return false;
    const std::string& atom = support.front();
    bool seen = false;
    for (const auto& [state, assigned] : atom_of_state) {
      if (!states_distinct(state, p.quantum_state)) {
        if (assigned != atom) return false;  // same state, two atoms
        seen = true;
      } else if (assigned == atom) {
        return false;  // distinct states share an atom
      }
    }
    if (!seen) {
      atom_of_state.emplace_back(p.quantum_state, atom);
      used_atoms.insert(atom);
    }
  }
  return used_atoms.size() == model.space().size();
}

OntologicalModel product_model(const OntologicalModel& m1, const OntologicalModel& m2) {
  for (const std::string& l : m1.space().labels()) {
    if (m2.space().contains(l)) {
      throw ValidationError("product_model needs disjoint ontic label namespaces (" + l +
                            " appears in both)");
    }
  }

  std::vector<std::string> joint_labels;
  for (const std::string& l1 : m1.space().labels()) {
    for (const std::string& l2 : m2.space().labels()) {
      joint_labels.push_back(l1 + "|" + l2);
    }
  }

  std::vector<Preparation> joint_preps;
  for (const Preparation& p1 : m1.preparations()) {
    for (const Preparation& p2 : m2.preparations()) {
      Preparation jp;
      jp.id = p1.id + "*" + p2.id;
      jp.quantum_state = hilbert::tensor(p1.quantum_state, p2.quantum_state);
      jp.exact = p1.exact && p2.exact;
      for (const auto& [l1, w1] : p1.distribution) {
        if (w1.is_zero()) continue;
        for (const auto& [l2, w2] : p2.distribution) {
          if (w2.is_zero()) continue;
          jp.distribution[l1 + "|" + l2] = w1 * w2;
        }
      }
      joint_preps.push_back(std::move(jp));
    }
  }

  std::vector<ResponseFunction> joint_resps;
  std::map<std::string, hilbert::Measurement> joint_meas;
  for (const ResponseFunction& r1 : m1.responses()) {
    for (const ResponseFunction& r2 : m2.responses()) {
      ResponseFunction jr;
      jr.measurement_id = r1.measurement_id + "*" + r2.measurement_id;
      for (const std::string& k1 : r1.outcomes) {
        for (const std::string& k2 : r2.outcomes) {
          std::string k = k1 + "*" + k2;
          jr.outcomes.push_back(k);
          for (const std::string& l1 : m1.space().labels()) {
            for (const std::string& l2 : m2.space().labels()) {
              jr.values[k][l1 + "|" + l2] = r1.value(k1, l1) * r2.value(k2, l2);
            }
          }
        }
      }
      joint_resps.push_back(std::move(jr));

      auto it1 = m1.measurements().find(r1.measurement_id);
      auto it2 = m2.measurements().find(r2.measurement_id);
      if (it1 != m1.measurements().end() && it2 != m2.measurements().end()) {
        std::vector<hilbert::Effect> effects;
        for (const hilbert::Effect& e1 : it1->second.effects()) {
          for (const hilbert::Effect& e2 : it2->second.effects()) {
            effects.emplace_back(hilbert::kron(e1.matrix, e2.matrix),
                                 e1.label + "*" + e2.label);
          }
        }
        joint_meas.emplace(r1.measurement_id + "*" + r2.measurement_id,
                           hilbert::Measurement(std::move(effects)));
      }
    }
  }

  return OntologicalModel(OnticSpace(std::move(joint_labels)), std::move(joint_preps),
                          std::move(joint_resps), std::move(joint_meas));
}

OntologicalModel with_label_suffix(const OntologicalModel& model, const std::string& suffix) {
  std::vector<std::string> labels;
  for (const std::string& l : model.space().labels()) labels.push_back(l + suffix);

  std::vector<Preparation> preps = model.preparations();
  for (Preparation& p : preps) {
    std::map<std::string, Rational> renamed;
    for (const auto& [label, w] : p.distribution) renamed[label + suffix] = w;
    p.distribution = std::move(renamed);
  }

  std::vector<ResponseFunction> resps = model.responses();
  for (ResponseFunction& r : resps) {
    for (auto& [outcome, row] : r.values) {
      std::map<std::string, double> renamed;
      for (const auto& [label, v] : row) renamed[label + suffix] = v;
      row = std::move(renamed);
    }
  }

  return OntologicalModel(OnticSpace(std::move(labels)), std::move(preps), std::move(resps),
                          model.measurements());
}

OntologicalModel delta_model(
    const std::vector<std::pair<std::string, hilbert::StateVector>>& states,
    const std::vector<std::pair<std::string, hilbert::Measurement>>& measurements) {
  if (states.empty()) throw ValidationError("delta_model needs at least one state");

  std::vector<std::string> labels;
  std::vector<Preparation> preps;
  for (const auto& [name, state] : states) {
    if (!state.is_normalized()) {
      throw ValidationError("delta_model state " + name + " is not normalized");
    }
    std::string label = "lam_" + name;
    labels.push_back(label);
    Preparation p;
    p.id = "P_" + name;
    p.quantum_state = state;
    p.distribution[label] = Rational(1);
    preps.push_back(std::move(p));
  }

  std::vector<ResponseFunction> resps;
  std::map<std::string, hilbert::Measurement> meas_table;
  for (const auto& [meas_id, meas] : measurements) {
    ResponseFunction r;
    r.measurement_id = meas_id;
    r.outcomes = meas.outcome_labels();
    for (std::size_t i = 0; i < states.size(); ++i) {
      hilbert::DensityOperator rho = hilbert::DensityOperator::pure(states[i].second);
      for (std::size_t k = 0; k < meas.outcome_count(); ++k) {
        r.values[meas.effect(k).label][labels[i]] =
            hilbert::born_probability(rho, meas.effect(k));
      }
    }
    resps.push_back(std::move(r));
    meas_table.emplace(meas_id, meas);
  }

  return OntologicalModel(OnticSpace(std::move(labels)), std::move(preps), std::move(resps),
                          std::move(meas_table));
}

OntologicalModel pbr_overlap_model() {
  OnticSpace space({"up_only", "shared", "plus_only"});
  Rational half(1, 2);

  Preparation p_up;
  p_up.id = "P_up";
  p_up.quantum_state = hilbert::qubit_up();
  p_up.distribution["up_only"] = half;
  p_up.distribution["shared"] = half;

  Preparation p_plus;
  p_plus.id = "P_plus";
  p_plus.quantum_state = hilbert::qubit_plus();
  p_plus.distribution["shared"] = half;
  p_plus.distribution["plus_only"] = half;

  return OntologicalModel(std::move(space), {std::move(p_up), std::move(p_plus)}, {});
}

}  // namespace qflab::ontmodel
