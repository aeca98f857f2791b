#pragma once
// Ontological models over finite ontic spaces: preparations as distributions
// over the space, measurements as response functions, Born-rule reproduction
// checks, and the psi-ontic / psi-epistemic / psi-complete classification as
// executable predicates.
//
// Distributions are exact rationals (support logic must not hinge on
// rounding); response functions are doubles (they mirror Born values).

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qflab/hilbert.hpp"
#include "qflab/rational.hpp"

namespace qflab::ontmodel {

class OnticSpace {
 public:
  explicit OnticSpace(std::vector<std::string> labels);

  const std::vector<std::string>& labels() const { return labels_; }
  std::size_t size() const { return labels_.size(); }
  bool contains(const std::string& label) const;

 private:
  std::vector<std::string> labels_;
};

struct Preparation {
  std::string id;
  hilbert::StateVector quantum_state;
  // Sparse: labels absent from the map carry weight 0.
  std::map<std::string, Rational> distribution;
  // False when the weights came from float input; sum checks then use 1e-12
  // instead of exact equality.
  bool exact = true;

  Rational weight(const std::string& label) const;
  std::vector<std::string> support() const;
};

struct ResponseFunction {
  std::string measurement_id;
  std::vector<std::string> outcomes;
  // values.at(outcome).at(label) = xi(outcome | label)
  std::map<std::string, std::map<std::string, double>> values;

  double value(const std::string& outcome, const std::string& label) const;
};

class OntologicalModel {
 public:
  OntologicalModel(OnticSpace space, std::vector<Preparation> preparations,
                   std::vector<ResponseFunction> responses,
                   std::map<std::string, hilbert::Measurement> measurements = {});

  const OnticSpace& space() const { return space_; }
  const std::vector<Preparation>& preparations() const { return preparations_; }
  const std::vector<ResponseFunction>& responses() const { return responses_; }
  const std::map<std::string, hilbert::Measurement>& measurements() const {
    return measurements_;
  }

  const Preparation& preparation(const std::string& id) const;
  const ResponseFunction& response(const std::string& measurement_id) const;

 private:
  void validate() const;

  OnticSpace space_;
  std::vector<Preparation> preparations_;
  std::vector<ResponseFunction> responses_;
  std::map<std::string, hilbert::Measurement> measurements_;
};

// sum over lambda of xi(outcome|lambda) * p(lambda|prep)
double predicted_probability(const OntologicalModel& model, const std::string& prep_id,
                             const std::string& measurement_id,
                             const std::string& outcome);

struct BornCheck {
  bool ok = true;
  double worst_deviation = 0.0;
  std::string prep_id;
  std::string measurement_id;
  std::string outcome;
};

// Worst |predicted - Tr(rho E_k)| over all (preparation, measurement, outcome)
// triples with a Measurement attached; ok iff it stays within tol.
BornCheck reproduces_born(const OntologicalModel& model, double tol);

struct OverlapResult {
  bool overlaps = false;
  std::string witness;  // a shared-support label when overlaps
};

OverlapResult overlap_exists(const OntologicalModel& model, const std::string& prep_a,
                             const std::string& prep_b);

enum class PsiClass { PsiOntic, PsiEpistemic };

std::string to_string(PsiClass c);

// psi-epistemic iff some pair of preparations with distinct quantum states
// (distinct up to global phase) has overlapping support. Throws when fewer
// than two distinct quantum states are present.
PsiClass classify(const OntologicalModel& model);

// True iff quantum states and ontic states are in bijection: every support a
// singleton, equal states share it, distinct states get distinct atoms, and
// the atoms cover the whole space.
bool is_psi_complete(const OntologicalModel& model);

// Cartesian-product model: paired preparations get product distributions and
// tensor quantum states; paired responses multiply. Label namespaces of the
// factors must be disjoint. Joint labels are "<l1>|<l2>", joint ids "<a>*<b>".
OntologicalModel product_model(const OntologicalModel& m1, const OntologicalModel& m2);

// Copy with every ontic label suffixed; lets two copies of one model meet
// product_model's disjoint-namespace requirement.
OntologicalModel with_label_suffix(const OntologicalModel& model, const std::string& suffix);

// Canonical psi-complete fixture: one ontic atom per state, delta
// distributions, responses copied from the Born rule.
OntologicalModel delta_model(
    const std::vector<std::pair<std::string, hilbert::StateVector>>& states,
    const std::vector<std::pair<std::string, hilbert::Measurement>>& measurements);

// The two-preparation overlap hypothesis: up and plus prepared on one system,
// with a shared ontic atom in both supports.
//   space {up_only, shared, plus_only},
//   P_up   = 1/2 up_only + 1/2 shared,
//   P_plus = 1/2 shared  + 1/2 plus_only.
// The halves are a representative choice; only the supports matter downstream.
OntologicalModel pbr_overlap_model();

}  // namespace qflab::ontmodel
