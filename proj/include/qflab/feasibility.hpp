#pragma once
// Exact-rational linear feasibility with certificates.
//
// The solver is a dense phase-one simplex with Bland pivoting over Rational
// entries. All variables are probability-type and implicitly nonnegative;
// systems still carry explicit 0 <= v <= 1 rows so that serialized systems
// are self-describing. Infeasible verdicts come with an irreducible
// certificate (a minimal contradicting constraint subset) found by a Farkas
// support scan followed by a deletion filter.
//
// build_pbr_system() encodes the PBR argument: response variables for the
// four-outcome antidistinguishing measurement over a symbolic joint ontic
// space, response normalization per ontic state, and the quantum zero rows
// over each preparation's support. Preparation independence forces a common
// support atom, which is exactly what makes the system infeasible.

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qflab/ontmodel.hpp"
#include "qflab/rational.hpp"

namespace qflab::feasibility {

struct SizeError : std::length_error {
  using std::length_error::length_error;
};

// A failed cross-validation between the exact constraint encoding and the
// floating-point quantum predictions; callers treat this as a bug, not data.
struct InternalInconsistency : std::logic_error {
  using std::logic_error::logic_error;
};

enum class Relation { Eq, Le, Ge };

std::string to_string(Relation r);
Relation relation_from_string(const std::string& s);

struct LinearTerm {
  std::string var;
  Rational coeff;
};

struct Constraint {
  std::string id;
  std::vector<LinearTerm> terms;
  Relation rel = Relation::Eq;
  Rational rhs;
  std::string tag;  // which assumption the row encodes
};

class ConstraintSystem {
 public:
  void add_variable(const std::string& name);
  // Declares the variable and emits its lb:/ub: rows.
  void add_probability_variable(const std::string& name);
  void add_constraint(Constraint c);

  const std::vector<std::string>& variables() const { return variables_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  bool has_variable(const std::string& name) const;
  const Constraint& constraint(const std::string& id) const;

  // Every variable must appear in at least one constraint.
  void validate() const;

  // Support structure and provenance notes; serialized with the system.
  std::map<std::string, std::vector<std::string>> supports;
  std::map<std::string, std::string> info;

 private:
  std::vector<std::string> variables_;
  std::vector<Constraint> constraints_;
};

// The named constraints only, over the variables they mention.
ConstraintSystem subsystem(const ConstraintSystem& system,
                           const std::vector<std::string>& constraint_ids);

enum class Status { Feasible, Infeasible };

std::string to_string(Status s);

struct Verdict {
  Status status = Status::Infeasible;
  std::map<std::string, Rational> witness;      // feasible: satisfies every row exactly
  std::vector<std::string> certificate;         // infeasible: irreducible subset, system order
};

struct SolveOptions {
  std::size_t max_variables = 1000;
  bool compute_certificate = true;
};

Verdict solve(const ConstraintSystem& system, const SolveOptions& options = {});

// Exact substitution check; assignment defaults missing variables to 0.
bool satisfies(const ConstraintSystem& system,
               const std::map<std::string, Rational>& assignment);

struct PbrSystemConfig {
  bool preparation_independence = true;
  bool single_system_overlap = true;
  // Renames the common support atom when non-empty; the derived name is
  // "shared_1|shared_2" (system-1 atom paired with system-2 atom).
  std::string lambda_star_label;

  // Relational decoration. Empty pieces mean the canonical, single-observer
  // system. A hypothesis piece owns the response-normalization rows for its
  // copy of the ontic atoms plus the listed compatibility supports; the
  // response observer owns the quantum zero rows over its own copy. When all
  // named observers coincide the decoration collapses and the canonical
  // system is produced, which is the reduction the relational scenarios test.
  struct HypothesisPiece {
    std::string observer;
    std::vector<std::string> preparations;  // subset of the four joint preparations
  };
  std::vector<HypothesisPiece> hypotheses;
  std::string response_observer;
};

ConstraintSystem build_pbr_system(const PbrSystemConfig& config);

// Spec-shaped convenience: canonical system with a chosen common-atom label.
ConstraintSystem build_pbr_system(const std::string& overlap_lambda,
                                  bool preparation_independence);

struct NoGoReport {
  bool preparation_independence = true;
  bool single_system_overlap = true;
  // max_k |<omega_k|chi_k>| from the float-side validation gate.
  double orthogonality_deviation = 0.0;
  ConstraintSystem system;
  Verdict verdict;
  // Feasible runs: the witness rebuilt as an ontological model and re-checked.
  std::optional<ontmodel::OntologicalModel> witness_model;
  bool witness_zeros_exact = false;     // p(chi_k | P_omega_k) == 0 in exact arithmetic
  double witness_born_deviation = 0.0;  // worst deviation against the Born rule
};

// The full chain: validate the antidistinguishing zeros against the Hilbert
// side (gate tol, then asserted exact), build the joint overlap model, build
// and solve the constraint system, and package witness or certificate.
// Throws InternalInconsistency when the float-side validation fails.
NoGoReport pbr_no_go(bool preparation_independence = true,
                     bool single_system_overlap = true, double tol = 1e-12);

}  // namespace qflab::feasibility
