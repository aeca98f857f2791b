#pragma once
// Relational engine: an observer-indexed assignment ledger with interaction
// semantics (collapse relative to the participant, entangling unitary
// relative to bystanders), eigenstate-eigenvalue predicates, and the
// multi-observer scenarios with their no-contradiction certification.
//
// Ontic states are carried by the same state-vector machinery as quantum
// states and distinguished by a role tag; every relational claim is keyed by
// (system, observer, role). Ledgers are values: interact() returns a new
// version and never mutates shared state.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qflab/feasibility.hpp"
#include "qflab/hilbert.hpp"

namespace qflab::rqm {

enum class Role { QuantumState, OnticState };

std::string to_string(Role r);

struct RelationalAssignment {
  std::string system;    // atom or "+"-joined composite, e.g. "s1+s2"
  std::string observer;
  Role role = Role::QuantumState;
  hilbert::StateVector state;
};

struct InteractionEvent {
  int step = 0;  // step index created by the event
  std::string observer;
  std::string system;
  double outcome_value = 0.0;
  std::size_t outcome_index = 0;
  bool sampled = false;
  std::uint64_t seed = 0;
};

class Ledger {
 public:
  Ledger() : steps_(1) {}

  int current_step() const { return static_cast<int>(steps_.size()) - 1; }
  int step_count() const { return static_cast<int>(steps_.size()); }

  // Replaces any existing assignment for the same (system, observer, role).
  void assign(RelationalAssignment a);
  // Appends without replacement; exists so audits can be exercised against
  // deliberately corrupted ledgers.
  void inject_raw(RelationalAssignment a);

  const hilbert::StateVector* find(const std::string& system, const std::string& observer,
                                   Role role) const;
  const std::vector<RelationalAssignment>& assignments(int step) const;
  const std::vector<RelationalAssignment>& current_assignments() const;
  const std::vector<InteractionEvent>& events() const { return events_; }

  // Opens a new step as a copy of the current one.
  void begin_step();
  void record_event(InteractionEvent e) { events_.push_back(std::move(e)); }

 private:
  std::vector<std::vector<RelationalAssignment>> steps_;
  std::vector<InteractionEvent> events_;
};

struct InteractOptions {
  // Eigenvalue found; sampled from the Born distribution when absent.
  std::optional<double> outcome;
  std::uint64_t seed = 0;
  // Pointer wiring for bystander composites: |init> index and the record
  // index per outcome. Defaults to init 0 and record k for outcome k.
  std::size_t pointer_init = 0;
  std::vector<std::size_t> pointer_records;
};

// One measurement-like interaction. Relative to the participant the system
// collapses onto the found eigenstate; relative to every bystander that
// tracks a {system, observer} composite, the composite evolves by the
// entangling unitary. Nothing else in the ledger changes.
Ledger interact(const Ledger& ledger, const std::string& observer,
                const std::string& system, const hilbert::Observable& observable,
                const InteractOptions& options = {});

struct EelResult {
  bool definite = false;
  double value = 0.0;
};

// Eigenstate-eigenvalue link: definite iff the relational state lies in one
// eigenspace within fidelity 1 - 1e-12.
EelResult eel_definite(const Ledger& ledger, const std::string& system,
                       const std::string& observer, const hilbert::Observable& observable);

struct Violation {
  int step = 0;
  std::string description;
};

// Per-observer invariants at every step: unique (system, observer, role)
// keys, normalized states, and factorization consistency for composites
// whose factors are all individually assigned.
std::vector<Violation> consistency_audit(const Ledger& ledger);

// ---- scenarios ---------------------------------------------------------------

struct ScenarioConfig {
  Complex c1{0.7071067811865476, 0.0};
  Complex c2{0.7071067811865476, 0.0};
  std::uint64_t seed = 424242;
  // Forced outcome for the scenario's central interaction; sampled when unset.
  std::optional<double> outcome = 1.0;
  bool collapse_indices = false;
  // "post-interaction" (definite record) or "entangled" (unitary account).
  std::string sstar_account = "post-interaction";
  std::string alice_prep = "up";   // "up" | "plus"
  std::string bob_prep = "up";
  std::map<std::string, std::string> observer_names;  // optional renames
};

struct Assertion {
  std::string name;
  std::string verdict;  // "PASS" | "FAIL" | "N/A"
  std::string detail;
};

struct ScenarioReport {
  std::string scenario;
  Ledger ledger;
  std::vector<Assertion> assertions;
  bool pass = false;  // no FAIL entries
  std::optional<feasibility::ConstraintSystem> constraint_system;
  std::optional<feasibility::Verdict> feasibility_verdict;

  void add(std::string name, bool ok, std::string detail = {});
  void add_na(std::string name, std::string detail = {});
  void finalize();
};

// The participant/bystander split: s2 measures s1 and sees a definite value,
// s3 tracks s1+s2 unitarily, and both accounts coexist in the ledger.
ScenarioReport third_person_scenario(const ScenarioConfig& config = {});

// One preparing observer s, one measuring observer s*: the compatibility
// claims (indexed by s) and the quantum zeros (indexed by s*) form a joint
// constraint system that stays feasible unless the indices are collapsed.
ScenarioReport relational_pbr_single_observer(const ScenarioConfig& config = {});

// Alice and Bob prepare in separate labs, s* measures: each observer's
// composite options, the cross-observer zeros, pairwise distinctness of the
// three ontic assignments, and the three-index constraint system.
ScenarioReport relational_pbr_alice_bob(const ScenarioConfig& config = {});

// The Z and X qubit observables (eigenvalues +1/-1) used as preparation
// protocols, and the four-outcome antidistinguishing observable
// (eigenvalues 1..4) used by the measuring device.
hilbert::Observable z_observable();
hilbert::Observable x_observable();
hilbert::Observable pbr_observable();

}  // namespace qflab::rqm
