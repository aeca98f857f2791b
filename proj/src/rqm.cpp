#include "qflab/rqm.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "qflab/sampling.hpp"

namespace qflab::rqm {

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

std::vector<std::string> split_atoms(const std::string& composite) {
  std::vector<std::string> atoms;
  std::string current;
  for (char ch : composite) {
    if (ch == '+') {
      atoms.push_back(current);
      current.clear();
    } else {
      current += ch;
    }
  }
  atoms.push_back(current);
  return atoms;
}

std::string resolve_name(const ScenarioConfig& config, const std::string& key,
                         const std::string& fallback) {
  auto it = config.observer_names.find(key);
  return it == config.observer_names.end() ? fallback : it->second;
}

// Entangler with the pointer factor on either side of the system factor.
hilbert::ComplexMatrix entangler(const std::vector<hilbert::StateVector>& eigenvectors,
                                 std::size_t pointer_dim, std::size_t init_index,
                                 const std::vector<std::size_t>& records,
                                 bool pointer_first) {
  if (!pointer_first) {
    return hilbert::measurement_unitary(eigenvectors, pointer_dim, init_index, records);
  }
  const std::size_t sys_dim = eigenvectors.front().dim();
  hilbert::ComplexMatrix u(pointer_dim * sys_dim);
  for (std::size_t k = 0; k < eigenvectors.size(); ++k) {
    hilbert::ComplexMatrix perm = hilbert::ComplexMatrix::identity(pointer_dim);
    if (records[k] != init_index) {
      perm.at(init_index, init_index) = 0.0;
      perm.at(records[k], records[k]) = 0.0;
      perm.at(init_index, records[k]) = 1.0;
      perm.at(records[k], init_index) = 1.0;
    }
    u = u + hilbert::kron(perm, hilbert::projector(eigenvectors[k]));
  }
  return u;
}

}  // namespace

std::string to_string(Role r) {
  return r == Role::QuantumState ? "quantum_state" : "ontic_state";
}

// ---- Ledger ---------------------------------------------------------------------

void Ledger::assign(RelationalAssignment a) {
  if (!a.state.is_normalized(kAggregateTol)) {
    throw ValidationError("relational assignment for " + a.system + "/" + a.observer +
                          " is not normalized");
  }
  auto& step = steps_.back();
  for (RelationalAssignment& existing : step) {
    if (existing.system == a.system && existing.observer == a.observer &&
        existing.role == a.role) {
      existing = std::move(a);
      return;
    }
  }
  step.push_back(std::move(a));
}

void Ledger::inject_raw(RelationalAssignment a) { steps_.back().push_back(std::move(a)); }

const hilbert::StateVector* Ledger::find(const std::string& system,
                                         const std::string& observer, Role role) const {
  for (const RelationalAssignment& a : steps_.back()) {
    if (a.system == system && a.observer == observer && a.role == role) return &a.state;
  }
  return nullptr;
}

const std::vector<RelationalAssignment>& Ledger::assignments(int step) const {
  return steps_.at(static_cast<std::size_t>(step));
}

const std::vector<RelationalAssignment>& Ledger::current_assignments() const {
  return steps_.back();
}

void Ledger::begin_step() { steps_.push_back(steps_.back()); }

// ---- interact ---------------------------------------------------------------------

Ledger interact(const Ledger& ledger, const std::string& observer, const std::string& system,
                const hilbert::Observable& observable, const InteractOptions& options) {
  if (observer == system) {
    throw ValidationError("a system does not measure itself: " + observer);
  }
  const hilbert::StateVector* prior = ledger.find(system, observer, Role::QuantumState);
  if (prior == nullptr) {
    throw ValidationError("no prior assignment for (" + system + ", " + observer + ")");
  }
  for (std::size_t i = 0; i < observable.outcome_count(); ++i) {
    for (std::size_t j = i + 1; j < observable.outcome_count(); ++j) {
      if (std::abs(observable.eigenvalues()[i] - observable.eigenvalues()[j]) <= 1e-9) {
        throw ValidationError("interact requires a non-degenerate observable");
      }
    }
  }

  std::vector<double> probabilities = sampling::outcome_probabilities(*prior, observable);

  std::size_t outcome_index = SIZE_MAX;
  bool sampled = false;
  if (options.outcome.has_value()) {
    for (std::size_t k = 0; k < observable.outcome_count(); ++k) {
      if (std::abs(observable.eigenvalues()[k] - *options.outcome) <= 1e-9) {
        outcome_index = k;
        break;
      }
    }
    if (outcome_index == SIZE_MAX) {
      throw ValidationError("outcome is not an eigenvalue of the observable");
    }
    if (probabilities[outcome_index] <= kStructuralTol) {
      throw ValidationError("forced outcome has probability zero for this state");
    }
  } else {
    outcome_index = sampling::sample_index(probabilities, options.seed);
    sampled = true;
  }

  std::vector<std::size_t> records = options.pointer_records;
  if (records.empty()) {
    for (std::size_t k = 0; k < observable.outcome_count(); ++k) records.push_back(k);
  }

  Ledger next = ledger;
  next.begin_step();

  next.assign({system, observer, Role::QuantumState, observable.eigenvectors()[outcome_index]});

  // Bystanders: any other observer tracking the {system, participant} pair as
  // a composite sees the entangling unitary instead of a collapse.
  for (const RelationalAssignment& a : ledger.current_assignments()) {
    if (a.observer == observer || a.role != Role::QuantumState) continue;
    std::vector<std::string> atoms = split_atoms(a.system);
    if (atoms.size() != 2) continue;
    bool forward = atoms[0] == system && atoms[1] == observer;
    bool reversed = atoms[0] == observer && atoms[1] == system;
    if (!forward && !reversed) continue;

    const std::size_t sys_dim = prior->dim();
    if (a.state.dim() % sys_dim != 0) {
      throw DimensionError("composite " + a.system + " does not factor over " + system);
    }
    const std::size_t pointer_dim = a.state.dim() / sys_dim;
    hilbert::ComplexMatrix u = entangler(observable.eigenvectors(), pointer_dim,
                                         options.pointer_init, records, reversed);
    next.assign({a.system, a.observer, Role::QuantumState, hilbert::apply_unitary(u, a.state)});
  }

  InteractionEvent event;
  event.step = next.current_step();
  event.observer = observer;
  event.system = system;
  event.outcome_value = observable.eigenvalues()[outcome_index];
  event.outcome_index = outcome_index;
  event.sampled = sampled;
  event.seed = options.seed;
  next.record_event(std::move(event));
  return next;
}

// ---- predicates ---------------------------------------------------------------------

EelResult eel_definite(const Ledger& ledger, const std::string& system,
                       const std::string& observer, const hilbert::Observable& observable) {
  const hilbert::StateVector* state = ledger.find(system, observer, Role::QuantumState);
  if (state == nullptr) {
    throw ValidationError("no assignment for (" + system + ", " + observer + ")");
  }
  if (state->dim() != observable.dim()) {
    throw DimensionError("observable does not act on " + system);
  }

  // Group eigenvectors into eigenspaces, then test the squared projection.
  std::vector<double> group_value;
  std::vector<double> group_weight;
  for (std::size_t k = 0; k < observable.outcome_count(); ++k) {
    double v = observable.eigenvalues()[k];
    double w = std::norm(hilbert::inner_product(observable.eigenvectors()[k], *state));
    bool merged = false;
    for (std::size_t g = 0; g < group_value.size(); ++g) {
      if (std::abs(group_value[g] - v) <= 1e-9) {
        group_weight[g] += w;
        merged = true;
        break;
      }
    }
    if (!merged) {
      group_value.push_back(v);
      group_weight.push_back(w);
    }
  }
  for (std::size_t g = 0; g < group_value.size(); ++g) {
    if (std::sqrt(group_weight[g]) >= 1.0 - kStructuralTol) {
      return {true, group_value[g]};
    }
  }
  return {false, 0.0};
}

std::vector<Violation> consistency_audit(const Ledger& ledger) {
  std::vector<Violation> violations;
  for (int step = 0; step < ledger.step_count(); ++step) {
    const auto& entries = ledger.assignments(step);

    std::map<std::string, int> key_count;
    for (const RelationalAssignment& a : entries) {
      key_count[a.system + "\x1f" + a.observer + "\x1f" + to_string(a.role)]++;
      if (!a.state.is_normalized(kStructuralTol)) {
        violations.push_back({step, "state for (" + a.system + ", " + a.observer + ", " +
                                        to_string(a.role) + ") is not normalized"});
      }
    }
    for (const auto& [key, count] : key_count) {
      if (count > 1) {
        std::string readable = key;
        std::replace(readable.begin(), readable.end(), '\x1f', ',');
        violations.push_back({step, "duplicate assignment for (" + readable + ")"});
      }
    }

    // Factorization: a composite with every factor individually assigned must
    // match the tensor of its factors up to global phase.
    for (const RelationalAssignment& a : entries) {
      std::vector<std::string> atoms = split_atoms(a.system);
      if (atoms.size() < 2) continue;
      std::vector<const hilbert::StateVector*> factors;
      bool complete = true;
      for (const std::string& atom : atoms) {
        const hilbert::StateVector* f = nullptr;
        for (const RelationalAssignment& candidate : entries) {
          if (candidate.system == atom && candidate.observer == a.observer &&
              candidate.role == a.role) {
            f = &candidate.state;
            break;
          }
        }
        if (f == nullptr) {
          complete = false;
          break;
        }
        factors.push_back(f);
      }
      if (!complete) continue;

      hilbert::StateVector product = *factors.front();
      for (std::size_t i = 1; i < factors.size(); ++i) {
        product = hilbert::tensor(product, *factors[i]);
      }
      if (product.dim() != a.state.dim() ||
          !hilbert::equal_up_to_phase(product, a.state)) {
        violations.push_back({step, "composite " + a.system + " relative to " + a.observer +
                                        " (" + to_string(a.role) +
                                        ") is inconsistent with its factors"});
      }
    }
  }
  return violations;
}

// ---- scenario scaffolding ---------------------------------------------------------

void ScenarioReport::add(std::string name, bool ok, std::string detail) {
  assertions.push_back({std::move(name), ok ? "PASS" : "FAIL", std::move(detail)});
}

void ScenarioReport::add_na(std::string name, std::string detail) {
  assertions.push_back({std::move(name), "N/A", std::move(detail)});
}

void ScenarioReport::finalize() {
  pass = true;
  for (const Assertion& a : assertions) {
    if (a.verdict == "FAIL") pass = false;
  }
}

hilbert::Observable z_observable() {
  return hilbert::Observable({1.0, -1.0}, {hilbert::qubit_up(), hilbert::qubit_down()});
}

hilbert::Observable x_observable() {
  return hilbert::Observable({1.0, -1.0}, {hilbert::qubit_plus(), hilbert::qubit_minus()});
}

hilbert::Observable pbr_observable() {
  return hilbert::Observable({1.0, 2.0, 3.0, 4.0}, hilbert::pbr_basis_states());
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

void run_audit_assertion(ScenarioReport& report) {
  std::vector<Violation> violations = consistency_audit(report.ledger);
  std::string detail;
  for (const Violation& v : violations) {
    detail += "step " + std::to_string(v.step) + ": " + v.description + "; ";
  }
  report.add("consistency-audit-empty", violations.empty(), detail);
}

}  // namespace

// ---- Third Person -------------------------------------------------------------------

ScenarioReport third_person_scenario(const ScenarioConfig& config) {
  ScenarioReport report;
  report.scenario = "third-person";

  const std::string s1 = resolve_name(config, "s1", "s1");
  const std::string s2 = resolve_name(config, "s2", "s2");
  const std::string s3 = resolve_name(config, "s3", "s3");

  double norm = std::norm(config.c1) + std::norm(config.c2);
  if (std::abs(norm - 1.0) > kAggregateTol) {
    throw ValidationError("amplitudes c1, c2 must satisfy |c1|^2 + |c2|^2 = 1");
  }

  hilbert::Observable o = x_observable();
  const hilbert::StateVector plus = hilbert::qubit_plus();
  const hilbert::StateVector minus = hilbert::qubit_minus();

  // c1|+> + c2|-> in the computational basis.
  hilbert::StateVector initial({(config.c1 + config.c2) * kInvSqrt2,
                                (config.c1 - config.c2) * kInvSqrt2});
  hilbert::StateVector pointer_init = hilbert::StateVector::basis(2, 0);

  Ledger ledger;
  ledger.assign({s1, s2, Role::QuantumState, initial});
  ledger.assign({s1 + "+" + s2, s3, Role::QuantumState, hilbert::tensor(initial, pointer_init)});

  InteractOptions opts;
  opts.outcome = config.outcome;
  opts.seed = config.seed;
  ledger = interact(ledger, s2, s1, o, opts);
  report.ledger = ledger;

  const InteractionEvent& event = ledger.events().back();
  const double found = event.outcome_value;

  EelResult rel_participant = eel_definite(ledger, s1, s2, o);
  report.add("definite-relative-to-participant",
             rel_participant.definite && std::abs(rel_participant.value - found) <= 1e-9,
             "value " + fmt(rel_participant.value));

  // Lift the observable onto the composite (acting on the first factor).
  std::vector<hilbert::StateVector> lifted_vecs;
  std::vector<double> lifted_vals;
  for (std::size_t k = 0; k < o.outcome_count(); ++k) {
    for (std::size_t p = 0; p < 2; ++p) {
      lifted_vecs.push_back(
          hilbert::tensor(o.eigenvectors()[k], hilbert::StateVector::basis(2, p)));
      lifted_vals.push_back(o.eigenvalues()[k]);
    }
  }
  hilbert::Observable lifted(lifted_vals, lifted_vecs);

  const bool degenerate = std::min(std::norm(config.c1), std::norm(config.c2)) < kStructuralTol;
  EelResult rel_bystander = eel_definite(ledger, s1 + "+" + s2, s3, lifted);
  if (degenerate) {
    report.add_na("indefinite-relative-to-bystander",
                  "degenerate superposition: the accounts agree");
  } else {
    report.add("indefinite-relative-to-bystander", !rel_bystander.definite);
  }

  // The two accounts of the composite differ unless the superposition was
  // degenerate to begin with.
  const hilbert::StateVector* bystander = ledger.find(s1 + "+" + s2, s3, Role::QuantumState);
  hilbert::StateVector participant_account =
      hilbert::tensor(*ledger.find(s1, s2, Role::QuantumState),
                      hilbert::StateVector::basis(2, event.outcome_index));
  double account_fidelity = hilbert::fidelity(participant_account, *bystander);
  if (degenerate) {
    report.add_na("accounts-differ", "fidelity " + fmt(account_fidelity));
  } else {
    report.add("accounts-differ", account_fidelity < 1.0 - kStructuralTol,
               "fidelity " + fmt(account_fidelity));
  }

  // Bystander account equals the unitary target c1|+>|0> + c2|->|1>.
  std::vector<Complex> target_amp(4, Complex(0.0));
  {
    hilbert::StateVector t1 = hilbert::tensor(plus, hilbert::StateVector::basis(2, 0));
    hilbert::StateVector t2 = hilbert::tensor(minus, hilbert::StateVector::basis(2, 1));
    for (std::size_t i = 0; i < 4; ++i) {
      target_amp[i] = config.c1 * t1[i] + config.c2 * t2[i];
    }
  }
  double target_fidelity = hilbert::fidelity(hilbert::StateVector(target_amp), *bystander);
  report.add("bystander-matches-unitary-account", target_fidelity >= 1.0 - kStructuralTol,
             "fidelity " + fmt(target_fidelity));

  run_audit_assertion(report);
  report.finalize();
  return report;
}

// ---- Relational PBR, one preparing observer -------------------------------------------

ScenarioReport relational_pbr_single_observer(const ScenarioConfig& config) {
  ScenarioReport report;
  report.scenario = "relational-pbr-single";

  const std::string s = resolve_name(config, "s", "s");
  const std::string sstar = resolve_name(config, "s*", "s_star");
  const std::string composite = "s1+s2";

  Ledger ledger;
  ledger.assign({"s1", s, Role::QuantumState, hilbert::qubit_plus()});
  ledger.assign({"s2", s, Role::QuantumState, hilbert::qubit_up()});

  // Preparations as measurements by s: s1 -> up under Z, s2 -> plus under X.
  InteractOptions prep;
  prep.outcome = 1.0;
  ledger = interact(ledger, s, "s1", z_observable(), prep);
  ledger = interact(ledger, s, "s2", x_observable(), prep);

  hilbert::StateVector omega = hilbert::tensor(hilbert::qubit_up(), hilbert::qubit_plus());
  ledger.assign({"s1", s, Role::OnticState, hilbert::qubit_up()});
  ledger.assign({"s2", s, Role::OnticState, hilbert::qubit_plus()});
  ledger.assign({composite, s, Role::QuantumState, omega});
  ledger.assign({composite, s, Role::OnticState, omega});

  // The measuring observer interacts with the pair and keeps its own record.
  ledger.begin_step();
  ledger.assign({composite, sstar, Role::QuantumState, omega});
  InteractOptions meas;
  meas.seed = config.seed;
  ledger = interact(ledger, sstar, composite, pbr_observable(), meas);
  const std::size_t found = ledger.events().back().outcome_index;
  ledger.assign({composite, sstar, Role::OnticState,
                 hilbert::pbr_basis_states()[found]});
  report.ledger = ledger;

  report.add("relativization-indices-distinct", s != sstar, s + " vs " + sstar);

  double fid = hilbert::fidelity(*ledger.find(composite, s, Role::OnticState),
                                 *ledger.find(composite, sstar, Role::OnticState));
  report.add("ontic-assignments-differ", fid < 1.0 - 1e-9, "fidelity " + fmt(fid));

  // Union of the compatibility claims (indexed by s) and the quantum zeros
  // (indexed by s*).
  feasibility::PbrSystemConfig sys_config;
  sys_config.hypotheses = {{s, {"P_omega1", "P_omega2", "P_omega3", "P_omega4"}}};
  sys_config.response_observer = config.collapse_indices ? s : sstar;
  feasibility::ConstraintSystem system = feasibility::build_pbr_system(sys_config);
  feasibility::Verdict verdict = feasibility::solve(system);
  report.constraint_system = system;
  report.feasibility_verdict = verdict;

  bool feasible = verdict.status == feasibility::Status::Feasible;
  report.add("union-of-claims-feasible", feasible,
             feasible ? "no contradiction: the claims have different relativization targets"
                      : "indices collapsed: the canonical contradiction is back");

  run_audit_assertion(report);
  report.finalize();
  return report;
}

// ---- Relational PBR, Alice and Bob ------------------------------------------------------

namespace {

// Pointer space for a lab record: idle, saw-up, saw-plus.
const std::size_t kIdle = 0;
const std::size_t kRecUp = 1;
const std::size_t kRecPlus = 2;

// (1/sqrt2)(|up> (x) |rec_up> + |plus> (x) |rec_plus>) on system (x) pointer.
hilbert::StateVector entangled_block() {
  std::vector<Complex> amp(6, Complex(0.0));
  const hilbert::StateVector up = hilbert::qubit_up();
  const hilbert::StateVector plus = hilbert::qubit_plus();
  for (std::size_t i = 0; i < 2; ++i) {
    amp[i * 3 + kRecUp] += kInvSqrt2 * up[i];
    amp[i * 3 + kRecPlus] += kInvSqrt2 * plus[i];
  }
  return hilbert::StateVector(amp);
}

// Flatten (s1, s2, pointerA, pointerB) with dims (2, 2, 3, 3).
std::size_t flat(std::size_t i1, std::size_t i2, std::size_t a, std::size_t b) {
  return ((i1 * 2 + i2) * 3 + a) * 3 + b;
}

// Alice's composite option: her s1 state, Bob's lab entangled, her own
// pointer unrelativized (idle).
hilbert::StateVector alice_option(const hilbert::StateVector& s1_state) {
  hilbert::StateVector block = entangled_block();
  std::vector<Complex> amp(36, Complex(0.0));
  for (std::size_t i1 = 0; i1 < 2; ++i1) {
    for (std::size_t i2 = 0; i2 < 2; ++i2) {
      for (std::size_t b = 0; b < 3; ++b) {
        amp[flat(i1, i2, kIdle, b)] = s1_state[i1] * block[i2 * 3 + b];
      }
    }
  }
  return hilbert::StateVector(amp);
}

hilbert::StateVector bob_option(const hilbert::StateVector& s2_state) {
  hilbert::StateVector block = entangled_block();
  std::vector<Complex> amp(36, Complex(0.0));
  for (std::size_t i1 = 0; i1 < 2; ++i1) {
    for (std::size_t i2 = 0; i2 < 2; ++i2) {
      for (std::size_t a = 0; a < 3; ++a) {
        amp[flat(i1, i2, a, kIdle)] = block[i1 * 3 + a] * s2_state[i2];
      }
    }
  }
  return hilbert::StateVector(amp);
}

hilbert::StateVector sstar_post_state(const hilbert::StateVector& chi) {
  std::vector<Complex> amp(36, Complex(0.0));
  for (std::size_t i1 = 0; i1 < 2; ++i1) {
    for (std::size_t i2 = 0; i2 < 2; ++i2) {
      amp[flat(i1, i2, kIdle, kIdle)] = chi[i1 * 2 + i2];
    }
  }
  return hilbert::StateVector(amp);
}

hilbert::StateVector sstar_entangled_state() {
  hilbert::StateVector block = entangled_block();
  std::vector<Complex> amp(36, Complex(0.0));
  for (std::size_t i1 = 0; i1 < 2; ++i1) {
    for (std::size_t i2 = 0; i2 < 2; ++i2) {
      for (std::size_t a = 0; a < 3; ++a) {
        for (std::size_t b = 0; b < 3; ++b) {
          amp[flat(i1, i2, a, b)] = block[i1 * 3 + a] * block[i2 * 3 + b];
        }
      }
    }
  }
  return hilbert::StateVector(amp);
}

}  // namespace

ScenarioReport relational_pbr_alice_bob(const ScenarioConfig& config) {
  ScenarioReport report;
  report.scenario = "relational-pbr-alice-bob";

  const std::string alice = resolve_name(config, "A", "A");
  const std::string bob = resolve_name(config, "B", "B");
  const std::string sstar = resolve_name(config, "s*", "s_star");
  const std::string full = "s1+s2+pA+pB";

  auto parse_prep = [](const std::string& name) {
    if (name == "up" || name == "plus") return name;
    throw ValidationError("preparation must be 'up' or 'plus', got " + name);
  };
  const std::string a_prep = parse_prep(config.alice_prep);
  const std::string b_prep = parse_prep(config.bob_prep);
  auto prep_state = [](const std::string& name) {
    return name == "up" ? hilbert::qubit_up() : hilbert::qubit_plus();
  };
  auto prep_observable = [](const std::string& name) {
    return name == "up" ? z_observable() : x_observable();
  };

  Ledger ledger;
  ledger.assign({"s1", alice, Role::QuantumState,
                 a_prep == "up" ? hilbert::qubit_plus() : hilbert::qubit_up()});
  ledger.assign({"s2", bob, Role::QuantumState,
                 b_prep == "up" ? hilbert::qubit_plus() : hilbert::qubit_up()});

  InteractOptions prep;
  prep.outcome = 1.0;
  ledger = interact(ledger, alice, "s1", prep_observable(a_prep), prep);
  ledger = interact(ledger, bob, "s2", prep_observable(b_prep), prep);

  // Local ontic states and each observer's account of the other lab.
  ledger.assign({"s1", alice, Role::OnticState, prep_state(a_prep)});
  ledger.assign({"s2", bob, Role::OnticState, prep_state(b_prep)});
  hilbert::StateVector block = entangled_block();
  ledger.assign({"s2+pB", alice, Role::OnticState, block});
  ledger.assign({"s1+pA", bob, Role::OnticState, block});

  // Composite ontic assignments on the shared (s1, s2, pA, pB) space.
  hilbert::StateVector lambda_a = alice_option(prep_state(a_prep));
  hilbert::StateVector lambda_b = bob_option(prep_state(b_prep));
  ledger.assign({full, alice, Role::OnticState, lambda_a});
  ledger.assign({full, bob, Role::OnticState, lambda_b});

  // The measuring device interacts with the pair.
  ledger.begin_step();
  hilbert::StateVector omega_actual =
      hilbert::tensor(prep_state(a_prep), prep_state(b_prep));
  ledger.assign({"s1+s2", sstar, Role::QuantumState, omega_actual});
  InteractOptions meas;
  meas.seed = config.seed;
  ledger = interact(ledger, sstar, "s1+s2", pbr_observable(), meas);
  const std::size_t found = ledger.events().back().outcome_index;

  hilbert::StateVector lambda_sstar =
      config.sstar_account == "entangled"
          ? sstar_entangled_state()
          : sstar_post_state(hilbert::pbr_basis_states()[found]);
  ledger.assign({full, sstar, Role::OnticState, lambda_sstar});
  report.ledger = ledger;

  // Branch amplitudes of the entangled accounts.
  {
    hilbert::StateVector up_branch =
        hilbert::tensor(hilbert::qubit_up(), hilbert::StateVector::basis(3, kRecUp));
    hilbert::StateVector plus_branch =
        hilbert::tensor(hilbert::qubit_plus(), hilbert::StateVector::basis(3, kRecPlus));
    double dev = std::max(
        std::abs(std::abs(hilbert::inner_product(up_branch, block)) - kInvSqrt2),
        std::abs(std::abs(hilbert::inner_product(plus_branch, block)) - kInvSqrt2));
    report.add("entangled-branch-amplitudes", dev <= kStructuralTol,
               "max deviation " + fmt(dev));
  }

  hilbert::StateVector omega1 = alice_option(hilbert::qubit_up());
  hilbert::StateVector omega2 = alice_option(hilbert::qubit_plus());
  hilbert::StateVector omega3 = bob_option(hilbert::qubit_up());
  hilbert::StateVector omega4 = bob_option(hilbert::qubit_plus());

  // Each observer's assignment is compatible with both of that observer's
  // option states.
  {
    double wa1 = std::norm(hilbert::inner_product(omega1, lambda_a));
    double wa2 = std::norm(hilbert::inner_product(omega2, lambda_a));
    double wb3 = std::norm(hilbert::inner_product(omega3, lambda_b));
    double wb4 = std::norm(hilbert::inner_product(omega4, lambda_b));
    bool ok = wa1 > kStructuralTol && wa2 > kStructuralTol && wb3 > kStructuralTol &&
              wb4 > kStructuralTol;
    report.add("own-options-supported", ok,
               "|<omega1|lambdaA>|^2=" + fmt(wa1) + " |<omega2|lambdaA>|^2=" + fmt(wa2) +
                   " |<omega3|lambdaB>|^2=" + fmt(wb3) + " |<omega4|lambdaB>|^2=" + fmt(wb4));
  }

  // One observer's options carry a record of the other lab that the other
  // observer's own account cannot contain, so the cross overlaps vanish.
  {
    double worst = 0.0;
    for (const hilbert::StateVector* a : {&omega1, &omega2}) {
      for (const hilbert::StateVector* b : {&omega3, &omega4}) {
        worst = std::max(worst, std::norm(hilbert::inner_product(*a, *b)));
      }
    }
    report.add("cross-observer-zeros", worst <= kStructuralTol,
               "max cross support " + fmt(worst));
  }

  {
    double fab = hilbert::fidelity(lambda_a, lambda_b);
    double fas = hilbert::fidelity(lambda_a, lambda_sstar);
    double fbs = hilbert::fidelity(lambda_b, lambda_sstar);
    double worst = std::max({fab, fas, fbs});
    report.add("pairwise-ontic-distinct", worst < 1.0 - 1e-9,
               "fidelities " + fmt(fab) + ", " + fmt(fas) + ", " + fmt(fbs));
  }

  // Three-index constraint system.
  feasibility::PbrSystemConfig sys_config;
  if (config.collapse_indices) {
    sys_config.hypotheses = {{"s", {"P_omega1", "P_omega2"}}, {"s", {"P_omega3", "P_omega4"}}};
    sys_config.response_observer = "s";
  } else {
    sys_config.hypotheses = {{alice, {"P_omega1", "P_omega2"}},
                             {bob, {"P_omega3", "P_omega4"}}};
    sys_config.response_observer = sstar;
  }
  feasibility::ConstraintSystem system = feasibility::build_pbr_system(sys_config);
  feasibility::Verdict verdict = feasibility::solve(system);
  report.constraint_system = system;
  report.feasibility_verdict = verdict;
  bool feasible = verdict.status == feasibility::Status::Feasible;
  report.add("multi-observer-system-feasible", feasible,
             feasible ? "no contradiction: the claims have different relativization targets"
                      : "indices collapsed: the canonical contradiction is back");

  run_audit_assertion(report);
  report.finalize();
  return report;
}

}  // namespace qflab::rqm
