#include "qflab/feasibility.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "qflab/hilbert.hpp"

namespace qflab::feasibility {

namespace {

// ---- phase-one simplex -------------------------------------------------------

struct Row {
  Relation rel = Relation::Eq;
  std::vector<std::pair<std::size_t, Rational>> terms;  // (variable index, coeff)
  Rational rhs;
};

struct PhaseOneResult {
  bool feasible = false;
  std::vector<Rational> x;             // variable values when feasible
  std::vector<bool> farkas_support;    // per input row when infeasible
};

// True when x >= 0 alone already guarantees the row, so it can never be
// violated and never belongs to a certificate.
bool implied_by_nonnegativity(const Row& row) {
  if (row.rel == Relation::Le) {
    if (row.rhs.is_negative()) return false;
    for (const auto& [idx, c] : row.terms) {
      if (Rational(0) < c) return false;
    }
    return true;
  }
  if (row.rel == Relation::Ge) {
    if (Rational(0) < row.rhs) return false;
    for (const auto& [idx, c] : row.terms) {
      if (c.is_negative()) return false;
    }
    return true;
  }
  return false;
}

// Minimizes the sum of artificial variables over { rows, x >= 0 } with Bland's
// rule (lowest-index entering column, lowest-index basic tie-break), which
// makes pivots, witnesses, and Farkas supports deterministic.
PhaseOneResult phase_one(const std::vector<const Row*>& rows, std::size_t var_count) {
  PhaseOneResult result;
  result.farkas_support.assign(rows.size(), false);

  struct ActiveRow {
    std::size_t input_index;
    std::vector<Rational> coeffs;  // dense over variables
    Rational rhs;
    Relation rel;                  // after sign normalization: Le or Eq
    std::size_t slack_col = SIZE_MAX;
    std::size_t artificial_col = SIZE_MAX;
  };

  std::vector<ActiveRow> active;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Row& in = *rows[i];
    if (implied_by_nonnegativity(in)) continue;
    ActiveRow ar;
    ar.input_index = i;
    ar.coeffs.assign(var_count, Rational(0));
    for (const auto& [idx, c] : in.terms) ar.coeffs[idx] += c;
    ar.rhs = in.rhs;
    ar.rel = in.rel;
    // Flip Ge to Le; then flip signs where needed so rhs >= 0.
    if (ar.rel == Relation::Ge) {
      for (Rational& c : ar.coeffs) c = -c;
      ar.rhs = -ar.rhs;
      ar.rel = Relation::Le;
    }
    if (ar.rhs.is_negative()) {
      for (Rational& c : ar.coeffs) c = -c;
      ar.rhs = -ar.rhs;
      if (ar.rel == Relation::Le) {
        ar.rel = Relation::Ge;
      } else if (ar.rel == Relation::Ge) {
        ar.rel = Relation::Le;
      }
    }
    active.push_back(std::move(ar));
  }

  const std::size_t m = active.size();
  if (m == 0) {
    result.feasible = true;
    result.x.assign(var_count, Rational(0));
    return result;
  }

  // Column layout: variables | slacks/surpluses | artificials | rhs.
  std::size_t next_col = var_count;
  for (ActiveRow& ar : active) {
    if (ar.rel != Relation::Eq) ar.slack_col = next_col++;
  }
  for (ActiveRow& ar : active) {
    // Le rows start with the slack basic; Ge and Eq rows need an artificial.
    if (ar.rel != Relation::Le) ar.artificial_col = next_col++;
  }
  const std::size_t cols = next_col;
  const std::size_t rhs_col = cols;

  std::vector<std::vector<Rational>> t(m + 1, std::vector<Rational>(cols + 1, Rational(0)));
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    const ActiveRow& ar = active[i];
    for (std::size_t j = 0; j < var_count; ++j) t[i][j] = ar.coeffs[j];
    if (ar.slack_col != SIZE_MAX) {
      t[i][ar.slack_col] = (ar.rel == Relation::Le) ? Rational(1) : Rational(-1);
    }
    if (ar.artificial_col != SIZE_MAX) t[i][ar.artificial_col] = Rational(1);
    t[i][rhs_col] = ar.rhs;
    basis[i] = (ar.rel == Relation::Le) ? ar.slack_col : ar.artificial_col;
  }

  // Objective row: reduced costs for min(sum of artificials); t[m][rhs] = -z.
  std::vector<Rational>& obj = t[m];
  for (std::size_t i = 0; i < m; ++i) {
    if (active[i].artificial_col == SIZE_MAX) continue;
    for (std::size_t j = 0; j <= cols; ++j) obj[j] -= t[i][j];
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (active[i].artificial_col != SIZE_MAX) obj[active[i].artificial_col] = Rational(0);
  }

  auto pivot = [&](std::size_t pr, std::size_t pc) {
    Rational inv = Rational(1) / t[pr][pc];
    for (std::size_t j = 0; j <= cols; ++j) {
      if (!t[pr][j].is_zero()) t[pr][j] *= inv;
    }
    for (std::size_t i = 0; i <= m; ++i) {
      if (i == pr || t[i][pc].is_zero()) continue;
      Rational factor = t[i][pc];
      for (std::size_t j = 0; j <= cols; ++j) {
        if (!t[pr][j].is_zero()) t[i][j] -= factor * t[pr][j];
      }
      t[i][pc] = Rational(0);
    }
    basis[pr] = pc;
  };

  for (;;) {
    std::size_t entering = SIZE_MAX;
    for (std::size_t j = 0; j < cols; ++j) {
      if (obj[j].is_negative()) {
        entering = j;
        break;
      }
    }
    if (entering == SIZE_MAX) break;

    std::size_t leaving = SIZE_MAX;
    Rational best_ratio;
    for (std::size_t i = 0; i < m; ++i) {
      if (!(Rational(0) < t[i][entering])) continue;
      Rational ratio = t[i][rhs_col] / t[i][entering];
      if (leaving == SIZE_MAX || ratio < best_ratio ||
          (ratio == best_ratio && basis[i] < basis[leaving])) {
        leaving = i;
        best_ratio = ratio;
      }
    }
    if (leaving == SIZE_MAX) {
      throw std::logic_error("phase-one simplex claims unbounded cost");
    }
    pivot(leaving, entering);
  }

  Rational z = -obj[rhs_col];
  if (z.is_zero()) {
    result.feasible = true;
    result.x.assign(var_count, Rational(0));
    for (std::size_t i = 0; i < m; ++i) {
      if (basis[i] < var_count) result.x[basis[i]] = t[i][rhs_col];
    }
    return result;
  }

  // Farkas support from the final dual values: for row i,
  //   y_i = 1 - d(artificial_i), or read through the slack column otherwise
  //   (slack has d = -y, surplus d = +y).
  result.feasible = false;
  for (std::size_t i = 0; i < m; ++i) {
    const ActiveRow& ar = active[i];
    Rational y;
    if (ar.artificial_col != SIZE_MAX) {
      y = Rational(1) - obj[ar.artificial_col];
    } else {
      y = -obj[ar.slack_col];
    }
    if (!y.is_zero()) result.farkas_support[ar.input_index] = true;
  }
  return result;
}

// ---- constraint conversion -----------------------------------------------------

std::vector<Row> to_rows(const ConstraintSystem& system,
                         const std::map<std::string, std::size_t>& var_index) {
  std::vector<Row> rows;
  rows.reserve(system.constraints().size());
  for (const Constraint& c : system.constraints()) {
    Row r;
    r.rel = c.rel;
    r.rhs = c.rhs;
    for (const LinearTerm& term : c.terms) {
      r.terms.emplace_back(var_index.at(term.var), term.coeff);
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

bool rows_feasible(const std::vector<Row>& all, const std::vector<std::size_t>& keep,
                   std::size_t var_count) {
  std::vector<const Row*> subset;
  subset.reserve(keep.size());
  for (std::size_t i : keep) subset.push_back(&all[i]);
  return phase_one(subset, var_count).feasible;
}

}  // namespace

// ---- ConstraintSystem ------------------------------------------------------------

std::string to_string(Relation r) {
  switch (r) {
    case Relation::Eq: return "=";
    case Relation::Le: return "<=";
    case Relation::Ge: return ">=";
  }
  return "?";
}

Relation relation_from_string(const std::string& s) {
  if (s == "=" || s == "==") return Relation::Eq;
  if (s == "<=") return Relation::Le;
  if (s == ">=") return Relation::Ge;
  throw std::invalid_argument("unknown relation: " + s);
}

std::string to_string(Status s) {
  return s == Status::Feasible ? "FEASIBLE" : "INFEASIBLE";
}

void ConstraintSystem::add_variable(const std::string& name) {
  if (has_variable(name)) throw std::invalid_argument("duplicate variable: " + name);
  variables_.push_back(name);
}

void ConstraintSystem::add_probability_variable(const std::string& name) {
  add_variable(name);
  add_constraint({"lb:" + name, {{name, Rational(1)}}, Relation::Ge, Rational(0),
                  "probability-bounds"});
  add_constraint({"ub:" + name, {{name, Rational(1)}}, Relation::Le, Rational(1),
                  "probability-bounds"});
}

void ConstraintSystem::add_constraint(Constraint c) {
  for (const Constraint& existing : constraints_) {
    if (existing.id == c.id) throw std::invalid_argument("duplicate constraint id: " + c.id);
  }
  for (const LinearTerm& t : c.terms) {
    if (!has_variable(t.var)) {
      throw std::invalid_argument("constraint " + c.id + " uses unknown variable " + t.var);
    }
  }
  constraints_.push_back(std::move(c));
}

bool ConstraintSystem::has_variable(const std::string& name) const {
  return std::find(variables_.begin(), variables_.end(), name) != variables_.end();
}

const Constraint& ConstraintSystem::constraint(const std::string& id) const {
  for (const Constraint& c : constraints_) {
    if (c.id == id) return c;
  }
  throw std::invalid_argument("unknown constraint: " + id);
}

void ConstraintSystem::validate() const {
  std::set<std::string> used;
  for (const Constraint& c : constraints_) {
    for (const LinearTerm& t : c.terms) used.insert(t.var);
  }
  for (const std::string& v : variables_) {
    if (!used.count(v)) {
      throw ValidationError("variable " + v + " appears in no constraint");
    }
  }
}

ConstraintSystem subsystem(const ConstraintSystem& system,
                           const std::vector<std::string>& constraint_ids) {
  ConstraintSystem sub;
  std::set<std::string> vars;
  std::vector<const Constraint*> kept;
  for (const std::string& id : constraint_ids) {
    const Constraint& c = system.constraint(id);
    kept.push_back(&c);
    for (const LinearTerm& t : c.terms) vars.insert(t.var);
  }
  for (const std::string& v : system.variables()) {
    if (vars.count(v)) sub.add_variable(v);
  }
  for (const Constraint* c : kept) sub.add_constraint(*c);
  return sub;
}

// ---- solve -------------------------------------------------------------------------

bool satisfies(const ConstraintSystem& system,
               const std::map<std::string, Rational>& assignment) {
  auto value_of = [&](const std::string& var) {
    auto it = assignment.find(var);
    return it == assignment.end() ? Rational(0) : it->second;
  };
  for (const Constraint& c : system.constraints()) {
    Rational lhs(0);
    for (const LinearTerm& t : c.terms) lhs += t.coeff * value_of(t.var);
    switch (c.rel) {
      case Relation::Eq:
        if (!(lhs == c.rhs)) return false;
        break;
      case Relation::Le:
        if (c.rhs < lhs) return false;
        break;
      case Relation::Ge:
        if (lhs < c.rhs) return false;
        break;
    }
  }
  return true;
}

Verdict solve(const ConstraintSystem& system, const SolveOptions& options) {
  system.validate();
  if (system.variables().size() > options.max_variables) {
    throw SizeError("system has " + std::to_string(system.variables().size()) +
                    " variables; limit is " + std::to_string(options.max_variables));
  }

  std::map<std::string, std::size_t> var_index;
  for (std::size_t i = 0; i < system.variables().size(); ++i) {
    var_index[system.variables()[i]] = i;
  }
  const std::size_t n = system.variables().size();
  std::vector<Row> rows = to_rows(system, var_index);

  std::vector<std::size_t> all(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) all[i] = i;

  std::vector<const Row*> row_ptrs;
  row_ptrs.reserve(rows.size());
  for (const Row& r : rows) row_ptrs.push_back(&r);
  PhaseOneResult first = phase_one(row_ptrs, n);

  Verdict verdict;
  if (first.feasible) {
    verdict.status = Status::Feasible;
    for (std::size_t i = 0; i < n; ++i) {
      verdict.witness[system.variables()[i]] = first.x[i];
    }
    if (!satisfies(system, verdict.witness)) {
      throw std::logic_error("solver produced a witness that fails substitution");
    }
    return verdict;
  }

  verdict.status = Status::Infeasible;
  if (!options.compute_certificate) return verdict;

  // Candidates: rows in the Farkas combination. The deletion filter then
  // shrinks them to an irreducible subset.
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (first.farkas_support[i]) candidates.push_back(i);
  }
  if (candidates.empty() || rows_feasible(rows, candidates, n)) {
    candidates = all;
  }
  std::vector<std::size_t> keep = candidates;
  for (std::size_t victim : candidates) {
    std::vector<std::size_t> trial;
    trial.reserve(keep.size());
    for (std::size_t k : keep) {
      if (k != victim) trial.push_back(k);
    }
    if (trial.size() < keep.size() && !rows_feasible(rows, trial, n)) {
      keep = std::move(trial);
    }
  }
  for (std::size_t i : keep) verdict.certificate.push_back(system.constraints()[i].id);
  return verdict;
}

// ---- the PBR construction -----------------------------------------------------------

namespace {

// Exact Born values |<chi_j|omega_k>|^2, j then k; validated against the
// float side before use.
const Rational kBornTable[4][4] = {
    {Rational(0), Rational(1, 4), Rational(1, 4), Rational(1, 2)},
    {Rational(1, 4), Rational(0), Rational(1, 2), Rational(1, 4)},
    {Rational(1, 4), Rational(1, 2), Rational(0), Rational(1, 4)},
    {Rational(1, 2), Rational(1, 4), Rational(1, 4), Rational(0)},
};

const char* kJointPrepIds[4] = {"P_omega1", "P_omega2", "P_omega3", "P_omega4"};

std::string chi_label(std::size_t k) { return "chi" + std::to_string(k + 1); }

std::string decorate(const std::string& name, const std::string& observer) {
  return observer.empty() ? name : name + "/" + observer;
}

struct PbrStructure {
  std::vector<std::string> atoms;
  std::vector<std::vector<std::string>> support;  // per joint preparation
  std::string lambda_star;                        // empty when no common atom
  ontmodel::OntologicalModel joint_model;
};

PbrStructure pbr_structure(bool preparation_independence, bool single_system_overlap,
                           const std::string& lambda_star_label) {
  ontmodel::OntologicalModel single =
      single_system_overlap
          ? ontmodel::pbr_overlap_model()
          : ontmodel::delta_model({{"up", hilbert::qubit_up()},
                                   {"plus", hilbert::qubit_plus()}},
                                  {});
  ontmodel::OntologicalModel joint =
      ontmodel::product_model(ontmodel::with_label_suffix(single, "_1"),
                              ontmodel::with_label_suffix(single, "_2"));

  PbrStructure s{{}, {}, {}, joint};

  if (preparation_independence && single_system_overlap) {
    // Joint supports follow the product structure; the common atom is forced.
    s.atoms = joint.space().labels();
    for (const ontmodel::Preparation& p : joint.preparations()) {
      s.support.push_back(p.support());
    }
    std::vector<std::string> common = s.support.front();
    for (const auto& sup : s.support) {
      std::vector<std::string> next;
      for (const std::string& a : common) {
        if (std::find(sup.begin(), sup.end(), a) != sup.end()) next.push_back(a);
      }
      common = std::move(next);
    }
    if (common.size() != 1) {
      throw InternalInconsistency("overlap product must force exactly one common atom");
    }
    s.lambda_star = common.front();
  } else if (!single_system_overlap) {
    // Disjoint single-system supports: the product supports are four distinct
    // singletons and no atom is shared.
    s.atoms = joint.space().labels();
    for (const ontmodel::Preparation& p : joint.preparations()) {
      s.support.push_back(p.support());
    }
  } else {
    // Preparation independence dropped: nothing ties the joint supports to
    // the single-system overlap, so each preparation gets its own free atom.
    for (std::size_t k = 0; k < 4; ++k) {
      s.atoms.push_back("free_omega" + std::to_string(k + 1));
      s.support.push_back({s.atoms.back()});
    }
  }

  if (!lambda_star_label.empty() && !s.lambda_star.empty() &&
      lambda_star_label != s.lambda_star) {
    auto rename = [&](std::string& name) {
      if (name == s.lambda_star) name = lambda_star_label;
    };
    for (std::string& a : s.atoms) rename(a);
    for (auto& sup : s.support) {
      for (std::string& a : sup) rename(a);
    }
    s.lambda_star = lambda_star_label;
  }
  return s;
}

std::string xi_var(std::size_t k, const std::string& atom, const std::string& observer) {
  return "xi:" + chi_label(k) + ":" + decorate(atom, observer);
}

}  // namespace

ConstraintSystem build_pbr_system(const PbrSystemConfig& config) {
  // Collapse the decoration when every named observer coincides.
  std::set<std::string> observers;
  for (const auto& h : config.hypotheses) observers.insert(h.observer);
  observers.insert(config.response_observer);
  const bool relational = observers.size() > 1;
  if (relational &&
      !(config.preparation_independence && config.single_system_overlap)) {
    throw std::invalid_argument(
        "relational decoration is only defined for the overlap+independence system");
  }

  PbrStructure s = pbr_structure(config.preparation_independence,
                                 config.single_system_overlap, config.lambda_star_label);

  ConstraintSystem sys;
  sys.info["construction"] =
      config.single_system_overlap
          ? (config.preparation_independence ? "overlap-product" : "free-supports")
          : "disjoint-product";
  sys.info["preparation_independence"] =
      config.preparation_independence ? "true" : "false";
  sys.info["single_system_overlap"] = config.single_system_overlap ? "true" : "false";
  if (!s.lambda_star.empty()) sys.info["lambda_star"] = s.lambda_star;

  struct Piece {
    std::string observer;
    std::vector<std::string> preparations;
  };
  std::vector<Piece> hypothesis_pieces;
  std::string response_observer;
  if (relational) {
    for (const auto& h : config.hypotheses) {
      hypothesis_pieces.push_back({h.observer, h.preparations});
    }
    response_observer = config.response_observer;
    std::string names;
    for (const auto& p : hypothesis_pieces) names += (names.empty() ? "" : ",") + p.observer;
    sys.info["hypothesis_observers"] = names;
    sys.info["response_observer"] = response_observer;
  } else {
    std::vector<std::string> all_preps(kJointPrepIds, kJointPrepIds + 4);
    hypothesis_pieces.push_back({"", all_preps});
    response_observer = "";
  }

  // Variables: one response-function copy per hypothesis observer, then the
  // response observer's copy (identical to the first in the canonical case).
  std::set<std::string> declared;
  auto declare_copy = [&](const std::string& observer) {
    for (std::size_t k = 0; k < 4; ++k) {
      for (const std::string& atom : s.atoms) {
        std::string v = xi_var(k, atom, observer);
        if (declared.insert(v).second) sys.add_probability_variable(v);
      }
    }
  };
  for (const Piece& piece : hypothesis_pieces) declare_copy(piece.observer);
  declare_copy(response_observer);

  // Response normalization per hypothesis observer's atoms.
  for (const Piece& piece : hypothesis_pieces) {
    for (const std::string& atom : s.atoms) {
      Constraint c;
      c.id = "norm:" + decorate(atom, piece.observer);
      for (std::size_t k = 0; k < 4; ++k) {
        c.terms.push_back({xi_var(k, atom, piece.observer), Rational(1)});
      }
      c.rel = Relation::Eq;
      c.rhs = Rational(1);
      c.tag = "response-normalization";
      sys.add_constraint(std::move(c));
    }
  }

  // Quantum zero rows over the response observer's atoms: outcome chi_k is
  // never seen when the preparation was omega_k, so the response must vanish
  // on that preparation's whole support.
  for (std::size_t k = 0; k < 4; ++k) {
    for (const std::string& atom : s.support[k]) {
      Constraint c;
      c.id = "zero:" + chi_label(k) + ":" + decorate(atom, response_observer);
      c.terms.push_back({xi_var(k, atom, response_observer), Rational(1)});
      c.rel = Relation::Eq;
      c.rhs = Rational(0);
      c.tag = "born-zero";
      sys.add_constraint(std::move(c));
    }
  }

  // The escape-hatch systems additionally pin the nonzero Born statistics, so
  // a FEASIBLE witness is a full quantum-reproducing model, not just any
  // normalized response table.
  if (!(config.preparation_independence && config.single_system_overlap)) {
    for (std::size_t k = 0; k < 4; ++k) {
      for (std::size_t j = 0; j < 4; ++j) {
        if (j == k) continue;
        const std::string& atom = s.support[k].front();
        Constraint c;
        c.id = "born:" + chi_label(j) + ":" + decorate(atom, response_observer);
        c.terms.push_back({xi_var(j, atom, response_observer), Rational(1)});
        c.rel = Relation::Eq;
        c.rhs = kBornTable[j][k];
        c.tag = "born-match";
        sys.add_constraint(std::move(c));
      }
    }
  }

  // Support structure, keyed by decorated preparation ids.
  for (const Piece& piece : hypothesis_pieces) {
    for (const std::string& prep : piece.preparations) {
      std::size_t k = SIZE_MAX;
      for (std::size_t i = 0; i < 4; ++i) {
        if (prep == kJointPrepIds[i]) k = i;
      }
      if (k == SIZE_MAX) throw std::invalid_argument("unknown joint preparation: " + prep);
      std::vector<std::string> atoms;
      for (const std::string& a : s.support[k]) {
        atoms.push_back(decorate(a, piece.observer));
      }
      sys.supports[decorate(prep, piece.observer)] = std::move(atoms);
    }
  }
  if (relational) {
    for (std::size_t k = 0; k < 4; ++k) {
      std::vector<std::string> atoms;
      for (const std::string& a : s.support[k]) {
        atoms.push_back(decorate(a, response_observer));
      }
      sys.supports[decorate(kJointPrepIds[k], response_observer)] = std::move(atoms);
    }
  }

  return sys;
}

ConstraintSystem build_pbr_system(const std::string& overlap_lambda,
                                  bool preparation_independence) {
  PbrSystemConfig config;
  config.preparation_independence = preparation_independence;
  config.lambda_star_label = overlap_lambda;
  return build_pbr_system(config);
}

NoGoReport pbr_no_go(bool preparation_independence, bool single_system_overlap, double tol) {
  NoGoReport report;
  report.preparation_independence = preparation_independence;
  report.single_system_overlap = single_system_overlap;

  // Float-side gate: the antidistinguishing zeros and the exact Born table
  // must agree with the Hilbert-space computation before they are asserted
  // as exact rationals.
  std::vector<hilbert::StateVector> omegas = hilbert::pbr_product_states();
  std::vector<hilbert::StateVector> chis = hilbert::pbr_basis_states();
  for (std::size_t k = 0; k < 4; ++k) {
    double dev = std::abs(hilbert::inner_product(omegas[k], chis[k]));
    report.orthogonality_deviation = std::max(report.orthogonality_deviation, dev);
  }
  if (report.orthogonality_deviation > tol) {
    throw InternalInconsistency("antidistinguishability validation failed at tolerance " +
                                std::to_string(tol));
  }
  for (std::size_t j = 0; j < 4; ++j) {
    for (std::size_t k = 0; k < 4; ++k) {
      double born = hilbert::born_probability(
          hilbert::DensityOperator::pure(omegas[k]),
          hilbert::Effect(hilbert::projector(chis[j]), chi_label(j)));
      if (std::abs(born - kBornTable[j][k].to_double()) > tol) {
        throw InternalInconsistency("Born table validation failed at tolerance " +
                                    std::to_string(tol));
      }
    }
  }

  PbrSystemConfig config;
  config.preparation_independence = preparation_independence;
  config.single_system_overlap = single_system_overlap;
  report.system = build_pbr_system(config);
  report.verdict = solve(report.system);

  if (report.verdict.status == Status::Feasible) {
    // Rebuild the witness as an ontological model over the system's atoms and
    // re-check it: the four zero predictions in exact arithmetic, the full
    // statistics against the Born rule in floats.
    PbrStructure s = pbr_structure(preparation_independence, single_system_overlap, "");
    std::vector<ontmodel::Preparation> preps;
    for (std::size_t k = 0; k < 4; ++k) {
      ontmodel::Preparation p;
      p.id = kJointPrepIds[k];
      p.quantum_state = omegas[k];
      if (s.support[k].size() != 1) {
        throw InternalInconsistency("escape-hatch supports must be singletons");
      }
      p.distribution[s.support[k].front()] = Rational(1);
      preps.push_back(std::move(p));
    }

    ontmodel::ResponseFunction resp;
    resp.measurement_id = "pbr";
    report.witness_zeros_exact = true;
    for (std::size_t k = 0; k < 4; ++k) {
      resp.outcomes.push_back(chi_label(k));
      for (const std::string& atom : s.atoms) {
        Rational xi = report.verdict.witness.at(xi_var(k, atom, ""));
        resp.values[chi_label(k)][atom] = xi.to_double();
      }
    }
    for (std::size_t k = 0; k < 4; ++k) {
      Rational predicted(0);
      for (const std::string& atom : s.support[k]) {
        predicted += report.verdict.witness.at(xi_var(k, atom, ""));
      }
      if (!predicted.is_zero()) report.witness_zeros_exact = false;
    }

    ontmodel::OntologicalModel model(ontmodel::OnticSpace(s.atoms), std::move(preps),
                                     {std::move(resp)},
                                     {{"pbr", hilbert::pbr_measurement()}});
    report.witness_born_deviation = ontmodel::reproduces_born(model, 1.0).worst_deviation;
    report.witness_model = std::move(model);
  }

  return report;
}

}  // namespace qflab::feasibility
