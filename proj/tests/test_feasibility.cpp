#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "helpers.hpp"
#include "qflab/feasibility.hpp"
#include "qflab/json_io.hpp"

using namespace qflab;
using namespace qflab::feasibility;

namespace {

ConstraintSystem one_variable_system() {
  ConstraintSystem sys;
  sys.add_probability_variable("x");
  sys.add_constraint({"fix", {{"x", Rational(1)}}, Relation::Eq, Rational(1, 2), "test"});
  return sys;
}

ConstraintSystem contradiction_system() {
  ConstraintSystem sys;
  sys.add_variable("x");
  sys.add_constraint({"x-is-0", {{"x", Rational(1)}}, Relation::Eq, Rational(0), "test"});
  sys.add_constraint({"x-is-1", {{"x", Rational(1)}}, Relation::Eq, Rational(1), "test"});
  return sys;
}

// Random small system over [0,1] probability variables.
ConstraintSystem random_system(std::mt19937_64& rng, std::size_t n_vars,
                               std::size_t n_rows) {
  std::uniform_int_distribution<int> coeff(-2, 2);
  std::uniform_int_distribution<int> rhs_num(-2, 4);
  std::uniform_int_distribution<int> rel_pick(0, 2);
  ConstraintSystem sys;
  for (std::size_t i = 0; i < n_vars; ++i) {
    sys.add_probability_variable("v" + std::to_string(i));
  }
  for (std::size_t r = 0; r < n_rows; ++r) {
    Constraint c;
    c.id = "r" + std::to_string(r);
    for (std::size_t i = 0; i < n_vars; ++i) {
      int a = coeff(rng);
      if (a != 0) c.terms.push_back({"v" + std::to_string(i), Rational(a)});
    }
    if (c.terms.empty()) c.terms.push_back({"v0", Rational(1)});
    c.rel = rel_pick(rng) == 0 ? Relation::Eq : (rel_pick(rng) == 1 ? Relation::Le : Relation::Ge);
    c.rhs = Rational(rhs_num(rng), 2);
    c.tag = "random";
    sys.add_constraint(std::move(c));
  }
  return sys;
}

}  // namespace

TEST_CASE("one-variable sanity") {
  Verdict v = solve(one_variable_system());
  REQUIRE(v.status == Status::Feasible);
  CHECK(v.witness.at("x") == Rational(1, 2));
  CHECK(satisfies(one_variable_system(), v.witness));
}

TEST_CASE("direct contradiction yields the two-constraint certificate") {
  Verdict v = solve(contradiction_system());
  REQUIRE(v.status == Status::Infeasible);
  REQUIRE(v.certificate.size() == 2);
  CHECK(v.certificate[0] == "x-is-0");
  CHECK(v.certificate[1] == "x-is-1");

  // The certificate is itself infeasible in isolation.
  ConstraintSystem iso = subsystem(contradiction_system(), v.certificate);
  CHECK(solve(iso).status == Status::Infeasible);
}

TEST_CASE("constraint system validation") {
  ConstraintSystem sys;
  sys.add_variable("x");
  CHECK_THROWS_AS(sys.add_variable("x"), std::invalid_argument);
  CHECK_THROWS_AS(
      sys.add_constraint({"bad", {{"y", Rational(1)}}, Relation::Eq, Rational(0), ""}),
      std::invalid_argument);
  CHECK_THROWS_AS(sys.validate(), ValidationError);  // x unused
  sys.add_constraint({"use-x", {{"x", Rational(1)}}, Relation::Le, Rational(1), ""});
  CHECK_NOTHROW(sys.validate());
  CHECK_THROWS_AS(
      sys.add_constraint({"use-x", {{"x", Rational(1)}}, Relation::Le, Rational(1), ""}),
      std::invalid_argument);
}

TEST_CASE("oversize systems are rejected") {
  ConstraintSystem sys;
  for (int i = 0; i < 1001; ++i) {
    sys.add_probability_variable("v" + std::to_string(i));
  }
  CHECK_THROWS_AS(solve(sys), SizeError);
}

TEST_CASE("bound rows join the certificate when they carry the conflict") {
  ConstraintSystem sys;
  sys.add_probability_variable("x");
  sys.add_constraint({"demand", {{"x", Rational(1)}}, Relation::Ge, Rational(3, 2), "test"});
  Verdict v = solve(sys);
  REQUIRE(v.status == Status::Infeasible);
  std::set<std::string> got(v.certificate.begin(), v.certificate.end());
  CHECK(got == std::set<std::string>{"ub:x", "demand"});
}

TEST_CASE("canonical PBR system shape") {
  ConstraintSystem sys = build_pbr_system(PbrSystemConfig{});
  CHECK(sys.variables().size() == 4 * 9);
  CHECK(sys.info.at("lambda_star") == "shared_1|shared_2");

  // The forced atom carries both its normalization row and all four zeros.
  CHECK_NOTHROW(sys.constraint("norm:shared_1|shared_2"));
  for (int k = 1; k <= 4; ++k) {
    CHECK_NOTHROW(sys.constraint("zero:chi" + std::to_string(k) + ":shared_1|shared_2"));
  }

  // 16 zero rows: one per (outcome, support atom) pair.
  int zeros = 0;
  int norms = 0;
  for (const Constraint& c : sys.constraints()) {
    if (c.tag == "born-zero") ++zeros;
    if (c.tag == "response-normalization") ++norms;
  }
  CHECK(zeros == 16);
  CHECK(norms == 9);
}

TEST_CASE("spec-shaped overload renames the common atom") {
  ConstraintSystem sys = build_pbr_system("lambda_star", true);
  CHECK(sys.info.at("lambda_star") == "lambda_star");
  CHECK_NOTHROW(sys.constraint("norm:lambda_star"));
  CHECK(solve(sys).status == Status::Infeasible);
}

TEST_CASE("dropping preparation independence frees the supports") {
  PbrSystemConfig config;
  config.preparation_independence = false;
  ConstraintSystem sys = build_pbr_system(config);
  CHECK(sys.variables().size() == 4 * 4);
  CHECK(sys.info.count("lambda_star") == 0);

  // Supports are pairwise disjoint, so no atom carries more than one zero.
  std::map<std::string, int> zeros_per_atom;
  for (const Constraint& c : sys.constraints()) {
    if (c.tag == "born-zero") {
      zeros_per_atom[c.terms.front().var.substr(c.terms.front().var.find_last_of(':'))]++;
    }
  }
  for (const auto& [atom, count] : zeros_per_atom) CHECK(count == 1);
  CHECK(solve(sys).status == Status::Feasible);
}

TEST_CASE("pbr_no_go certificate") {
  NoGoReport report = pbr_no_go();
  REQUIRE(report.verdict.status == Status::Infeasible);
  REQUIRE(report.verdict.certificate.size() == 5);
  CHECK(report.verdict.certificate[0] == "norm:shared_1|shared_2");

  // Irreducibility: the certificate re-solves infeasible, every proper subset
  // is feasible.
  ConstraintSystem cert = subsystem(report.system, report.verdict.certificate);
  CHECK(solve(cert).status == Status::Infeasible);
  for (std::size_t skip = 0; skip < report.verdict.certificate.size(); ++skip) {
    std::vector<std::string> subset;
    for (std::size_t i = 0; i < report.verdict.certificate.size(); ++i) {
      if (i != skip) subset.push_back(report.verdict.certificate[i]);
    }
    CHECK(solve(subsystem(report.system, subset)).status == Status::Feasible);
  }
}

TEST_CASE("escape hatches produce verified witnesses") {
  for (bool drop_pi : {true, false}) {
    NoGoReport report = drop_pi ? pbr_no_go(false, true) : pbr_no_go(true, false);
    REQUIRE(report.verdict.status == Status::Feasible);
    CHECK(report.witness_zeros_exact);
    CHECK(report.witness_born_deviation < 1e-10);
    CHECK(satisfies(report.system, report.verdict.witness));
    REQUIRE(report.witness_model.has_value());
    CHECK(ontmodel::reproduces_born(*report.witness_model, 1e-10).ok);
  }
}

TEST_CASE("verdict invariant under relabeling, outcome permutation, and row order") {
  ConstraintSystem base = build_pbr_system(PbrSystemConfig{});
  Verdict base_verdict = solve(base);
  REQUIRE(base_verdict.status == Status::Infeasible);

  std::mt19937_64 rng(3);
  for (int round = 0; round < 5; ++round) {
    // Random outcome permutation and random fresh atom names, applied by
    // string substitution, then a shuffled row order.
    std::vector<int> perm = {1, 2, 3, 4};
    std::shuffle(perm.begin(), perm.end(), rng);
    std::string salt = "r" + std::to_string(round);
    auto rename = [&](std::string s) {
      auto replace_all = [&s](const std::string& from, const std::string& to) {
        std::size_t pos = 0;
        while ((pos = s.find(from, pos)) != std::string::npos) {
          s.replace(pos, from.size(), to);
          pos += to.size();
        }
      };
      for (int k = 1; k <= 4; ++k) {
        replace_all("chi" + std::to_string(k), "tmp" + std::to_string(perm[k - 1]));
      }
      for (int k = 1; k <= 4; ++k) {
        replace_all("tmp" + std::to_string(k), "chi" + std::to_string(k));
      }
      replace_all("shared", "mix_" + salt);
      replace_all("up_only", "uo_" + salt);
      replace_all("plus_only", "po_" + salt);
      return s;
    };

    ConstraintSystem permuted;
    for (const std::string& v : base.variables()) permuted.add_variable(rename(v));
    std::vector<Constraint> rows = base.constraints();
    std::shuffle(rows.begin(), rows.end(), rng);
    for (Constraint c : rows) {
      c.id = rename(c.id);
      for (LinearTerm& t : c.terms) t.var = rename(t.var);
      permuted.add_constraint(std::move(c));
    }

    Verdict permuted_verdict = solve(permuted);
    REQUIRE(permuted_verdict.status == Status::Infeasible);
    CHECK(permuted_verdict.certificate.size() == base_verdict.certificate.size());

    // Same five rows, modulo the renaming.
    std::set<std::string> expected;
    for (const std::string& id : base_verdict.certificate) expected.insert(rename(id));
    std::set<std::string> got(permuted_verdict.certificate.begin(),
                              permuted_verdict.certificate.end());
    CHECK(got == expected);
  }
}

TEST_CASE("adding constraints never repairs infeasibility") {
  std::mt19937_64 rng(41);
  int infeasible_seen = 0;
  for (int trial = 0; trial < 60; ++trial) {
    ConstraintSystem sys = random_system(rng, 3, 4);
    Verdict before = solve(sys);
    ConstraintSystem extended = sys;
    std::uniform_int_distribution<int> coeff(-2, 2);
    Constraint extra{"extra",
                     {{"v0", Rational(coeff(rng))}, {"v1", Rational(coeff(rng))}},
                     Relation::Le,
                     Rational(coeff(rng), 2),
                     "random"};
    extended.add_constraint(std::move(extra));
    Verdict after = solve(extended);
    if (before.status == Status::Infeasible) {
      ++infeasible_seen;
      CHECK(after.status == Status::Infeasible);
    }
  }
  CHECK(infeasible_seen > 0);  // the generator actually produced both kinds
}

TEST_CASE("simplex agrees with the elimination oracle on small systems") {
  std::mt19937_64 rng(59);
  int feasible_seen = 0;
  int infeasible_seen = 0;
  for (int trial = 0; trial < 120; ++trial) {
    ConstraintSystem sys = random_system(rng, 1 + trial % 3, 1 + trial % 5);
    bool simplex_feasible = solve(sys).status == Status::Feasible;
    bool oracle_feasible = testing::fm::feasible(sys);
    CHECK(simplex_feasible == oracle_feasible);
    (simplex_feasible ? feasible_seen : infeasible_seen)++;
  }
  CHECK(feasible_seen > 10);
  CHECK(infeasible_seen > 10);
}

TEST_CASE("feasible witnesses satisfy every constraint exactly") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 40; ++trial) {
    ConstraintSystem sys = random_system(rng, 2 + trial % 3, 3);
    Verdict v = solve(sys);
    if (v.status == Status::Feasible) {
      CHECK(satisfies(sys, v.witness));
      for (const auto& [var, value] : v.witness) {
        CHECK_FALSE(value.is_negative());
      }
    }
  }
}

TEST_CASE("system JSON round trip is canonical") {
  ConstraintSystem sys = build_pbr_system(PbrSystemConfig{});
  std::string once = json_io::dump(json_io::system_to_json(sys));
  ConstraintSystem reparsed = json_io::system_from_json(json_io::parse(once));
  std::string twice = json_io::dump(json_io::system_to_json(reparsed));
  CHECK(once == twice);
  CHECK(solve(reparsed).status == Status::Infeasible);
}

TEST_CASE("certificates survive serialization") {
  NoGoReport report = pbr_no_go();
  std::string text = json_io::dump(json_io::verdict_to_json(report.verdict));
  CHECK(text.find("norm:shared_1|shared_2") != std::string::npos);
  CHECK(text.find("INFEASIBLE") != std::string::npos);
}
