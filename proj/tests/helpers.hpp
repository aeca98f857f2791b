#pragma once
// Shared test utilities: seeded random states and projective measurements,
// and a Fourier-Motzkin eliminator used as an independent feasibility oracle
// against the simplex path. Test-only code.

#include <random>
#include <string>
#include <vector>

#include "qflab/feasibility.hpp"
#include "qflab/hilbert.hpp"

namespace qflab::testing {

inline hilbert::StateVector random_state(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Complex> amp(dim);
  for (Complex& a : amp) a = Complex(gauss(rng), gauss(rng));
  return hilbert::StateVector(amp).normalized();
}

// Random orthonormal basis by Gram-Schmidt on Gaussian vectors.
inline std::vector<hilbert::StateVector> random_basis(std::mt19937_64& rng, std::size_t dim) {
  std::vector<hilbert::StateVector> basis;
  while (basis.size() < dim) {
    hilbert::StateVector v = random_state(rng, dim);
    std::vector<Complex> amp(v.amplitudes());
    for (const hilbert::StateVector& b : basis) {
      Complex overlap = hilbert::inner_product(b, hilbert::StateVector(amp));
      for (std::size_t i = 0; i < dim; ++i) amp[i] -= overlap * b[i];
    }
    hilbert::StateVector reduced{amp};
    if (reduced.norm() < 1e-6) continue;  // nearly dependent draw, retry
    basis.push_back(reduced.normalized());
  }
  return basis;
}

inline hilbert::Measurement random_projective_measurement(std::mt19937_64& rng,
                                                          std::size_t dim,
                                                          const std::string& prefix) {
  std::vector<hilbert::Effect> effects;
  std::vector<hilbert::StateVector> basis = random_basis(rng, dim);
  for (std::size_t k = 0; k < dim; ++k) {
    effects.emplace_back(hilbert::projector(basis[k]), prefix + std::to_string(k));
  }
  return hilbert::Measurement(std::move(effects));
}

// ---- Fourier-Motzkin feasibility oracle -----------------------------------------
//
// Decides feasibility of { constraints, all variables >= 0 } by eliminating
// variables one at a time. Exponential in the worst case; used only on small
// systems to cross-check the simplex verdict through an unrelated algorithm.

namespace fm {

struct Ineq {
  std::vector<Rational> coeffs;  // sum coeffs[i] * x_i <= rhs
  Rational rhs;
};

inline bool feasible(const feasibility::ConstraintSystem& system) {
  const auto& vars = system.variables();
  std::vector<Ineq> rows;

  auto dense = [&](const feasibility::Constraint& c) {
    std::vector<Rational> coeffs(vars.size(), Rational(0));
    for (const feasibility::LinearTerm& t : c.terms) {
      for (std::size_t i = 0; i < vars.size(); ++i) {
        if (vars[i] == t.var) coeffs[i] += t.coeff;
      }
    }
    return coeffs;
  };

  for (const feasibility::Constraint& c : system.constraints()) {
    std::vector<Rational> coeffs = dense(c);
    if (c.rel == feasibility::Relation::Le || c.rel == feasibility::Relation::Eq) {
      rows.push_back({coeffs, c.rhs});
    }
    if (c.rel == feasibility::Relation::Ge || c.rel == feasibility::Relation::Eq) {
      std::vector<Rational> neg(coeffs);
      for (Rational& v : neg) v = -v;
      rows.push_back({neg, -c.rhs});
    }
  }
  // Solver semantics: every variable is nonnegative.
  for (std::size_t i = 0; i < vars.size(); ++i) {
    Ineq nonneg{std::vector<Rational>(vars.size(), Rational(0)), Rational(0)};
    nonneg.coeffs[i] = Rational(-1);
    rows.push_back(std::move(nonneg));
  }

  for (std::size_t v = 0; v < vars.size(); ++v) {
    std::vector<Ineq> lower;  // rows bounding x_v from below
    std::vector<Ineq> upper;  // rows bounding x_v from above
    std::vector<Ineq> rest;
    for (const Ineq& row : rows) {
      if (row.coeffs[v].is_zero()) {
        rest.push_back(row);
      } else if (row.coeffs[v].is_negative()) {
        lower.push_back(row);
      } else {
        upper.push_back(row);
      }
    }
    for (const Ineq& lo : lower) {
      for (const Ineq& hi : upper) {
        // Scale so the x_v coefficients cancel.
        Rational a = -lo.coeffs[v];
        Rational b = hi.coeffs[v];
        Ineq combined{std::vector<Rational>(vars.size(), Rational(0)),
                      lo.rhs * b + hi.rhs * a};
        for (std::size_t i = 0; i < vars.size(); ++i) {
          combined.coeffs[i] = lo.coeffs[i] * b + hi.coeffs[i] * a;
        }
        rest.push_back(std::move(combined));
      }
    }
    rows = std::move(rest);
  }

  for (const Ineq& row : rows) {
    if (row.rhs.is_negative()) return false;  // 0 <= negative
  }
  return true;
}

}  // namespace fm
}  // namespace qflab::testing
