#pragma once
// Seeded outcome sampling and the trial-count kernels. Each trial derives its
// own seed from (base, index), so counts are independent of execution order
// and the OpenMP kernel reproduces the serial reference exactly.

#include <cstdint>
#include <functional>
#include <vector>

#include "qflab/hilbert.hpp"

namespace qflab::sampling {

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t trial_seed(std::uint64_t base, std::uint64_t index);

// Index drawn from the distribution with a fresh mt19937_64(seed).
std::size_t sample_index(const std::vector<double>& probabilities, std::uint64_t seed);

// |<e_k|psi>|^2 over the observable's eigenvectors.
std::vector<double> outcome_probabilities(const hilbert::StateVector& state,
                                          const hilbert::Observable& observable);

struct TrialCounts {
  std::uint64_t trials = 0;
  std::vector<std::uint64_t> counts;

  double frequency(std::size_t outcome) const {
    return trials == 0 ? 0.0 : static_cast<double>(counts.at(outcome)) /
                                   static_cast<double>(trials);
  }
};

using OutcomeFn = std::function<std::size_t(std::uint64_t trial_seed)>;

// Serial reference implementation.
TrialCounts run_trials_serial(std::uint64_t trials, std::size_t outcome_count,
                              std::uint64_t base_seed, const OutcomeFn& outcome);

// OpenMP kernel; falls back to the serial loop when OpenMP is unavailable.
// Produces counts identical to run_trials_serial.
TrialCounts run_trials_parallel(std::uint64_t trials, std::size_t outcome_count,
                                std::uint64_t base_seed, const OutcomeFn& outcome);

}  // namespace qflab::sampling
