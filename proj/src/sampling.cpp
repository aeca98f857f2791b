#include "qflab/sampling.hpp"

#include <random>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qflab::sampling {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t trial_seed(std::uint64_t base, std::uint64_t index) {
  return splitmix64(base ^ splitmix64(index + 1));
}

std::size_t sample_index(const std::vector<double>& probabilities, std::uint64_t seed) {
  if (probabilities.empty()) throw std::invalid_argument("no outcomes to sample");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  double u = uniform(rng);
  double acc = 0.0;
  for (std::size_t k = 0; k < probabilities.size(); ++k) {
    acc += probabilities[k];
    if (u < acc) return k;
  }
  return probabilities.size() - 1;  // guards against rounding in the tail
}

std::vector<double> outcome_probabilities(const hilbert::StateVector& state,
                                          const hilbert::Observable& observable) {
  std::vector<double> p;
  p.reserve(observable.outcome_count());
  for (const hilbert::StateVector& e : observable.eigenvectors()) {
    p.push_back(std::norm(hilbert::inner_product(e, state)));
  }
  return p;
}

TrialCounts run_trials_serial(std::uint64_t trials, std::size_t outcome_count,
                              std::uint64_t base_seed, const OutcomeFn& outcome) {
  TrialCounts result;
  result.trials = trials;
  result.counts.assign(outcome_count, 0);
  for (std::uint64_t i = 0; i < trials; ++i) {
    result.counts.at(outcome(trial_seed(base_seed, i)))++;
  }
  return result;
}

TrialCounts run_trials_parallel(std::uint64_t trials, std::size_t outcome_count,
                                std::uint64_t base_seed, const OutcomeFn& outcome) {
#ifdef _OPENMP
  TrialCounts result;
  result.trials = trials;
  result.counts.assign(outcome_count, 0);

  #pragma omp parallel
  {
    std::vector<std::uint64_t> local(outcome_count, 0);
    #pragma omp for schedule(static)
    for (long long i = 0; i < static_cast<long long>(trials); ++i) {
      local.at(outcome(trial_seed(base_seed, static_cast<std::uint64_t>(i))))++;
    }
    #pragma omp critical
    {
      for (std::size_t k = 0; k < outcome_count; ++k) result.counts[k] += local[k];
    }
  }
  return result;
#else
  return run_trials_serial(trials, outcome_count, base_seed, outcome);
#endif
}

}  // namespace qflab::sampling
