#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "qflab/rqm.hpp"
#include "qflab/sampling.hpp"

using namespace qflab;
using namespace qflab::sampling;

TEST_CASE("trial seeds are deterministic and spread out") {
  CHECK(trial_seed(1, 0) == trial_seed(1, 0));
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(trial_seed(7, i));
  CHECK(seen.size() == 1000);
  CHECK(trial_seed(7, 0) != trial_seed(8, 0));
}

TEST_CASE("sample_index respects degenerate distributions") {
  for (std::uint64_t s = 0; s < 50; ++s) {
    CHECK(sample_index({0.0, 1.0}, s) == 1);
    CHECK(sample_index({1.0, 0.0, 0.0}, s) == 0);
  }
  CHECK_THROWS_AS(sample_index({}, 1), std::invalid_argument);
}

TEST_CASE("outcome probabilities match squared overlaps") {
  hilbert::StateVector omega =
      hilbert::tensor(hilbert::qubit_up(), hilbert::qubit_plus());
  std::vector<double> p = outcome_probabilities(omega, rqm::pbr_observable());
  REQUIRE(p.size() == 4);
  CHECK(p[0] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(p[1] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(p[2] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(p[3] == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("parallel kernel reproduces the serial reference exactly") {
  std::vector<double> probs = {0.1, 0.2, 0.3, 0.4};
  OutcomeFn fn = [&](std::uint64_t seed) { return sample_index(probs, seed); };
  for (std::uint64_t base : {1ULL, 42ULL, 31337ULL}) {
    TrialCounts serial = run_trials_serial(20000, probs.size(), base, fn);
    TrialCounts parallel = run_trials_parallel(20000, probs.size(), base, fn);
    CHECK(serial.trials == parallel.trials);
    CHECK(serial.counts == parallel.counts);
  }
}

TEST_CASE("counts concentrate around the distribution") {
  std::vector<double> probs = {0.5, 0.5};
  OutcomeFn fn = [&](std::uint64_t seed) { return sample_index(probs, seed); };
  TrialCounts counts = run_trials_parallel(10000, 2, 977, fn);
  CHECK(counts.frequency(0) > 0.485);
  CHECK(counts.frequency(0) < 0.515);
  CHECK(counts.counts[0] + counts.counts[1] == 10000);
}

TEST_CASE("zero trials is a valid request") {
  OutcomeFn fn = [](std::uint64_t) { return 0u; };
  TrialCounts counts = run_trials_parallel(0, 3, 5, fn);
  CHECK(counts.trials == 0);
  CHECK(counts.counts == std::vector<std::uint64_t>({0, 0, 0}));
}
