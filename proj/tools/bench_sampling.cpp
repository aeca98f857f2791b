// Benchmark: serial reference vs OpenMP trial kernels on two workloads, a
// light one (Born sampling of the four-outcome measurement) and a heavy one
// (a full ledger interaction per trial). Verifies that both kernels produce
// identical counts before timing them.
//
// Usage: bench_sampling [light_trials] [heavy_trials] [seed]

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "qflab/rqm.hpp"
#include "qflab/sampling.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

bool same_counts(const qflab::sampling::TrialCounts& a, const qflab::sampling::TrialCounts& b) {
  return a.trials == b.trials && a.counts == b.counts;
}

int run_workload(const char* name, std::uint64_t trials, std::size_t outcomes,
                 std::uint64_t seed, const qflab::sampling::OutcomeFn& fn) {
  auto t0 = Clock::now();
  qflab::sampling::TrialCounts serial =
      qflab::sampling::run_trials_serial(trials, outcomes, seed, fn);
  double serial_s = seconds_since(t0);

  t0 = Clock::now();
  qflab::sampling::TrialCounts parallel =
      qflab::sampling::run_trials_parallel(trials, outcomes, seed, fn);
  double parallel_s = seconds_since(t0);

  if (!same_counts(serial, parallel)) {
    std::printf("%s: COUNT MISMATCH between serial and parallel kernels\n", name);
    return 1;
  }

  std::printf("%s: %llu trials, counts [", name, (unsigned long long)trials);
  for (std::size_t k = 0; k < serial.counts.size(); ++k) {
    std::printf("%s%llu", k ? ", " : "", (unsigned long long)serial.counts[k]);
  }
  std::printf("]\n  serial   %8.3f s  (%.2e trials/s)\n", serial_s,
              trials / (serial_s > 0 ? serial_s : 1e-9));
  std::printf("  parallel %8.3f s  (%.2e trials/s)  speedup %.2fx\n", parallel_s,
              trials / (parallel_s > 0 ? parallel_s : 1e-9),
              parallel_s > 0 ? serial_s / parallel_s : 0.0);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  std::uint64_t light_trials = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 2000000;
  std::uint64_t heavy_trials = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 20000;
  std::uint64_t seed = argc > 3 ? std::strtoull(argv[3], nullptr, 10) : 424242;

#ifdef _OPENMP
  std::printf("OpenMP enabled, max threads %d\n", omp_get_max_threads());
#else
  std::printf("OpenMP not available; parallel kernel falls back to the serial loop\n");
#endif

  // Light: sample the antidistinguishing measurement on up (x) plus.
  qflab::hilbert::StateVector omega =
      qflab::hilbert::tensor(qflab::hilbert::qubit_up(), qflab::hilbert::qubit_plus());
  qflab::hilbert::Observable chi = qflab::rqm::pbr_observable();
  std::vector<double> probs = qflab::sampling::outcome_probabilities(omega, chi);
  int rc = run_workload("born-sampling", light_trials, probs.size(), seed,
                        [&](std::uint64_t s) { return qflab::sampling::sample_index(probs, s); });
  if (rc != 0) return rc;

  // Heavy: a fresh two-observer ledger and one full interaction per trial.
  // up = (plus + minus)/sqrt(2), so the X outcomes are 50/50.
  qflab::hilbert::Observable o = qflab::rqm::x_observable();
  qflab::hilbert::StateVector initial = qflab::hilbert::qubit_up();
  rc = run_workload("ledger-interact", heavy_trials, 2, seed, [&](std::uint64_t s) {
    qflab::rqm::Ledger ledger;
    ledger.assign({"s1", "s2", qflab::rqm::Role::QuantumState, initial});
    qflab::rqm::InteractOptions opts;
    opts.seed = s;
    qflab::rqm::Ledger next = qflab::rqm::interact(ledger, "s2", "s1", o, opts);
    return next.events().back().outcome_index;
  });
  return rc;
}
