// Timing comparison between the OpenMP kernels and their serial reference
// implementations. Both paths derive per-item seeds from the global seed,
// so the outputs must match exactly; the harness checks that too.

#include <chrono>
#include <cstdio>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "lodis/mas.hpp"
#include "lodis/oracle.hpp"
#include "lodis/protocol.hpp"
#include "lodis/states.hpp"

using namespace lodis;

namespace {

double time_ms(const std::function<void()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
      .count();
}

void row(const char* name, double serial_ms, double parallel_ms, bool equal) {
  std::printf("%-34s %10.1f %10.1f %8.2fx   %s\n", name, serial_ms, parallel_ms,
              serial_ms / parallel_ms, equal ? "outputs equal" : "OUTPUTS DIFFER");
}

}  // namespace

int main(int argc, char** argv) {
  std::uint64_t trials = 2000000;
  std::uint64_t samples = 600;
  int restarts = 96;
  if (argc > 1) trials = std::stoull(argv[1]);
  if (argc > 2) samples = std::stoull(argv[2]);
  if (argc > 3) restarts = std::stoi(argv[3]);

#ifdef _OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (OpenMP disabled)\n");
#endif
  std::printf("%-34s %10s %10s %9s\n", "kernel", "serial/ms", "openmp/ms", "speedup");

  // protocol simulation on the four-state d=4 fixture
  const StateSet setA = gen_bell_set(4, {{0, 0}, {0, 1}, {1, 0}, {3, 3}});
  const auto spec = spectral_decompose(setA);
  const auto ts = build_tspaces(build_pair_operators(spec, Side::A));
  const auto dec = decide(ts);
  const auto proto = build_protocol(spec, *dec.frame, Side::A);
  SimStats st_s, st_p;
  const double sim_serial = time_ms([&] { st_s = simulate_serial(spec, proto, trials, 1); });
  const double sim_parallel = time_ms([&] { st_p = simulate(spec, proto, trials, 1); });
  row(("simulate, " + std::to_string(trials) + " trials").c_str(), sim_serial, sim_parallel,
      st_s.successes == st_p.successes &&
          st_s.per_outcome_counts == st_p.per_outcome_counts);

  // dimension statistics of random families
  GenericityReport g_s, g_p;
  const double gen_serial = time_ms([&] { g_s = genericity_sample_serial(3, 3, samples, 2); });
  const double gen_parallel = time_ms([&] { g_p = genericity_sample(3, 3, samples, 2); });
  row(("genericity d=3 n=3, " + std::to_string(samples) + " samples").c_str(), gen_serial,
      gen_parallel, g_s.dim_histogram == g_p.dim_histogram);

  // frame search on a refuted set: every restart runs to its plateau
  const auto ops3 = build_pair_operators(
      spectral_decompose(gen_bell_set(2, {{0, 0}, {0, 1}, {1, 0}})), Side::A);
  std::optional<EigenFrame> f_s, f_p;
  const double fs_serial =
      time_ms([&] { f_s = random_feasible_frame_search_serial(ops3, restarts, 3); });
  const double fs_parallel =
      time_ms([&] { f_p = random_feasible_frame_search(ops3, restarts, 3); });
  row(("frame search (refuted), " + std::to_string(restarts) + " restarts").c_str(),
      fs_serial, fs_parallel, f_s.has_value() == f_p.has_value());

  return 0;
}
