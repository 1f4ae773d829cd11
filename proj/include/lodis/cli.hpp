#ifndef LODIS_CLI_HPP
#define LODIS_CLI_HPP

#include <optional>
#include <string>
#include <vector>

#include "lodis/report.hpp"

namespace lodis::cli {

inline constexpr int kExitDistinguishable = 0;
inline constexpr int kExitRefuted = 1;
inline constexpr int kExitInconclusive = 2;
inline constexpr int kExitError = 3;

struct AnalyzeOptions {
  std::string input_path;
  std::vector<Side> sides = {Side::A, Side::B};
  double tol = kDefaultTol;
  std::uint64_t seed = 0;
  std::uint64_t trials = 10000;
  bool simulate = true;
};

/// Full pipeline: load, pad, decompose, build both subspaces, decide, and
/// (for distinguishable sides) construct and simulate the protocol.
/// Throws lodis errors for invalid inputs; the caller maps those to exit
/// code 3.
AnalysisReport run_analyze(const AnalyzeOptions& opts);

/// distinguishable on any requested side -> 0; refuted on all -> 1;
/// anything else (inconclusive or undecided non-projective cases) -> 2.
int exit_code_for(const AnalysisReport& report);

struct SimulateOptions {
  std::string input_path;
  std::string report_path;
  std::optional<Side> side;   // default: first side with a protocol
  std::uint64_t trials = 10000;
  std::uint64_t seed = 0;
};

struct SimulateResult {
  Json output;
  int exit_code = kExitError;
};

/// Replay a stored protocol against the state set and report the tallies.
/// The stored branches are used exactly as serialized.
SimulateResult run_simulate(const SimulateOptions& opts);

/// "00,01,10,33" or "n:m" tokens -> index pairs.
std::vector<std::pair<int, int>> parse_indices(const std::string& csv);

Json run_gen_fixture(int d, const std::string& indices_csv);

}  // namespace lodis::cli

#endif
