#ifndef LODIS_PROTOCOL_HPP
#define LODIS_PROTOCOL_HPP

#include <cstdint>
#include <vector>

#include "lodis/hermspace.hpp"
#include "lodis/tspace.hpp"
#include "lodis/types.hpp"

namespace lodis {

/// Rank-one measurement of the initiating party. Vectors are the physical
/// measurement directions |k~>, the entrywise conjugates of the frame
/// vectors |k~*> living in the subspace picture.
struct AliceMeasurement {
  Side side = Side::A;
  std::vector<Vector> vectors;
  double completeness_residual = 0.0;

  int outcomes() const { return static_cast<int>(vectors.size()); }
};

AliceMeasurement alice_from_frame(const EigenFrame& frame, Side side = Side::A);

struct Feasibility {
  bool feasible = false;
  double max_violation = 0.0;
};

/// Checks < v | W_i | v > = 0 for every pair operator (v in the frame
/// picture, i.e. the starred side).
Feasibility vector_feasible(const Vector& v, const PairOperators& ops,
                            double tol = kDefaultTol);

/// Max modulus of <psi_ij| (P_k (x) 1) |psi_i2j2> over all outcomes and all
/// cross pairs, evaluated directly on the bipartite vectors. This is the
/// definitional check and is kept independent of vector_feasible's
/// pair-operator shortcut.
double verify_op(const SpectralStateSet& spec, const AliceMeasurement& alice);

struct BobBlock {
  int state_index = -1;
  std::vector<Vector> basis;   // orthonormal vectors spanning the residual
};

struct BobBranch {
  bool reachable = false;      // some state leaves a nonzero residual here
  std::vector<BobBlock> blocks;
};

struct Protocol {
  AliceMeasurement alice;
  std::vector<BobBranch> branches;   // one per measurement outcome
  double op_violation = 0.0;
};

/// Conditional measurements for the finishing party: per outcome the
/// residual vectors of each state, orthonormalized per state and checked
/// mutually orthogonal across states.
Protocol bob_measurements(const SpectralStateSet& spec, const AliceMeasurement& alice,
                          double tol = kDefaultTol);

/// frame -> conjugated measurement -> orthogonality check -> conditional
/// measurements. If the check only passes without the conjugation the
/// bookkeeping upstream is wrong and a ConventionError is raised.
Protocol build_protocol(const SpectralStateSet& spec, const EigenFrame& frame, Side side,
                        double tol = kDefaultTol);

struct SimStats {
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> per_state_trials;
  std::vector<std::uint64_t> per_state_successes;
  std::vector<std::uint64_t> per_outcome_counts;

  double success_rate() const {
    return trials == 0 ? 1.0 : static_cast<double>(successes) / static_cast<double>(trials);
  }
  bool perfect() const { return successes == trials; }
};

/// Monte-Carlo run of the full protocol. Each trial draws its own RNG from
/// (seed, trial index), so tallies are identical however the loop is
/// sharded. The parallel entry point shards trials across OpenMP threads;
/// the serial one is the reference implementation used in tests.
SimStats simulate(const SpectralStateSet& spec, const Protocol& proto, std::uint64_t trials,
                  std::uint64_t seed);
SimStats simulate_serial(const SpectralStateSet& spec, const Protocol& proto,
                         std::uint64_t trials, std::uint64_t seed);

}  // namespace lodis

#endif
