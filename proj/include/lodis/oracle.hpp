#ifndef LODIS_ORACLE_HPP
#define LODIS_ORACLE_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "lodis/hermspace.hpp"
#include "lodis/states.hpp"
#include "lodis/tspace.hpp"
#include "lodis/types.hpp"

namespace lodis {

/// Cross-validation searcher, never on the decision path: seeded random
/// restarts of a Riemannian descent over unitary frames minimizing the
/// summed squared pair-operator expectations. Returns a frame whose worst
/// expectation drops below tol; a nullopt is evidence of absence, not
/// proof. The parallel entry point distributes restarts over OpenMP
/// threads and returns the success with the lowest restart index, so
/// results match the serial reference exactly.
std::optional<EigenFrame> random_feasible_frame_search(const PairOperators& ops,
                                                       int attempts, std::uint64_t seed,
                                                       double tol = kDefaultTol);
std::optional<EigenFrame> random_feasible_frame_search_serial(const PairOperators& ops,
                                                              int attempts,
                                                              std::uint64_t seed,
                                                              double tol = kDefaultTol);

struct GenericityReport {
  int d = 0;
  int n = 0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  std::map<int, std::uint64_t> dim_histogram;   // dim Tperp -> count
  std::vector<double> det_diagnostics;          // det(M M^T), optional
};

/// Distribution of dim Tperp over Haar-random orthonormal pure-state
/// families: generically d(d-1) pair parts are independent, so the
/// histogram concentrates at dim Tperp = d when n = d.
GenericityReport genericity_sample(int d, int n, std::uint64_t samples, std::uint64_t seed,
                                   bool with_det = false);
GenericityReport genericity_sample_serial(int d, int n, std::uint64_t samples,
                                          std::uint64_t seed, bool with_det = false);

/// Product family |s_i>_A |0>_B: a closed-form anchor whose Tperp is
/// exactly the diagonal matrices in the standard basis.
StateSet product_state_fixture(int d);

/// det(M M^T) for the stacked vectorized pair parts; nonzero exactly when
/// they are linearly independent.
double pair_part_det(const PairOperators& ops);

}  // namespace lodis

#endif
