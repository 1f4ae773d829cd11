#ifndef LODIS_TSPACE_HPP
#define LODIS_TSPACE_HPP

#include <utility>
#include <vector>

#include "lodis/hermspace.hpp"
#include "lodis/states.hpp"
#include "lodis/types.hpp"

namespace lodis {

/// Which party initiates the protocol.
enum class Side { A, B };

inline const char* side_name(Side s) { return s == Side::A ? "A" : "B"; }

struct PairIndex {
  int i, i2;   // state indices, i < i2
  int j, j2;   // eigenvector indices within each state
};

/// Cross-pair operators between all eigenvector pairs of distinct states:
/// side A uses W_ij^dag W_i2j2, side B uses W_ij W_i2j2^dag. Each operator
/// is traceless and splits into hermitian and antihermitian parts
/// W = H + i*A.
struct PairOperators {
  Side side = Side::A;
  int d = 0;
  std::vector<PairIndex> indices;
  std::vector<Matrix> W;
  std::vector<Matrix> H;
  std::vector<Matrix> A;

  int count() const { return static_cast<int>(indices.size()); }
};

PairOperators build_pair_operators(const SpectralStateSet& spec, Side side);

struct TSpaces {
  Side side = Side::A;
  SubspaceBasis T;       // span of all H and A parts
  SubspaceBasis Tperp;   // orthogonal complement; always contains the identity

  std::pair<int, int> dims() const { return {T.count(), Tperp.count()}; }
};

/// Build T = span{H, A} and its complement. Verifies that the identity
/// projects fully into Tperp and aborts on failure.
TSpaces build_tspaces(const PairOperators& ops, double tol = kDefaultTol);

}  // namespace lodis

#endif
