#ifndef LODIS_MAS_HPP
#define LODIS_MAS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lodis/hermspace.hpp"
#include "lodis/tspace.hpp"
#include "lodis/types.hpp"

namespace lodis {

enum class Verdict {
  DistinguishableProjective,
  NotDistinguishable,
  NoProjectiveProtocol,
  Inconclusive,
};

const char* verdict_tag(Verdict v);

struct MasEvidence {
  std::string branch;                 // which rule decided
  int d = 0;
  int dim_T = 0;
  int dim_Tperp = 0;
  int t = 0;                          // dim Tperp - d
  int dim_C = -1;                     // commutator-space dimension, -1 = not computed
  int refutation_threshold = -1;      // t*d + t*(t-3)/2 when applicable
  double t_bound = 0.0;               // largest t the refutation covers
  std::vector<int> omega_ranks;
  int support_intersection_dim = -1;
};

struct MasDecision {
  Side side = Side::A;
  int dim_Tperp = 0;
  Verdict verdict = Verdict::Inconclusive;
  std::string reason;
  MasEvidence evidence;
  std::optional<SubspaceBasis> mas;
  std::optional<EigenFrame> frame;
};

/// Antisymmetric pairing data for a (d+1)-dimensional Tperp: for each
/// commutator-space basis element G_j the real antisymmetric matrix
/// Gamma_j with (Gamma_j)_{kl} = i Tr(G_j [T_k, T_l]), plus an orthonormal
/// basis Omega of their span and the intersection of the Omega supports.
struct GammaAnalysis {
  int t = 0;
  SubspaceBasis C_basis;
  std::vector<RMatrix> Gamma;
  std::vector<RMatrix> Omega;
  std::vector<int> omega_ranks;
  RMatrix support_intersection;   // columns span the intersection
};

GammaAnalysis analyze_gamma(const SubspaceBasis& Tperp, double tol = kDefaultTol);

struct Thm2Analysis {
  bool applicable = false;   // t within the bound
  bool refuted = false;      // dim C exceeds the threshold: no MAS exists
  int t = 0;
  double t_bound = 0.0;
  int dim_C = -1;
  int threshold = -1;
};

/// Commutator-dimension refutation for dim Tperp = d + t. Counts the
/// commutator space and compares against t*d + t*(t-3)/2; only meaningful
/// for t up to sqrt(3d^2 - 3d + 1/4) - (d - 3/2).
Thm2Analysis theorem2_refute(const SubspaceBasis& Tperp, double tol = kDefaultTol);

struct Thm3Result {
  bool mas_found = false;
  std::string reason;
  GammaAnalysis gamma;
  std::optional<SubspaceBasis> mas;
  std::optional<EigenFrame> frame;
};

/// Decide MAS existence for dim Tperp = d + 1: every Omega_j must have
/// numerical rank 2 and their supports must share a single direction (any
/// support direction serves when there is only one Omega). On success the
/// basis rotation assembled from the support vectors produces the MAS.
Thm3Result theorem3_decide(const SubspaceBasis& Tperp, double tol = kDefaultTol,
                           std::uint64_t seed = 0);

/// Unitary conjugation zeroing the diagonals of two traceless hermitian
/// matrices simultaneously, built by induction on dimension: fix the last
/// diagonal entry with a phase adjustment and an SO(2) rotation, then
/// recurse on the leading block.
Matrix zero_diagonal_pair(const Matrix& H, const Matrix& A, double tol = kDefaultTol);

/// MAS orthogonal to a subspace T of dimension at most 2 (traceless
/// elements): conjugate the standard diagonal projectors by the
/// zero-diagonal unitary of T's generators.
std::pair<SubspaceBasis, EigenFrame> mas_from_small_T(const SubspaceBasis& T,
                                                      double tol = kDefaultTol);

/// Full decision tree over dim Tperp, in order: too small -> not
/// distinguishable; equal to d -> abelian test; at least d^2-2 -> always a
/// MAS; d+1 -> rank test; otherwise the commutator refutation or an
/// honest inconclusive.
MasDecision decide(const TSpaces& ts, double tol = kDefaultTol, std::uint64_t seed = 0);

}  // namespace lodis

#endif
