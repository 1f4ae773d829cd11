#ifndef LODIS_HERMSPACE_HPP
#define LODIS_HERMSPACE_HPP

#include <cstdint>
#include <vector>

#include "lodis/types.hpp"

namespace lodis {

/// Hilbert-Schmidt inner product Tr(xy); real for hermitian arguments.
double hs_inner(const Matrix& x, const Matrix& y);
double hs_norm(const Matrix& x);

/// Canonical orthonormal basis of the real space of d x d hermitian
/// matrices: the diagonal units E_kk, the symmetric pairs (E_jk+E_kj)/sqrt2
/// and the antisymmetric pairs i(E_jk-E_kj)/sqrt2.
std::vector<Matrix> herm_onb(int d);

/// Coordinates of a hermitian matrix against herm_onb(d). Isometric: the
/// Euclidean inner product of coordinate vectors equals hs_inner.
RVector herm_vectorize(const Matrix& x);
Matrix herm_unvectorize(const RVector& v, int d);

/// Orthonormal basis (under hs_inner) of a real subspace of the d x d
/// hermitian matrices.
struct SubspaceBasis {
  int dim_ambient = 0;   // d
  std::vector<Matrix> elements;
  double tol = kDefaultTol;

  int count() const { return static_cast<int>(elements.size()); }
};

/// ONB of span(generators). Rank = number of singular values of the
/// vectorized generator stack above tol * sigma_max. An empty generator
/// list yields a zero-dimensional basis (dim_ambient taken from the hint).
SubspaceBasis orthonormalize(const std::vector<Matrix>& generators,
                             double tol = kDefaultTol, int dim_ambient_hint = -1);

/// ONB of the orthogonal complement of `sub` inside the full hermitian
/// space; always has exactly d^2 - count(sub) elements.
SubspaceBasis complement(const SubspaceBasis& sub);

/// ONB of span{ i[T_j, T_k] : j < k }. A family whose commutators all stay
/// below tol is treated as exactly commuting (zero-dimensional result).
SubspaceBasis commutator_space(const SubspaceBasis& basis);

bool is_abelian(const SubspaceBasis& basis, double tol = kDefaultTol);

/// ||x - proj_span(basis)(x)||_HS for an orthonormal basis.
double span_residual(const Matrix& x, const SubspaceBasis& basis);

struct EigenFrame {
  int dim = 0;
  std::vector<Vector> vectors;   // orthonormal columns of a unitary

  Matrix as_unitary() const;
};

EigenFrame frame_from_unitary(const Matrix& u);

/// Common eigenbasis of a commuting hermitian family, found by
/// eigendecomposing a seeded random real combination and resampling when a
/// degenerate combination fails to separate the family.
EigenFrame simultaneous_diagonalize(const SubspaceBasis& basis,
                                    double tol = kDefaultTol,
                                    int retries = kDefaultRetries,
                                    std::uint64_t seed = 0);

}  // namespace lodis

#endif
