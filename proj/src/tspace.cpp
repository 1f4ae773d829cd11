#include "lodis/tspace.hpp"

#include <cmath>

namespace lodis {

PairOperators build_pair_operators(const SpectralStateSet& spec, Side side) {
  PairOperators ops;
  ops.side = side;
  ops.d = spec.d;
  const Complex half_i(0.0, 0.5);
  for (int i = 0; i < spec.n(); ++i)
    for (int i2 = i + 1; i2 < spec.n(); ++i2)
      for (int j = 0; j < spec.states[i].rank; ++j)
        for (int j2 = 0; j2 < spec.states[i2].rank; ++j2) {
          const Matrix& wa = spec.states[i].W[j];
          const Matrix& wb = spec.states[i2].W[j2];
          Matrix w = (side == Side::A) ? Matrix(wa.adjoint() * wb) : Matrix(wa * wb.adjoint());
          ops.indices.push_back(PairIndex{i, i2, j, j2});
          ops.H.push_back(0.5 * (w + w.adjoint()));
          ops.A.push_back((w - w.adjoint()) * Complex(0.0, -0.5));
          ops.W.push_back(std::move(w));
        }
  return ops;
}

TSpaces build_tspaces(const PairOperators& ops, double tol) {
  TSpaces ts;
  ts.side = ops.side;
  std::vector<Matrix> gens;
  gens.reserve(2 * ops.count());
  for (const Matrix& h : ops.H) gens.push_back(h);
  for (const Matrix& a : ops.A) gens.push_back(a);
  ts.T = orthonormalize(gens, tol, ops.d);
  ts.Tperp = complement(ts.T);

  // The identity is always orthogonal to every cross-pair part, so its
  // normalized projection onto Tperp must be lossless. A miss means the
  // pipeline upstream produced inconsistent coefficient matrices.
  const Matrix eye = Matrix::Identity(ops.d, ops.d) / std::sqrt(static_cast<double>(ops.d));
  if (span_residual(eye, ts.Tperp) > tol)
    throw InternalConsistencyError("build_tspaces: identity missing from Tperp");
  return ts;
}

}  // namespace lodis
