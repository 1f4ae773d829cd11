#include "lodis/hermspace.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "lodis/rng.hpp"

namespace lodis {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

RMatrix stack_vectorized(const std::vector<Matrix>& mats) {
  const int d = static_cast<int>(mats.front().rows());
  RMatrix s(static_cast<int>(mats.size()), d * d);
  for (std::size_t r = 0; r < mats.size(); ++r) s.row(static_cast<int>(r)) = herm_vectorize(mats[r]);
  return s;
}

}  // namespace

double hs_inner(const Matrix& x, const Matrix& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols())
    throw DimensionMismatch("hs_inner: dimension mismatch " + std::to_string(x.rows()) +
                            " vs " + std::to_string(y.rows()));
  // Tr(xy) = sum_{ab} x_ab y_ba
  return x.cwiseProduct(y.transpose()).sum().real();
}

double hs_norm(const Matrix& x) { return x.norm(); }

std::vector<Matrix> herm_onb(int d) {
  std::vector<Matrix> basis;
  basis.reserve(static_cast<std::size_t>(d) * d);
  for (int k = 0; k < d; ++k) {
    Matrix m = Matrix::Zero(d, d);
    m(k, k) = 1.0;
    basis.push_back(m);
  }
  for (int j = 0; j < d; ++j)
    for (int k = j + 1; k < d; ++k) {
      Matrix m = Matrix::Zero(d, d);
      m(j, k) = 1.0 / kSqrt2;
      m(k, j) = 1.0 / kSqrt2;
      basis.push_back(m);
    }
  for (int j = 0; j < d; ++j)
    for (int k = j + 1; k < d; ++k) {
      Matrix m = Matrix::Zero(d, d);
      m(j, k) = Complex(0.0, -1.0 / kSqrt2);
      m(k, j) = Complex(0.0, 1.0 / kSqrt2);
      basis.push_back(m);
    }
  return basis;
}

RVector herm_vectorize(const Matrix& x) {
  const int d = static_cast<int>(x.rows());
  RVector v(d * d);
  int p = 0;
  for (int k = 0; k < d; ++k) v(p++) = x(k, k).real();
  for (int j = 0; j < d; ++j)
    for (int k = j + 1; k < d; ++k) v(p++) = kSqrt2 * x(j, k).real();
  for (int j = 0; j < d; ++j)
    for (int k = j + 1; k < d; ++k) v(p++) = -kSqrt2 * x(j, k).imag();
  return v;
}

Matrix herm_unvectorize(const RVector& v, int d) {
  Matrix x = Matrix::Zero(d, d);
  int p = 0;
  for (int k = 0; k < d; ++k) x(k, k) = v(p++);
  for (int j = 0; j < d; ++j)
    for (int k = j + 1; k < d; ++k) {
      x(j, k) += v(p) / kSqrt2;
      x(k, j) += v(p) / kSqrt2;
      ++p;
    }
  for (int j = 0; j < d; ++j)
    for (int k = j + 1; k < d; ++k) {
      x(j, k) += Complex(0.0, -v(p) / kSqrt2);
      x(k, j) += Complex(0.0, v(p) / kSqrt2);
      ++p;
    }
  return x;
}

SubspaceBasis orthonormalize(const std::vector<Matrix>& generators, double tol,
                             int dim_ambient_hint) {
  SubspaceBasis out;
  out.tol = tol;
  if (generators.empty()) {
    out.dim_ambient = dim_ambient_hint > 0 ? dim_ambient_hint : 0;
    return out;
  }
  const int d = static_cast<int>(generators.front().rows());
  for (const Matrix& g : generators)
    if (g.rows() != d || g.cols() != d)
      throw DimensionMismatch("orthonormalize: generators of mixed dimension");
  out.dim_ambient = d;

  const RMatrix s = stack_vectorized(generators);
  Eigen::JacobiSVD<RMatrix> svd(s, Eigen::ComputeThinV);
  const RVector sigma = svd.singularValues();
  const double smax = sigma.size() > 0 ? sigma(0) : 0.0;
  if (smax <= 0.0) return out;
  int rank = 0;
  while (rank < sigma.size() && sigma(rank) > tol * smax) ++rank;
  out.elements.reserve(rank);
  for (int c = 0; c < rank; ++c)
    out.elements.push_back(herm_unvectorize(svd.matrixV().col(c), d));
  return out;
}

SubspaceBasis complement(const SubspaceBasis& sub) {
  const int d = sub.dim_ambient;
  if (d <= 0) throw DimensionMismatch("complement: ambient dimension unset");
  SubspaceBasis out;
  out.dim_ambient = d;
  out.tol = sub.tol;
  if (sub.elements.empty()) {
    out.elements = herm_onb(d);
    return out;
  }
  const RMatrix s = stack_vectorized(sub.elements);
  Eigen::JacobiSVD<RMatrix> svd(s, Eigen::ComputeFullV);
  const int r = sub.count();
  out.elements.reserve(d * d - r);
  for (int c = r; c < d * d; ++c)
    out.elements.push_back(herm_unvectorize(svd.matrixV().col(c), d));
  return out;
}

SubspaceBasis commutator_space(const SubspaceBasis& basis) {
  const int n = basis.count();
  std::vector<Matrix> gens;
  double max_comm = 0.0;
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k) {
      const Matrix c = basis.elements[j] * basis.elements[k] -
                       basis.elements[k] * basis.elements[j];
      max_comm = std::max(max_comm, c.norm());
      gens.push_back(Complex(0.0, 1.0) * c);
    }
  if (max_comm <= basis.tol) {
    SubspaceBasis out;
    out.dim_ambient = basis.dim_ambient;
    out.tol = basis.tol;
    return out;
  }
  return orthonormalize(gens, basis.tol, basis.dim_ambient);
}

bool is_abelian(const SubspaceBasis& basis, double tol) {
  const int n = basis.count();
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k) {
      const Matrix c = basis.elements[j] * basis.elements[k] -
                       basis.elements[k] * basis.elements[j];
      if (c.norm() > tol) return false;
    }
  return true;
}

double span_residual(const Matrix& x, const SubspaceBasis& basis) {
  Matrix r = x;
  for (const Matrix& b : basis.elements) r -= hs_inner(b, x) * b;
  return r.norm();
}

Matrix EigenFrame::as_unitary() const {
  Matrix u(dim, static_cast<int>(vectors.size()));
  for (std::size_t c = 0; c < vectors.size(); ++c) u.col(static_cast<int>(c)) = vectors[c];
  return u;
}

EigenFrame frame_from_unitary(const Matrix& u) {
  EigenFrame f;
  f.dim = static_cast<int>(u.rows());
  f.vectors.reserve(u.cols());
  for (int c = 0; c < u.cols(); ++c) f.vectors.push_back(u.col(c));
  return f;
}

EigenFrame simultaneous_diagonalize(const SubspaceBasis& basis, double tol, int retries,
                                    std::uint64_t seed) {
  const int d = basis.dim_ambient;
  if (d <= 0) throw DimensionMismatch("simultaneous_diagonalize: ambient dimension unset");
  if (basis.elements.empty()) return frame_from_unitary(Matrix::Identity(d, d));
  if (!is_abelian(basis, tol))
    throw NonCommutingInput("simultaneous_diagonalize: input family does not commute");

  Rng rng(derive_seed(seed, 0x5d1a6));
  for (int attempt = 0; attempt <= retries; ++attempt) {
    Matrix combo = Matrix::Zero(d, d);
    for (const Matrix& t : basis.elements) combo += rng.normal() * t;
    Eigen::SelfAdjointEigenSolver<Matrix> es(combo);
    if (es.info() != Eigen::Success) continue;
    const Matrix u = es.eigenvectors();
    bool ok = true;
    for (const Matrix& t : basis.elements) {
      const Matrix m = u.adjoint() * t * u;
      const double off2 = m.squaredNorm() - m.diagonal().squaredNorm();
      if (off2 > tol * tol) {
        ok = false;
        break;
      }
    }
    if (ok) return frame_from_unitary(u);
  }
  throw DegenerateFailure("simultaneous_diagonalize: no separating combination found after " +
                          std::to_string(retries + 1) + " attempts");
}

}  // namespace lodis
