#include "lodis/oracle.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "lodis/rng.hpp"

namespace lodis {

namespace {

double frame_cost(const Matrix& u, const PairOperators& ops, double* max_violation) {
  double cost = 0.0;
  double worst = 0.0;
  for (int c = 0; c < u.cols(); ++c) {
    const Vector v = u.col(c);
    for (const Matrix& w : ops.W) {
      const Complex val = v.dot(w * v);
      cost += std::norm(val);
      worst = std::max(worst, std::abs(val));
    }
  }
  if (max_violation) *max_violation = worst;
  return cost;
}

Matrix frame_gradient(const Matrix& u, const PairOperators& ops) {
  Matrix grad = Matrix::Zero(u.rows(), u.cols());
  for (int c = 0; c < u.cols(); ++c) {
    const Vector v = u.col(c);
    Vector g = Vector::Zero(u.rows());
    for (const Matrix& w : ops.W) {
      const Vector wv = w * v;
      const Complex val = v.dot(wv);
      g += std::conj(val) * wv + val * (w.adjoint() * v);
    }
    grad.col(c) = g;
  }
  return grad;
}

Matrix retract_unitary(const Matrix& m) {
  Eigen::HouseholderQR<Matrix> qr(m);
  Matrix q = qr.householderQ() * Matrix::Identity(m.rows(), m.cols());
  const Matrix r = qr.matrixQR();
  for (int c = 0; c < m.cols(); ++c) {
    const Complex rc = r(c, c);
    const double a = std::abs(rc);
    if (a > 0) q.col(c) *= rc / a;
  }
  return q;
}

std::optional<EigenFrame> search_attempt(const PairOperators& ops, std::uint64_t seed,
                                         std::uint64_t attempt, double tol) {
  const int d = ops.d;
  Rng rng(derive_seed(seed, attempt));
  Matrix u = haar_unitary(d, rng);
  double viol = 0.0;
  double cost = frame_cost(u, ops, &viol);
  if (viol <= tol) return frame_from_unitary(u);

  double step = 0.05;
  for (int it = 0; it < 4000 && step > 1e-16; ++it) {
    const Matrix grad = frame_gradient(u, ops);
    const Matrix cand = retract_unitary(u - step * grad);
    double cand_viol = 0.0;
    const double cand_cost = frame_cost(cand, ops, &cand_viol);
    if (cand_cost < cost) {
      u = cand;
      cost = cand_cost;
      viol = cand_viol;
      step *= 1.25;
      if (viol <= tol) return frame_from_unitary(u);
    } else {
      step *= 0.5;
    }
  }
  return std::nullopt;
}

void sample_once(int d, int n, std::uint64_t seed, std::uint64_t idx, bool with_det,
                 int* dim_out, double* det_out) {
  Rng rng(derive_seed(seed, idx));
  const Matrix cols = haar_columns(d * d, n, rng);
  SpectralStateSet spec;
  spec.d = d;
  for (int i = 0; i < n; ++i) {
    SpectralState st;
    st.rank = 1;
    st.eigenvalues = RVector::Constant(1, 1.0);
    Vector psi = cols.col(i);
    st.W.push_back(Eigen::Map<const Matrix>(psi.data(), d, d));
    spec.states.push_back(std::move(st));
  }
  const PairOperators ops = build_pair_operators(spec, Side::A);
  const TSpaces ts = build_tspaces(ops);
  *dim_out = ts.Tperp.count();
  if (with_det) *det_out = pair_part_det(ops);
}

}  // namespace

std::optional<EigenFrame> random_feasible_frame_search_serial(const PairOperators& ops,
                                                              int attempts,
                                                              std::uint64_t seed, double tol) {
  if (ops.count() == 0)
    return frame_from_unitary(Matrix::Identity(ops.d, ops.d));
  for (int a = 0; a < attempts; ++a)
    if (auto f = search_attempt(ops, seed, static_cast<std::uint64_t>(a), tol)) return f;
  return std::nullopt;
}

std::optional<EigenFrame> random_feasible_frame_search(const PairOperators& ops, int attempts,
                                                       std::uint64_t seed, double tol) {
  if (ops.count() == 0)
    return frame_from_unitary(Matrix::Identity(ops.d, ops.d));
  int best_attempt = attempts;
  std::optional<EigenFrame> best;
#pragma omp parallel for schedule(dynamic)
  for (int a = 0; a < attempts; ++a) {
    bool skip;
#pragma omp critical
    skip = a > best_attempt;
    if (skip) continue;
    auto f = search_attempt(ops, seed, static_cast<std::uint64_t>(a), tol);
    if (f) {
#pragma omp critical
      {
        if (a < best_attempt) {
          best_attempt = a;
          best = std::move(f);
        }
      }
    }
  }
  return best;
}

GenericityReport genericity_sample_serial(int d, int n, std::uint64_t samples,
                                          std::uint64_t seed, bool with_det) {
  if (d < 1 || n < 1 || n > d * d)
    throw DimensionMismatch("genericity_sample: require 1 <= n <= d^2");
  GenericityReport rep;
  rep.d = d;
  rep.n = n;
  rep.samples = samples;
  rep.seed = seed;
  if (with_det) rep.det_diagnostics.resize(samples, 0.0);
  for (std::uint64_t s = 0; s < samples; ++s) {
    int dim = 0;
    double det = 0.0;
    sample_once(d, n, seed, s, with_det, &dim, &det);
    rep.dim_histogram[dim] += 1;
    if (with_det) rep.det_diagnostics[s] = det;
  }
  return rep;
}

GenericityReport genericity_sample(int d, int n, std::uint64_t samples, std::uint64_t seed,
                                   bool with_det) {
  if (d < 1 || n < 1 || n > d * d)
    throw DimensionMismatch("genericity_sample: require 1 <= n <= d^2");
  GenericityReport rep;
  rep.d = d;
  rep.n = n;
  rep.samples = samples;
  rep.seed = seed;
  if (with_det) rep.det_diagnostics.resize(samples, 0.0);
#pragma omp parallel
  {
    std::map<int, std::uint64_t> local;
#pragma omp for schedule(static)
    for (long long s = 0; s < static_cast<long long>(samples); ++s) {
      int dim = 0;
      double det = 0.0;
      sample_once(d, n, seed, static_cast<std::uint64_t>(s), with_det, &dim, &det);
      local[dim] += 1;
      if (with_det) rep.det_diagnostics[s] = det;
    }
#pragma omp critical
    for (const auto& [k, v] : local) rep.dim_histogram[k] += v;
  }
  return rep;
}

StateSet product_state_fixture(int d) {
  StateSet set;
  set.d_A = d;
  set.d_B = d;
  for (int i = 0; i < d; ++i) {
    Vector v = Vector::Zero(d * d);
    v(i * d) = 1.0;   // |s_i>_A |s_0>_B
    set.states.push_back(PureState{std::move(v)});
  }
  return set;
}

double pair_part_det(const PairOperators& ops) {
  const int d = ops.d;
  const int rows = 2 * ops.count();
  if (rows == 0) return 0.0;
  RMatrix m(rows, d * d);
  for (int k = 0; k < ops.count(); ++k) {
    m.row(2 * k) = herm_vectorize(ops.H[k]);
    m.row(2 * k + 1) = herm_vectorize(ops.A[k]);
  }
  return (m * m.transpose()).determinant();
}

}  // namespace lodis
