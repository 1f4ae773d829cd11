#include "lodis/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/SVD>

#include "lodis/rng.hpp"

namespace lodis {

namespace {

struct OpCheck {
  double max = 0.0;
  int k = -1, i = -1, i2 = -1, j = -1, j2 = -1;
};

/// Residual left on the finishing party when outcome vector `v` fires on a
/// state with coefficient matrix W: W conj(v) when A initiates, W^T conj(v)
/// when B does.
Vector residual_vector(const Matrix& w, const Vector& v, Side side) {
  if (side == Side::A) return w * v.conjugate();
  return w.transpose() * v.conjugate();
}

struct SimTables {
  int n = 0;
  int outcomes = 0;
  // alice_w[i][j][k]: Born weight of outcome k for eigenvector (i, j).
  std::vector<std::vector<std::vector<double>>> alice_w;
  std::vector<std::vector<double>> alice_total;   // [i][j]
  // bob_w[i][j][k][b]: weight of block b given (i, j, k); the leftover mass
  // up to 1 belongs to the remainder (failure) outcome.
  std::vector<std::vector<std::vector<std::vector<double>>>> bob_w;
  std::vector<std::vector<double>> lambda;        // eigenvalue weights per state
  std::vector<double> lambda_total;
  std::vector<std::vector<int>> block_state;      // [k][b] -> state index
};

SimTables build_tables(const SpectralStateSet& spec, const Protocol& proto) {
  SimTables tb;
  tb.n = spec.n();
  tb.outcomes = proto.alice.outcomes();
  tb.block_state.resize(tb.outcomes);
  for (int k = 0; k < tb.outcomes; ++k)
    for (const BobBlock& blk : proto.branches[k].blocks)
      tb.block_state[k].push_back(blk.state_index);

  tb.alice_w.resize(tb.n);
  tb.alice_total.resize(tb.n);
  tb.bob_w.resize(tb.n);
  tb.lambda.resize(tb.n);
  tb.lambda_total.resize(tb.n);
  for (int i = 0; i < tb.n; ++i) {
    const SpectralState& st = spec.states[i];
    tb.lambda[i].assign(st.eigenvalues.data(), st.eigenvalues.data() + st.rank);
    tb.lambda_total[i] = std::accumulate(tb.lambda[i].begin(), tb.lambda[i].end(), 0.0);
    tb.alice_w[i].resize(st.rank);
    tb.alice_total[i].resize(st.rank);
    tb.bob_w[i].resize(st.rank);
    for (int j = 0; j < st.rank; ++j) {
      tb.alice_w[i][j].resize(tb.outcomes);
      tb.bob_w[i][j].resize(tb.outcomes);
      double tot = 0.0;
      for (int k = 0; k < tb.outcomes; ++k) {
        const Vector r = residual_vector(st.W[j], proto.alice.vectors[k], proto.alice.side);
        const double p = r.squaredNorm();
        tb.alice_w[i][j][k] = p;
        tot += p;
        auto& weights = tb.bob_w[i][j][k];
        weights.resize(proto.branches[k].blocks.size(), 0.0);
        if (p > 0) {
          const Vector rn = r / r.norm();
          for (std::size_t b = 0; b < proto.branches[k].blocks.size(); ++b) {
            double w = 0.0;
            for (const Vector& e : proto.branches[k].blocks[b].basis) {
              const Complex ov = e.dot(rn);
              w += std::norm(ov);
            }
            weights[b] = w;
          }
        }
      }
      tb.alice_total[i][j] = tot;
    }
  }
  return tb;
}

struct Tally {
  std::uint64_t successes = 0;
  std::vector<std::uint64_t> per_state_trials, per_state_successes, per_outcome;

  explicit Tally(const SimTables& tb)
      : per_state_trials(tb.n, 0), per_state_successes(tb.n, 0), per_outcome(tb.outcomes, 0) {}

  void merge(const Tally& o) {
    successes += o.successes;
    for (std::size_t k = 0; k < per_state_trials.size(); ++k) {
      per_state_trials[k] += o.per_state_trials[k];
      per_state_successes[k] += o.per_state_successes[k];
    }
    for (std::size_t k = 0; k < per_outcome.size(); ++k) per_outcome[k] += o.per_outcome[k];
  }
};

void run_trial(const SimTables& tb, std::uint64_t seed, std::uint64_t trial, Tally& tally) {
  TrialRng rng(derive_seed(seed, trial));
  const int i = static_cast<int>(rng.uniform() * tb.n) % tb.n;
  tally.per_state_trials[i] += 1;
  int j = rng.categorical(tb.lambda[i], tb.lambda_total[i]);
  if (j >= static_cast<int>(tb.lambda[i].size())) j = static_cast<int>(tb.lambda[i].size()) - 1;
  int k = rng.categorical(tb.alice_w[i][j], std::max(tb.alice_total[i][j], 1e-300));
  if (k >= tb.outcomes) k = tb.outcomes - 1;   // guard against completeness roundoff
  tally.per_outcome[k] += 1;
  const int b = rng.categorical(tb.bob_w[i][j][k], 1.0);
  const bool ok =
      b < static_cast<int>(tb.block_state[k].size()) && tb.block_state[k][b] == i;
  if (ok) {
    tally.successes += 1;
    tally.per_state_successes[i] += 1;
  }
}

SimStats finish(Tally&& tally, std::uint64_t trials, std::uint64_t seed) {
  SimStats st;
  st.trials = trials;
  st.seed = seed;
  st.successes = tally.successes;
  st.per_state_trials = std::move(tally.per_state_trials);
  st.per_state_successes = std::move(tally.per_state_successes);
  st.per_outcome_counts = std::move(tally.per_outcome);
  return st;
}

}  // namespace

AliceMeasurement alice_from_frame(const EigenFrame& frame, Side side) {
  AliceMeasurement m;
  m.side = side;
  m.vectors.reserve(frame.vectors.size());
  Matrix sum = Matrix::Zero(frame.dim, frame.dim);
  for (const Vector& v : frame.vectors) {
    Vector w = v.conjugate();
    sum += w * w.adjoint();
    m.vectors.push_back(std::move(w));
  }
  m.completeness_residual = (sum - Matrix::Identity(frame.dim, frame.dim)).norm();
  return m;
}

Feasibility vector_feasible(const Vector& v, const PairOperators& ops, double tol) {
  Feasibility f;
  for (const Matrix& w : ops.W) {
    const Complex val = v.dot(w * v);   // Eigen dot conjugates the left factor
    f.max_violation = std::max(f.max_violation, std::abs(val));
  }
  f.feasible = f.max_violation <= tol;
  return f;
}

namespace {

OpCheck verify_op_detail(const SpectralStateSet& spec, const AliceMeasurement& alice) {
  const int d = spec.d;
  OpCheck worst;
  for (int k = 0; k < alice.outcomes(); ++k) {
    const Matrix p = alice.vectors[k] * alice.vectors[k].adjoint();
    for (int i = 0; i < spec.n(); ++i)
      for (int i2 = i + 1; i2 < spec.n(); ++i2)
        for (int j = 0; j < spec.states[i].rank; ++j)
          for (int j2 = 0; j2 < spec.states[i2].rank; ++j2) {
            const Matrix& w1 = spec.states[i].W[j];
            const Matrix& w2 = spec.states[i2].W[j2];
            // psi[a*d + b] = W(b, a); the projector acts on the initiating
            // party's index.
            Complex acc = 0.0;
            if (alice.side == Side::A) {
              for (int a = 0; a < d; ++a)
                for (int a2 = 0; a2 < d; ++a2) {
                  if (p(a, a2) == Complex(0.0, 0.0)) continue;
                  Complex inner = 0.0;
                  for (int b = 0; b < d; ++b)
                    inner += std::conj(w1(b, a)) * w2(b, a2);
                  acc += p(a, a2) * inner;
                }
            } else {
              for (int b = 0; b < d; ++b)
                for (int b2 = 0; b2 < d; ++b2) {
                  if (p(b, b2) == Complex(0.0, 0.0)) continue;
                  Complex inner = 0.0;
                  for (int a = 0; a < d; ++a)
                    inner += std::conj(w1(b, a)) * w2(b2, a);
                  acc += p(b, b2) * inner;
                }
            }
            if (std::abs(acc) > worst.max) worst = OpCheck{std::abs(acc), k, i, i2, j, j2};
          }
  }
  return worst;
}

}  // namespace

double verify_op(const SpectralStateSet& spec, const AliceMeasurement& alice) {
  return verify_op_detail(spec, alice).max;
}

Protocol bob_measurements(const SpectralStateSet& spec, const AliceMeasurement& alice,
                          double tol) {
  const OpCheck chk = verify_op_detail(spec, alice);
  if (chk.max > tol)
    throw OPViolation("bob_measurements: measurement is not orthogonality preserving "
                      "(violation " + std::to_string(chk.max) + " at outcome " +
                      std::to_string(chk.k) + ", states " + std::to_string(chk.i) + "/" +
                      std::to_string(chk.i2) + ", eigenvectors " + std::to_string(chk.j) +
                      "/" + std::to_string(chk.j2) + ")",
                      chk.k, chk.i, chk.i2, chk.j, chk.j2, chk.max);

  Protocol proto;
  proto.alice = alice;
  proto.op_violation = chk.max;
  const int d = spec.d;
  for (int k = 0; k < alice.outcomes(); ++k) {
    BobBranch branch;
    std::vector<std::pair<int, std::vector<Vector>>> groups;
    for (int i = 0; i < spec.n(); ++i) {
      Matrix stack(d, spec.states[i].rank);
      for (int j = 0; j < spec.states[i].rank; ++j)
        stack.col(j) = residual_vector(spec.states[i].W[j], alice.vectors[k], alice.side);
      if (stack.norm() <= tol) continue;   // state unreachable at this outcome
      Eigen::JacobiSVD<Matrix> svd(stack, Eigen::ComputeThinU);
      const RVector sigma = svd.singularValues();
      const double smax = sigma(0);
      std::vector<Vector> basis;
      for (int c = 0; c < sigma.size() && sigma(c) > tol * smax; ++c)
        basis.push_back(svd.matrixU().col(c));
      groups.emplace_back(i, std::move(basis));
    }
    // Residuals of different states must stay orthogonal; the check above
    // guarantees it, so a miss here is an internal inconsistency.
    for (std::size_t g = 0; g < groups.size(); ++g)
      for (std::size_t g2 = g + 1; g2 < groups.size(); ++g2)
        for (const Vector& x : groups[g].second)
          for (const Vector& y : groups[g2].second)
            if (std::abs(x.dot(y)) > std::max(tol * 100, 1e-8))
              throw InternalConsistencyError(
                  "bob_measurements: residual blocks of states " +
                  std::to_string(groups[g].first) + " and " +
                  std::to_string(groups[g2].first) + " overlap at outcome " +
                  std::to_string(k));
    branch.reachable = !groups.empty();
    for (auto& [si, basis] : groups) branch.blocks.push_back(BobBlock{si, std::move(basis)});
    proto.branches.push_back(std::move(branch));
  }
  return proto;
}

Protocol build_protocol(const SpectralStateSet& spec, const EigenFrame& frame, Side side,
                        double tol) {
  AliceMeasurement alice = alice_from_frame(frame, side);
  const double viol = verify_op(spec, alice);
  if (viol > tol) {
    AliceMeasurement unconj;
    unconj.side = side;
    unconj.vectors = frame.vectors;
    if (verify_op(spec, unconj) <= tol)
      throw ConventionError(
          "build_protocol: orthogonality holds only without conjugation; "
          "frame bookkeeping is inconsistent");
  }
  return bob_measurements(spec, alice, tol);
}

SimStats simulate_serial(const SpectralStateSet& spec, const Protocol& proto,
                         std::uint64_t trials, std::uint64_t seed) {
  const SimTables tb = build_tables(spec, proto);
  Tally tally(tb);
  for (std::uint64_t t = 0; t < trials; ++t) run_trial(tb, seed, t, tally);
  return finish(std::move(tally), trials, seed);
}

SimStats simulate(const SpectralStateSet& spec, const Protocol& proto, std::uint64_t trials,
                  std::uint64_t seed) {
  const SimTables tb = build_tables(spec, proto);
  Tally tally(tb);
#pragma omp parallel
  {
    Tally local(tb);
#pragma omp for schedule(static)
    for (long long t = 0; t < static_cast<long long>(trials); ++t)
      run_trial(tb, seed, static_cast<std::uint64_t>(t), local);
#pragma omp critical
    tally.merge(local);
  }
  return finish(std::move(tally), trials, seed);
}

}  // namespace lodis
