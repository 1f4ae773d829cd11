#ifndef LODIS_RNG_HPP
#define LODIS_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "lodis/types.hpp"

namespace lodis {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed for an independent sub-stream (shard, sample, restart, trial).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t s = seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
  splitmix64(s);
  return splitmix64(s);
}

/// mt19937_64 with hand-rolled floating-point draws. The engine's output is
/// pinned by the standard; uniform_real_distribution / normal_distribution
/// are not, so draws go through explicit bit manipulation and Box-Muller to
/// keep results identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t bits() { return gen_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  /// Index drawn proportionally to the (non-negative) weights; returns
  /// weights.size() when the draw lands in the leftover mass beyond total.
  int categorical(const std::vector<double>& weights, double total) {
    const double x = uniform() * total;
    double acc = 0.0;
    for (std::size_t k = 0; k < weights.size(); ++k) {
      acc += weights[k];
      if (x < acc) return static_cast<int>(k);
    }
    return static_cast<int>(weights.size());
  }

 private:
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// splitmix64-backed generator for hot per-trial loops, where constructing
/// a full mt19937_64 state per trial would dominate the cost. Same
/// portability guarantees: pure 64-bit integer arithmetic.
class TrialRng {
 public:
  explicit TrialRng(std::uint64_t seed) : state_(seed) {}

  double uniform() { return static_cast<double>(splitmix64(state_) >> 11) * 0x1.0p-53; }

  int categorical(const std::vector<double>& weights, double total) {
    const double x = uniform() * total;
    double acc = 0.0;
    for (std::size_t k = 0; k < weights.size(); ++k) {
      acc += weights[k];
      if (x < acc) return static_cast<int>(k);
    }
    return static_cast<int>(weights.size());
  }

 private:
  std::uint64_t state_;
};

inline Matrix gaussian_complex(int rows, int cols, Rng& rng) {
  Matrix m(rows, cols);
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) m(r, c) = Complex(rng.normal(), rng.normal());
  return m;
}

/// First `cols` columns of a Haar-distributed unitary: QR of a complex
/// Gaussian matrix with the R-diagonal phases absorbed into Q.
inline Matrix haar_columns(int rows, int cols, Rng& rng) {
  Matrix g = gaussian_complex(rows, cols, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(rows, cols);
  Matrix r = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
  for (int c = 0; c < cols; ++c) {
    const Complex rc = r(c, c);
    const double a = std::abs(rc);
    if (a > 0) q.col(c) *= rc / a;
  }
  return q;
}

inline Matrix haar_unitary(int d, Rng& rng) { return haar_columns(d, d, rng); }

}  // namespace lodis

#endif
