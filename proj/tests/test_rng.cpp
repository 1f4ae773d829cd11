#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lodis/rng.hpp"

using namespace lodis;

TEST_CASE("derived seeds separate streams deterministically") {
  CHECK(derive_seed(1, 0) == derive_seed(1, 0));
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
}

TEST_CASE("uniform draws are in range and reproducible") {
  Rng a(42), b(42);
  for (int k = 0; k < 1000; ++k) {
    const double u = a.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(u == b.uniform());
  }
}

TEST_CASE("the engine itself matches the standard-mandated output") {
  // mt19937_64 seeded with 5489 must produce 9981545732273789042 as the
  // 10000th value; our bit stream sits directly on top of it
  std::mt19937_64 ref(5489);
  Rng rng(5489);
  for (int k = 0; k < 9999; ++k) {
    ref();
    rng.bits();
  }
  CHECK(rng.bits() == ref());
  CHECK(rng.bits() != 0);
}

TEST_CASE("normal draws have sane moments") {
  Rng rng(7);
  double sum = 0, sum2 = 0;
  const int n = 200000;
  for (int k = 0; k < n; ++k) {
    const double x = rng.normal();
    sum += x;
    sum2 += x * x;
  }
  CHECK(std::abs(sum / n) < 0.02);
  CHECK(std::abs(sum2 / n - 1.0) < 0.02);
}

TEST_CASE("categorical draws respect the weights") {
  Rng rng(3);
  std::vector<double> w = {0.25, 0.5, 0.25};
  std::vector<int> counts(4, 0);
  for (int k = 0; k < 40000; ++k) counts[rng.categorical(w, 1.0)] += 1;
  CHECK(std::abs(counts[0] / 40000.0 - 0.25) < 0.02);
  CHECK(std::abs(counts[1] / 40000.0 - 0.50) < 0.02);
  CHECK(counts[3] == 0);
  // leftover mass goes to the sentinel index
  int leftovers = 0;
  for (int k = 0; k < 10000; ++k)
    if (rng.categorical(w, 2.0) == 3) ++leftovers;
  CHECK(std::abs(leftovers / 10000.0 - 0.5) < 0.03);
}

TEST_CASE("haar columns are orthonormal and seed-stable") {
  Rng rng(11);
  const Matrix q = haar_columns(9, 4, rng);
  CHECK((q.adjoint() * q - Matrix::Identity(4, 4)).norm() < 1e-12);
  Rng rng2(11);
  const Matrix q2 = haar_columns(9, 4, rng2);
  CHECK((q - q2).norm() == 0.0);
  Rng rng3(5);
  const Matrix u = haar_unitary(4, rng3);
  CHECK((u * u.adjoint() - Matrix::Identity(4, 4)).norm() < 1e-12);
}
