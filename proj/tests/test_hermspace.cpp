#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>

#include "lodis/hermspace.hpp"
#include "lodis/rng.hpp"
#include "test_support.hpp"

using namespace lodis;
using namespace lodis::test;

TEST_CASE("hs_inner on simple pairs") {
  CHECK(hs_inner(Matrix::Identity(2, 2), Matrix::Identity(2, 2)) == doctest::Approx(2.0));
  CHECK(hs_inner(pauli_z(), pauli_x()) == doctest::Approx(0.0));
  // shift-by-two matrix against the alternating diagonal: zero diagonal
  // product, so the trace vanishes
  const Matrix w02 = w_coeff(0, 2, 4);
  const Matrix w20 = w_coeff(2, 0, 4);
  const Matrix h = 0.5 * (w02 + w02.adjoint());
  CHECK(hs_inner(h, w20) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK_THROWS_AS(hs_inner(Matrix::Identity(2, 2), Matrix::Identity(3, 3)),
                  DimensionMismatch);
}

TEST_CASE("hs_inner symmetry and bilinearity on random hermitians") {
  Rng rng(7);
  for (int rep = 0; rep < 10; ++rep) {
    const Matrix g = gaussian_complex(3, 3, rng);
    const Matrix x = g + g.adjoint();
    const Matrix g2 = gaussian_complex(3, 3, rng);
    const Matrix y = g2 + g2.adjoint();
    const Matrix g3 = gaussian_complex(3, 3, rng);
    const Matrix z = g3 + g3.adjoint();
    CHECK(hs_inner(x, y) == doctest::Approx(hs_inner(y, x)));
    CHECK(hs_inner(x, 2.0 * y + z) ==
          doctest::Approx(2.0 * hs_inner(x, y) + hs_inner(x, z)));
  }
}

TEST_CASE("vectorization is an isometry and inverts") {
  Rng rng(11);
  for (int d : {2, 3, 5}) {
    const Matrix g = gaussian_complex(d, d, rng);
    const Matrix x = g + g.adjoint();
    const Matrix g2 = gaussian_complex(d, d, rng);
    const Matrix y = g2 + g2.adjoint();
    const RVector vx = herm_vectorize(x);
    const RVector vy = herm_vectorize(y);
    CHECK((herm_unvectorize(vx, d) - x).norm() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(vx.dot(vy) == doctest::Approx(hs_inner(x, y)));
    const auto onb = herm_onb(d);
    CHECK(static_cast<int>(onb.size()) == d * d);
    for (std::size_t a = 0; a < onb.size(); ++a)
      for (std::size_t b = a; b < onb.size(); ++b)
        CHECK(hs_inner(onb[a], onb[b]) == doctest::Approx(a == b ? 1.0 : 0.0).epsilon(1e-12));
  }
}

TEST_CASE("orthonormalize collinear, spanning and empty generator lists") {
  SUBCASE("collinear") {
    const auto b = orthonormalize({pauli_x(), 2.0 * pauli_x()});
    CHECK(b.count() == 1);
  }
  SUBCASE("empty") {
    const auto b = orthonormalize({}, kDefaultTol, 3);
    CHECK(b.count() == 0);
    CHECK(b.dim_ambient == 3);
  }
  SUBCASE("cross-pair span of the four-state d=4 fixture has dimension 12") {
    // the twelve hermitian/antihermitian parts written out explicitly
    const Complex I(0, 1);
    const Matrix w01 = w_coeff(0, 1, 4), w03 = w_coeff(0, 3, 4);
    const Matrix w10 = w_coeff(1, 0, 4), w30 = w_coeff(3, 0, 4);
    const Matrix w33 = w_coeff(3, 3, 4), w11 = w_coeff(1, 1, 4);
    const Matrix w13 = w_coeff(1, 3, 4), w31 = w_coeff(3, 1, 4);
    const Matrix w32 = w_coeff(3, 2, 4), w12 = w_coeff(1, 2, 4);
    const Matrix w23 = w_coeff(2, 3, 4), w21 = w_coeff(2, 1, 4);
    std::vector<Matrix> gens = {
        (w01 + w03) / 2.0,       (w01 - w03) / (2.0 * I),
        (w10 + w30) / 2.0,       (w10 - w30) / (2.0 * I),
        (w33 + I * w11) / 2.0,   (w33 - I * w11) / (2.0 * I),
        (w13 - I * w31) / 2.0,   (w13 + I * w31) / (2.0 * I),
        I * (w32 + w12) / 2.0,   (w32 - w12) / 2.0,
        (w23 - w21) / 2.0,       (w23 + w21) / (2.0 * I),
    };
    for (const Matrix& g : gens) CHECK(is_hermitian(g, 1e-12));
    const auto b = orthonormalize(gens);
    CHECK(b.count() == 12);
  }
}

TEST_CASE("gram matrix of an orthonormalized basis is the identity") {
  Rng rng(23);
  std::vector<Matrix> gens;
  for (int k = 0; k < 9; ++k) {
    const Matrix g = gaussian_complex(3, 3, rng);
    gens.push_back(g + g.adjoint());
  }
  const auto b = orthonormalize(gens);
  for (int a = 0; a < b.count(); ++a)
    for (int c = 0; c < b.count(); ++c)
      CHECK(hs_inner(b.elements[a], b.elements[c]) ==
            doctest::Approx(a == c ? 1.0 : 0.0).epsilon(10 * kDefaultTol));
}

TEST_CASE("complement dimensions and orthogonality") {
  SUBCASE("complement of the zero space is everything") {
    SubspaceBasis empty;
    empty.dim_ambient = 2;
    const auto full = complement(empty);
    CHECK(full.count() == 4);
  }
  SUBCASE("complement of the d=4 fixture span contains the known matrices") {
    const Complex I(0, 1);
    std::vector<Matrix> gens;
    const std::vector<std::pair<int, int>> idx = setA_indices();
    for (std::size_t a = 0; a < idx.size(); ++a)
      for (std::size_t b = a + 1; b < idx.size(); ++b) {
        const Matrix w =
            w_coeff(idx[a].first, idx[a].second, 4).adjoint() *
            w_coeff(idx[b].first, idx[b].second, 4);
        gens.push_back(0.5 * (w + w.adjoint()));
        gens.push_back((w - w.adjoint()) / (2.0 * I));
      }
    const auto t = orthonormalize(gens);
    CHECK(t.count() == 12);
    const auto tp = complement(t);
    CHECK(tp.count() == 4);
    for (const Matrix& m : {Matrix(Matrix::Identity(4, 4)), w_coeff(2, 2, 4),
                            w_coeff(0, 2, 4), w_coeff(2, 0, 4)})
      CHECK(span_residual(m, tp) == doctest::Approx(0.0).epsilon(1e-9));
  }
  SUBCASE("counts always add to d^2 and double complement returns the span") {
    Rng rng(5);
    for (int rep = 0; rep < 8; ++rep) {
      std::vector<Matrix> gens;
      const int k = 1 + static_cast<int>(rng.uniform() * 6);
      for (int g = 0; g < k; ++g) {
        const Matrix m = gaussian_complex(3, 3, rng);
        gens.push_back(m + m.adjoint());
      }
      const auto sub = orthonormalize(gens);
      const auto co = complement(sub);
      CHECK(sub.count() + co.count() == 9);
      for (const Matrix& x : sub.elements)
        for (const Matrix& y : co.elements)
          CHECK(hs_inner(x, y) == doctest::Approx(0.0).epsilon(1e-10));
      const auto back = complement(co);
      CHECK(back.count() == sub.count());
      for (const Matrix& x : sub.elements)
        CHECK(span_residual(x, back) == doctest::Approx(0.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("commutator spans") {
  SUBCASE("commuting family gives the zero space") {
    Matrix dz(2, 2);
    dz << 1, 0, 0, -1;
    const auto b = orthonormalize({Matrix(Matrix::Identity(2, 2)), dz});
    CHECK(commutator_space(b).count() == 0);
  }
  SUBCASE("the x/y plane closes onto z") {
    const auto b = orthonormalize({pauli_x(), pauli_y()});
    const auto c = commutator_space(b);
    REQUIRE(c.count() == 1);
    const double overlap = std::abs(hs_inner(c.elements[0], pauli_z()));
    CHECK(overlap == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
  }
  SUBCASE("commutator elements are traceless") {
    Rng rng(13);
    std::vector<Matrix> gens;
    for (int g = 0; g < 4; ++g) {
      const Matrix m = gaussian_complex(3, 3, rng);
      gens.push_back(m + m.adjoint());
    }
    const auto b = orthonormalize(gens);
    for (const Matrix& m : commutator_space(b).elements)
      CHECK(std::abs(m.trace()) == doctest::Approx(0.0).epsilon(1e-10));
  }
}

TEST_CASE("abelian detection") {
  const auto comm = orthonormalize({Matrix(Matrix::Identity(4, 4)), w_coeff(2, 2, 4),
                                    w_coeff(0, 2, 4), w_coeff(2, 0, 4)});
  CHECK(comm.count() == 4);
  CHECK(is_abelian(comm));
  CHECK_FALSE(is_abelian(orthonormalize({pauli_x(), pauli_z()})));
  CHECK(is_abelian(orthonormalize({pauli_x()})));
}

TEST_CASE("simultaneous diagonalization") {
  SUBCASE("already diagonal input returns the standard frame") {
    Matrix dz(2, 2);
    dz << 1, 0, 0, -1;
    const auto b = orthonormalize({Matrix(Matrix::Identity(2, 2)), dz});
    const auto f = simultaneous_diagonalize(b);
    REQUIRE(f.vectors.size() == 2);
    std::vector<Vector> expected = {Vector::Unit(2, 0), Vector::Unit(2, 1)};
    CHECK(frame_deviation(expected, f.vectors) == doctest::Approx(0.0).epsilon(1e-9));
  }
  SUBCASE("the d=4 fixture's commuting complement") {
    const auto b = orthonormalize({Matrix(Matrix::Identity(4, 4)), w_coeff(2, 2, 4),
                                   w_coeff(0, 2, 4), w_coeff(2, 0, 4)});
    const auto f = simultaneous_diagonalize(b);
    CHECK(frame_deviation(setA_expected_frame(), f.vectors) ==
          doctest::Approx(0.0).epsilon(1e-9));
    for (const Matrix& t : b.elements) {
      const Matrix m = f.as_unitary().adjoint() * t * f.as_unitary();
      const double off = std::sqrt(std::max(0.0, m.squaredNorm() - m.diagonal().squaredNorm()));
      CHECK(off <= kDefaultTol);
    }
  }
  SUBCASE("a commuting shift/phase family lands on the real +-1/2 frame") {
    auto tb = rank_test_basis();
    tb.erase(tb.begin() + 4);   // drop the alternating diagonal, keep the commuting four
    const auto b = orthonormalize(tb);
    REQUIRE(b.count() == 4);
    REQUIRE(is_abelian(b));
    const auto f = simultaneous_diagonalize(b);
    CHECK(frame_deviation(setB_expected_frame(), f.vectors) ==
          doctest::Approx(0.0).epsilon(1e-9));
  }
  SUBCASE("non-commuting input is rejected") {
    CHECK_THROWS_AS(simultaneous_diagonalize(orthonormalize({pauli_x(), pauli_z()})),
                    NonCommutingInput);
  }
  SUBCASE("deterministic for a fixed seed") {
    const auto b = orthonormalize({Matrix(Matrix::Identity(4, 4)), w_coeff(0, 2, 4)});
    const auto f1 = simultaneous_diagonalize(b, kDefaultTol, kDefaultRetries, 42);
    const auto f2 = simultaneous_diagonalize(b, kDefaultTol, kDefaultRetries, 42);
    for (std::size_t k = 0; k < f1.vectors.size(); ++k)
      CHECK((f1.vectors[k] - f2.vectors[k]).norm() == doctest::Approx(0.0));
  }
}
