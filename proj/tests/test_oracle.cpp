#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lodis/mas.hpp"
#include "lodis/oracle.hpp"
#include "lodis/protocol.hpp"
#include "test_support.hpp"

using namespace lodis;
using namespace lodis::test;

namespace {

PairOperators ops_of(const StateSet& set, Side side = Side::A) {
  return build_pair_operators(spectral_decompose(pad_to_square(set)), side);
}

}  // namespace

TEST_CASE("random_feasible_frame_search") {
  SUBCASE("finds the unique feasible frame of the d=4 fixture") {
    const auto ops = ops_of(gen_bell_set(4, setA_indices()));
    const auto frame = random_feasible_frame_search(ops, 64, 5, kDefaultTol);
    REQUIRE(frame.has_value());
    for (const Vector& v : frame->vectors)
      CHECK(vector_feasible(v, ops).max_violation <= kDefaultTol);
    CHECK(frame_deviation(setA_expected_frame(), frame->vectors) < 1e-7);
  }
  SUBCASE("never finds a frame for the full two-qubit basis") {
    const auto ops = ops_of(gen_bell_set(2, {{0, 0}, {0, 1}, {1, 0}, {1, 1}}));
    CHECK_FALSE(random_feasible_frame_search(ops, 64, 3, kDefaultTol).has_value());
  }
  SUBCASE("single state set succeeds immediately with the standard frame") {
    const auto ops = ops_of(gen_bell_set(2, {{0, 0}}));
    const auto frame = random_feasible_frame_search(ops, 4, 1, kDefaultTol);
    REQUIRE(frame.has_value());
    std::vector<Vector> expected = {Vector::Unit(2, 0), Vector::Unit(2, 1)};
    CHECK(frame_deviation(expected, frame->vectors) == doctest::Approx(0.0));
  }
  SUBCASE("serial and parallel searches return the same frame") {
    const auto ops = ops_of(gen_bell_set(2, {{0, 0}, {0, 1}}));
    const auto a = random_feasible_frame_search(ops, 16, 9, kDefaultTol);
    const auto b = random_feasible_frame_search_serial(ops, 16, 9, kDefaultTol);
    REQUIRE(a.has_value());
    REQUIRE(b.has_value());
    REQUIRE(a->vectors.size() == b->vectors.size());
    for (std::size_t k = 0; k < a->vectors.size(); ++k)
      CHECK((a->vectors[k] - b->vectors[k]).norm() == doctest::Approx(0.0));
  }
  SUBCASE("oracle frame induces a measurement passing the direct check") {
    const auto spec = spectral_decompose(gen_bell_set(4, setA_indices()));
    const auto ops = build_pair_operators(spec, Side::A);
    const auto frame = random_feasible_frame_search(ops, 64, 5, kDefaultTol);
    REQUIRE(frame.has_value());
    const auto alice = alice_from_frame(*frame);
    CHECK(verify_op(spec, alice) <= 10 * kDefaultTol);
  }
}

TEST_CASE("genericity_sample") {
  SUBCASE("d=3, n=3 concentrates at dimension 3") {
    const auto rep = genericity_sample(3, 3, 50, 7);
    REQUIRE(rep.dim_histogram.size() == 1);
    CHECK(rep.dim_histogram.at(3) == 50);
  }
  SUBCASE("d=2 with a full basis lands at dimension 1") {
    const auto rep = genericity_sample(2, 4, 40, 11);
    REQUIRE(rep.dim_histogram.size() == 1);
    CHECK(rep.dim_histogram.at(1) == 40);
  }
  SUBCASE("single state spans nothing") {
    const auto rep = genericity_sample(2, 1, 10, 0);
    CHECK(rep.dim_histogram.at(4) == 10);
  }
  SUBCASE("histogram counts always sum to the sample count") {
    const auto rep = genericity_sample(2, 2, 33, 5);
    std::uint64_t total = 0;
    for (const auto& [dim, count] : rep.dim_histogram) total += count;
    CHECK(total == 33);
  }
  SUBCASE("reproducible and shard-independent") {
    const auto a = genericity_sample(3, 3, 24, 123);
    const auto b = genericity_sample(3, 3, 24, 123);
    const auto c = genericity_sample_serial(3, 3, 24, 123);
    CHECK(a.dim_histogram == b.dim_histogram);
    CHECK(a.dim_histogram == c.dim_histogram);
  }
  SUBCASE("determinant diagnostics are positive exactly in the generic case") {
    const auto rep = genericity_sample(2, 2, 8, 17, true);
    REQUIRE(rep.det_diagnostics.size() == 8);
    for (double det : rep.det_diagnostics) CHECK(det > 0.0);
    const auto serial = genericity_sample_serial(2, 2, 8, 17, true);
    for (std::size_t k = 0; k < 8; ++k)
      CHECK(rep.det_diagnostics[k] == doctest::Approx(serial.det_diagnostics[k]));
  }
  SUBCASE("parameter validation") {
    CHECK_THROWS_AS(genericity_sample(2, 5, 1, 0), DimensionMismatch);
    CHECK_THROWS_AS(genericity_sample(0, 1, 1, 0), DimensionMismatch);
  }
}

TEST_CASE("product_state_fixture has the diagonal matrices as its complement") {
  for (int d : {2, 3, 4}) {
    const StateSet set = product_state_fixture(d);
    const auto spec = spectral_decompose(set);
    const auto ts = build_tspaces(build_pair_operators(spec, Side::A));
    CHECK(ts.dims() == std::pair<int, int>{d * d - d, d});
    for (int k = 0; k < d; ++k) {
      Matrix ekk = Matrix::Zero(d, d);
      ekk(k, k) = 1.0;
      CHECK(span_residual(ekk, ts.Tperp) < 1e-10);
    }
    // and the decision engine agrees it is distinguishable
    const auto dec = decide(ts);
    CHECK(dec.verdict == Verdict::DistinguishableProjective);
  }
}

TEST_CASE("oracle and decision engine agree on the reference fixtures") {
  struct Case {
    StateSet set;
    bool expect_frame;
  };
  std::vector<Case> cases;
  cases.push_back({gen_bell_set(4, setA_indices()), true});
  cases.push_back({gen_bell_set(2, {{0, 0}, {0, 1}}), true});
  cases.push_back({gen_bell_set(2, {{0, 0}}), true});
  cases.push_back({gen_bell_set(2, {{0, 0}, {0, 1}, {1, 0}, {1, 1}}), false});
  cases.push_back({gen_bell_set(2, {{0, 0}, {0, 1}, {1, 0}}), false});
  for (const auto& c : cases) {
    const auto spec = spectral_decompose(pad_to_square(c.set));
    const auto ops = build_pair_operators(spec, Side::A);
    const auto ts = build_tspaces(ops);
    const auto dec = decide(ts);
    const auto frame = random_feasible_frame_search(ops, 64, 21, kDefaultTol);
    CHECK(frame.has_value() == c.expect_frame);
    CHECK((dec.verdict == Verdict::DistinguishableProjective) == c.expect_frame);
  }
}
