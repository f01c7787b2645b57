#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "chansim/bec.hpp"
#include "chansim/info.hpp"
#include "test_util.hpp"

using namespace chansim;

TEST_CASE("entropy anchors") {
  CHECK(entropy(make_pmf({1.0, 1.0})) == doctest::Approx(1.0));
  CHECK(entropy(make_pmf({0.0, 1.0})) == doctest::Approx(0.0));
  CHECK(entropy(make_pmf({0.75, 0.25})) == doctest::Approx(0.811278).epsilon(1e-5));
}

TEST_CASE("binary entropy") {
  CHECK(binary_entropy(0.5) == doctest::Approx(1.0));
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
  CHECK(binary_entropy(0.75) == doctest::Approx(0.811278).epsilon(1e-5));
  CHECK_THROWS_AS(binary_entropy(-0.01), ValidationError);
  CHECK_THROWS_AS(binary_entropy(1.01), ValidationError);
}

TEST_CASE("mutual information anchors") {
  JointDist indep = JointDist::validated({2, 2}, {0.25, 0.25, 0.25, 0.25});
  CHECK(mutual_information(indep, {0}, {1}) == doctest::Approx(0.0));

  JointDist coupling = JointDist::validated({2, 2}, {0.5, 0.0, 0.0, 0.5});
  CHECK(mutual_information(coupling, {0}, {1}) == doctest::Approx(1.0));

  // Bern(1/2) through BEC(0.75): I(X;Y) = (1 - pe) H(X) = 0.25 bits.
  CHECK(mutual_information(bec::target_joint(0.75), {0}, {1}) == doctest::Approx(0.25).epsilon(1e-9));

  CHECK_THROWS_AS(mutual_information(indep, {0}, {0}), ValidationError);
}

TEST_CASE("conditional mutual information anchors") {
  RandomStream rng(11);
  JointDist indep3 = JointDist::validated(
      {2, 2, 2}, {0.125, 0.125, 0.125, 0.125, 0.125, 0.125, 0.125, 0.125});
  CHECK(conditional_mutual_information(indep3, {0}, {1}, {2}) == doctest::Approx(0.0));

  // Constant C: I(A;B|C) equals I(A;B).
  for (int it = 0; it < 20; ++it) {
    JointDist j = testutil::random_joint({2, 3}, rng);
    std::vector<double> lifted(j.probs());
    lifted.resize(j.probs().size() * 2, 0.0);
    JointDist with_c = JointDist::normalized({2, 3, 2}, [&] {
      std::vector<double> t(2 * 3 * 2, 0.0);
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 3; ++b) {
          t[(static_cast<std::size_t>(a) * 3 + b) * 2 + 0] = j.at({a, b});
        }
      }
      return t;
    }());
    double lhs = conditional_mutual_information(with_c, {0}, {1}, {2});
    double rhs = mutual_information(j, {0}, {1});
    CHECK(std::abs(lhs - rhs) < 1e-10);
  }

  // A = B = C uniform bit: conditioning on C pins A and B.
  JointDist diag = JointDist::validated({2, 2, 2}, {0.5, 0, 0, 0, 0, 0, 0, 0.5});
  CHECK(conditional_mutual_information(diag, {0}, {1}, {2}) == doctest::Approx(0.0));
}

TEST_CASE("total variation anchors") {
  JointDist a = JointDist::validated({2}, {0.5, 0.5});
  CHECK(total_variation(a, a) == 0.0);

  JointDist p0 = JointDist::validated({2}, {1.0, 0.0});
  JointDist p1 = JointDist::validated({2}, {0.0, 1.0});
  CHECK(total_variation(p0, p1) == doctest::Approx(1.0));

  JointDist b = JointDist::validated({2}, {0.75, 0.25});
  CHECK(total_variation(a, b) == doctest::Approx(0.25));

  JointDist c = JointDist::validated({3}, {0.5, 0.25, 0.25});
  CHECK_THROWS_AS(total_variation(a, c), ValidationError);
}

TEST_CASE("information quantities are nonnegative on random joints") {
  RandomStream rng(99);
  for (int it = 0; it < 1000; ++it) {
    JointDist j = testutil::random_joint({2, 2, 2}, rng);
    CHECK(mutual_information(j, {0}, {1}) >= 0.0);
    CHECK(conditional_mutual_information(j, {0}, {1}, {2}) >= 0.0);
  }
}

TEST_CASE("data processing holds on factored triples") {
  RandomStream rng(12);
  for (int it = 0; it < 200; ++it) {
    TripleDist t = testutil::random_triple(2, 2, 3, rng);
    JointDist j = joint_from_markov(t);
    double i_xy = mutual_information(j, {0}, {1});
    double i_xu = mutual_information(j, {0}, {2});
    double i_yu = mutual_information(j, {1}, {2});
    CHECK(i_xy <= i_xu + 1e-9);
    CHECK(i_xy <= i_yu + 1e-9);
  }
}

TEST_CASE("chain identity I(X,Y;U) = I(X;U) + I(Y;U|X)") {
  RandomStream rng(13);
  for (int it = 0; it < 200; ++it) {
    TripleDist t = testutil::random_triple(2, 3, 4, rng);
    JointDist j = joint_from_markov(t);
    double lhs = mutual_information(j, {0, 1}, {2});
    double rhs = mutual_information(j, {0}, {2}) + conditional_mutual_information(j, {1}, {2}, {0});
    CHECK(std::abs(lhs - rhs) < 1e-9);
  }
}

TEST_CASE("total variation is a metric") {
  RandomStream rng(14);
  for (int it = 0; it < 200; ++it) {
    JointDist p = testutil::random_joint({2, 3}, rng);
    JointDist q = testutil::random_joint({2, 3}, rng);
    JointDist r = testutil::random_joint({2, 3}, rng);
    CHECK(total_variation(p, q) == total_variation(q, p));
    CHECK(total_variation(p, r) <= total_variation(p, q) + total_variation(q, r) + 1e-12);
    CHECK(total_variation(p, q) >= 0.0);
    CHECK(total_variation(p, q) <= 1.0);
  }
}

TEST_CASE("large negative internal values raise") {
  // Clamp window is 1e-10; a genuinely negative construction cannot be made
  // through the public API, so exercise the clamp through binary_entropy's
  // boundary values instead.
  CHECK(binary_entropy(1e-300) >= 0.0);
  CHECK(binary_entropy(1.0 - 1e-16) >= 0.0);
}
