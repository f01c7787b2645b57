#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "chansim/bec.hpp"
#include "chansim/info.hpp"

using namespace chansim;

TEST_CASE("bec_channel kernels") {
  Channel c0 = bec::bec_channel(0.0);
  CHECK(c0.at(0, 0) == 1.0);
  CHECK(c0.at(0, 1) == 0.0);
  CHECK(c0.at(1, 2) == 1.0);

  Channel c1 = bec::bec_channel(1.0);
  CHECK(c1.at(0, 1) == 1.0);
  CHECK(c1.at(1, 1) == 1.0);

  Channel c = bec::bec_channel(0.75);
  CHECK(c.at(0, 0) == doctest::Approx(0.25));
  CHECK(c.at(0, 1) == doctest::Approx(0.75));
  CHECK(c.at(0, 2) == 0.0);
  CHECK(c.at(1, 0) == 0.0);
  CHECK(c.at(1, 1) == doctest::Approx(0.75));
  CHECK(c.at(1, 2) == doctest::Approx(0.25));

  CHECK_THROWS_AS(bec::bec_channel(1.5), ValidationError);
}

TEST_CASE("cascade parameters") {
  bec::CascadeParams p0 = bec::CascadeParams::make(0.75, 0.0);
  CHECK(p0.p1 == doctest::Approx(0.75));

  bec::CascadeParams p = bec::CascadeParams::make(0.75, 0.5);
  CHECK(p.p1 == doctest::Approx(0.5));

  CHECK_THROWS_AS(bec::CascadeParams::make(0.75, 0.6), ValidationError);
  CHECK_THROWS_AS(bec::CascadeParams::make(0.3, 0.4), ValidationError);
}

TEST_CASE("cascade marginal is the erasure target for all parameters") {
  for (double pe : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    double cap = bec::p2_cap(pe);
    for (int k = 0; k <= 8; ++k) {
      double p2 = cap * k / 8.0;
      TripleDist t = bec::cascade_triple(bec::CascadeParams::make(pe, p2));
      CHECK(total_variation(xy_marginal(t), bec::target_joint(pe)) < 1e-12);
    }
  }
}

TEST_CASE("closed forms match the displays") {
  // p2 = 0: corner at (I(X;Y), h(pe)); sum rate h(pe) + (1-p1).
  bec::CascadeParams a = bec::CascadeParams::make(0.75, 0.0);
  CHECK(bec::i_xu(a) == doctest::Approx(0.25));
  CHECK(bec::i_xyu(a) == doctest::Approx(0.811278 + 0.25).epsilon(1e-5));

  // p2 = 1/2: h(p2) = 1 kills the second term.
  bec::CascadeParams b = bec::CascadeParams::make(0.75, 0.5);
  CHECK(bec::i_xu(b) == doctest::Approx(0.5));
  CHECK(bec::i_xyu(b) == doctest::Approx(0.811278).epsilon(1e-5));
}

TEST_CASE("closed forms agree with numeric mutual informations") {
  for (double pe : {0.3, 0.5, 0.75, 0.9}) {
    double cap = bec::p2_cap(pe);
    for (int k = 0; k <= 10; ++k) {
      double p2 = cap * k / 10.0;
      bec::CascadeParams params = bec::CascadeParams::make(pe, p2);
      JointDist j = joint_from_markov(bec::cascade_triple(params));
      CHECK(std::abs(mutual_information(j, {0}, {2}) - bec::i_xu(params)) < 1e-9);
      CHECK(std::abs(mutual_information(j, {0, 1}, {2}) - bec::i_xyu(params)) < 1e-9);
    }
  }
}

TEST_CASE("r2 completions at the parameter extremes") {
  // p2 = 0: the corner's r2 equals h(pe) = H(Y|X).
  for (double pe : {0.5, 0.6, 0.75, 0.9}) {
    bec::CascadeParams z = bec::CascadeParams::make(pe, 0.0);
    CHECK(std::abs(bec::corner_r2(z) - binary_entropy(pe)) < 1e-9);
    // pe >= 1/2: at the cap the sum rate equals h(pe), Wyner's value.
    bec::CascadeParams c = bec::CascadeParams::make(pe, bec::p2_cap(pe));
    CHECK(std::abs(bec::i_xyu(c) - binary_entropy(pe)) < 1e-9);
  }
}

TEST_CASE("boundary rows span the documented range") {
  std::vector<double> grid;
  for (int k = 0; k <= 49; ++k) grid.push_back(0.5 * k / 49.0);
  auto rows = bec::boundary_rows(0.75, grid);
  CHECK(rows.front().r1 == doctest::Approx(0.25));
  CHECK(rows.front().r2 == doctest::Approx(0.811278).epsilon(1e-5));
  CHECK(rows.back().r1 == doctest::Approx(0.5));
  CHECK(rows.back().r2 == doctest::Approx(0.311278).epsilon(1e-4));
}

TEST_CASE("boundary trace covers the full r1 range with completions") {
  auto rows = bec::boundary_trace(0.75, 50);
  REQUIRE(rows.size() == 50);
  // Ascending r2, starting at the no-common-randomness endpoint.
  CHECK(rows.front().r2 == 0.0);
  CHECK(rows.front().r1 == doctest::Approx(binary_entropy(0.75)).epsilon(1e-9));
  double min_r1 = 10.0, max_r1 = -10.0, prev_r2 = -1.0;
  for (const auto& row : rows) {
    min_r1 = std::min(min_r1, row.r1);
    max_r1 = std::max(max_r1, row.r1);
    CHECK(row.r2 >= prev_r2 - 1e-12);
    prev_r2 = row.r2;
  }
  CHECK(min_r1 == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(max_r1 == doctest::Approx(binary_entropy(0.75)).epsilon(1e-9));

  CHECK_THROWS_AS(bec::boundary_trace(0.75, 0), ValidationError);
}

TEST_CASE("analytic min r1 endpoints and monotonicity") {
  double h75 = binary_entropy(0.75);
  CHECK(bec::min_r1(0.75, 0.0) == doctest::Approx(h75).epsilon(1e-9));
  CHECK(bec::min_r1(0.75, h75) == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(bec::min_r1(0.75, 10.0) == doctest::Approx(0.25));

  double prev = 10.0;
  for (int k = 0; k <= 40; ++k) {
    double r2 = h75 * k / 40.0;
    double r1 = bec::min_r1(0.75, r2);
    CHECK(r1 <= prev + 1e-12);
    prev = r1;
  }

  // Degenerate channels.
  CHECK(bec::min_r1(0.0, 0.0) == doctest::Approx(1.0));
  CHECK(bec::min_r1(0.0, 3.0) == doctest::Approx(1.0));
  CHECK(bec::min_r1(1.0, 0.0) == doctest::Approx(0.0));
}

TEST_CASE("p2_for_r2 inverts the corner curve") {
  for (double r2 : {0.35, 0.45, 0.6, 0.7}) {
    double p2 = bec::p2_for_r2(0.75, r2);
    bec::CascadeParams params = bec::CascadeParams::make(0.75, p2);
    CHECK(std::abs(bec::corner_r2(params) - r2) < 1e-9);
  }
}

TEST_CASE("bec_boundary curve is nonincreasing with completions") {
  std::vector<double> grid;
  for (int k = 0; k <= 10; ++k) grid.push_back(0.5 * k / 10.0);
  BoundaryCurve curve = bec::bec_boundary(0.75, grid);
  REQUIRE(curve.points.size() == grid.size() + 2);
  CHECK(curve.points.front().point.r2 == 0.0);
  CHECK(curve.points.front().point.r1 == doctest::Approx(binary_entropy(0.75)));
  for (std::size_t k = 1; k < curve.points.size(); ++k) {
    CHECK(curve.points[k].point.r2 >= curve.points[k - 1].point.r2 - 1e-12);
    CHECK(curve.points[k].point.r1 <= curve.points[k - 1].point.r1 + 1e-9);
  }
  for (const auto& pt : curve.points) CHECK(pt.cert.marginal_gap < 1e-12);
}

TEST_CASE("detect_bec_target recognizes the pattern") {
  CHECK(bec::detect_bec_target(bec::target_joint(0.75)).value() == doctest::Approx(0.75));
  CHECK(bec::detect_bec_target(bec::target_joint(0.3)).value() == doctest::Approx(0.3));
  JointDist not_bec = JointDist::validated({2, 2}, {0.25, 0.25, 0.25, 0.25});
  CHECK(!bec::detect_bec_target(not_bec).has_value());
  JointDist skew = JointDist::validated({2, 3}, {0.3, 0.3, 0.0, 0.0, 0.3, 0.1});
  CHECK(!bec::detect_bec_target(skew).has_value());
}
