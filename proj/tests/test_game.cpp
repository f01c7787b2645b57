#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "chansim/game.hpp"
#include "test_util.hpp"

using namespace chansim;
using namespace chansim::game;

namespace {

// Matching-team game: the team scores when x = y and the opponent misses.
Game matching_game() {
  std::vector<double> payoff(8, 0.0);
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      for (int z = 0; z < 2; ++z) {
        if (x == y && y != z) payoff[(static_cast<std::size_t>(x) * 2 + y) * 2 + z] = 1.0;
      }
    }
  }
  return Game::validated(2, 2, 2, payoff);
}

Game scaled(const Game& g, double c) {
  std::vector<double> payoff(g.payoff);
  for (double& v : payoff) v *= c;
  return Game::validated(g.x_size, g.y_size, g.z_size, payoff);
}

JointDist uniform_product() {
  return JointDist::validated({2, 2}, {0.25, 0.25, 0.25, 0.25});
}

JointDist coupling() { return JointDist::validated({2, 2}, {0.5, 0.0, 0.0, 0.5}); }

GameOptions fast_game_opts() {
  GameOptions opts;
  opts.wyner.restarts = 6;
  opts.wyner.stage_proposals = 800;
  opts.search_iters = 30;
  return opts;
}

}  // namespace

TEST_CASE("worst_case_payoff anchors") {
  Game g = matching_game();

  PayoffReport unif = worst_case_payoff(g, uniform_product());
  CHECK(unif.theta == doctest::Approx(0.25));
  CHECK(unif.argmin_z == std::vector<int>{0, 1});

  PayoffReport coup = worst_case_payoff(g, coupling());
  CHECK(coup.theta == doctest::Approx(0.5));

  // Constant payoff: every z ties at the constant.
  Game constant = Game::validated(2, 2, 2, std::vector<double>(8, 3.25));
  PayoffReport c = worst_case_payoff(constant, uniform_product());
  CHECK(c.theta == doctest::Approx(3.25));
  CHECK(c.argmin_z == std::vector<int>{0, 1});

  JointDist wrong = JointDist::validated({2, 3}, {0.2, 0.1, 0.2, 0.1, 0.2, 0.2});
  CHECK_THROWS_AS(worst_case_payoff(g, wrong), ValidationError);
}

TEST_CASE("timeshare_payoff mixes strategies and prices them") {
  Game g = matching_game();
  GameOptions opts = fast_game_opts();

  TimeSharingStrategy single{make_pmf({1.0}), {coupling()}};
  PayoffReport rs = timeshare_payoff(g, single, opts);
  CHECK(rs.theta == doctest::Approx(0.5));
  CHECK(rs.rate.value() == doctest::Approx(1.0).epsilon(1e-3));

  TimeSharingStrategy half{make_pmf({1.0, 1.0}), {uniform_product(), coupling()}};
  PayoffReport rh = timeshare_payoff(g, half, opts);
  CHECK(rh.theta == doctest::Approx(0.375));
  CHECK(rh.rate.value() == doctest::Approx(0.5).epsilon(1e-3));

  TimeSharingStrategy degenerate{make_pmf({0.0, 1.0}), {uniform_product(), coupling()}};
  PayoffReport rd = timeshare_payoff(g, degenerate, opts);
  CHECK(rd.theta == doctest::Approx(0.5));
  CHECK(rd.rate.value() == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("correlated maximum and product baseline") {
  Game g = matching_game();
  CHECK(max_worst_case_payoff(g) == doctest::Approx(0.5).epsilon(1e-9));

  JointDist prod = best_product_strategy(g);
  CHECK(worst_case_payoff(g, prod).theta == doctest::Approx(0.25).epsilon(1e-9));
}

TEST_CASE("r0_upper certificates for the matching game") {
  Game g = matching_game();
  GameOptions opts = fast_game_opts();

  // At the product maximin the independent strategy is free.
  R0Result at_maximin = r0_upper(g, 0.25, opts);
  CHECK(at_maximin.rate <= 1e-6);
  CHECK(at_maximin.theta >= 0.25 - 1e-9);

  R0Result at_half = r0_upper(g, 0.5, opts);
  CHECK(at_half.rate <= 1.0 + 1e-3);
  CHECK(at_half.theta >= 0.5 - 1e-9);

  R0Result mid = r0_upper(g, 0.375, opts);
  CHECK(mid.rate <= 0.5 + 1e-2);
  CHECK(mid.theta >= 0.375 - 1e-9);

  CHECK_THROWS_AS(r0_upper(g, 0.6, opts), ValidationError);
}

TEST_CASE("r0_upper certificates are self-certifying") {
  Game g = matching_game();
  GameOptions opts = fast_game_opts();
  R0Result res = r0_upper(g, 0.375, opts);
  PayoffReport replay = timeshare_payoff(g, res.strategy, opts);
  CHECK(replay.theta == doctest::Approx(res.theta).epsilon(1e-9));
  CHECK(replay.rate.value() == doctest::Approx(res.rate).epsilon(1e-9));
}

TEST_CASE("r0_curve is monotone with feasibility flags") {
  Game g = matching_game();
  GameOptions opts = fast_game_opts();
  std::vector<double> grid{0.1, 0.25, 0.375, 0.5, 0.55};
  std::vector<R0CurvePoint> curve = r0_curve(g, grid, opts);
  REQUIRE(curve.size() == 5);

  CHECK(curve[0].rate <= 1e-6);        // below the product maximin
  CHECK(curve[1].rate <= 1e-6);
  CHECK(std::abs(curve[2].rate - 0.5) <= 0.02);
  CHECK(curve[3].rate <= 1.0 + 0.02);
  CHECK(!curve[4].feasible);           // above the correlated maximum

  double prev = -1.0;
  for (const auto& pt : curve) {
    if (!pt.feasible) continue;
    CHECK(pt.rate >= prev - 1e-9);
    prev = pt.rate;
  }
}

TEST_CASE("worst-case payoff is concave under mixing") {
  Game g = matching_game();
  RandomStream rng(8);
  for (int it = 0; it < 100; ++it) {
    JointDist p = testutil::random_joint({2, 2}, rng);
    JointDist q = testutil::random_joint({2, 2}, rng);
    double lambda = rng.next_unit();
    std::vector<double> mix(4);
    for (std::size_t c = 0; c < 4; ++c) {
      mix[c] = lambda * p.probs()[c] + (1.0 - lambda) * q.probs()[c];
    }
    JointDist m = JointDist::normalized({2, 2}, std::move(mix));
    double lhs = worst_case_payoff(g, m).theta;
    double rhs = lambda * worst_case_payoff(g, p).theta + (1.0 - lambda) * worst_case_payoff(g, q).theta;
    CHECK(lhs >= rhs - 1e-9);
  }
}

TEST_CASE("timeshare theta is linear in the mixing weights") {
  Game g = matching_game();
  RandomStream rng(9);
  GameOptions opts = fast_game_opts();
  for (int it = 0; it < 20; ++it) {
    JointDist a = testutil::random_joint({2, 2}, rng);
    JointDist b = testutil::random_joint({2, 2}, rng);
    double ta = worst_case_payoff(g, a).theta;
    double tb = worst_case_payoff(g, b).theta;
    double w = rng.next_unit();
    TimeSharingStrategy s{Pmf::validated({w, 1.0 - w}), {a, b}};
    double theta = 0.0;
    for (int k = 0; k < 2; ++k) {
      theta += s.pw.at(k) * worst_case_payoff(g, s.strategies[static_cast<std::size_t>(k)]).theta;
    }
    CHECK(std::abs(theta - (w * ta + (1.0 - w) * tb)) < 1e-12);
  }
}

TEST_CASE("payoff scaling leaves decisions invariant") {
  Game g = matching_game();
  Game g2 = scaled(g, 3.7);
  RandomStream rng(10);
  for (int it = 0; it < 50; ++it) {
    JointDist p = testutil::random_joint({2, 2}, rng);
    PayoffReport a = worst_case_payoff(g, p);
    PayoffReport b = worst_case_payoff(g2, p);
    CHECK(a.argmin_z == b.argmin_z);
    CHECK(b.theta == doctest::Approx(3.7 * a.theta).epsilon(1e-12));
  }

  GameOptions opts = fast_game_opts();
  R0Result r = r0_upper(g, 0.375, opts);
  R0Result r2 = r0_upper(g2, 3.7 * 0.375, opts);
  CHECK(r2.rate == doctest::Approx(r.rate).epsilon(1e-9));
  CHECK(r2.theta == doctest::Approx(3.7 * r.theta).epsilon(1e-9));
}

TEST_CASE("game validation") {
  CHECK_THROWS_AS(Game::validated(2, 2, 2, std::vector<double>(7, 0.0)), ValidationError);
  std::vector<double> nan_payoff(8, 0.0);
  nan_payoff[3] = std::nan("");
  CHECK_THROWS_AS(Game::validated(2, 2, 2, nan_payoff), ValidationError);
}
