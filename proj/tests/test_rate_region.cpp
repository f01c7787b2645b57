#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "chansim/bec.hpp"
#include "chansim/rate_region.hpp"
#include "test_util.hpp"

using namespace chansim;

namespace {

OptimizerOptions fast_opts(std::uint64_t seed = 0x5EED) {
  OptimizerOptions opts;
  opts.restarts = 16;
  opts.stage_proposals = 2500;
  opts.seed = seed;
  return opts;
}

ProblemSpec bec_spec(double pe) {
  return ProblemSpec::make(make_pmf({1.0, 1.0}), bec::bec_channel(pe));
}

}  // namespace

TEST_CASE("g_epsilon formula") {
  EpsilonParams tiny = g_epsilon(1e-9, 2, 2);
  CHECK(tiny.g_value < 1e-6);
  CHECK(tiny.g_value > 0.0);

  EpsilonParams ep = g_epsilon(0.1, 2, 2);
  CHECK(ep.g_value == doctest::Approx(0.4 * (2.0 + std::log2(10.0))).epsilon(1e-12));
  CHECK(ep.g_value == doctest::Approx(2.12877).epsilon(1e-5));

  CHECK(g_epsilon(0.01, 2, 2).g_value < g_epsilon(0.1, 2, 2).g_value);

  CHECK_THROWS_AS(g_epsilon(0.0, 2, 2), ValidationError);
  CHECK_THROWS_AS(g_epsilon(0.25, 2, 2), ValidationError);
  CHECK_THROWS_AS(g_epsilon(-0.1, 2, 2), ValidationError);
}

TEST_CASE("check_membership with the U = X certificate") {
  RandomStream rng(21);
  for (int it = 0; it < 10; ++it) {
    Pmf src = testutil::random_pmf(2, rng);
    Channel ch = testutil::random_channel(2, 3, rng);
    ProblemSpec spec = ProblemSpec::make(src, ch);
    JointDist target = spec.target();

    // U = X: pU = p(x), X|U identity, Y|U = q rows.
    std::vector<std::vector<double>> yk;
    for (int x = 0; x < 2; ++x) {
      std::vector<double> row;
      for (int y = 0; y < 3; ++y) row.push_back(ch.at(x, y));
      yk.push_back(row);
    }
    TripleDist ux(src, Channel::from_rows({{1, 0}, {0, 1}}), Channel::from_rows(yk));

    double hx = entropy(src);
    double hxy = entropy(target);
    RatePoint rp{hx, hxy - hx};  // (H(X), H(Y|X))
    MembershipResult res = check_membership(spec, rp, ux, 1e-9);
    CHECK(res.accepted);
    CHECK(res.cert.i_xu == doctest::Approx(hx).epsilon(1e-9));
    CHECK(res.cert.i_xyu == doctest::Approx(hx).epsilon(1e-9));
  }
}

TEST_CASE("check_membership on the cascade certificate") {
  ProblemSpec spec = bec_spec(0.75);
  TripleDist cascade = bec::cascade_triple(bec::CascadeParams::make(0.75, 0.5));

  MembershipResult ok = check_membership(spec, RatePoint{0.8113, 0.0}, cascade, 1e-9);
  CHECK(ok.accepted);
  CHECK(ok.cert.i_xu == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(ok.cert.i_xyu == doctest::Approx(0.811278).epsilon(1e-5));

  MembershipResult bad = check_membership(spec, RatePoint{0.70, 0.0}, cascade, 1e-9);
  CHECK(!bad.accepted);
  CHECK(bad.reason.find("sum-rate") != std::string::npos);
}

TEST_CASE("check_membership validates shapes") {
  ProblemSpec spec = bec_spec(0.75);
  RandomStream rng(3);
  TripleDist wrong = testutil::random_triple(2, 2, 3, rng);
  CHECK_THROWS_AS(check_membership(spec, RatePoint{1, 1}, wrong, 1e-9), ValidationError);
}

TEST_CASE("epsilon_membership relaxes check_membership") {
  ProblemSpec spec = bec_spec(0.75);
  TripleDist cascade = bec::cascade_triple(bec::CascadeParams::make(0.75, 0.5));

  // Anything accepted at tol = 0 stays accepted for every epsilon.
  RatePoint rp{0.812, 0.0};
  REQUIRE(check_membership(spec, rp, cascade, 0.0).accepted);
  for (double eps : {0.01, 0.05, 0.1}) {
    CHECK(epsilon_membership(spec, rp, cascade, g_epsilon(eps, 2, 3)).accepted);
  }

  // Relaxed sum-rate: r1 = C - 2 g(0.01) is inside S_epsilon.
  EpsilonParams ep = g_epsilon(0.01, 2, 3);
  double r1 = binary_entropy(0.75) - 2.0 * ep.g_value;
  REQUIRE(r1 > 0.0);
  CHECK(epsilon_membership(spec, RatePoint{r1, 0.0}, cascade, ep).accepted);
  CHECK(!check_membership(spec, RatePoint{r1, 0.0}, cascade, 1e-9).accepted);

  // A marginal 0.05 away fails the D_epsilon condition at epsilon = 0.01.
  ProblemSpec spec08 = bec_spec(0.8);
  MembershipResult res =
      epsilon_membership(spec08, RatePoint{2.0, 2.0}, cascade, g_epsilon(0.01, 2, 3));
  CHECK(!res.accepted);
  CHECK(res.cert.marginal_gap == doctest::Approx(0.05).epsilon(1e-9));
}

TEST_CASE("min_r1_at_r2 reaches the BEC anchors") {
  ProblemSpec spec = bec_spec(0.75);
  double h75 = binary_entropy(0.75);

  // r2 >= H(Y|X): mutual information suffices.
  MinR1Result at_hyx = min_r1_at_r2(spec, h75, fast_opts());
  CHECK(at_hyx.point.r1 <= 0.25 + 0.01);
  CHECK(at_hyx.point.r1 >= 0.25 - 1e-6);

  // r2 = 0: Wyner's common information.
  MinR1Result at_zero = min_r1_at_r2(spec, 0.0, fast_opts());
  CHECK(at_zero.point.r1 == doctest::Approx(h75).epsilon(0.005));

  // Certificates are self-verifying.
  for (const MinR1Result& res : {at_hyx, at_zero}) {
    CHECK(check_membership(spec, res.point, res.cert.triple, 1e-6).accepted);
  }
}

TEST_CASE("min_r1_at_r2 on the identity channel needs H(X) regardless of r2") {
  Pmf src = make_pmf({3.0, 1.0});
  ProblemSpec spec = ProblemSpec::make(src, Channel::from_rows({{1, 0}, {0, 1}}));
  double hx = entropy(src);
  for (double r2 : {0.0, 0.4, 2.0}) {
    MinR1Result res = min_r1_at_r2(spec, r2, fast_opts());
    CHECK(res.point.r1 == doctest::Approx(hx).epsilon(0.005));
  }
}

TEST_CASE("boundary_curve endpoints and monotonicity on the BEC") {
  ProblemSpec spec = bec_spec(0.75);
  double h75 = binary_entropy(0.75);
  BoundaryCurve curve = boundary_curve(spec, {0.0, 0.2, 0.4, 0.6, h75}, fast_opts());
  REQUIRE(curve.points.size() == 5);
  CHECK(std::abs(curve.points.front().point.r1 - h75) <= 0.01);
  CHECK(std::abs(curve.points.back().point.r1 - 0.25) <= 0.01);
  for (std::size_t k = 1; k < curve.points.size(); ++k) {
    CHECK(curve.points[k].point.r1 <= curve.points[k - 1].point.r1 + 1e-12);
  }
}

TEST_CASE("boundary_curve is flat for degenerate channels") {
  // Independent channel: q(y|x) = q(y); constant U works at rate 0.
  ProblemSpec indep = ProblemSpec::make(make_pmf({1.0, 1.0}),
                                        Channel::from_rows({{0.3, 0.7}, {0.3, 0.7}}));
  BoundaryCurve curve = boundary_curve(indep, {0.0, 0.5, 1.0}, fast_opts());
  for (const auto& pt : curve.points) CHECK(pt.point.r1 <= 1e-6);
}

TEST_CASE("boundary r1 never drops below the data-processing floor") {
  RandomStream rng(77);
  for (int it = 0; it < 5; ++it) {
    Pmf src = testutil::random_pmf(2, rng);
    Channel ch = testutil::random_channel(2, 2, rng);
    ProblemSpec spec = ProblemSpec::make(src, ch);
    JointDist target = spec.target();
    double i_xy = mutual_information(target, {0}, {1});
    double hxy = entropy(target);
    MinR1Result res = min_r1_at_r2(spec, hxy, fast_opts(static_cast<std::uint64_t>(it) + 1));
    CHECK(res.point.r1 >= i_xy - 1e-9);
    CHECK(check_membership(spec, res.point, res.cert.triple, 1e-6).accepted);
  }
}

TEST_CASE("wyner common information anchors") {
  OptimizerOptions opts = fast_opts();

  JointDist indep = JointDist::validated({2, 2}, {0.25, 0.25, 0.25, 0.25});
  WynerResult wi = wyner_common_information(indep, 5, opts);
  CHECK(wi.value <= 1e-6);

  JointDist coupling = JointDist::validated({2, 2}, {0.5, 0.0, 0.0, 0.5});
  WynerResult wc = wyner_common_information(coupling, 5, opts);
  CHECK(wc.value == doctest::Approx(1.0).epsilon(1e-6));

  WynerResult wb = wyner_common_information(bec::target_joint(0.75), 7, opts);
  CHECK(wb.value == doctest::Approx(binary_entropy(0.75)).epsilon(0.005));
}

TEST_CASE("wyner sandwich on random joints") {
  RandomStream rng(2718);
  OptimizerOptions opts = fast_opts();
  opts.restarts = 8;
  opts.stage_proposals = 1500;
  for (int it = 0; it < 20; ++it) {
    JointDist j = testutil::random_joint({2, 2}, rng);
    WynerResult w = wyner_common_information(j, 5, opts);
    double i_xy = mutual_information(j, {0}, {1});
    double h_xy = entropy(j);
    double at_u_eq_x = entropy(j.marginal({0}));  // I(X,Y;U) when U = X
    CHECK(w.value >= i_xy - 1e-9);
    CHECK(w.value <= h_xy + 1e-9);
    CHECK(w.value <= at_u_eq_x + 1e-9);
    CHECK(w.marginal_gap <= opts.membership_tol);
  }
}

TEST_CASE("conditional common information decomposes across w") {
  OptimizerOptions opts = fast_opts();

  JointDist coupling = JointDist::validated({2, 2}, {0.5, 0.0, 0.0, 0.5});
  double single = conditional_common_information(make_pmf({1.0}), {coupling}, 5, opts);
  CHECK(single == doctest::Approx(wyner_common_information(coupling, 5, opts).value).epsilon(1e-9));

  JointDist indep = JointDist::validated({2, 2}, {0.25, 0.25, 0.25, 0.25});
  double both_indep = conditional_common_information(make_pmf({1.0, 1.0}), {indep, indep}, 5, opts);
  CHECK(both_indep <= 1e-6);

  double mixed = conditional_common_information(make_pmf({1.0, 1.0}), {indep, coupling}, 5, opts);
  CHECK(mixed == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("conditional common information validates shapes") {
  JointDist a = JointDist::validated({2, 2}, {0.25, 0.25, 0.25, 0.25});
  JointDist b = JointDist::validated({2, 3}, {0.2, 0.1, 0.2, 0.1, 0.2, 0.2});
  CHECK_THROWS_AS(conditional_common_information(make_pmf({1.0, 1.0}), {a, b}, 5, fast_opts()),
                  ValidationError);
  CHECK_THROWS_AS(conditional_common_information(make_pmf({1.0}), {a, a}, 5, fast_opts()),
                  ValidationError);
}

TEST_CASE("numerical boundary tracks the analytic BEC curve") {
  ProblemSpec spec = bec_spec(0.75);
  OptimizerOptions opts = fast_opts();
  double h75 = binary_entropy(0.75);
  for (int k = 0; k <= 4; ++k) {
    double r2 = h75 * k / 4.0;
    MinR1Result res = min_r1_at_r2(spec, r2, opts);
    double analytic = bec::min_r1(0.75, r2);
    CHECK(res.point.r1 <= analytic + 0.01);
    CHECK(res.point.r1 >= analytic - 1e-6);
  }
}

TEST_CASE("problem spec validation") {
  CHECK_THROWS_AS(ProblemSpec::make(make_pmf({1.0, 1.0}), bec::bec_channel(0.5), 8),
                  ValidationError);
  CHECK_THROWS_AS(ProblemSpec::make(make_pmf({1.0, 1.0, 1.0}), bec::bec_channel(0.5)),
                  ValidationError);
  ProblemSpec spec = ProblemSpec::make(make_pmf({1.0, 1.0}), bec::bec_channel(0.5));
  CHECK(spec.u_cardinality == 7);
}
