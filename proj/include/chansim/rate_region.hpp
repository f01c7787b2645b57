#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "chansim/info.hpp"
#include "chansim/prob.hpp"

namespace chansim {

// Source p(x), channel to simulate q(y|x), and the auxiliary-alphabet size
// used by the search (at most |X||Y| + 1).
struct ProblemSpec {
  Pmf source;
  Channel channel;
  int u_cardinality;

  static ProblemSpec make(Pmf source, Channel channel,
                          std::optional<int> u_cardinality = std::nullopt);
  int x_size() const { return source.size(); }
  int y_size() const { return channel.output_size(); }
  // The desired joint p(x) q(y|x) as a 2-axis table.
  JointDist target() const;
};

struct RatePoint {
  double r1 = 0.0;  // description rate, bits/symbol
  double r2 = 0.0;  // common-randomness rate, bits/symbol
};

// A concrete p(x,y,u) with the two mutual informations that decide region
// membership and the total-variation gap of its (x,y) marginal to the target.
struct RegionCertificate {
  TripleDist triple;
  Bits i_xu = 0.0;
  Bits i_xyu = 0.0;
  double marginal_gap = 0.0;
};

RegionCertificate make_certificate(const TripleDist& t, const JointDist& target);

struct MembershipResult {
  bool accepted = false;
  RegionCertificate cert;
  std::string reason;  // empty when accepted
};

// Accepts iff the certificate's marginal gap is within tol and both rate
// constraints hold within tol at rp.
MembershipResult check_membership(const ProblemSpec& spec, const RatePoint& rp,
                                  const TripleDist& t, double tol);

// epsilon and g(epsilon) = 4 eps (log2|X| + log2|Y| + log2(1/eps)).
struct EpsilonParams {
  double epsilon = 0.0;
  Bits g_value = 0.0;
};

EpsilonParams g_epsilon(double epsilon, int x_size, int y_size);

// Relaxed membership: marginal gap strictly below epsilon and both rate
// constraints slackened by 2 g(epsilon).
MembershipResult epsilon_membership(const ProblemSpec& spec, const RatePoint& rp,
                                    const TripleDist& t, const EpsilonParams& ep);

// Multi-start coordinate-perturbation search over the factored triple
// (pU, pX|U, pY|U) with an escalating total-variation penalty tying the
// (x,y) marginal to the target, followed by an alternating-projection polish
// back onto the constraint set.
struct OptimizerOptions {
  int restarts = 64;
  int stage_proposals = 4000;   // local-search proposals per penalty stage
  int stall_limit = 80;         // rejected proposals before the step shrinks
  double init_step = 0.25;
  double membership_tol = 1e-6;   // tolerance quoted on returned certificates
  double feasible_tv = 1e-12;     // marginal gap required of a winning candidate
  double penalty_init = 10.0;
  double penalty_max = 1e9;
  int polish_rounds = 2000;
  double polish_target = 1e-13;
  std::uint64_t seed = 0x5EEDULL;
};

struct MinR1Result {
  RatePoint point;
  RegionCertificate cert;
  int restarts_used = 0;
};

// Best found R1 with r2 fixed: an upper bound on the true boundary; the
// certificate always satisfies check_membership at the returned point.
MinR1Result min_r1_at_r2(const ProblemSpec& spec, double r2,
                         const OptimizerOptions& opts = {});

struct BoundaryPoint {
  RatePoint point;
  RegionCertificate cert;
  int restarts_used = 0;
  bool repaired = false;  // set when monotone repair replaced this point
};

struct BoundaryCurve {
  std::vector<BoundaryPoint> points;
  std::vector<double> r2_grid;
};

// Sweeps min_r1_at_r2 over an ascending r2 grid and enforces that r1 is
// nonincreasing by carrying the best certificate forward (repair events are
// flagged on the points).
BoundaryCurve boundary_curve(const ProblemSpec& spec, const std::vector<double>& r2_grid,
                             const OptimizerOptions& opts = {});

struct WynerResult {
  Bits value = 0.0;
  TripleDist triple;
  double marginal_gap = 0.0;
  int restarts_used = 0;
};

// min I(X,Y;U) over X - U - Y with the given (x,y) marginal: the r2 = 0
// extreme of the region.
WynerResult wyner_common_information(const JointDist& pxy, int u_cardinality,
                                     const OptimizerOptions& opts = {});

// sum_w p(w) C(X;Y|W=w); the minimization separates across w.
Bits conditional_common_information(const Pmf& pw, const std::vector<JointDist>& per_w_joints,
                                    int u_cardinality, const OptimizerOptions& opts = {});

// Shared core: minimize max(I(X;U), I(X,Y;U) - r2) over triples whose (x,y)
// marginal matches `target`. Exposed for reuse by the game layer.
MinR1Result optimize_over_d(const JointDist& target, int u_cardinality, double r2,
                            const OptimizerOptions& opts);

}  // namespace chansim
