#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "chansim/prob.hpp"
#include "chansim/rate_region.hpp"

namespace chansim::game {

// Team payoff tensor Pi(x, y, z); z is the opponent's combined action.
struct Game {
  int x_size = 0;
  int y_size = 0;
  int z_size = 0;
  std::vector<double> payoff;  // row-major (x, y, z)

  static Game validated(int x_size, int y_size, int z_size, std::vector<double> payoff);
  double at(int x, int y, int z) const {
    return payoff[(static_cast<std::size_t>(x) * y_size + y) * z_size + z];
  }
};

// A mixture of (x, y) strategies labeled by the time-sharing variable W.
struct TimeSharingStrategy {
  Pmf pw;
  std::vector<JointDist> strategies;
};

struct PayoffReport {
  double theta = 0.0;             // worst-case expected payoff
  std::vector<int> argmin_z;      // opponent actions attaining the min, index order
  std::optional<Bits> rate;       // conditional common information, when computed
};

struct GameOptions {
  int w_cap = 3;                 // time-sharing support bound (upper-bound semantics)
  OptimizerOptions wyner;        // inner common-information search
  int search_iters = 60;         // payoff-constrained perturbation proposals
  double search_step = 0.10;
  std::uint64_t seed = 0x6A3EULL;

  GameOptions() {
    wyner.restarts = 10;
    wyner.stage_proposals = 1200;
  }
};

// Theta = min_z E[Pi(X,Y,z)] for a single memoryless strategy.
PayoffReport worst_case_payoff(const Game& g, const JointDist& pxy);

// W-averaged worst case (the opponent minimizes per revealed w) plus the
// strategy's conditional common information.
PayoffReport timeshare_payoff(const Game& g, const TimeSharingStrategy& s,
                              const GameOptions& opts = {});

// Exact-ish maximum of Theta over all correlated strategies: point masses,
// a fine simplex grid, and pairwise mass-transfer polish on the concave
// piecewise-linear objective.
double max_worst_case_payoff(const Game& g);
JointDist max_worst_case_strategy(const Game& g);

// Best product strategy found by alternating exact coordinate maximization;
// its theta is the no-communication baseline.
JointDist best_product_strategy(const Game& g, std::uint64_t seed = 0x6A3EULL);

struct R0Result {
  Bits rate = 0.0;
  TimeSharingStrategy strategy;
  double theta = 0.0;
};

// Upper bound on R0(theta_target): least conditional common information found
// among time-sharing strategies whose worst-case payoff meets the floor.
R0Result r0_upper(const Game& g, double theta_target, const GameOptions& opts = {});

struct R0CurvePoint {
  double theta = 0.0;
  Bits rate = 0.0;
  int w_support = 0;
  bool repaired = false;
  bool feasible = true;
  std::optional<TimeSharingStrategy> strategy;  // absent for infeasible rows
};

// r0_upper per grid point with monotone (nondecreasing) repair; infeasible
// thetas are flagged and the sweep continues.
std::vector<R0CurvePoint> r0_curve(const Game& g, const std::vector<double>& theta_grid,
                                   const GameOptions& opts = {});

}  // namespace chansim::game
