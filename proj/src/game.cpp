#include "chansim/game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace chansim::game {

Game Game::validated(int x_size, int y_size, int z_size, std::vector<double> payoff) {
  if (x_size < 1 || y_size < 1 || z_size < 1) throw ValidationError("game: nonpositive size");
  if (payoff.size() != static_cast<std::size_t>(x_size) * y_size * z_size) {
    throw ValidationError("game: payoff tensor size does not match sizes");
  }
  for (double v : payoff) {
    if (!std::isfinite(v)) throw ValidationError("game: non-finite payoff entry");
  }
  return Game{x_size, y_size, z_size, std::move(payoff)};
}

PayoffReport worst_case_payoff(const Game& g, const JointDist& pxy) {
  if (pxy.shape() != std::vector<int>{g.x_size, g.y_size}) {
    throw ValidationError("payoff: strategy shape does not match the game");
  }
  PayoffReport rep;
  std::vector<double> ez(static_cast<std::size_t>(g.z_size), 0.0);
  for (int x = 0; x < g.x_size; ++x) {
    for (int y = 0; y < g.y_size; ++y) {
      double p = pxy.probs()[static_cast<std::size_t>(x) * g.y_size + y];
      if (p == 0.0) continue;
      for (int z = 0; z < g.z_size; ++z) ez[static_cast<std::size_t>(z)] += p * g.at(x, y, z);
    }
  }
  rep.theta = *std::min_element(ez.begin(), ez.end());
  for (int z = 0; z < g.z_size; ++z) {
    if (ez[static_cast<std::size_t>(z)] <= rep.theta + 1e-12) rep.argmin_z.push_back(z);
  }
  return rep;
}

PayoffReport timeshare_payoff(const Game& g, const TimeSharingStrategy& s,
                              const GameOptions& opts) {
  if (s.strategies.size() != static_cast<std::size_t>(s.pw.size())) {
    throw ValidationError("timeshare: one strategy required per w");
  }
  PayoffReport rep;
  std::vector<bool> is_min(static_cast<std::size_t>(g.z_size), false);
  for (int w = 0; w < s.pw.size(); ++w) {
    PayoffReport inner = worst_case_payoff(g, s.strategies[static_cast<std::size_t>(w)]);
    rep.theta += s.pw.at(w) * inner.theta;
    if (s.pw.at(w) > 0.0) {
      for (int z : inner.argmin_z) is_min[static_cast<std::size_t>(z)] = true;
    }
  }
  for (int z = 0; z < g.z_size; ++z) {
    if (is_min[static_cast<std::size_t>(z)]) rep.argmin_z.push_back(z);
  }
  int u_card = g.x_size * g.y_size + 1;
  rep.rate = conditional_common_information(s.pw, s.strategies, u_card, opts.wyner);
  return rep;
}

// ---------------------------------------------------------------------------
// Maximizing the concave piecewise-linear map p -> min_z <p, c_z> over a
// probability simplex: point masses, a composition grid, then pairwise
// mass-transfer polish with exact line search.

namespace {

double min_lin(const std::vector<std::vector<double>>& cz, const std::vector<double>& p) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& c : cz) {
    double e = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) e += p[i] * c[i];
    best = std::min(best, e);
  }
  return best;
}

void grid_search(const std::vector<std::vector<double>>& cz, int dim, int m,
                 std::vector<double>& best_p, double& best_v) {
  std::vector<int> counts(static_cast<std::size_t>(dim), 0);
  std::vector<double> p(static_cast<std::size_t>(dim), 0.0);
  // Depth-first over compositions of m into dim nonnegative parts.
  auto rec = [&](auto&& self, int cell, int left) -> void {
    if (cell == dim - 1) {
      counts[static_cast<std::size_t>(cell)] = left;
      for (int i = 0; i < dim; ++i) {
        p[static_cast<std::size_t>(i)] = static_cast<double>(counts[static_cast<std::size_t>(i)]) / m;
      }
      double v = min_lin(cz, p);
      if (v > best_v) {
        best_v = v;
        best_p = p;
      }
      return;
    }
    for (int take = 0; take <= left; ++take) {
      counts[static_cast<std::size_t>(cell)] = take;
      self(self, cell + 1, left - take);
    }
  };
  rec(rec, 0, m);
}

void pairwise_polish(const std::vector<std::vector<double>>& cz, std::vector<double>& p,
                     double& value) {
  const int dim = static_cast<int>(p.size());
  const int nz = static_cast<int>(cz.size());
  std::vector<double> ez(static_cast<std::size_t>(nz), 0.0);
  auto recompute = [&]() {
    for (int z = 0; z < nz; ++z) {
      double e = 0.0;
      for (int i = 0; i < dim; ++i) e += p[static_cast<std::size_t>(i)] * cz[static_cast<std::size_t>(z)][static_cast<std::size_t>(i)];
      ez[static_cast<std::size_t>(z)] = e;
    }
  };
  recompute();
  for (int pass = 0; pass < 200; ++pass) {
    bool improved = false;
    for (int a = 0; a < dim; ++a) {
      for (int b = 0; b < dim; ++b) {
        if (a == b) continue;
        double lo = -p[static_cast<std::size_t>(b)], hi = p[static_cast<std::size_t>(a)];
        if (hi - lo < 1e-15) continue;
        // theta(t) = min_z (ez[z] + t dz[z]) on [lo, hi]; candidates are the
        // interval ends and pairwise line crossings.
        std::vector<double> dz(static_cast<std::size_t>(nz));
        for (int z = 0; z < nz; ++z) {
          dz[static_cast<std::size_t>(z)] = cz[static_cast<std::size_t>(z)][static_cast<std::size_t>(b)] -
                                            cz[static_cast<std::size_t>(z)][static_cast<std::size_t>(a)];
        }
        double cur = value;
        double best_t = 0.0, best_v = cur;
        auto consider = [&](double t) {
          if (t < lo || t > hi) return;
          double v = std::numeric_limits<double>::infinity();
          for (int z = 0; z < nz; ++z) {
            v = std::min(v, ez[static_cast<std::size_t>(z)] + t * dz[static_cast<std::size_t>(z)]);
          }
          if (v > best_v + 1e-13) {
            best_v = v;
            best_t = t;
          }
        };
        consider(lo);
        consider(hi);
        for (int z1 = 0; z1 < nz; ++z1) {
          for (int z2 = z1 + 1; z2 < nz; ++z2) {
            double denom = dz[static_cast<std::size_t>(z2)] - dz[static_cast<std::size_t>(z1)];
            if (std::abs(denom) < 1e-15) continue;
            consider((ez[static_cast<std::size_t>(z1)] - ez[static_cast<std::size_t>(z2)]) / denom);
          }
        }
        if (best_t != 0.0 && best_v > value + 1e-13) {
          p[static_cast<std::size_t>(a)] -= best_t;
          p[static_cast<std::size_t>(b)] += best_t;
          p[static_cast<std::size_t>(a)] = std::max(p[static_cast<std::size_t>(a)], 0.0);
          p[static_cast<std::size_t>(b)] = std::max(p[static_cast<std::size_t>(b)], 0.0);
          recompute();
          double v = std::numeric_limits<double>::infinity();
          for (int z = 0; z < nz; ++z) v = std::min(v, ez[static_cast<std::size_t>(z)]);
          value = v;
          improved = true;
        }
      }
    }
    if (!improved) break;
  }
}

struct MaximinResult {
  std::vector<double> p;
  double value = 0.0;
};

MaximinResult maximize_minlin(const std::vector<std::vector<double>>& cz, int dim) {
  MaximinResult res;
  res.p.assign(static_cast<std::size_t>(dim), 0.0);
  res.value = -std::numeric_limits<double>::infinity();
  // Point masses.
  for (int i = 0; i < dim; ++i) {
    std::vector<double> p(static_cast<std::size_t>(dim), 0.0);
    p[static_cast<std::size_t>(i)] = 1.0;
    double v = min_lin(cz, p);
    if (v > res.value) {
      res.value = v;
      res.p = p;
    }
  }
  // Composition grid, resolution by dimension.
  int m = dim <= 2 ? 128 : dim <= 4 ? 48 : dim <= 6 ? 20 : dim <= 9 ? 12 : 0;
  if (m > 0) grid_search(cz, dim, m, res.p, res.value);
  pairwise_polish(cz, res.p, res.value);
  return res;
}

std::vector<std::vector<double>> correlated_functionals(const Game& g) {
  std::vector<std::vector<double>> cz(static_cast<std::size_t>(g.z_size));
  for (int z = 0; z < g.z_size; ++z) {
    cz[static_cast<std::size_t>(z)].resize(static_cast<std::size_t>(g.x_size) * g.y_size);
    for (int x = 0; x < g.x_size; ++x) {
      for (int y = 0; y < g.y_size; ++y) {
        cz[static_cast<std::size_t>(z)][static_cast<std::size_t>(x) * g.y_size + y] = g.at(x, y, z);
      }
    }
  }
  return cz;
}

}  // namespace

double max_worst_case_payoff(const Game& g) {
  return maximize_minlin(correlated_functionals(g), g.x_size * g.y_size).value;
}

JointDist max_worst_case_strategy(const Game& g) {
  MaximinResult res = maximize_minlin(correlated_functionals(g), g.x_size * g.y_size);
  return JointDist::normalized({g.x_size, g.y_size}, std::move(res.p));
}

JointDist best_product_strategy(const Game& g, std::uint64_t seed) {
  RandomStream rng(seed, 0xFACEULL);
  double best_theta = -std::numeric_limits<double>::infinity();
  std::vector<double> best_px, best_py;
  for (int start = 0; start < 5; ++start) {
    std::vector<double> px(static_cast<std::size_t>(g.x_size), 1.0 / g.x_size);
    std::vector<double> py(static_cast<std::size_t>(g.y_size), 1.0 / g.y_size);
    if (start > 0) {
      double sx = 0.0, sy = 0.0;
      for (double& v : px) sx += (v = -std::log(1.0 - rng.next_unit()));
      for (double& v : py) sy += (v = -std::log(1.0 - rng.next_unit()));
      for (double& v : px) v /= sx;
      for (double& v : py) v /= sy;
    }
    double theta = -std::numeric_limits<double>::infinity();
    for (int round = 0; round < 40; ++round) {
      // Exact best response of py to px on the restricted maximin.
      std::vector<std::vector<double>> cy(static_cast<std::size_t>(g.z_size),
                                          std::vector<double>(static_cast<std::size_t>(g.y_size), 0.0));
      for (int z = 0; z < g.z_size; ++z) {
        for (int y = 0; y < g.y_size; ++y) {
          double e = 0.0;
          for (int x = 0; x < g.x_size; ++x) e += px[static_cast<std::size_t>(x)] * g.at(x, y, z);
          cy[static_cast<std::size_t>(z)][static_cast<std::size_t>(y)] = e;
        }
      }
      py = maximize_minlin(cy, g.y_size).p;

      std::vector<std::vector<double>> cx(static_cast<std::size_t>(g.z_size),
                                          std::vector<double>(static_cast<std::size_t>(g.x_size), 0.0));
      for (int z = 0; z < g.z_size; ++z) {
        for (int x = 0; x < g.x_size; ++x) {
          double e = 0.0;
          for (int y = 0; y < g.y_size; ++y) e += py[static_cast<std::size_t>(y)] * g.at(x, y, z);
          cx[static_cast<std::size_t>(z)][static_cast<std::size_t>(x)] = e;
        }
      }
      MaximinResult rx = maximize_minlin(cx, g.x_size);
      px = rx.p;
      if (rx.value <= theta + 1e-13) {
        theta = rx.value;
        break;
      }
      theta = rx.value;
    }
    if (theta > best_theta) {
      best_theta = theta;
      best_px = px;
      best_py = py;
    }
  }
  std::vector<double> table(static_cast<std::size_t>(g.x_size) * g.y_size);
  for (int x = 0; x < g.x_size; ++x) {
    for (int y = 0; y < g.y_size; ++y) {
      table[static_cast<std::size_t>(x) * g.y_size + y] =
          best_px[static_cast<std::size_t>(x)] * best_py[static_cast<std::size_t>(y)];
    }
  }
  return JointDist::normalized({g.x_size, g.y_size}, std::move(table));
}

namespace {

TimeSharingStrategy single_strategy(const JointDist& pxy) {
  return TimeSharingStrategy{Pmf::from_weights({1.0}), {pxy}};
}

double strategy_theta(const Game& g, const TimeSharingStrategy& s) {
  double theta = 0.0;
  for (int w = 0; w < s.pw.size(); ++w) {
    theta += s.pw.at(w) * worst_case_payoff(g, s.strategies[static_cast<std::size_t>(w)]).theta;
  }
  return theta;
}

Bits strategy_rate(const Game& g, const TimeSharingStrategy& s, const GameOptions& opts) {
  return conditional_common_information(s.pw, s.strategies, g.x_size * g.y_size + 1, opts.wyner);
}

}  // namespace

R0Result r0_upper(const Game& g, double theta_target, const GameOptions& opts) {
  double theta_max = max_worst_case_payoff(g);
  if (theta_target > theta_max + 1e-9) {
    std::ostringstream os;
    os << "r0: payoff floor " << theta_target << " exceeds the correlated maximum " << theta_max;
    throw ValidationError(os.str());
  }

  JointDist corr = max_worst_case_strategy(g);
  JointDist prod = best_product_strategy(g, opts.seed);
  double theta_corr = worst_case_payoff(g, corr).theta;
  double theta_prod = worst_case_payoff(g, prod).theta;

  struct Candidate {
    TimeSharingStrategy s;
    double theta = 0.0;
    Bits rate = 0.0;
  };
  const double feas_tol = 1e-9;
  std::vector<Candidate> cands;
  auto add = [&](TimeSharingStrategy s) {
    double th = strategy_theta(g, s);
    if (th + feas_tol < theta_target) return;
    Bits rate = strategy_rate(g, s, opts);
    cands.push_back(Candidate{std::move(s), th, rate});
  };

  add(single_strategy(corr));
  add(single_strategy(prod));
  if (theta_corr > theta_prod + 1e-15) {
    double lambda = std::clamp((theta_target - theta_prod) / (theta_corr - theta_prod), 0.0, 1.0);
    if (lambda > 0.0 && lambda < 1.0) {
      add(TimeSharingStrategy{Pmf::from_weights({1.0 - lambda, lambda}), {prod, corr}});
    }
  }
  if (cands.empty()) {
    // theta_max itself meets the floor, so the correlated maximizer must have
    // been admitted.
    throw InternalCheckError("r0: no feasible candidate at a feasible floor");
  }

  auto best_it = std::min_element(cands.begin(), cands.end(),
                                  [](const Candidate& a, const Candidate& b) { return a.rate < b.rate; });
  Candidate best = *best_it;

  // Payoff-constrained perturbation: nudge strategy cells or the time-sharing
  // weights, keep the floor satisfied, accept rate improvements.
  RandomStream rng(opts.seed, 0xC0DEULL);
  Candidate state = best;
  double step = opts.search_step;
  for (int it = 0; it < opts.search_iters; ++it) {
    TimeSharingStrategy trial = state.s;
    int nw = trial.pw.size();
    bool touch_pw = nw > 1 && (rng.next_u64() & 3) == 0;
    if (touch_pw) {
      std::vector<double> w = trial.pw.probs();
      std::size_t c = rng.next_u64() % w.size();
      w[c] = std::max(0.0, w[c] + (2.0 * rng.next_unit() - 1.0) * step);
      double sum = 0.0;
      for (double v : w) sum += v;
      if (sum <= 0.0) continue;
      for (double& v : w) v /= sum;
      trial.pw = Pmf::from_weights(w);
    } else {
      int w = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(nw));
      std::vector<double> cells = trial.strategies[static_cast<std::size_t>(w)].probs();
      std::size_t c = rng.next_u64() % cells.size();
      cells[c] = std::max(0.0, cells[c] + (2.0 * rng.next_unit() - 1.0) * step);
      double sum = 0.0;
      for (double v : cells) sum += v;
      if (sum <= 0.0) continue;
      for (double& v : cells) v /= sum;
      trial.strategies[static_cast<std::size_t>(w)] =
          JointDist::normalized({g.x_size, g.y_size}, std::move(cells));
    }
    double th = strategy_theta(g, trial);
    if (th + feas_tol < theta_target) {
      step *= 0.9;
      continue;
    }
    Bits rate = strategy_rate(g, trial, opts);
    if (rate < state.rate - 1e-9) {
      state = Candidate{std::move(trial), th, rate};
    } else {
      step *= 0.95;
    }
    if (step < 1e-4) break;
  }
  if (state.rate < best.rate) best = state;

  return R0Result{best.rate, best.s, best.theta};
}

std::vector<R0CurvePoint> r0_curve(const Game& g, const std::vector<double>& theta_grid,
                                   const GameOptions& opts) {
  if (!std::is_sorted(theta_grid.begin(), theta_grid.end())) {
    throw ValidationError("r0 curve: theta grid must be ascending");
  }
  double theta_max = max_worst_case_payoff(g);
  std::vector<R0CurvePoint> points;
  for (double theta : theta_grid) {
    R0CurvePoint pt;
    pt.theta = theta;
    if (theta > theta_max + 1e-9) {
      pt.feasible = false;
      pt.rate = std::numeric_limits<double>::quiet_NaN();
      points.push_back(pt);
      continue;
    }
    R0Result res = r0_upper(g, theta, opts);
    pt.rate = res.rate;
    pt.w_support = 0;
    for (int w = 0; w < res.strategy.pw.size(); ++w) {
      if (res.strategy.pw.at(w) > 1e-9) ++pt.w_support;
    }
    pt.strategy = std::move(res.strategy);
    points.push_back(pt);
  }
  // Monotone repair: a certificate for a higher floor is feasible for every
  // lower one, so carry minima leftward.
  for (std::size_t k = points.size(); k-- > 1;) {
    R0CurvePoint& left = points[k - 1];
    const R0CurvePoint& right = points[k];
    if (left.feasible && right.feasible && left.rate > right.rate) {
      left.rate = right.rate;
      left.w_support = right.w_support;
      left.strategy = right.strategy;
      left.repaired = true;
    }
  }
  return points;
}

}  // namespace chansim::game
