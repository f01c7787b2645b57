#include "chansim/rate_region.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "chansim/bec.hpp"

namespace chansim {

ProblemSpec ProblemSpec::make(Pmf source, Channel channel, std::optional<int> u_cardinality) {
  if (channel.input_size() != source.size()) {
    throw ValidationError("spec: channel input size does not match source alphabet");
  }
  int cap = source.size() * channel.output_size() + 1;
  int u = u_cardinality.value_or(cap);
  if (u < 1 || u > cap) {
    std::ostringstream os;
    os << "spec: u_cardinality " << u << " outside [1, " << cap << "]";
    throw ValidationError(os.str());
  }
  return ProblemSpec{std::move(source), std::move(channel), u};
}

JointDist ProblemSpec::target() const {
  int nx = x_size(), ny = y_size();
  std::vector<double> table(static_cast<std::size_t>(nx) * ny);
  for (int x = 0; x < nx; ++x) {
    for (int y = 0; y < ny; ++y) {
      table[static_cast<std::size_t>(x) * ny + y] = source.at(x) * channel.at(x, y);
    }
  }
  return JointDist::normalized({nx, ny}, std::move(table));
}

RegionCertificate make_certificate(const TripleDist& t, const JointDist& target) {
  JointDist joint = joint_from_markov(t);
  RegionCertificate cert{t, mutual_information(joint, {0}, {2}),
                         mutual_information(joint, {0, 1}, {2}),
                         total_variation(joint.marginal({0, 1}), target)};
  // I(X;U) <= I(X,Y;U) for every joint; a violation is a computation bug.
  if (cert.i_xu > cert.i_xyu + 1e-9) {
    throw InternalCheckError("certificate: I(X;U) exceeded I(X,Y;U)");
  }
  return cert;
}

MembershipResult check_membership(const ProblemSpec& spec, const RatePoint& rp,
                                  const TripleDist& t, double tol) {
  if (t.x_size() != spec.x_size() || t.y_size() != spec.y_size()) {
    throw ValidationError("membership: triple alphabet sizes do not match the spec");
  }
  if (rp.r1 < 0.0 || rp.r2 < 0.0) throw ValidationError("membership: negative rate");
  MembershipResult res;
  res.cert = make_certificate(t, spec.target());
  if (res.cert.marginal_gap > tol) {
    res.reason = "marginal gap exceeds tolerance";
  } else if (rp.r1 < res.cert.i_xu - tol) {
    res.reason = "description-rate constraint R1 >= I(X;U) violated";
  } else if (rp.r1 + rp.r2 < res.cert.i_xyu - tol) {
    res.reason = "sum-rate constraint R1 + R2 >= I(X,Y;U) violated";
  } else {
    res.accepted = true;
  }
  return res;
}

EpsilonParams g_epsilon(double epsilon, int x_size, int y_size) {
  if (!(epsilon > 0.0 && epsilon < 0.25)) {
    std::ostringstream os;
    os << "g_epsilon: epsilon " << epsilon << " outside (0, 1/4)";
    throw ValidationError(os.str());
  }
  if (x_size < 1 || y_size < 1) throw ValidationError("g_epsilon: nonpositive alphabet size");
  double g = 4.0 * epsilon *
             (std::log2(static_cast<double>(x_size)) + std::log2(static_cast<double>(y_size)) +
              std::log2(1.0 / epsilon));
  return EpsilonParams{epsilon, g};
}

MembershipResult epsilon_membership(const ProblemSpec& spec, const RatePoint& rp,
                                    const TripleDist& t, const EpsilonParams& ep) {
  if (t.x_size() != spec.x_size() || t.y_size() != spec.y_size()) {
    throw ValidationError("membership: triple alphabet sizes do not match the spec");
  }
  if (rp.r1 < 0.0 || rp.r2 < 0.0) throw ValidationError("membership: negative rate");
  const double slack = 2.0 * ep.g_value;
  const double float_tol = 1e-12;
  MembershipResult res;
  res.cert = make_certificate(t, spec.target());
  if (!(res.cert.marginal_gap < ep.epsilon)) {
    res.reason = "marginal gap not strictly below epsilon";
  } else if (rp.r1 < res.cert.i_xu - slack - float_tol) {
    res.reason = "relaxed description-rate constraint violated";
  } else if (rp.r1 + rp.r2 < res.cert.i_xyu - slack - float_tol) {
    res.reason = "relaxed sum-rate constraint violated";
  } else {
    res.accepted = true;
  }
  return res;
}

// ---------------------------------------------------------------------------
// Optimizer internals.

namespace {

// Factored search state: one simplex for pU and one per kernel row.
struct TripleParams {
  int nx = 0, ny = 0, nu = 0;
  std::vector<double> pu;    // |U|
  std::vector<double> xgu;   // |U| x |X|
  std::vector<double> ygu;   // |U| x |Y|
};

struct Evaluation {
  double i_xu = 0.0;
  double i_xyu = 0.0;
  double tv = 0.0;

  double needed_r1(double r2) const { return std::max({i_xu, i_xyu - r2, 0.0}); }
  double score(double r2, double lambda) const { return needed_r1(r2) + lambda * tv; }
};

double entropy_bits(const std::vector<double>& p) {
  double h = 0.0;
  for (double v : p) {
    if (v > 0.0) h -= v * std::log2(v);
  }
  return h < 0.0 ? 0.0 : h;
}

// Direct evaluation on the factored form; hot path of the search.
Evaluation evaluate(const TripleParams& s, const std::vector<double>& target) {
  int nx = s.nx, ny = s.ny, nu = s.nu;
  std::vector<double> pxy(static_cast<std::size_t>(nx) * ny, 0.0);
  std::vector<double> px(nx, 0.0);
  double h_xyu = 0.0, h_xu = 0.0;
  for (int u = 0; u < nu; ++u) {
    double wu = s.pu[u];
    if (wu <= 0.0) continue;
    for (int x = 0; x < nx; ++x) {
      double wxu = wu * s.xgu[static_cast<std::size_t>(u) * nx + x];
      if (wxu <= 0.0) continue;
      px[x] += wxu;
      h_xu -= wxu * std::log2(wxu);
      for (int y = 0; y < ny; ++y) {
        double w = wxu * s.ygu[static_cast<std::size_t>(u) * ny + y];
        if (w <= 0.0) continue;
        pxy[static_cast<std::size_t>(x) * ny + y] += w;
        h_xyu -= w * std::log2(w);
      }
    }
  }
  std::vector<double> py(ny, 0.0);
  for (int x = 0; x < nx; ++x) {
    for (int y = 0; y < ny; ++y) py[y] += pxy[static_cast<std::size_t>(x) * ny + y];
  }
  double h_u = entropy_bits(s.pu);
  double h_x = entropy_bits(px);
  double h_xy = entropy_bits(pxy);

  Evaluation ev;
  ev.i_xu = std::max(0.0, h_x + h_u - h_xu);
  ev.i_xyu = std::max(0.0, h_xy + h_u - h_xyu);
  double tv = 0.0;
  for (std::size_t i = 0; i < pxy.size(); ++i) tv += std::abs(pxy[i] - target[i]);
  ev.tv = 0.5 * tv;
  return ev;
}

void renormalize_block(std::vector<double>& v, std::size_t begin, std::size_t len) {
  double sum = 0.0;
  for (std::size_t i = begin; i < begin + len; ++i) sum += v[i];
  if (sum <= 0.0) {
    for (std::size_t i = begin; i < begin + len; ++i) v[i] = 1.0 / static_cast<double>(len);
    return;
  }
  for (std::size_t i = begin; i < begin + len; ++i) v[i] /= sum;
}

void random_simplex(std::vector<double>& v, std::size_t begin, std::size_t len, RandomStream& rng) {
  // Exponential weights give a flat Dirichlet draw after normalization.
  for (std::size_t i = begin; i < begin + len; ++i) {
    v[i] = -std::log(1.0 - rng.next_unit());
  }
  renormalize_block(v, begin, len);
}

TripleParams uniform_params(int nx, int ny, int nu) {
  TripleParams s;
  s.nx = nx;
  s.ny = ny;
  s.nu = nu;
  s.pu.assign(nu, 1.0 / nu);
  s.xgu.assign(static_cast<std::size_t>(nu) * nx, 1.0 / nx);
  s.ygu.assign(static_cast<std::size_t>(nu) * ny, 1.0 / ny);
  return s;
}

// Conditionals of the target, used by several seeds.
struct TargetViews {
  std::vector<double> px, py;
  std::vector<double> y_given_x;  // |X| x |Y|
  std::vector<double> x_given_y;  // |Y| x |X|
};

TargetViews target_views(const std::vector<double>& t, int nx, int ny) {
  TargetViews v;
  v.px.assign(nx, 0.0);
  v.py.assign(ny, 0.0);
  for (int x = 0; x < nx; ++x) {
    for (int y = 0; y < ny; ++y) {
      double w = t[static_cast<std::size_t>(x) * ny + y];
      v.px[x] += w;
      v.py[y] += w;
    }
  }
  v.y_given_x.assign(static_cast<std::size_t>(nx) * ny, 0.0);
  v.x_given_y.assign(static_cast<std::size_t>(ny) * nx, 0.0);
  for (int x = 0; x < nx; ++x) {
    for (int y = 0; y < ny; ++y) {
      double w = t[static_cast<std::size_t>(x) * ny + y];
      v.y_given_x[static_cast<std::size_t>(x) * ny + y] = v.px[x] > 0.0 ? w / v.px[x] : (y == 0 ? 1.0 : 0.0);
      v.x_given_y[static_cast<std::size_t>(y) * nx + x] = v.py[y] > 0.0 ? w / v.py[y] : (x == 0 ? 1.0 : 0.0);
    }
  }
  return v;
}

TripleParams seed_u_equals_x(const TargetViews& tv, int nx, int ny, int nu) {
  TripleParams s = uniform_params(nx, ny, nu);
  std::fill(s.pu.begin(), s.pu.end(), 0.0);
  for (int u = 0; u < nu; ++u) {
    if (u < nx) {
      s.pu[u] = tv.px[u];
      for (int x = 0; x < nx; ++x) s.xgu[static_cast<std::size_t>(u) * nx + x] = (x == u) ? 1.0 : 0.0;
      for (int y = 0; y < ny; ++y) s.ygu[static_cast<std::size_t>(u) * ny + y] = tv.y_given_x[static_cast<std::size_t>(u) * ny + y];
    }
  }
  renormalize_block(s.pu, 0, s.pu.size());
  return s;
}

TripleParams seed_u_equals_y(const TargetViews& tv, int nx, int ny, int nu) {
  TripleParams s = uniform_params(nx, ny, nu);
  std::fill(s.pu.begin(), s.pu.end(), 0.0);
  for (int u = 0; u < nu; ++u) {
    if (u < ny) {
      s.pu[u] = tv.py[u];
      for (int y = 0; y < ny; ++y) s.ygu[static_cast<std::size_t>(u) * ny + y] = (y == u) ? 1.0 : 0.0;
      for (int x = 0; x < nx; ++x) s.xgu[static_cast<std::size_t>(u) * nx + x] = tv.x_given_y[static_cast<std::size_t>(u) * nx + x];
    }
  }
  renormalize_block(s.pu, 0, s.pu.size());
  return s;
}

TripleParams seed_u_constant(const TargetViews& tv, int nx, int ny, int nu) {
  TripleParams s = uniform_params(nx, ny, nu);
  std::fill(s.pu.begin(), s.pu.end(), 0.0);
  s.pu[0] = 1.0;
  for (int x = 0; x < nx; ++x) s.xgu[x] = tv.px[x];
  for (int y = 0; y < ny; ++y) s.ygu[y] = tv.py[y];
  return s;
}

TripleParams params_from_triple(const TripleDist& t, int nx, int ny, int nu) {
  TripleParams s = uniform_params(nx, ny, nu);
  std::fill(s.pu.begin(), s.pu.end(), 0.0);
  for (int u = 0; u < t.u_size() && u < nu; ++u) {
    s.pu[u] = t.pu().at(u);
    for (int x = 0; x < nx; ++x) s.xgu[static_cast<std::size_t>(u) * nx + x] = t.x_given_u().at(u, x);
    for (int y = 0; y < ny; ++y) s.ygu[static_cast<std::size_t>(u) * ny + y] = t.y_given_u().at(u, y);
  }
  renormalize_block(s.pu, 0, s.pu.size());
  return s;
}

// One proposal: nudge a coordinate inside one simplex block and re-project.
bool propose(TripleParams& s, RandomStream& rng, double step) {
  int blocks = 1 + 2 * s.nu;
  int b = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(blocks));
  std::vector<double>* vec = nullptr;
  std::size_t begin = 0, len = 0;
  if (b == 0) {
    vec = &s.pu;
    len = s.pu.size();
  } else if (b <= s.nu) {
    vec = &s.xgu;
    begin = static_cast<std::size_t>(b - 1) * s.nx;
    len = static_cast<std::size_t>(s.nx);
  } else {
    vec = &s.ygu;
    begin = static_cast<std::size_t>(b - 1 - s.nu) * s.ny;
    len = static_cast<std::size_t>(s.ny);
  }
  if (len < 2) return false;
  std::size_t c = begin + rng.next_u64() % len;
  double delta = (2.0 * rng.next_unit() - 1.0) * step;
  double nv = (*vec)[c] + delta;
  (*vec)[c] = nv < 0.0 ? 0.0 : nv;
  renormalize_block(*vec, begin, len);
  return true;
}

void local_search(TripleParams& s, const std::vector<double>& target, double r2, double lambda,
                  const OptimizerOptions& opts, RandomStream& rng) {
  double score = evaluate(s, target).score(r2, lambda);
  double step = opts.init_step;
  int stall = 0;
  TripleParams trial = s;
  for (int it = 0; it < opts.stage_proposals; ++it) {
    trial = s;
    if (!propose(trial, rng, step)) continue;
    double trial_score = evaluate(trial, target).score(r2, lambda);
    if (trial_score < score - 1e-15) {
      s = trial;
      score = trial_score;
      stall = 0;
    } else if (++stall >= opts.stall_limit) {
      stall = 0;
      step *= 0.5;
      if (step < 1e-7) break;
    }
  }
}

// Alternating projection back onto the constraint set: impose the exact
// (x,y) marginal, then refactor through U to restore Markovity. Both steps
// move mass by O(current gap), so the pair contracts toward the set.
void polish(TripleParams& s, const std::vector<double>& target, const OptimizerOptions& opts) {
  int nx = s.nx, ny = s.ny, nu = s.nu;
  std::vector<double> joint(static_cast<std::size_t>(nx) * ny * nu);
  for (int round = 0; round < opts.polish_rounds; ++round) {
    // Current joint and marginal.
    std::vector<double> pxy(static_cast<std::size_t>(nx) * ny, 0.0);
    for (int x = 0; x < nx; ++x) {
      for (int y = 0; y < ny; ++y) {
        for (int u = 0; u < nu; ++u) {
          double w = s.pu[u] * s.xgu[static_cast<std::size_t>(u) * nx + x] *
                     s.ygu[static_cast<std::size_t>(u) * ny + y];
          joint[(static_cast<std::size_t>(x) * ny + y) * nu + u] = w;
          pxy[static_cast<std::size_t>(x) * ny + y] += w;
        }
      }
    }
    double gap = 0.0;
    for (std::size_t i = 0; i < pxy.size(); ++i) {
      gap += std::abs(pxy[i] - target[static_cast<std::size_t>(i)]);
    }
    if (0.5 * gap <= opts.polish_target) break;

    // Marginal fix: scale each (x,y) fiber to the target mass. Fibers the
    // triple cannot reach are filled along pU.
    for (int x = 0; x < nx; ++x) {
      for (int y = 0; y < ny; ++y) {
        std::size_t cell = static_cast<std::size_t>(x) * ny + y;
        double have = pxy[cell], want = target[cell];
        double* fiber = &joint[cell * nu];
        if (have > 0.0) {
          double scale = want / have;
          for (int u = 0; u < nu; ++u) fiber[u] *= scale;
        } else {
          for (int u = 0; u < nu; ++u) fiber[u] = want * s.pu[u];
        }
      }
    }

    // Markov refactor: extract pU and the two conditionals from the fixed
    // joint; this is the reverse I-projection onto the factored family.
    std::vector<double> pu(nu, 0.0);
    std::vector<double> pxu(static_cast<std::size_t>(nu) * nx, 0.0);
    std::vector<double> pyu(static_cast<std::size_t>(nu) * ny, 0.0);
    for (int x = 0; x < nx; ++x) {
      for (int y = 0; y < ny; ++y) {
        const double* fiber = &joint[(static_cast<std::size_t>(x) * ny + y) * nu];
        for (int u = 0; u < nu; ++u) {
          pu[u] += fiber[u];
          pxu[static_cast<std::size_t>(u) * nx + x] += fiber[u];
          pyu[static_cast<std::size_t>(u) * ny + y] += fiber[u];
        }
      }
    }
    for (int u = 0; u < nu; ++u) {
      if (pu[u] > 0.0) {
        for (int x = 0; x < nx; ++x) pxu[static_cast<std::size_t>(u) * nx + x] /= pu[u];
        for (int y = 0; y < ny; ++y) pyu[static_cast<std::size_t>(u) * ny + y] /= pu[u];
      } else {
        for (int x = 0; x < nx; ++x) pxu[static_cast<std::size_t>(u) * nx + x] = 1.0 / nx;
        for (int y = 0; y < ny; ++y) pyu[static_cast<std::size_t>(u) * ny + y] = 1.0 / ny;
      }
    }
    s.pu = std::move(pu);
    s.xgu = std::move(pxu);
    s.ygu = std::move(pyu);
    renormalize_block(s.pu, 0, s.pu.size());
    for (int u = 0; u < nu; ++u) {
      renormalize_block(s.xgu, static_cast<std::size_t>(u) * nx, nx);
      renormalize_block(s.ygu, static_cast<std::size_t>(u) * ny, ny);
    }
  }
}

TripleDist to_triple(const TripleParams& s) {
  std::vector<double> pu(s.pu);
  // Clean sub-1e-15 dust so supports are stable across platforms.
  for (double& v : pu) {
    if (v < 1e-15) v = 0.0;
  }
  double sum = 0.0;
  for (double v : pu) sum += v;
  for (double& v : pu) v = sum > 0.0 ? v / sum : 1.0 / pu.size();
  return TripleDist(Pmf::from_weights(pu),
                    Channel::validated(s.nu, s.nx, s.xgu),
                    Channel::validated(s.nu, s.ny, s.ygu));
}

struct Candidate {
  TripleParams params;
  Evaluation ev;
  bool valid = false;
};

int support_size(const std::vector<double>& pu) {
  int n = 0;
  for (double v : pu) {
    if (v > 1e-9) ++n;
  }
  return n;
}

// Feasible-first, then value, then smallest support, then lexicographic.
bool better_than(const Candidate& a, const Candidate& b, double r2, double feasible_tv) {
  if (!b.valid) return true;
  if (!a.valid) return false;
  bool fa = a.ev.tv <= feasible_tv, fb = b.ev.tv <= feasible_tv;
  if (fa != fb) return fa;
  double va = a.ev.needed_r1(r2), vb = b.ev.needed_r1(r2);
  if (std::abs(va - vb) > 1e-12) return va < vb;
  int sa = support_size(a.params.pu), sb = support_size(b.params.pu);
  if (sa != sb) return sa < sb;
  if (a.params.pu != b.params.pu) return a.params.pu < b.params.pu;
  if (a.params.xgu != b.params.xgu) return a.params.xgu < b.params.xgu;
  return a.params.ygu < b.params.ygu;
}

}  // namespace

MinR1Result optimize_over_d(const JointDist& target, int u_cardinality, double r2,
                            const OptimizerOptions& opts) {
  if (target.rank() != 2) throw ValidationError("optimize: target must be a 2-axis joint");
  if (r2 < 0.0) throw ValidationError("optimize: negative r2");
  int nx = target.shape()[0], ny = target.shape()[1];
  int cap = nx * ny + 1;
  if (u_cardinality < 1 || u_cardinality > cap) {
    throw ValidationError("optimize: u_cardinality outside the Caratheodory cap");
  }
  const std::vector<double>& t = target.probs();
  TargetViews views = target_views(t, nx, ny);

  std::vector<TripleParams> seeds;
  if (u_cardinality >= nx) seeds.push_back(seed_u_equals_x(views, nx, ny, u_cardinality));
  if (u_cardinality >= ny) seeds.push_back(seed_u_equals_y(views, nx, ny, u_cardinality));
  seeds.push_back(seed_u_constant(views, nx, ny, u_cardinality));
  if (u_cardinality >= 3) {
    if (auto pe = bec::detect_bec_target(target)) {
      double p2 = bec::p2_for_r2(*pe, r2);
      seeds.push_back(params_from_triple(
          bec::cascade_triple(bec::CascadeParams::make(*pe, p2)), nx, ny, u_cardinality));
    }
  }

  Candidate best;
  int restarts = std::max<int>(opts.restarts, static_cast<int>(seeds.size()));
  for (int r = 0; r < restarts; ++r) {
    RandomStream rng(opts.seed, static_cast<std::uint64_t>(r) + 1);
    TripleParams s;
    if (r < static_cast<int>(seeds.size())) {
      s = seeds[static_cast<std::size_t>(r)];
      // The seed itself competes; search and polish may only improve on it.
      Candidate raw{s, evaluate(s, t), true};
      if (better_than(raw, best, r2, opts.feasible_tv)) best = raw;
    } else {
      s = uniform_params(nx, ny, u_cardinality);
      random_simplex(s.pu, 0, s.pu.size(), rng);
      for (int u = 0; u < u_cardinality; ++u) {
        random_simplex(s.xgu, static_cast<std::size_t>(u) * nx, nx, rng);
        random_simplex(s.ygu, static_cast<std::size_t>(u) * ny, ny, rng);
      }
    }

    double lambda = opts.penalty_init;
    while (true) {
      local_search(s, t, r2, lambda, opts, rng);
      if (evaluate(s, t).tv <= 1e-6 || lambda >= opts.penalty_max) break;
      lambda *= 10.0;
    }
    polish(s, t, opts);

    Candidate cand{s, evaluate(s, t), true};
    if (better_than(cand, best, r2, opts.feasible_tv)) best = cand;
  }

  if (!best.valid || best.ev.tv > opts.membership_tol) {
    // Unreachable: the U = const seed is always present and polishes to the
    // target within rounding.
    throw InternalCheckError("optimize: no feasible certificate found");
  }

  MinR1Result res;
  res.cert = make_certificate(to_triple(best.params), target);
  double needed = std::max({res.cert.i_xu, res.cert.i_xyu - r2, 0.0});
  res.point = RatePoint{needed, r2};
  res.restarts_used = restarts;
  return res;
}

MinR1Result min_r1_at_r2(const ProblemSpec& spec, double r2, const OptimizerOptions& opts) {
  return optimize_over_d(spec.target(), spec.u_cardinality, r2, opts);
}

BoundaryCurve boundary_curve(const ProblemSpec& spec, const std::vector<double>& r2_grid,
                             const OptimizerOptions& opts) {
  if (r2_grid.empty()) throw ValidationError("boundary: empty r2 grid");
  if (!std::is_sorted(r2_grid.begin(), r2_grid.end())) {
    throw ValidationError("boundary: r2 grid must be ascending");
  }
  BoundaryCurve curve;
  curve.r2_grid = r2_grid;
  for (double r2 : r2_grid) {
    MinR1Result res = min_r1_at_r2(spec, r2, opts);
    curve.points.push_back(BoundaryPoint{res.point, res.cert, res.restarts_used, false});
  }
  // Monotone repair: the region boundary cannot increase with r2, so carry
  // the best certificate rightward over any local-search noise.
  for (std::size_t k = 1; k < curve.points.size(); ++k) {
    const BoundaryPoint& prev = curve.points[k - 1];
    BoundaryPoint& cur = curve.points[k];
    if (cur.point.r1 > prev.point.r1) {
      cur.cert = prev.cert;
      cur.point.r1 = prev.point.r1;
      cur.repaired = true;
    }
  }
  return curve;
}

WynerResult wyner_common_information(const JointDist& pxy, int u_cardinality,
                                     const OptimizerOptions& opts) {
  MinR1Result res = optimize_over_d(pxy, u_cardinality, 0.0, opts);
  return WynerResult{res.cert.i_xyu, res.cert.triple, res.cert.marginal_gap, res.restarts_used};
}

Bits conditional_common_information(const Pmf& pw, const std::vector<JointDist>& per_w_joints,
                                    int u_cardinality, const OptimizerOptions& opts) {
  if (static_cast<std::size_t>(pw.size()) != per_w_joints.size()) {
    throw ValidationError("conditional common information: one joint required per w");
  }
  for (std::size_t w = 1; w < per_w_joints.size(); ++w) {
    if (per_w_joints[w].shape() != per_w_joints[0].shape()) {
      throw ValidationError("conditional common information: joint shapes differ across w");
    }
  }
  double acc = 0.0;
  for (int w = 0; w < pw.size(); ++w) {
    if (pw.at(w) <= 0.0) continue;
    acc += pw.at(w) * wyner_common_information(per_w_joints[static_cast<std::size_t>(w)],
                                               u_cardinality, opts)
                          .value;
  }
  return acc;
}

}  // namespace chansim
