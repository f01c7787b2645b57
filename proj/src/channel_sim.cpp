#include "chansim/channel_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace chansim::sim {

namespace {

std::uint64_t checked_pow(int base, int exp, std::uint64_t cap, const char* what) {
  std::uint64_t v = 1;
  for (int k = 0; k < exp; ++k) {
    if (v > cap / static_cast<std::uint64_t>(base)) {
      std::ostringstream os;
      os << what << ": " << base << "^" << exp << " exceeds cap " << cap;
      throw CapExceededError(os.str());
    }
    v *= static_cast<std::uint64_t>(base);
  }
  return v;
}

// In-place iid expansion: buf over prefixes of length k becomes length k+1.
void expand_iid(std::vector<double>& buf, std::size_t& len, const double* row, int width) {
  for (std::size_t idx = len; idx-- > 0;) {
    double base = buf[idx];
    for (int s = width - 1; s >= 0; --s) {
      buf[idx * static_cast<std::size_t>(width) + static_cast<std::size_t>(s)] = base * row[s];
    }
  }
  len *= static_cast<std::size_t>(width);
}

int sample_row(const Channel& ch, int in, RandomStream& rng) {
  double u = rng.next_unit();
  double cum = 0.0;
  int last_positive = -1;
  for (int s = 0; s < ch.output_size(); ++s) {
    double q = ch.at(in, s);
    if (q > 0.0) last_positive = s;
    cum += q;
    if (u < cum) return s;
  }
  return last_positive >= 0 ? last_positive : ch.output_size() - 1;
}

std::string seq_to_string(const std::vector<int>& seq) {
  std::ostringstream os;
  os << "(";
  for (std::size_t k = 0; k < seq.size(); ++k) os << (k ? "," : "") << seq[k];
  os << ")";
  return os.str();
}

}  // namespace

std::uint64_t index_count(int n, double rate) {
  if (n < 1) throw ValidationError("codebook: block length must be >= 1");
  if (rate < 0.0) throw ValidationError("codebook: negative rate");
  double x = std::exp2(static_cast<double>(n) * rate);
  if (!(x < 9e15)) throw CapExceededError("codebook: 2^{nR} exceeds the index range");
  double r = std::round(x);
  if (std::abs(x - r) <= 1e-9 * std::max(1.0, x)) return static_cast<std::uint64_t>(r);
  return static_cast<std::uint64_t>(std::ceil(x));
}

Codebook draw_codebook(const Pmf& pu, int n, double r1, double r2, std::uint64_t seed,
                       const Caps& caps) {
  std::uint64_t ni = index_count(n, r1);
  std::uint64_t nj = index_count(n, r2);
  if (ni > caps.max_codewords || nj > caps.max_codewords ||
      ni > caps.max_codewords / nj) {
    std::ostringstream os;
    os << "codebook: " << ni << " x " << nj << " codewords exceeds cap " << caps.max_codewords;
    throw CapExceededError(os.str());
  }
  Codebook cb;
  cb.n = n;
  cb.r1 = r1;
  cb.r2 = r2;
  cb.u_alphabet = pu.size();
  cb.num_i = static_cast<int>(ni);
  cb.num_j = static_cast<int>(nj);
  cb.seed = seed;
  cb.words.resize(ni * nj * static_cast<std::uint64_t>(n));
  RandomStream rng(seed);
  for (std::size_t w = 0; w < cb.words.size(); ++w) cb.words[w] = sample(pu, rng);
  return cb;
}

Codebook codebook_from_words(int n, double r1, double r2, int u_alphabet,
                             const std::vector<std::vector<int>>& words_flat,
                             std::uint64_t seed, const Caps& caps) {
  std::uint64_t ni = index_count(n, r1);
  std::uint64_t nj = index_count(n, r2);
  if (ni * nj > caps.max_codewords) throw CapExceededError("codebook: word count exceeds cap");
  if (words_flat.size() != ni * nj) {
    std::ostringstream os;
    os << "codebook: expected " << ni * nj << " words, got " << words_flat.size();
    throw ValidationError(os.str());
  }
  Codebook cb;
  cb.n = n;
  cb.r1 = r1;
  cb.r2 = r2;
  cb.u_alphabet = u_alphabet;
  cb.num_i = static_cast<int>(ni);
  cb.num_j = static_cast<int>(nj);
  cb.seed = seed;
  cb.words.reserve(ni * nj * static_cast<std::uint64_t>(n));
  for (const auto& w : words_flat) {
    if (static_cast<int>(w.size()) != n) throw ValidationError("codebook: word length mismatch");
    for (int s : w) {
      if (s < 0 || s >= u_alphabet) throw ValidationError("codebook: symbol outside alphabet");
      cb.words.push_back(s);
    }
  }
  return cb;
}

double softcover_tv(const Codebook& cb, const Channel& v_given_u, const Pmf& v_target,
                    const Caps& caps) {
  if (v_given_u.input_size() != cb.u_alphabet) {
    throw ValidationError("softcover: kernel input size does not match codebook alphabet");
  }
  if (v_target.size() != v_given_u.output_size()) {
    throw ValidationError("softcover: target alphabet does not match kernel output");
  }
  int nv = v_given_u.output_size();
  std::uint64_t sv = checked_pow(nv, cb.n, caps.max_enum_cells, "softcover enumeration");

  std::vector<double> q(sv, 0.0);
  std::vector<double> buf(sv);
  const double inv_m = 1.0 / static_cast<double>(cb.flat_count());
  std::vector<double> row(nv);
  for (int m = 0; m < cb.flat_count(); ++m) {
    buf[0] = 1.0;
    std::size_t len = 1;
    for (int k = 0; k < cb.n; ++k) {
      int u = cb.word_flat(m, k);
      for (int s = 0; s < nv; ++s) row[static_cast<std::size_t>(s)] = v_given_u.at(u, s);
      expand_iid(buf, len, row.data(), nv);
    }
    for (std::size_t idx = 0; idx < sv; ++idx) q[idx] += inv_m * buf[idx];
  }

  // i.i.d. target over V^n via the same expansion.
  buf[0] = 1.0;
  std::size_t len = 1;
  for (int k = 0; k < cb.n; ++k) expand_iid(buf, len, v_target.probs().data(), nv);

  NeumaierSum acc;
  for (std::size_t idx = 0; idx < sv; ++idx) acc.add(std::abs(q[idx] - buf[idx]));
  return std::clamp(0.5 * acc.value(), 0.0, 1.0);
}

namespace {

Pmf source_of(const TripleDist& pstar) {
  std::vector<double> px(pstar.x_size(), 0.0);
  for (int u = 0; u < pstar.u_size(); ++u) {
    for (int x = 0; x < pstar.x_size(); ++x) {
      px[static_cast<std::size_t>(x)] += pstar.pu().at(u) * pstar.x_given_u().at(u, x);
    }
  }
  return Pmf::from_weights(px);
}

void check_codebook_compatible(const TripleDist& pstar, const Codebook& cb) {
  if (cb.u_alphabet != pstar.u_size()) {
    throw ValidationError("simulation code: codebook alphabet does not match p* auxiliary size");
  }
  for (int s : cb.words) {
    if (s < 0 || s >= cb.u_alphabet) throw ValidationError("simulation code: word symbol out of range");
  }
}

}  // namespace

SimulationCode make_simulation_code(const TripleDist& pstar, Codebook codebook) {
  check_codebook_compatible(pstar, codebook);
  JointDist target = xy_marginal(pstar);
  return SimulationCode{std::move(codebook), pstar, source_of(pstar), std::move(target)};
}

SimulationCode make_simulation_code(const TripleDist& pstar, Codebook codebook,
                                    const JointDist& target) {
  check_codebook_compatible(pstar, codebook);
  double gap = total_variation(xy_marginal(pstar), target);
  if (gap > 1e-9) {
    std::ostringstream os;
    os << "simulation code: p* marginal misses the target by TV " << gap;
    throw ValidationError(os.str());
  }
  return SimulationCode{std::move(codebook), pstar, source_of(pstar), target};
}

SimulationCode make_simulation_code(const TripleDist& pstar, int n, double r1, double r2,
                                    std::uint64_t seed, const Caps& caps) {
  return make_simulation_code(pstar, draw_codebook(pstar.pu(), n, r1, r2, seed, caps));
}

namespace {

// Log-posterior weights over i for a fixed (x^n, j); shared by the encoder
// and the exact induced-distribution assembly. Returns false when no codeword
// has positive likelihood, which can happen when pX|U has structural zeros.
bool posterior_weights(const SimulationCode& code, const std::vector<int>& xseq, int j,
                       std::vector<double>& out) {
  const Codebook& cb = code.codebook;
  const Channel& xgu = code.pstar.x_given_u();
  out.assign(static_cast<std::size_t>(cb.num_i), 0.0);
  double max_ll = -std::numeric_limits<double>::infinity();
  std::vector<double> ll(static_cast<std::size_t>(cb.num_i));
  for (int i = 0; i < cb.num_i; ++i) {
    double acc = 0.0;
    for (int k = 0; k < cb.n; ++k) {
      double p = xgu.at(cb.word_at(i, j, k), xseq[static_cast<std::size_t>(k)]);
      if (p == 0.0) {
        acc = -std::numeric_limits<double>::infinity();
        break;
      }
      acc += std::log(p);
    }
    ll[static_cast<std::size_t>(i)] = acc;
    max_ll = std::max(max_ll, acc);
  }
  if (std::isinf(max_ll)) return false;
  double sum = 0.0;
  for (int i = 0; i < cb.num_i; ++i) {
    double w = std::exp(ll[static_cast<std::size_t>(i)] - max_ll);
    out[static_cast<std::size_t>(i)] = w;
    sum += w;
  }
  for (double& w : out) w /= sum;
  return true;
}

void check_xseq(const SimulationCode& code, const std::vector<int>& xseq) {
  if (static_cast<int>(xseq.size()) != code.codebook.n) {
    throw ValidationError("encoder: sequence length does not match block length");
  }
  for (int s : xseq) {
    if (s < 0 || s >= code.x_size()) throw ValidationError("encoder: source symbol out of range");
  }
}

}  // namespace

Pmf encoder_posterior(const SimulationCode& code, const std::vector<int>& xseq, int j) {
  check_xseq(code, xseq);
  if (j < 0 || j >= code.codebook.num_j) throw ValidationError("encoder: j out of range");
  std::vector<double> post;
  if (!posterior_weights(code, xseq, j, post)) {
    std::ostringstream os;
    os << "encoder: no codeword has positive likelihood for x^n = " << seq_to_string(xseq)
       << ", j = " << j;
    throw ValidationError(os.str());
  }
  return Pmf::from_weights(post);
}

std::vector<int> decode_sample(const SimulationCode& code, int i, int j, RandomStream& rng) {
  const Codebook& cb = code.codebook;
  if (i < 0 || i >= cb.num_i || j < 0 || j >= cb.num_j) {
    throw ValidationError("decoder: index out of range");
  }
  std::vector<int> y(static_cast<std::size_t>(cb.n));
  for (int k = 0; k < cb.n; ++k) {
    y[static_cast<std::size_t>(k)] = sample_row(code.pstar.y_given_u(), cb.word_at(i, j, k), rng);
  }
  return y;
}

InducedDist induced_distribution_exact(const SimulationCode& code, const Caps& caps) {
  const Codebook& cb = code.codebook;
  int nx = code.x_size(), ny = code.y_size();
  std::uint64_t sx = checked_pow(nx, cb.n, caps.max_joint_cells, "induced enumeration");
  std::uint64_t sy = checked_pow(ny, cb.n, caps.max_joint_cells, "induced enumeration");
  std::uint64_t per_ij = sx * sy;
  std::uint64_t words = static_cast<std::uint64_t>(cb.num_i) * cb.num_j;
  if (per_ij > caps.max_joint_cells / words) {
    std::ostringstream os;
    os << "induced enumeration: " << sx << " * " << sy << " * " << words << " cells exceeds cap "
       << caps.max_joint_cells;
    throw CapExceededError(os.str());
  }
  std::uint64_t total = per_ij * words;

  // i.i.d. source over x^n.
  std::vector<double> src(sx);
  {
    src[0] = 1.0;
    std::size_t len = 1;
    for (int k = 0; k < cb.n; ++k) expand_iid(src, len, code.source.probs().data(), nx);
  }

  // Per-(i,j) decoder distribution over y^n.
  std::vector<std::vector<double>> dec(words);
  {
    std::vector<double> row(static_cast<std::size_t>(ny));
    for (std::uint64_t m = 0; m < words; ++m) {
      dec[m].resize(sy);
      dec[m][0] = 1.0;
      std::size_t len = 1;
      for (int k = 0; k < cb.n; ++k) {
        int u = cb.word_flat(static_cast<int>(m), k);
        for (int s = 0; s < ny; ++s) row[static_cast<std::size_t>(s)] = code.pstar.y_given_u().at(u, s);
        expand_iid(dec[m], len, row.data(), ny);
      }
    }
  }

  std::vector<double> table(total, 0.0);
  std::vector<double> mxy(per_ij, 0.0);
  std::vector<int> xseq(static_cast<std::size_t>(cb.n));
  std::vector<double> post;
  int holes = 0;
  const double pj = 1.0 / static_cast<double>(cb.num_j);
  const std::uint64_t y_stride = static_cast<std::uint64_t>(cb.num_i) * cb.num_j;

  for (std::uint64_t xf = 0; xf < sx; ++xf) {
    std::uint64_t rem = xf;
    for (int k = cb.n - 1; k >= 0; --k) {
      xseq[static_cast<std::size_t>(k)] = static_cast<int>(rem % static_cast<std::uint64_t>(nx));
      rem /= static_cast<std::uint64_t>(nx);
    }
    double px = src[xf];
    if (px == 0.0) continue;
    for (int j = 0; j < cb.num_j; ++j) {
      if (!posterior_weights(code, xseq, j, post)) {
        // The derived conditional Q(i | x^n, j) is unconstrained off the
        // support of Q; complete it uniformly so the code stays total and
        // the source marginal keeps its product form.
        post.assign(static_cast<std::size_t>(cb.num_i), 1.0 / cb.num_i);
        ++holes;
      }
      for (int i = 0; i < cb.num_i; ++i) {
        double w = px * pj * post[static_cast<std::size_t>(i)];
        if (w == 0.0) continue;
        std::uint64_t m = static_cast<std::uint64_t>(i) * cb.num_j + j;
        const std::vector<double>& dv = dec[m];
        std::uint64_t base = (xf * sy) * y_stride + m;
        for (std::uint64_t yf = 0; yf < sy; ++yf) {
          double cell = w * dv[yf];
          table[base + yf * y_stride] = cell;
          mxy[xf * sy + yf] += cell;
        }
      }
    }
  }

  // TV of the (x^n, y^n) marginal against the i.i.d. target.
  NeumaierSum gap;
  {
    const JointDist& t = code.target;
    std::vector<int> yseq(static_cast<std::size_t>(cb.n));
    for (std::uint64_t xf = 0; xf < sx; ++xf) {
      std::uint64_t remx = xf;
      for (int k = cb.n - 1; k >= 0; --k) {
        xseq[static_cast<std::size_t>(k)] = static_cast<int>(remx % static_cast<std::uint64_t>(nx));
        remx /= static_cast<std::uint64_t>(nx);
      }
      for (std::uint64_t yf = 0; yf < sy; ++yf) {
        std::uint64_t remy = yf;
        for (int k = cb.n - 1; k >= 0; --k) {
          yseq[static_cast<std::size_t>(k)] = static_cast<int>(remy % static_cast<std::uint64_t>(ny));
          remy /= static_cast<std::uint64_t>(ny);
        }
        double prod = 1.0;
        for (int k = 0; k < cb.n; ++k) {
          prod *= t.at({xseq[static_cast<std::size_t>(k)], yseq[static_cast<std::size_t>(k)]});
        }
        gap.add(std::abs(mxy[xf * sy + yf] - prod));
      }
    }
  }

  InducedDist ind;
  ind.n = cb.n;
  ind.x_size = nx;
  ind.y_size = ny;
  ind.num_i = cb.num_i;
  ind.num_j = cb.num_j;
  ind.joint = JointDist::normalized(
      {static_cast<int>(sx), static_cast<int>(sy), cb.num_i, cb.num_j}, std::move(table));
  ind.epsilon = std::clamp(0.5 * gap.value(), 0.0, 1.0);
  ind.encoder_holes = holes;
  return ind;
}

std::vector<std::pair<std::vector<int>, std::vector<int>>> simulate_batch(
    const SimulationCode& code, int num_blocks, RandomStream& rng) {
  if (num_blocks < 0) throw ValidationError("simulate: negative block count");
  const Codebook& cb = code.codebook;
  std::vector<std::pair<std::vector<int>, std::vector<int>>> blocks;
  blocks.reserve(static_cast<std::size_t>(num_blocks));
  std::vector<int> xseq(static_cast<std::size_t>(cb.n));
  for (int b = 0; b < num_blocks; ++b) {
    for (int k = 0; k < cb.n; ++k) xseq[static_cast<std::size_t>(k)] = sample(code.source, rng);
    int j = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(cb.num_j));
    Pmf post = encoder_posterior(code, xseq, j);
    int i = sample(post, rng);
    blocks.emplace_back(xseq, decode_sample(code, i, j, rng));
  }
  return blocks;
}

ConverseReport verify_converse(const InducedDist& ind, double r1, double r2) {
  const double tol = 1e-9;
  ConverseReport rep;
  rep.n = ind.n;
  rep.r1 = r1;
  rep.r2 = r2;
  rep.epsilon = ind.epsilon;

  rep.h_i = entropy(ind.joint.marginal({2}));
  rep.h_ij = entropy(ind.joint.marginal({2, 3}));
  rep.i_x_ij = mutual_information(ind.joint, {0}, {2, 3});
  rep.i_xy_ij = mutual_information(ind.joint, {0, 1}, {2, 3});

  rep.eff_r1 = std::log2(static_cast<double>(ind.num_i)) / ind.n;
  rep.eff_r2 = std::log2(static_cast<double>(ind.num_j)) / ind.n;
  rep.nominal_rates_exact =
      std::abs(rep.eff_r1 - r1) <= 1e-9 && std::abs(rep.eff_r2 - r2) <= 1e-9;
  rep.rate_chain_ok = ind.n * r1 + tol >= rep.i_x_ij;
  rep.sum_chain_ok = ind.n * (r1 + r2) + tol >= rep.i_xy_ij;

  // The chain holds against the realized codebook sizes for every code; the
  // nominal rates coincide whenever 2^{nR} was an integer.
  if (ind.n * rep.eff_r1 + tol < rep.i_x_ij) {
    throw InternalCheckError("converse: n R1 >= I(X^n;I,J) failed against the realized size");
  }
  if (ind.n * (rep.eff_r1 + rep.eff_r2) + tol < rep.i_xy_ij) {
    throw InternalCheckError("converse: n (R1+R2) >= I(X^n,Y^n;I,J) failed against the realized size");
  }

  // Per-letter single-letterization with U = (I, J, K).
  {
    int nx = ind.x_size, ny = ind.y_size;
    std::uint64_t sx = 1, sy = 1;
    for (int k = 0; k < ind.n; ++k) {
      sx *= static_cast<std::uint64_t>(nx);
      sy *= static_cast<std::uint64_t>(ny);
    }
    std::vector<double> acc(static_cast<std::size_t>(nx) * ny * ind.num_i * ind.num_j * ind.n, 0.0);
    const std::vector<double>& p = ind.joint.probs();
    const std::uint64_t ij = static_cast<std::uint64_t>(ind.num_i) * ind.num_j;
    std::vector<int> xd(static_cast<std::size_t>(ind.n)), yd(static_cast<std::size_t>(ind.n));
    const double inv_n = 1.0 / ind.n;
    for (std::uint64_t xf = 0; xf < sx; ++xf) {
      std::uint64_t remx = xf;
      for (int k = ind.n - 1; k >= 0; --k) {
        xd[static_cast<std::size_t>(k)] = static_cast<int>(remx % static_cast<std::uint64_t>(nx));
        remx /= static_cast<std::uint64_t>(nx);
      }
      for (std::uint64_t yf = 0; yf < sy; ++yf) {
        std::uint64_t remy = yf;
        for (int k = ind.n - 1; k >= 0; --k) {
          yd[static_cast<std::size_t>(k)] = static_cast<int>(remy % static_cast<std::uint64_t>(ny));
          remy /= static_cast<std::uint64_t>(ny);
        }
        std::uint64_t base = (xf * sy + yf) * ij;
        for (std::uint64_t m = 0; m < ij; ++m) {
          double w = p[base + m];
          if (w == 0.0) continue;
          for (int k = 0; k < ind.n; ++k) {
            std::size_t cell =
                ((static_cast<std::size_t>(xd[static_cast<std::size_t>(k)]) * ny +
                  static_cast<std::size_t>(yd[static_cast<std::size_t>(k)])) *
                     ij +
                 m) *
                    static_cast<std::size_t>(ind.n) +
                static_cast<std::size_t>(k);
            acc[cell] += w * inv_n;
          }
        }
      }
    }
    JointDist per_letter =
        JointDist::normalized({nx, ny, ind.num_i, ind.num_j, ind.n}, std::move(acc));
    rep.per_letter_i_xu = mutual_information(per_letter, {0}, {2, 3, 4});
    rep.per_letter_i_xyu = mutual_information(per_letter, {0, 1}, {2, 3, 4});
  }

  // X^n is exactly i.i.d. and independent of J, so the description-rate side
  // needs no epsilon slack at all.
  bool x_side = rep.eff_r1 + tol >= rep.per_letter_i_xu;

  rep.s_eps_applicable = ind.epsilon < 0.25;
  bool xy_side = true;
  if (rep.s_eps_applicable) {
    rep.g_eps = ind.epsilon > 0.0
                    ? g_epsilon(ind.epsilon, ind.x_size, ind.y_size).g_value
                    : 0.0;
    xy_side = rep.eff_r1 + rep.eff_r2 + 2.0 * rep.g_eps + tol >= rep.per_letter_i_xyu;
  }
  rep.per_letter_ok = x_side && xy_side;
  if (!x_side) {
    throw InternalCheckError("converse: per-letter I(X_K;I,J,K) exceeded the description rate");
  }
  if (!xy_side) {
    throw InternalCheckError("converse: per-letter sum-rate bound failed beyond 2 g(epsilon)");
  }
  return rep;
}

}  // namespace chansim::sim
