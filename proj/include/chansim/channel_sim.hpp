#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "chansim/prob.hpp"
#include "chansim/rate_region.hpp"

namespace chansim::sim {

// Enumeration limits; exceeding one raises CapExceededError.
struct Caps {
  std::size_t max_joint_cells = std::size_t{1} << 24;
  std::size_t max_codewords = std::size_t{1} << 20;
  std::size_t max_enum_cells = std::size_t{1} << 24;  // soft-covering |V|^n
};

// ceil(2^(n r)) with a snap to the nearest integer when the power is exact
// up to rounding.
std::uint64_t index_count(int n, double rate);

// U^n(i, j) array: ceil(2^{nR1}) x ceil(2^{nR2}) words of length n.
struct Codebook {
  int n = 0;
  double r1 = 0.0;
  double r2 = 0.0;
  int u_alphabet = 0;
  int num_i = 0;
  int num_j = 0;
  std::uint64_t seed = 0;
  std::vector<int> words;  // [i][j][k] row-major

  int word_at(int i, int j, int k) const {
    return words[(static_cast<std::size_t>(i) * num_j + j) * n + k];
  }
  int flat_count() const { return num_i * num_j; }
  // Flat index m = i * num_j + j.
  int word_flat(int m, int k) const { return words[static_cast<std::size_t>(m) * n + k]; }
};

Codebook draw_codebook(const Pmf& pu, int n, double r1, double r2, std::uint64_t seed,
                       const Caps& caps = {});

// Builds a codebook from explicit words (e.g. a hand-crafted lossless table).
Codebook codebook_from_words(int n, double r1, double r2, int u_alphabet,
                             const std::vector<std::vector<int>>& words_flat,
                             std::uint64_t seed = 0, const Caps& caps = {});

// Exact total variation between the codebook-induced output distribution
// Q(v^n) = |M|^{-1} sum_m prod_k p(v_k | U_k(m)) and the i.i.d. target.
double softcover_tv(const Codebook& cb, const Channel& v_given_u, const Pmf& v_target,
                    const Caps& caps = {});

// A codebook together with the p* kernels that define the likelihood encoder
// and the memoryless-in-U decoder. The source is the X marginal of p*.
struct SimulationCode {
  Codebook codebook;
  TripleDist pstar;
  Pmf source;
  JointDist target;  // (x, y) marginal of p*

  int x_size() const { return pstar.x_size(); }
  int y_size() const { return pstar.y_size(); }
};

SimulationCode make_simulation_code(const TripleDist& pstar, int n, double r1, double r2,
                                    std::uint64_t seed, const Caps& caps = {});
SimulationCode make_simulation_code(const TripleDist& pstar, Codebook codebook);

// Checks TV between the p* marginal and an externally specified target joint;
// rejects beyond 1e-9.
SimulationCode make_simulation_code(const TripleDist& pstar, Codebook codebook,
                                    const JointDist& target);

// Likelihood-encoder posterior over i given (x^n, j), computed in log space.
Pmf encoder_posterior(const SimulationCode& code, const std::vector<int>& xseq, int j);

// y_k drawn independently from pY|U(. | U_k(i,j)).
std::vector<int> decode_sample(const SimulationCode& code, int i, int j, RandomStream& rng);

// Exact law of (X^n, Y^n, I, J) with sequence axes flattened:
// axes (x^n, y^n, i, j). epsilon is the TV between the (x^n, y^n) marginal
// and the i.i.d. target. encoder_holes counts (x^n, j) cells where no
// codeword had positive likelihood; the conditional is unconstrained there
// and gets completed uniformly over i.
struct InducedDist {
  int n = 0;
  int x_size = 0;
  int y_size = 0;
  int num_i = 0;
  int num_j = 0;
  JointDist joint;
  double epsilon = 0.0;
  int encoder_holes = 0;
};

InducedDist induced_distribution_exact(const SimulationCode& code, const Caps& caps = {});

// Operational blocks: x^n i.i.d. source, j uniform, i from the encoder
// posterior, y^n from the decoder.
std::vector<std::pair<std::vector<int>, std::vector<int>>> simulate_batch(
    const SimulationCode& code, int num_blocks, RandomStream& rng);

// Every quantity in the converse chain, evaluated exactly on an induced
// distribution. Chain inequalities hold for every valid code; a violation
// raises InternalCheckError.
struct ConverseReport {
  int n = 0;
  double r1 = 0.0;
  double r2 = 0.0;
  double epsilon = 0.0;
  Bits h_i = 0.0;
  Bits h_ij = 0.0;
  Bits i_x_ij = 0.0;           // I(X^n; I,J)
  Bits i_xy_ij = 0.0;          // I(X^n,Y^n; I,J)
  Bits per_letter_i_xu = 0.0;  // I(X_K; I,J,K)
  Bits per_letter_i_xyu = 0.0; // I(X_K,Y_K; I,J,K)
  Bits g_eps = 0.0;            // g(epsilon); 0 when epsilon is 0 or >= 1/4
  // Nominal rates match the realized codebook sizes (log2 of the counts).
  bool nominal_rates_exact = false;
  double eff_r1 = 0.0;  // log2(num_i) / n
  double eff_r2 = 0.0;  // log2(num_j) / n
  bool rate_chain_ok = false;       // n r1 >= I(X^n;I,J), nominal rates
  bool sum_chain_ok = false;        // n (r1+r2) >= I(X^n,Y^n;I,J), nominal rates
  bool s_eps_applicable = false;    // epsilon < 1/4 (or exactly 0)
  bool per_letter_ok = false;       // relaxed per-letter inequalities
};

ConverseReport verify_converse(const InducedDist& ind, double r1, double r2);

}  // namespace chansim::sim
