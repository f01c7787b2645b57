#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "chansim/errors.hpp"
#include "chansim/rng.hpp"

namespace chansim {

// Tolerance for "sums to one" at construction boundaries. Internal
// computations renormalize only when constructing a new object, so drift
// shows up as an error instead of being masked.
inline constexpr double kMassTol = 1e-12;

// Neumaier-compensated accumulator; keeps mass and distance sums accurate
// over multi-million-entry tables.
class NeumaierSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

double compensated_sum(const std::vector<double>& xs);

// Probability mass function over a finite 0-based alphabet.
class Pmf {
 public:
  // Degenerate single-symbol alphabet; a valid placeholder.
  Pmf() : p_{1.0} {}

  // Normalizes nonnegative weights; passes through unchanged when the input
  // already sums to one within kMassTol.
  static Pmf from_weights(const std::vector<double>& weights);

  // Requires probs already normalized within kMassTol.
  static Pmf validated(std::vector<double> probs);

  int size() const { return static_cast<int>(p_.size()); }
  double at(int symbol) const { return p_[static_cast<std::size_t>(symbol)]; }
  const std::vector<double>& probs() const { return p_; }

 private:
  explicit Pmf(std::vector<double> p) : p_(std::move(p)) {}
  std::vector<double> p_;
};

// Joint distribution over a finite product alphabet, stored row-major.
class JointDist {
 public:
  JointDist() : shape_{1}, probs_{1.0} {}

  // Requires total mass within kMassTol of one.
  static JointDist validated(std::vector<int> shape, std::vector<double> probs);

  // For internally assembled tables: accepts float rounding up to 1e-9 of
  // mass drift and renormalizes exactly; larger drift is an internal bug.
  static JointDist normalized(std::vector<int> shape, std::vector<double> weights);

  int rank() const { return static_cast<int>(shape_.size()); }
  const std::vector<int>& shape() const { return shape_; }
  const std::vector<double>& probs() const { return probs_; }
  std::size_t cell_count() const { return probs_.size(); }

  std::size_t flat_index(const std::vector<int>& idx) const;
  double at(const std::vector<int>& idx) const { return probs_[flat_index(idx)]; }
  double total_mass() const { return compensated_sum(probs_); }

  // Sums out all axes not listed; kept axes stay in ascending original order.
  JointDist marginal(const std::vector<int>& keep_axes) const;

  // Renormalized slice; the conditioned axis is removed. Zero-probability
  // events are an error, never a silent uniform fallback.
  JointDist condition(int axis, int value) const;

 private:
  JointDist(std::vector<int> shape, std::vector<double> probs)
      : shape_(std::move(shape)), probs_(std::move(probs)) {}
  static void check_shape(const std::vector<int>& shape, std::size_t n_probs);

  std::vector<int> shape_;
  std::vector<double> probs_;
};

// Conditional distribution q(out|in) as a row-stochastic kernel.
class Channel {
 public:
  Channel() : input_size_(1), output_size_(1), kernel_{1.0} {}

  static Channel validated(int input_size, int output_size, std::vector<double> kernel);
  static Channel from_rows(const std::vector<std::vector<double>>& rows);

  int input_size() const { return input_size_; }
  int output_size() const { return output_size_; }
  double at(int in, int out) const {
    return kernel_[static_cast<std::size_t>(in) * output_size_ + out];
  }
  const std::vector<double>& kernel() const { return kernel_; }
  Pmf row(int in) const;

 private:
  Channel(int in, int out, std::vector<double> k)
      : input_size_(in), output_size_(out), kernel_(std::move(k)) {}
  int input_size_;
  int output_size_;
  std::vector<double> kernel_;
};

// p(x,y,u) stored in factored form pU(u) * pX|U(x|u) * pY|U(y|u), which makes
// the X - U - Y Markov chain hold by construction. The cardinality cap
// |U| <= |X||Y| + 1 is enforced here.
class TripleDist {
 public:
  // Degenerate deterministic triple over single-symbol alphabets.
  TripleDist() = default;

  TripleDist(Pmf pu, Channel x_given_u, Channel y_given_u);

  const Pmf& pu() const { return pu_; }
  const Channel& x_given_u() const { return x_given_u_; }
  const Channel& y_given_u() const { return y_given_u_; }
  int x_size() const { return x_given_u_.output_size(); }
  int y_size() const { return y_given_u_.output_size(); }
  int u_size() const { return pu_.size(); }

 private:
  Pmf pu_;
  Channel x_given_u_;
  Channel y_given_u_;
};

// Free-function forms of the core operations.
Pmf make_pmf(const std::vector<double>& weights);
JointDist marginal(const JointDist& j, const std::vector<int>& keep_axes);
JointDist condition(const JointDist& j, int given_axis, int given_value);

// Expands the factored triple into the 3-axis table with axes (x, y, u).
JointDist joint_from_markov(const TripleDist& t);
// The (x, y) marginal of joint_from_markov(t).
JointDist xy_marginal(const TripleDist& t);

// Product of per-symbol probabilities; computed in log scale internally.
double iid_prob(const Pmf& p, const std::vector<int>& seq);

int sample(const Pmf& p, RandomStream& rng);

}  // namespace chansim
