#include "chansim/prob.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>

namespace chansim {

double compensated_sum(const std::vector<double>& xs) {
  NeumaierSum acc;
  for (double x : xs) acc.add(x);
  return acc.value();
}

namespace {

void check_nonnegative(const std::vector<double>& v, const char* what) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] >= 0.0) || std::isnan(v[i])) {
      std::ostringstream os;
      os << what << ": negative or non-finite entry " << v[i] << " at index " << i;
      throw ValidationError(os.str());
    }
  }
}

}  // namespace

Pmf Pmf::from_weights(const std::vector<double>& weights) {
  if (weights.empty()) throw ValidationError("pmf: empty weight vector");
  check_nonnegative(weights, "pmf");
  double sum = compensated_sum(weights);
  if (sum <= 0.0) throw ValidationError("pmf: all weights are zero");
  if (std::abs(sum - 1.0) <= kMassTol) return Pmf(weights);
  std::vector<double> p(weights);
  for (double& x : p) x /= sum;
  return Pmf(std::move(p));
}

Pmf Pmf::validated(std::vector<double> probs) {
  if (probs.empty()) throw ValidationError("pmf: empty probability vector");
  check_nonnegative(probs, "pmf");
  double sum = compensated_sum(probs);
  if (std::abs(sum - 1.0) > kMassTol) {
    std::ostringstream os;
    os << "pmf: mass " << sum << " deviates from 1 by more than " << kMassTol;
    throw ValidationError(os.str());
  }
  return Pmf(std::move(probs));
}

void JointDist::check_shape(const std::vector<int>& shape, std::size_t n_probs) {
  if (shape.empty()) throw ValidationError("joint: empty shape");
  std::size_t cells = 1;
  for (int s : shape) {
    if (s <= 0) throw ValidationError("joint: nonpositive axis size");
    cells *= static_cast<std::size_t>(s);
  }
  if (cells != n_probs) {
    std::ostringstream os;
    os << "joint: shape implies " << cells << " cells but " << n_probs << " probabilities given";
    throw ValidationError(os.str());
  }
}

JointDist JointDist::validated(std::vector<int> shape, std::vector<double> probs) {
  check_shape(shape, probs.size());
  check_nonnegative(probs, "joint");
  double mass = compensated_sum(probs);
  if (std::abs(mass - 1.0) > kMassTol) {
    std::ostringstream os;
    os << "joint: mass " << mass << " deviates from 1 by more than " << kMassTol;
    throw ValidationError(os.str());
  }
  return JointDist(std::move(shape), std::move(probs));
}

JointDist JointDist::normalized(std::vector<int> shape, std::vector<double> weights) {
  check_shape(shape, weights.size());
  check_nonnegative(weights, "joint");
  double mass = compensated_sum(weights);
  if (std::abs(mass - 1.0) > 1e-9) {
    std::ostringstream os;
    os << "joint assembly drifted: mass " << mass;
    throw InternalCheckError(os.str());
  }
  if (mass != 1.0) {
    for (double& w : weights) w /= mass;
  }
  return JointDist(std::move(shape), std::move(weights));
}

std::size_t JointDist::flat_index(const std::vector<int>& idx) const {
  if (idx.size() != shape_.size()) throw ValidationError("joint: index rank mismatch");
  std::size_t flat = 0;
  for (std::size_t a = 0; a < shape_.size(); ++a) {
    if (idx[a] < 0 || idx[a] >= shape_[a]) throw ValidationError("joint: index out of range");
    flat = flat * static_cast<std::size_t>(shape_[a]) + static_cast<std::size_t>(idx[a]);
  }
  return flat;
}

JointDist JointDist::marginal(const std::vector<int>& keep_axes) const {
  if (keep_axes.empty()) throw ValidationError("marginal: empty axis set");
  std::vector<int> keep(keep_axes);
  std::sort(keep.begin(), keep.end());
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i] < 0 || keep[i] >= rank()) throw ValidationError("marginal: axis out of range");
    if (i > 0 && keep[i] == keep[i - 1]) throw ValidationError("marginal: duplicate axis");
  }

  std::vector<int> out_shape;
  out_shape.reserve(keep.size());
  for (int a : keep) out_shape.push_back(shape_[a]);

  // Per-axis contribution of each digit to the output flat index (0 when the
  // axis is summed out).
  std::vector<std::size_t> out_stride(shape_.size(), 0);
  {
    std::size_t stride = 1;
    for (auto it = keep.rbegin(); it != keep.rend(); ++it) {
      out_stride[*it] = stride;
      stride *= static_cast<std::size_t>(shape_[*it]);
    }
  }

  std::size_t out_cells = 1;
  for (int s : out_shape) out_cells *= static_cast<std::size_t>(s);
  std::vector<double> out(out_cells, 0.0);

  std::vector<int> digits(shape_.size(), 0);
  std::size_t out_idx = 0;
  for (std::size_t flat = 0; flat < probs_.size(); ++flat) {
    out[out_idx] += probs_[flat];
    // Odometer increment, keeping out_idx in sync.
    for (int a = rank() - 1; a >= 0; --a) {
      out_idx += out_stride[a];
      if (++digits[a] < shape_[a]) break;
      digits[a] = 0;
      out_idx -= out_stride[a] * static_cast<std::size_t>(shape_[a]);
    }
  }
  return JointDist(std::move(out_shape), std::move(out));
}

JointDist JointDist::condition(int axis, int value) const {
  if (axis < 0 || axis >= rank()) throw ValidationError("condition: axis out of range");
  if (value < 0 || value >= shape_[axis]) throw ValidationError("condition: value out of range");
  if (rank() == 1) throw ValidationError("condition: cannot condition away the only axis");

  std::size_t tail = 1;
  for (int a = axis + 1; a < rank(); ++a) tail *= static_cast<std::size_t>(shape_[a]);
  std::size_t axis_len = static_cast<std::size_t>(shape_[axis]);
  std::size_t block = axis_len * tail;

  std::vector<int> out_shape;
  for (int a = 0; a < rank(); ++a) {
    if (a != axis) out_shape.push_back(shape_[a]);
  }
  std::vector<double> out;
  out.reserve(probs_.size() / axis_len);

  NeumaierSum mass;
  for (std::size_t base = 0; base < probs_.size(); base += block) {
    std::size_t start = base + static_cast<std::size_t>(value) * tail;
    for (std::size_t k = 0; k < tail; ++k) {
      double p = probs_[start + k];
      out.push_back(p);
      mass.add(p);
    }
  }
  double m = mass.value();
  if (m <= 0.0) {
    std::ostringstream os;
    os << "condition: event axis " << axis << " = " << value << " has zero probability";
    throw ValidationError(os.str());
  }
  for (double& p : out) p /= m;
  return JointDist(std::move(out_shape), std::move(out));
}

Channel Channel::validated(int input_size, int output_size, std::vector<double> kernel) {
  if (input_size <= 0 || output_size <= 0) throw ValidationError("channel: nonpositive size");
  if (kernel.size() != static_cast<std::size_t>(input_size) * output_size) {
    throw ValidationError("channel: kernel size does not match input_size x output_size");
  }
  check_nonnegative(kernel, "channel");
  for (int r = 0; r < input_size; ++r) {
    NeumaierSum row;
    for (int c = 0; c < output_size; ++c) row.add(kernel[static_cast<std::size_t>(r) * output_size + c]);
    if (std::abs(row.value() - 1.0) > kMassTol) {
      std::ostringstream os;
      os << "channel: row " << r << " has mass " << row.value();
      throw ValidationError(os.str());
    }
  }
  return Channel(input_size, output_size, std::move(kernel));
}

Channel Channel::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw ValidationError("channel: no rows");
  std::size_t width = rows[0].size();
  std::vector<double> flat;
  flat.reserve(rows.size() * width);
  for (const auto& r : rows) {
    if (r.size() != width) throw ValidationError("channel: ragged rows");
    flat.insert(flat.end(), r.begin(), r.end());
  }
  return validated(static_cast<int>(rows.size()), static_cast<int>(width), std::move(flat));
}

Pmf Channel::row(int in) const {
  std::vector<double> r(kernel_.begin() + static_cast<std::size_t>(in) * output_size_,
                        kernel_.begin() + (static_cast<std::size_t>(in) + 1) * output_size_);
  return Pmf::validated(std::move(r));
}

TripleDist::TripleDist(Pmf pu, Channel x_given_u, Channel y_given_u)
    : pu_(std::move(pu)), x_given_u_(std::move(x_given_u)), y_given_u_(std::move(y_given_u)) {
  if (x_given_u_.input_size() != pu_.size() || y_given_u_.input_size() != pu_.size()) {
    throw ValidationError("triple: kernel input sizes do not match |U|");
  }
  int cap = x_given_u_.output_size() * y_given_u_.output_size() + 1;
  if (pu_.size() > cap) {
    std::ostringstream os;
    os << "triple: |U| = " << pu_.size() << " exceeds cardinality cap |X||Y|+1 = " << cap;
    throw ValidationError(os.str());
  }
}

Pmf make_pmf(const std::vector<double>& weights) { return Pmf::from_weights(weights); }

JointDist marginal(const JointDist& j, const std::vector<int>& keep_axes) {
  return j.marginal(keep_axes);
}

JointDist condition(const JointDist& j, int given_axis, int given_value) {
  return j.condition(given_axis, given_value);
}

JointDist joint_from_markov(const TripleDist& t) {
  int nx = t.x_size(), ny = t.y_size(), nu = t.u_size();
  std::vector<double> table(static_cast<std::size_t>(nx) * ny * nu);
  for (int x = 0; x < nx; ++x) {
    for (int y = 0; y < ny; ++y) {
      for (int u = 0; u < nu; ++u) {
        table[(static_cast<std::size_t>(x) * ny + y) * nu + u] =
            t.pu().at(u) * t.x_given_u().at(u, x) * t.y_given_u().at(u, y);
      }
    }
  }
  return JointDist::normalized({nx, ny, nu}, std::move(table));
}

JointDist xy_marginal(const TripleDist& t) {
  int nx = t.x_size(), ny = t.y_size(), nu = t.u_size();
  std::vector<double> table(static_cast<std::size_t>(nx) * ny, 0.0);
  for (int x = 0; x < nx; ++x) {
    for (int y = 0; y < ny; ++y) {
      NeumaierSum cell;
      for (int u = 0; u < nu; ++u) {
        cell.add(t.pu().at(u) * t.x_given_u().at(u, x) * t.y_given_u().at(u, y));
      }
      table[static_cast<std::size_t>(x) * ny + y] = cell.value();
    }
  }
  return JointDist::normalized({nx, ny}, std::move(table));
}

double iid_prob(const Pmf& p, const std::vector<int>& seq) {
  double log2_acc = 0.0;
  for (std::size_t k = 0; k < seq.size(); ++k) {
    if (seq[k] < 0 || seq[k] >= p.size()) {
      std::ostringstream os;
      os << "iid_prob: symbol " << seq[k] << " at position " << k << " outside alphabet of size "
         << p.size();
      throw ValidationError(os.str());
    }
    double q = p.at(seq[k]);
    if (q == 0.0) return 0.0;
    log2_acc += std::log2(q);
  }
  return std::exp2(log2_acc);
}

int sample(const Pmf& p, RandomStream& rng) {
  double u = rng.next_unit();
  double cum = 0.0;
  int last_positive = -1;
  for (int s = 0; s < p.size(); ++s) {
    double q = p.at(s);
    if (q > 0.0) last_positive = s;
    cum += q;
    if (u < cum) return s;
  }
  // Rounding can leave cum marginally below 1; fall back to the last symbol
  // carrying mass.
  return last_positive >= 0 ? last_positive : p.size() - 1;
}

}  // namespace chansim
