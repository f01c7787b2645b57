#include "chansim/info.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace chansim {

namespace {

constexpr double kClampTol = 1e-10;

double entropy_of(const std::vector<double>& probs) {
  NeumaierSum acc;
  for (double p : probs) {
    if (p > 0.0) acc.add(-p * std::log2(p));
  }
  double h = acc.value();
  if (h < 0.0) {
    if (h < -kClampTol) {
      std::ostringstream os;
      os << "entropy came out " << h << ", below the clamp window";
      throw InternalCheckError(os.str());
    }
    h = 0.0;
  }
  return h;
}

double clamp_information(double v, const char* what) {
  if (v >= 0.0) return v;
  if (v >= -kClampTol) return 0.0;
  std::ostringstream os;
  os << what << " came out " << v << ", below the clamp window";
  throw InternalCheckError(os.str());
}

void check_disjoint(const std::vector<int>& a, const std::vector<int>& b, const char* what) {
  for (int x : a) {
    for (int y : b) {
      if (x == y) {
        std::ostringstream os;
        os << what << ": axis " << x << " appears in two groups";
        throw ValidationError(os.str());
      }
    }
  }
}

std::vector<int> axis_union(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> u(a);
  u.insert(u.end(), b.begin(), b.end());
  std::sort(u.begin(), u.end());
  return u;
}

}  // namespace

Bits entropy(const Pmf& p) { return entropy_of(p.probs()); }

Bits entropy(const JointDist& j) { return entropy_of(j.probs()); }

Bits binary_entropy(double a) {
  if (!(a >= 0.0 && a <= 1.0)) {
    std::ostringstream os;
    os << "binary_entropy: argument " << a << " outside [0, 1]";
    throw ValidationError(os.str());
  }
  double h = 0.0;
  if (a > 0.0) h -= a * std::log2(a);
  if (a < 1.0) h -= (1.0 - a) * std::log2(1.0 - a);
  return clamp_information(h, "binary_entropy");
}

Bits mutual_information(const JointDist& j, const std::vector<int>& axes_a,
                        const std::vector<int>& axes_b) {
  check_disjoint(axes_a, axes_b, "mutual_information");
  double ha = entropy(j.marginal(axes_a));
  double hb = entropy(j.marginal(axes_b));
  double hab = entropy(j.marginal(axis_union(axes_a, axes_b)));
  return clamp_information(ha + hb - hab, "mutual_information");
}

Bits conditional_mutual_information(const JointDist& j, const std::vector<int>& axes_a,
                                    const std::vector<int>& axes_b,
                                    const std::vector<int>& axes_c) {
  check_disjoint(axes_a, axes_b, "conditional_mutual_information");
  check_disjoint(axes_a, axes_c, "conditional_mutual_information");
  check_disjoint(axes_b, axes_c, "conditional_mutual_information");
  if (axes_c.empty()) return mutual_information(j, axes_a, axes_b);
  double hac = entropy(j.marginal(axis_union(axes_a, axes_c)));
  double hbc = entropy(j.marginal(axis_union(axes_b, axes_c)));
  double habc = entropy(j.marginal(axis_union(axis_union(axes_a, axes_b), axes_c)));
  double hc = entropy(j.marginal(axes_c));
  return clamp_information(hac + hbc - habc - hc, "conditional_mutual_information");
}

namespace {

double tv_of(const std::vector<double>& p, const std::vector<double>& q) {
  NeumaierSum acc;
  for (std::size_t i = 0; i < p.size(); ++i) acc.add(std::abs(p[i] - q[i]));
  double tv = 0.5 * acc.value();
  return std::clamp(tv, 0.0, 1.0);
}

}  // namespace

double total_variation(const JointDist& p, const JointDist& q) {
  if (p.shape() != q.shape()) throw ValidationError("total_variation: shape mismatch");
  return tv_of(p.probs(), q.probs());
}

double total_variation(const Pmf& p, const Pmf& q) {
  if (p.size() != q.size()) throw ValidationError("total_variation: size mismatch");
  return tv_of(p.probs(), q.probs());
}

}  // namespace chansim
