#pragma once

#include <vector>

#include "chansim/prob.hpp"

namespace chansim {

// All information quantities are in bits (log base 2).
using Bits = double;

// -sum p log2 p with 0 log 0 = 0.
Bits entropy(const Pmf& p);
Bits entropy(const JointDist& j);

// h(a) = -a log2 a - (1-a) log2 (1-a); a must lie in [0, 1].
Bits binary_entropy(double a);

// I(A;B) = H(A) + H(B) - H(A,B) over disjoint axis groups of j; other axes
// are marginalized out first. Clamped at zero within 1e-10; a larger negative
// value raises InternalCheckError.
Bits mutual_information(const JointDist& j, const std::vector<int>& axes_a,
                        const std::vector<int>& axes_b);

// I(A;B|C) = H(A,C) + H(B,C) - H(A,B,C) - H(C); axes_c may be empty, in which
// case this reduces to mutual_information.
Bits conditional_mutual_information(const JointDist& j, const std::vector<int>& axes_a,
                                    const std::vector<int>& axes_b,
                                    const std::vector<int>& axes_c);

// (1/2) sum |p - q|; shapes must match exactly.
double total_variation(const JointDist& p, const JointDist& q);
double total_variation(const Pmf& p, const Pmf& q);

}  // namespace chansim
