#pragma once

#include <optional>
#include <vector>

#include "chansim/rate_region.hpp"

namespace chansim::bec {

// Two cascaded erasure channels X -> U -> Y reproducing an end-to-end
// erasure probability pe when p1 = 1 - (1 - pe) / (1 - p2).
struct CascadeParams {
  double pe = 0.0;
  double p2 = 0.0;
  double p1 = 0.0;

  static CascadeParams make(double pe, double p2);
};

inline double p2_cap(double pe) { return pe < 0.5 ? pe : 0.5; }

// 2x3 erasure kernel; output alphabet ordered (0, e, 1) with e at index 1.
Channel bec_channel(double pe);

// Bern(1/2) source through the erasure channel: the target joint.
JointDist target_joint(double pe);

// The cascade triple over U in {0, e, 1}; its (x,y) marginal equals
// target_joint(pe) identically.
TripleDist cascade_triple(const CascadeParams& params);

// Closed forms evaluated at one cascade point.
Bits i_xu(const CascadeParams& params);    // 1 - p1
Bits i_xyu(const CascadeParams& params);   // h(pe) + (1 - p1)(1 - h(p2))
Bits corner_r2(const CascadeParams& params);  // i_xyu - i_xu

struct BoundaryRow {
  double p2 = 0.0;
  double p1 = 0.0;
  Bits i_xu = 0.0;
  Bits i_xyu = 0.0;
  double r1 = 0.0;  // = i_xu, the parametric corner
  double r2 = 0.0;  // = i_xyu - i_xu
};

std::vector<BoundaryRow> boundary_rows(double pe, const std::vector<double>& p2_grid);

// Full boundary trace with total_rows rows, ascending in r2: the sum-rate
// completion at r2 = 0, the parametric corners, and the horizontal tail at
// r1 = I(X;Y). r1 spans [1 - pe, C(X;Y)].
std::vector<BoundaryRow> boundary_trace(double pe, int total_rows);

// Parametric corners plus the two extreme completions: the sum-rate diagonal
// down to r2 = 0 and the horizontal tail at r1 = I(X;Y). Points are ordered
// by ascending r2.
BoundaryCurve bec_boundary(double pe, const std::vector<double>& p2_grid);

// Analytic minimum description rate at a given common-randomness rate.
double min_r1(double pe, double r2);

// The cascade parameter whose corner (or completion) attains min_r1 at r2.
double p2_for_r2(double pe, double r2);

// Recognizes a Bern(1/2) x BEC target table; returns the erasure probability.
std::optional<double> detect_bec_target(const JointDist& target);

}  // namespace chansim::bec
