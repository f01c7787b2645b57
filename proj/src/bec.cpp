#include "chansim/bec.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace chansim::bec {

CascadeParams CascadeParams::make(double pe, double p2) {
  if (!(pe >= 0.0 && pe <= 1.0)) {
    std::ostringstream os;
    os << "cascade: erasure probability " << pe << " outside [0, 1]";
    throw ValidationError(os.str());
  }
  double cap = p2_cap(pe);
  if (!(p2 >= 0.0 && p2 <= cap + 1e-12)) {
    std::ostringstream os;
    os << "cascade: p2 = " << p2 << " outside [0, " << cap << "]";
    throw ValidationError(os.str());
  }
  CascadeParams params;
  params.pe = pe;
  params.p2 = std::min(p2, cap);
  params.p1 = 1.0 - (1.0 - pe) / (1.0 - params.p2);
  return params;
}

Channel bec_channel(double pe) {
  if (!(pe >= 0.0 && pe <= 1.0)) {
    std::ostringstream os;
    os << "bec_channel: erasure probability " << pe << " outside [0, 1]";
    throw ValidationError(os.str());
  }
  return Channel::from_rows({{1.0 - pe, pe, 0.0}, {0.0, pe, 1.0 - pe}});
}

JointDist target_joint(double pe) {
  Channel q = bec_channel(pe);
  std::vector<double> table(6);
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 3; ++y) table[static_cast<std::size_t>(x) * 3 + y] = 0.5 * q.at(x, y);
  }
  return JointDist::normalized({2, 3}, std::move(table));
}

TripleDist cascade_triple(const CascadeParams& params) {
  double p1 = params.p1, p2 = params.p2;
  Pmf pu = Pmf::from_weights({(1.0 - p1) / 2.0, p1, (1.0 - p1) / 2.0});
  // U = e forces the posterior on X back to the Bern(1/2) source; otherwise
  // U pins X exactly.
  Channel x_given_u = Channel::from_rows({{1.0, 0.0}, {0.5, 0.5}, {0.0, 1.0}});
  // Second erasure stage, with e absorbing.
  Channel y_given_u = Channel::from_rows(
      {{1.0 - p2, p2, 0.0}, {0.0, 1.0, 0.0}, {0.0, p2, 1.0 - p2}});
  return TripleDist(std::move(pu), std::move(x_given_u), std::move(y_given_u));
}

Bits i_xu(const CascadeParams& params) { return 1.0 - params.p1; }

Bits i_xyu(const CascadeParams& params) {
  return binary_entropy(params.pe) + (1.0 - params.p1) * (1.0 - binary_entropy(params.p2));
}

Bits corner_r2(const CascadeParams& params) { return i_xyu(params) - i_xu(params); }

std::vector<BoundaryRow> boundary_rows(double pe, const std::vector<double>& p2_grid) {
  std::vector<BoundaryRow> rows;
  rows.reserve(p2_grid.size());
  for (double p2 : p2_grid) {
    CascadeParams params = CascadeParams::make(pe, p2);
    BoundaryRow row;
    row.p2 = params.p2;
    row.p1 = params.p1;
    row.i_xu = i_xu(params);
    row.i_xyu = i_xyu(params);
    row.r1 = row.i_xu;
    row.r2 = row.i_xyu - row.i_xu;
    rows.push_back(row);
  }
  return rows;
}

std::vector<BoundaryRow> boundary_trace(double pe, int total_rows) {
  if (total_rows < 1) throw ValidationError("bec: need at least one row");
  double cap = p2_cap(pe);
  CascadeParams at_cap = CascadeParams::make(pe, cap);
  CascadeParams at_zero = CascadeParams::make(pe, 0.0);

  BoundaryRow diagonal;  // (C(X;Y), 0), the no-common-randomness endpoint
  diagonal.p2 = at_cap.p2;
  diagonal.p1 = at_cap.p1;
  diagonal.i_xu = i_xu(at_cap);
  diagonal.i_xyu = i_xyu(at_cap);
  diagonal.r1 = i_xyu(at_cap);
  diagonal.r2 = 0.0;

  BoundaryRow tail;  // r1 = I(X;Y) for every r2 past h(pe)
  tail.p2 = at_zero.p2;
  tail.p1 = at_zero.p1;
  tail.i_xu = i_xu(at_zero);
  tail.i_xyu = i_xyu(at_zero);
  tail.r1 = i_xu(at_zero);
  tail.r2 = 1.0 + binary_entropy(pe);

  std::vector<BoundaryRow> rows;
  rows.push_back(diagonal);
  int corners = total_rows - 2;
  if (corners > 0) {
    std::vector<double> grid;
    for (int k = 0; k < corners; ++k) {
      // Descending p2 so corner r2 values ascend.
      grid.push_back(corners == 1 ? cap : cap * (corners - 1 - k) / (corners - 1));
    }
    for (const BoundaryRow& row : boundary_rows(pe, grid)) rows.push_back(row);
  }
  if (total_rows >= 2) rows.push_back(tail);
  return rows;
}

BoundaryCurve bec_boundary(double pe, const std::vector<double>& p2_grid) {
  JointDist target = target_joint(pe);
  auto point_for = [&](const CascadeParams& params, double r1, double r2) {
    BoundaryPoint pt;
    pt.point = RatePoint{r1, r2};
    pt.cert = make_certificate(cascade_triple(params), target);
    return pt;
  };

  BoundaryCurve curve;
  CascadeParams at_cap = CascadeParams::make(pe, p2_cap(pe));
  // Sum-rate completion: from (C(X;Y), 0) along r1 + r2 = I(X,Y;U) up to the
  // r2-smallest corner.
  curve.points.push_back(point_for(at_cap, i_xyu(at_cap), 0.0));

  std::vector<BoundaryRow> rows = boundary_rows(pe, p2_grid);
  std::vector<BoundaryPoint> corners;
  for (const BoundaryRow& row : rows) {
    CascadeParams params = CascadeParams::make(pe, row.p2);
    corners.push_back(point_for(params, row.r1, row.r2));
  }
  std::sort(corners.begin(), corners.end(),
            [](const BoundaryPoint& a, const BoundaryPoint& b) { return a.point.r2 < b.point.r2; });
  for (auto& c : corners) curve.points.push_back(std::move(c));

  // Horizontal tail: r1 = I(X;Y) for every r2 past h(pe); H(X,Y) stands in
  // for unlimited common randomness.
  CascadeParams at_zero = CascadeParams::make(pe, 0.0);
  curve.points.push_back(point_for(at_zero, i_xu(at_zero), 1.0 + binary_entropy(pe)));

  for (const BoundaryPoint& pt : curve.points) curve.r2_grid.push_back(pt.point.r2);
  return curve;
}

double p2_for_r2(double pe, double r2) {
  if (r2 < 0.0) throw ValidationError("bec: negative r2");
  double cap = p2_cap(pe);
  double b0 = corner_r2(CascadeParams::make(pe, 0.0));
  double bcap = corner_r2(CascadeParams::make(pe, cap));
  if (r2 >= b0) return 0.0;
  if (r2 <= bcap) return cap;
  // corner_r2 decreases in p2; bisect.
  double lo = 0.0, hi = cap;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (corner_r2(CascadeParams::make(pe, mid)) > r2) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double min_r1(double pe, double r2) {
  if (r2 < 0.0) throw ValidationError("bec: negative r2");
  double cap = p2_cap(pe);
  CascadeParams at_zero = CascadeParams::make(pe, 0.0);
  CascadeParams at_cap = CascadeParams::make(pe, cap);
  if (r2 >= corner_r2(at_zero)) return i_xu(at_zero);
  if (r2 <= corner_r2(at_cap)) return i_xyu(at_cap) - r2;
  return i_xu(CascadeParams::make(pe, p2_for_r2(pe, r2)));
}

std::optional<double> detect_bec_target(const JointDist& target) {
  if (target.shape() != std::vector<int>{2, 3}) return std::nullopt;
  const std::vector<double>& t = target.probs();
  // Rows (a, b, 0) and (0, b, a) with 2a + 2b = 1.
  double a = t[0], b = t[1];
  const double tol = 1e-9;
  if (std::abs(t[2]) > tol || std::abs(t[3]) > tol) return std::nullopt;
  if (std::abs(t[4] - b) > tol || std::abs(t[5] - a) > tol) return std::nullopt;
  double pe = 2.0 * b;
  if (pe < 0.0 || pe > 1.0) return std::nullopt;
  if (std::abs(2.0 * a + 2.0 * b - 1.0) > tol) return std::nullopt;
  return pe;
}

}  // namespace chansim::bec
