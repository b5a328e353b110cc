#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "loopforge/exact.hpp"
#include "loopforge/graph.hpp"

namespace loopforge {

/// Values at the odd offsets y in (-side/2, side/2] along one axis.
class AxisSequence {
 public:
  AxisSequence(int axis, int side);

  int axis() const { return axis_; }
  int side() const { return side_; }
  const std::vector<int>& offsets() const { return offsets_; }

  double at(int offset) const;       // offset wrapped into the window
  void set(int offset, double value);

 private:
  int axis_;
  int side_;
  std::vector<int> offsets_;
  std::vector<double> values_;  // indexed by (offset mod side)
};

/// The section-6 inner product a o b = sum_{x in H u V u W} cos(k.x) a_o b_x
/// + a_o b_o, with the axis sets H, V, W of odd offsets through the origin.
double inner_product(const std::vector<double>& a, const std::vector<double>& b,
                     const FourierMode& k, const SlabTorus& t);

struct ConvexityFlags {
  bool symmetric = false;
  bool convex_away_from_origin = false;
  bool first_step_monotone = false;
  bool all() const { return symmetric && convex_away_from_origin && first_step_monotone; }
};

/// Hypotheses (i)-(iii) tested literally, with the exclusion set {+-1, +-3}
/// and conditions restricted to offsets whose neighbours lie in the window.
ConvexityFlags convexity_check(const AxisSequence& seq, double tol = 1e-12);

struct FourierBoundResult {
  bool applicable = false;  // false when k in {0, pi} on the axis
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
};

/// sum_y G(y) cos(k y) >= -(G(3e) - G(5e)) (1 - cos 3k) / (2 sin^2 k),
/// for cone modes with k not in {0, pi}; offsets beyond the window wrap.
FourierBoundResult fourier_lower_bound(const AxisSequence& seq, double k_component,
                                       double tol = 1e-10);

/// Gap of the summation-by-parts identity
/// sum G(y)cos(ky) = (1/(2 sin^2 k)) sum (2G(y) - G(y-2) - G(y+2)) cos(ky).
double summation_by_parts_gap(const AxisSequence& seq, double k_component);

/// Nonincreasing convex random sequence satisfying hypotheses (i)-(iii),
/// including the wrap condition at the window boundary.
AxisSequence random_convex_sequence(int side, uint64_t seed);

/// Volume-averaged sum of a complete displacement table; errors in
/// quadrature.
std::pair<double, double> cesaro_sum(const TwoPointTable& table);

/// c sqrt(K / log L) per L.
std::vector<double> mw_reference_curve(const std::vector<int>& l_values, int k_thickness,
                                       double c);

}  // namespace loopforge
