#include "loopforge/fourier.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "loopforge/rng.hpp"

namespace loopforge {

namespace {

int mod_positive(int a, int m) {
  int r = a % m;
  return r < 0 ? r + m : r;
}

int wrap_window(int x, int M) {
  int r = mod_positive(x, M);
  return r > M / 2 ? r - M : r;
}

}  // namespace

AxisSequence::AxisSequence(int axis, int side) : axis_(axis), side_(side) {
  if (axis < 1 || axis > 3) throw std::invalid_argument("AxisSequence: axis must be 1..3");
  if (side < 2 || side % 2 != 0)
    throw std::invalid_argument("AxisSequence: side must be even and >= 2");
  for (int y = -(side / 2) + 1; y <= side / 2; ++y)
    if (mod_positive(y, 2) == 1) offsets_.push_back(y);
  values_.assign(side, 0.0);
}

double AxisSequence::at(int offset) const {
  int w = wrap_window(offset, side_);
  if (mod_positive(w, 2) != 1) throw std::invalid_argument("AxisSequence: offset must be odd");
  return values_[mod_positive(w, side_)];
}

void AxisSequence::set(int offset, double value) {
  int w = wrap_window(offset, side_);
  if (mod_positive(w, 2) != 1) throw std::invalid_argument("AxisSequence: offset must be odd");
  values_[mod_positive(w, side_)] = value;
}

double inner_product(const std::vector<double>& a, const std::vector<double>& b,
                     const FourierMode& k, const SlabTorus& t) {
  const Vertex o = t.graph().origin();
  if (a.size() != static_cast<size_t>(t.graph().vertex_count()) || a.size() != b.size())
    throw std::invalid_argument("inner_product: vector size mismatch");
  double sum = a[o] * b[o];
  for (int axis = 1; axis <= 3; ++axis) {
    int side = t.side(axis);
    if (side < 2) continue;
    for (int y = -(side / 2) + 1; y <= side / 2; ++y) {
      if (mod_positive(y, 2) != 1) continue;
      std::array<int, 3> d{0, 0, 0};
      d[axis - 1] = y;
      Vertex x = t.translate(o, d);
      sum += std::cos(k.k[axis - 1] * y) * a[o] * b[x];
    }
  }
  return sum;
}

ConvexityFlags convexity_check(const AxisSequence& seq, double tol) {
  ConvexityFlags flags;
  const int side = seq.side();
  flags.symmetric = true;
  for (int y : seq.offsets()) {
    int neg = wrap_window(-y, side);
    bool neg_in_window = neg > -(side / 2) && neg <= side / 2 && neg == -y;
    if (!neg_in_window) continue;
    if (std::abs(seq.at(y) - seq.at(-y)) > tol) flags.symmetric = false;
  }
  flags.convex_away_from_origin = true;
  for (int y : seq.offsets()) {
    if (std::abs(y) <= 3) continue;
    // literal in-window test: skip when a shifted offset leaves the window
    if (y - 2 <= -(side / 2) || y - 2 > side / 2) continue;
    if (y + 2 <= -(side / 2) || y + 2 > side / 2) continue;
    if (2.0 * seq.at(y) - seq.at(y - 2) - seq.at(y + 2) > tol)
      flags.convex_away_from_origin = false;
  }
  flags.first_step_monotone = true;
  if (side >= 6 && seq.at(1) < seq.at(3) - tol) flags.first_step_monotone = false;
  return flags;
}

FourierBoundResult fourier_lower_bound(const AxisSequence& seq, double k, double tol) {
  FourierBoundResult out;
  double s = std::sin(k);
  if (std::abs(s) < 1e-12) return out;  // k in {0, pi}: inapplicable
  out.applicable = true;
  out.lhs = 0.0;
  for (int y : seq.offsets()) out.lhs += seq.at(y) * std::cos(k * y);
  double g3 = seq.side() >= 6 ? seq.at(3) : seq.at(wrap_window(3, seq.side()));
  double g5 = seq.at(wrap_window(5, seq.side()));
  out.rhs = -(g3 - g5) * (1.0 - std::cos(3.0 * k)) / (2.0 * s * s);
  out.pass = out.lhs >= out.rhs - tol;
  return out;
}

double summation_by_parts_gap(const AxisSequence& seq, double k) {
  double s = std::sin(k);
  if (std::abs(s) < 1e-12)
    throw std::invalid_argument("summation_by_parts_gap: k must avoid {0, pi}");
  double lhs = 0.0, rhs = 0.0;
  for (int y : seq.offsets()) {
    lhs += seq.at(y) * std::cos(k * y);
    rhs += (2.0 * seq.at(y) - seq.at(y - 2) - seq.at(y + 2)) * std::cos(k * y);
  }
  rhs /= 2.0 * s * s;
  return std::abs(lhs - rhs);
}

AxisSequence random_convex_sequence(int side, uint64_t seed) {
  AxisSequence seq(1, side);
  CounterRng rng(seed, 0xf0u);
  // positive offsets ascending: 1, 3, ..., side/2 - 1 (side divisible by 4
  // gives a symmetric window; otherwise side/2 is the unpaired offset)
  std::vector<int> pos;
  for (int y : seq.offsets())
    if (y > 0) pos.push_back(y);
  // build increments: delta_j = v(next) - v(cur) <= 0, nondecreasing toward
  // the boundary so the wrap condition holds
  int m = static_cast<int>(pos.size());
  std::vector<double> delta(std::max(m - 1, 0));
  double a = 0.0;
  for (int j = m - 2; j >= 0; --j) {
    a += rng.next_double();  // accumulate so |delta| grows toward the origin
    delta[j] = -a;
  }
  std::vector<double> v(m);
  v[m - 1] = rng.next_double();
  for (int j = m - 2; j >= 0; --j) v[j] = v[j + 1] - delta[j];
  // optional bump at the first offset; keeps (iii) and leaves (ii) intact
  v[0] += rng.next_double();
  for (int j = 0; j < m; ++j) {
    seq.set(pos[j], v[j]);
    if (-pos[j] > -(side / 2)) seq.set(-pos[j], v[j]);
  }
  return seq;
}

std::pair<double, double> cesaro_sum(const TwoPointTable& table) {
  table.validate();
  if (table.value.empty()) throw std::invalid_argument("cesaro_sum: empty table");
  double sum = 0.0, err2 = 0.0;
  for (size_t i = 0; i < table.value.size(); ++i) {
    if (!table.defined[i])
      throw std::invalid_argument("cesaro_sum: table does not cover all displacements");
    sum += table.value[i];
    err2 += table.error[i] * table.error[i];
  }
  double n = static_cast<double>(table.value.size());
  return {sum / n, std::sqrt(err2) / n};
}

std::vector<double> mw_reference_curve(const std::vector<int>& l_values, int k_thickness,
                                       double c) {
  std::vector<double> out;
  out.reserve(l_values.size());
  for (int l : l_values) {
    if (l < 3) throw std::invalid_argument("mw_reference_curve: L must be >= 3");
    out.push_back(c * std::sqrt(static_cast<double>(k_thickness) / std::log(l)));
  }
  return out;
}

}  // namespace loopforge
