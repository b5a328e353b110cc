#pragma once

#include <optional>
#include <string>
#include <vector>

namespace loopforge {

/// Per-vertex weight function U(n), stored as a finite table with an implicit
/// zero tail and U(n) = 0 for n < 0. Selects the model: dimer, monomer
/// double-dimer, truncated XY, or custom.
class WeightFunction {
 public:
  /// U(1) = 1, zero elsewhere.
  static WeightFunction dimer();
  /// U(0) = U(1) = 1, zero elsewhere.
  static WeightFunction mdd();
  /// U(n) = 1 for n <= n_max, zero elsewhere.
  static WeightFunction truncated_xy(int n_max);
  static WeightFunction custom(std::vector<double> values);
  /// Parses "dimer", "mdd", "txy:<N>" / "truncated_xy(<N>)".
  static WeightFunction from_name(const std::string& name);

  double operator()(int n) const {
    if (n < 0 || n >= static_cast<int>(values_.size())) return 0.0;
    return values_[n];
  }
  /// Largest n with U(n) > 0.
  int support_bound() const { return support_bound_; }
  const std::vector<double>& values() const { return values_; }
  const std::string& tag() const { return tag_; }

  bool normalized_monotone() const { return normalized_monotone_; }
  bool fast_decaying() const { return fast_decaying_; }
  /// Minimal constant with U(n+1) <= K_U U(n)/n for all n >= 1; meaningful
  /// only when fast_decaying().
  double decay_constant() const { return decay_constant_; }

 private:
  WeightFunction(std::vector<double> values, std::string tag);

  std::vector<double> values_;
  std::string tag_;
  int support_bound_ = 0;
  bool normalized_monotone_ = false;
  bool fast_decaying_ = false;
  double decay_constant_ = 0.0;
};

/// Model parameters shared across layers. rho is the monomer activity of the
/// MDD layer (rho = 1/beta when bridging), n_colors the loop-count weight N.
struct ModelParams {
  double beta = 1.0;
  double h = 0.0;
  int r = 1;
  double rho = 1.0;
  int n_colors = 1;

  void validate() const;
};

}  // namespace loopforge
