#include "loopforge/weights.hpp"

#include <algorithm>
#include <stdexcept>

namespace loopforge {

WeightFunction::WeightFunction(std::vector<double> values, std::string tag)
    : values_(std::move(values)), tag_(std::move(tag)) {
  while (!values_.empty() && values_.back() == 0.0) values_.pop_back();
  bool some_positive_tail = false;
  for (size_t n = 1; n < values_.size(); ++n)
    if (values_[n] > 0.0) some_positive_tail = true;
  if (!some_positive_tail)
    throw std::invalid_argument("WeightFunction: needs U(n) > 0 for some n > 0");
  for (double v : values_)
    if (v < 0.0 || v > 1.0)
      throw std::invalid_argument("WeightFunction: values must lie in [0, 1]");
  support_bound_ = static_cast<int>(values_.size()) - 1;

  normalized_monotone_ = !values_.empty() && values_[0] == 1.0;
  for (size_t n = 0; n + 1 < values_.size() && normalized_monotone_; ++n)
    if (values_[n + 1] > values_[n]) normalized_monotone_ = false;

  fast_decaying_ = normalized_monotone_;
  decay_constant_ = 0.0;
  if (fast_decaying_) {
    for (int n = 1; n <= support_bound_; ++n) {
      double next = (*this)(n + 1);
      if (next == 0.0) continue;
      if ((*this)(n) == 0.0) {
        fast_decaying_ = false;
        break;
      }
      decay_constant_ = std::max(decay_constant_, n * next / (*this)(n));
    }
    decay_constant_ = std::max(decay_constant_, 1.0);
  }
  if (!fast_decaying_) decay_constant_ = 0.0;
}

WeightFunction WeightFunction::dimer() { return WeightFunction({0.0, 1.0}, "dimer"); }

WeightFunction WeightFunction::mdd() { return WeightFunction({1.0, 1.0}, "mdd"); }

WeightFunction WeightFunction::truncated_xy(int n_max) {
  if (n_max < 1) throw std::invalid_argument("truncated_xy: n_max must be >= 1");
  return WeightFunction(std::vector<double>(n_max + 1, 1.0),
                        "truncated_xy(" + std::to_string(n_max) + ")");
}

WeightFunction WeightFunction::custom(std::vector<double> values) {
  return WeightFunction(std::move(values), "custom");
}

WeightFunction WeightFunction::from_name(const std::string& name) {
  if (name == "dimer") return dimer();
  if (name == "mdd") return mdd();
  if (name.rfind("txy:", 0) == 0) return truncated_xy(std::stoi(name.substr(4)));
  if (name.rfind("truncated_xy(", 0) == 0 && name.back() == ')')
    return truncated_xy(std::stoi(name.substr(13, name.size() - 14)));
  throw std::invalid_argument("WeightFunction: unknown preset '" + name + "'");
}

void ModelParams::validate() const {
  if (beta < 0.0) throw std::invalid_argument("ModelParams: beta must be >= 0");
  if (h < 0.0) throw std::invalid_argument("ModelParams: h must be >= 0");
  if (h > 0.0 && r != 1 && r != 2)
    throw std::invalid_argument("ModelParams: r must be 1 or 2 when h > 0");
  if (rho < 0.0) throw std::invalid_argument("ModelParams: rho must be >= 0");
  if (n_colors < 1) throw std::invalid_argument("ModelParams: N must be >= 1");
}

}  // namespace loopforge
