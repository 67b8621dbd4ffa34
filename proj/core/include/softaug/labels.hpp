#pragma once

#include <cstddef>
#include <vector>

namespace softaug {

// Probability vector over classes. Components are non-negative and sum to 1
// (within 1e-9); validate_label enforces this at construction boundaries.
using LabelVector = std::vector<double>;

// Label smoothing coefficient, restricted to [0,1).
struct SmoothingAlpha {
  double value = 0.0;
  SmoothingAlpha() = default;
  explicit SmoothingAlpha(double v);
};

// One-hot vector of length n_classes with a 1 at class_index.
LabelVector one_hot(std::size_t class_index, std::size_t n_classes);

// Componentwise (1-alpha)*y_i + alpha/n. Accepts already-soft inputs, so
// smoothing composes: smooth(smooth(y,a),b) == smooth(y, a+b-a*b).
LabelVector smooth(const LabelVector& label, SmoothingAlpha alpha);

// Smallest index attaining the maximum component.
std::size_t argmax_class(const LabelVector& label);

// Throws std::invalid_argument unless label is a probability vector.
void validate_label(const LabelVector& label);

}  // namespace softaug
