#include "softaug/labels.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace softaug {

SmoothingAlpha::SmoothingAlpha(double v) : value(v) {
  if (!(v >= 0.0 && v < 1.0)) {
    throw std::invalid_argument("smoothing alpha must be in [0,1), got " + std::to_string(v));
  }
}

LabelVector one_hot(std::size_t class_index, std::size_t n_classes) {
  if (n_classes < 2) {
    throw std::invalid_argument("one_hot: n_classes must be >= 2, got " + std::to_string(n_classes));
  }
  if (class_index >= n_classes) {
    throw std::invalid_argument("one_hot: class index " + std::to_string(class_index) +
                                " out of range [0, " + std::to_string(n_classes) + ")");
  }
  LabelVector v(n_classes, 0.0);
  v[class_index] = 1.0;
  return v;
}

LabelVector smooth(const LabelVector& label, SmoothingAlpha alpha) {
  const double a = alpha.value;
  const double uniform = a / static_cast<double>(label.size());
  LabelVector out(label.size());
  for (std::size_t i = 0; i < label.size(); ++i) {
    out[i] = (1.0 - a) * label[i] + uniform;
  }
  return out;
}

std::size_t argmax_class(const LabelVector& label) {
  if (label.empty()) throw std::invalid_argument("argmax_class: empty label vector");
  std::size_t best = 0;
  for (std::size_t i = 1; i < label.size(); ++i) {
    if (label[i] > label[best]) best = i;
  }
  return best;
}

void validate_label(const LabelVector& label) {
  if (label.empty()) throw std::invalid_argument("label vector is empty");
  double sum = 0.0;
  for (double c : label) {
    if (!(c >= 0.0) || !std::isfinite(c)) {
      throw std::invalid_argument("label component must be finite and non-negative");
    }
    sum += c;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument("label components must sum to 1, got " + std::to_string(sum));
  }
}

}  // namespace softaug
