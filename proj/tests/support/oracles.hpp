#pragma once

// Independent reference implementations used to cross-check the library.
// Everything here is computed from first principles (series expansions,
// finite differences, brute-force enumeration) rather than by calling the
// code under test.

#include <cstddef>
#include <functional>
#include <set>
#include <string>
#include <vector>

namespace softaug::testing {

// erf via its Maclaurin series, summed to convergence. Accurate to ~1e-15
// for |x| <= 4, which covers every activation value the tests probe.
double erf_series(double x);

// Standard normal CDF built on erf_series.
double normal_cdf(double x);

// x * Phi(x), the exact GELU definition.
double gelu_reference(double x);

// |a - b| / max(|a|, |b|, floor) — symmetric relative error with an
// absolute floor so near-zero gradients do not blow up the ratio.
double relative_error(double a, double b, double floor = 1e-6);

// Central difference (f(x+h) - f(x-h)) / 2h.
double central_difference(const std::function<double(double)>& f, double x, double h);

// All outcomes of inserting one punctuation mark from the six-mark set
// into `tokens` at any gap: |marks| * (len+1) token lists.
std::set<std::vector<std::string>> enumerate_single_mark_insertions(
    const std::vector<std::string>& tokens);

}  // namespace softaug::testing
