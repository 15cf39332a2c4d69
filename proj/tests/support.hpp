#pragma once

// Independent finite-difference oracles shared by the test executables.

#include <algorithm>
#include <cmath>
#include <functional>

namespace testsupport {

/// Fourth-order central first derivative.
inline double d1(const std::function<double(double)>& f, double x, double h = 1e-3) {
    return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

/// Fourth-order central second derivative.
inline double d2(const std::function<double(double)>& f, double x, double h = 1e-3) {
    return (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) - f(x - 2 * h)) / (12 * h * h);
}

inline double rel(double got, double want) { return std::abs(got - want) / (1.0 + std::abs(want)); }

}  // namespace testsupport
