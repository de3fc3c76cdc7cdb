#pragma once

#include <functional>

#include "lrs/profile.hpp"

namespace lrs {

// Adaptive Gauss-Kronrod on [a, b]; throws Errc::quadrature when the error
// estimate stays above tol * max(1, |I|).
[[nodiscard]] double integrate(const std::function<double(double)>& f, double a, double b,
                               double tol = 1e-10);

// Integral of |k_N| from the turning point xs to x (either side of it). Near
// xs the substitution x = xs +/- t^2 removes the square-root behaviour; the
// rest is split at the profile kinks.
[[nodiscard]] double phase_integral(const WidthProfile& p, int N, double k, double xs, double x);

// Integral of |k_n| over [a, b] (any order) for a mode without a turning
// point in between.
[[nodiscard]] double wkb_integral(const WidthProfile& p, int n, double k, double a, double b);

}  // namespace lrs
