// quadrature.hpp — adaptive Gauss-Kronrod integration and Cauchy principal values

#pragma once

#include <functional>

namespace largespin {

struct QuadratureOptions {
    double abs_tol{1e-12};
    double rel_tol{1e-12};
    int max_depth{50};  // bisection levels before giving up
};

// Adaptive 15-point Gauss-Kronrod integration of f over [a, b]. Throws
// NumericalError when the subdivision budget is exhausted.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          const QuadratureOptions& opts = {});

struct PvIntegralOptions {
    QuadratureOptions quad{};
    double truncation{0.0};  // 0 -> 50 * max(upper_scale, pole)
};

// Cauchy principal value of
//     PV integral_0^inf numerator(w) / (w - pole) dw,      pole > 0,
// for a numerator that is smooth on [0, inf) and decays at least
// exponentially beyond upper_scale. The pole is handled by singularity
// subtraction on the symmetric window [pole - h, pole + h] with
// h = min(pole, upper_scale) / 2, where the principal value of the
// subtracted constant term vanishes identically; the remainder is regular
// adaptive quadrature. The truncated tail is bounded and verified against
// the exponential decay.
double pv_integral(const std::function<double(double)>& numerator, double pole,
                   double upper_scale, const PvIntegralOptions& opts = {});

}  // namespace largespin
