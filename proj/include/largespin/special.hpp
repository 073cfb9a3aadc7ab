// special.hpp — exponential integrals Ei and E1

#pragma once

namespace largespin {

// Exponential integral Ei(x) (principal-value definition for x > 0); for
// x < 0 evaluated through Ei(x) = -E1(-x). Rejects x = 0 (logarithmic
// singularity). Relative accuracy better than 1e-13 over |x| in [1e-6, 700].
double exp_integral_ei(double x);

// E1(x) = integral_x^inf e^-t / t dt for x > 0.
double exp_integral_e1(double x);

namespace detail {

// e^-x Ei(x) for x > 0; overflow-free for large x.
double ei_scaled(double x);

// e^+x E1(x) for x > 0; underflow-free for large x.
double e1_scaled(double x);

}  // namespace detail

}  // namespace largespin
