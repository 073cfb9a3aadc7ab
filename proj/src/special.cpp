#include "largespin/special.hpp"

#include <cmath>
#include <stdexcept>

#include "largespin/errors.hpp"

namespace largespin {

namespace {

constexpr double kEulerGamma = 0.57721566490153286061;

// Ei(x) = gamma + ln x + sum_{k>=1} x^k / (k k!); all terms positive, so the
// sum carries no cancellation. Used for 0 < x < 40.
double ei_series(double x) {
    double sum = 0.0;
    double term = 1.0;
    for (int k = 1; k < 512; ++k) {
        term *= x / k;
        const double add = term / k;
        sum += add;
        if (add < 1e-17 * sum) break;
    }
    return kEulerGamma + std::log(x) + sum;
}

// e^-x Ei(x) ~ (1/x) sum_k k!/x^k, truncated at the smallest term. The
// smallest term is below 1e-15 of the sum for x >= 40.
double ei_asymptotic_scaled(double x) {
    double sum = 1.0;
    double term = 1.0;
    for (int k = 1; k < 256; ++k) {
        const double next = term * k / x;
        if (next >= term) break;
        term = next;
        sum += term;
        if (term < 1e-17 * sum) break;
    }
    return sum / x;
}

// E1(x) = -gamma - ln x - sum_{k>=1} (-x)^k / (k k!) for 0 < x <= 1.
double e1_series(double x) {
    double sum = 0.0;
    double term = 1.0;
    for (int k = 1; k < 64; ++k) {
        term *= -x / k;
        sum -= term / k;
        if (std::abs(term) / k < 1e-18) break;
    }
    return -kEulerGamma - std::log(x) + sum;
}

// e^x E1(x) = 1 / (x+1 - 1^2/(x+3 - 2^2/(x+5 - ...))), evaluated by the
// modified Lentz algorithm. Used for x > 1.
double e1_cf_scaled(double x) {
    constexpr double tiny = 1e-300;
    double b = x + 1.0;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int k = 1; k < 1024; ++k) {
        const double a = -static_cast<double>(k) * static_cast<double>(k);
        b += 2.0;
        d = b + a * d;
        if (std::abs(d) < tiny) d = tiny;
        c = b + a / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = c * d;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) return h;
    }
    throw NumericalError("exp_integral_e1: continued fraction did not converge");
}

}  // namespace

namespace detail {

double ei_scaled(double x) {
    if (x < 40.0) return std::exp(-x) * ei_series(x);
    return ei_asymptotic_scaled(x);
}

double e1_scaled(double x) {
    if (x <= 1.0) return std::exp(x) * e1_series(x);
    return e1_cf_scaled(x);
}

}  // namespace detail

double exp_integral_e1(double x) {
    if (!(x > 0.0)) {
        throw std::invalid_argument("exp_integral_e1: requires x > 0");
    }
    if (x <= 1.0) return e1_series(x);
    return std::exp(-x) * e1_cf_scaled(x);
}

double exp_integral_ei(double x) {
    if (x == 0.0 || !std::isfinite(x)) {
        throw std::invalid_argument("exp_integral_ei: x = 0 is a logarithmic singularity");
    }
    if (x < 0.0) return -exp_integral_e1(-x);
    if (x < 40.0) return ei_series(x);
    return std::exp(x) * ei_asymptotic_scaled(x);
}

}  // namespace largespin
