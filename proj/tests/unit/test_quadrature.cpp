#include "largespin/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "doctest.h"
#include "largespin/errors.hpp"
#include "largespin/special.hpp"

using namespace largespin;

TEST_CASE("adaptive quadrature on smooth integrands") {
    CHECK(integrate_adaptive([](double x) { return std::sin(x); }, 0.0, std::numbers::pi) ==
          doctest::Approx(2.0).epsilon(1e-13));
    CHECK(integrate_adaptive([](double x) { return std::exp(-x); }, 0.0, 200.0) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(integrate_adaptive([](double) { return 0.0; }, 0.0, 10.0) == 0.0);
    CHECK_THROWS_AS(integrate_adaptive([](double x) { return x; }, 1.0, 1.0),
                    std::invalid_argument);
}

TEST_CASE("pv_integral matches the exponential-integral closed form") {
    // PV int_0^inf 2 a w e^{-w/wc} / (w - pole) dw
    //   = 2 a [wc - pole e^{-pole/wc} Ei(pole/wc)]
    const double alpha = 0.05, omega_c = 50.0, pole = 2.0;
    const auto numerator = [&](double w) { return 2.0 * alpha * w * std::exp(-w / omega_c); };
    const double x = pole / omega_c;
    const double closed = 2.0 * alpha * (omega_c - pole * std::exp(-x) * exp_integral_ei(x));
    const double quad = pv_integral(numerator, pole, omega_c);
    CHECK(std::abs(quad - closed) < 1e-8);
    CHECK(std::abs(quad - closed) < 1e-10 * std::abs(closed));
}

TEST_CASE("pv_integral with vanishing numerator") {
    CHECK(pv_integral([](double) { return 0.0; }, 1.0, 10.0) == 0.0);
}

TEST_CASE("pv_integral self-convergence under tighter tolerances") {
    const auto numerator = [](double w) { return 0.3 * w * std::exp(-w / 20.0); };
    PvIntegralOptions coarse;
    coarse.quad.rel_tol = 1e-10;
    coarse.quad.abs_tol = 1e-10;
    PvIntegralOptions fine;
    fine.quad.rel_tol = 1e-13;
    fine.quad.abs_tol = 1e-13;
    const double a = pv_integral(numerator, 3.0, 20.0, coarse);
    const double b = pv_integral(numerator, 3.0, 20.0, fine);
    CHECK(std::abs(a - b) < 1e-10 * std::max(1.0, std::abs(b)));
}

TEST_CASE("pv_integral input validation") {
    const auto numerator = [](double w) { return w * std::exp(-w); };
    CHECK_THROWS_AS(pv_integral(numerator, 0.0, 10.0), std::invalid_argument);
    CHECK_THROWS_AS(pv_integral(numerator, -2.0, 10.0), std::invalid_argument);
    CHECK_THROWS_AS(pv_integral(numerator, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("pv_integral rejects non-decaying tails") {
    // constant numerator: the truncated tail bound can never be met
    CHECK_THROWS_AS(pv_integral([](double) { return 1.0; }, 1.0, 5.0), NumericalError);
}
