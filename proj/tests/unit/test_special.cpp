#include "largespin/special.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"

using namespace largespin;

namespace {

// 18-digit reference values computed with an independent arbitrary-precision
// evaluation of the defining integrals; frozen here as the oracle.
struct EiReference {
    double x;
    double value;
};

const std::vector<EiReference> kEiTable{
    {1e-06, -13.2382938930624913},
    {0.0001, -8.63302470457459427},
    {0.01, -4.01792946542666937},
    {0.04, -2.60125657757282617},
    {0.1, -1.62281281396927661},
    {0.5, 0.454219904863173580},
    {1.0, 1.89511781635593676},
    {2.0, 4.95423435600189016},
    {3.0, 9.93383257062541656},
    {5.0, 40.1852753558031775},
    {10.0, 2492.22897624187776},
    {25.0, 3005950906.52554869},
    {37.5, 529781117042547.220},
    {50.0, 1.05856368971316910e+20},
    {100.0, 2.71555274485387982e+41},
    {300.0, 6.49648250808866579e+127},
    {700.0, 1.45097873605256085e+301},
    {-1e-06, -13.2382958930624913},
    {-0.01, -4.03792957653811381},
    {-0.04, -2.68126368902527990},
    {-0.5, -0.559773594776160812},
    {-1.0, -0.219383934395520274},
    {-2.0, -0.0489005107080611196},
    {-5.0, -0.00114829559127532580},
    {-10.0, -4.15696892968532428e-6},
    {-50.0, -3.78326402955045902e-24},
    {-300.0, -1.71038427680451012e-133},
    {-700.0, -1.40651876623403292e-307},
};

constexpr double kEulerGamma = 0.57721566490153286061;

}  // namespace

TEST_CASE("Ei matches the frozen high-precision references") {
    for (const auto& [x, expected] : kEiTable) {
        CAPTURE(x);
        const double got = exp_integral_ei(x);
        CHECK(std::abs(got - expected) <= 1e-13 * std::abs(expected));
    }
    // near the real zero of Ei the absolute scale is what matters
    CHECK(std::abs(exp_integral_ei(0.3725) - (-2.88741831887459646e-5)) < 1e-15);
}

TEST_CASE("Ei(-x) = -E1(x)") {
    for (const double x : {0.04, 0.3, 1.0, 2.5, 10.0, 120.0}) {
        CAPTURE(x);
        const double lhs = exp_integral_ei(-x);
        const double rhs = -exp_integral_e1(x);
        CHECK(std::abs(lhs - rhs) <= 1e-13 * std::abs(rhs));
    }
}

TEST_CASE("Ei small-x expansion: gamma + log(x) + x") {
    const double x = 1e-6;
    const double expansion = kEulerGamma + std::log(x) + x;
    CHECK(std::abs(exp_integral_ei(x) - expansion) < 1e-9);
}

TEST_CASE("Ei rejects the singular point") {
    CHECK_THROWS_AS(exp_integral_ei(0.0), std::invalid_argument);
    CHECK_THROWS_AS(exp_integral_e1(0.0), std::invalid_argument);
    CHECK_THROWS_AS(exp_integral_e1(-1.0), std::invalid_argument);
}

TEST_CASE("scaled variants are overflow-free and consistent") {
    for (const double x : {0.1, 1.0, 5.0, 60.0, 500.0}) {
        CAPTURE(x);
        CHECK(std::abs(detail::ei_scaled(x) - std::exp(-x) * exp_integral_ei(x)) <=
              1e-12 * std::abs(detail::ei_scaled(x)));
        CHECK(std::abs(detail::e1_scaled(x) - std::exp(x) * exp_integral_e1(x)) <=
              1e-12 * std::abs(detail::e1_scaled(x)));
    }
    // far beyond the overflow range of the unscaled functions
    CHECK(std::isfinite(detail::ei_scaled(5000.0)));
    CHECK(std::isfinite(detail::e1_scaled(5000.0)));
    CHECK(detail::ei_scaled(5000.0) == doctest::Approx(1.0 / 5000.0).epsilon(1e-3));
    CHECK(detail::e1_scaled(5000.0) == doctest::Approx(1.0 / 5000.0).epsilon(1e-3));
}
