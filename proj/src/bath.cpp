#include "largespin/bath.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "largespin/quadrature.hpp"
#include "largespin/special.hpp"

namespace largespin {

namespace {

constexpr double kPi = std::numbers::pi;

// coth(x) for x = beta w / 2 > 0, with series/saturation branches at the ends.
double coth_half(double x) {
    if (x > 20.0) return 1.0;
    if (x < 1e-4) return 1.0 / x + x / 3.0;
    return 1.0 / std::tanh(x);
}

// rho(w) coth(beta w / 2), written so the w -> 0 limit 4 alpha k_B T is exact.
double rho_coth(double w, const BathSpec& bath) {
    if (bath.temperature == 0.0) {
        return 2.0 * bath.alpha * w * std::exp(-w / bath.omega_c);
    }
    const double cutoff = std::exp(-w / bath.omega_c);
    if (w == 0.0) return 4.0 * bath.alpha * bath.temperature;
    const double x = w / (2.0 * bath.temperature);
    // w coth(w / 2T): 2T (1 + x^2/3) for small x, w for saturated coth
    double wcoth;
    if (x < 1e-4) {
        wcoth = 2.0 * bath.temperature * (1.0 + x * x / 3.0);
    } else if (x > 20.0) {
        wcoth = w;
    } else {
        wcoth = w / std::tanh(x);
    }
    return 2.0 * bath.alpha * wcoth * cutoff;
}

// Quadrature tolerances proportional to the natural rate magnitude alpha * scale,
// keeping every rate exactly homogeneous (linear) in alpha.
QuadratureOptions rate_quad_options(double delta, const BathSpec& bath) {
    QuadratureOptions opts;
    opts.rel_tol = 1e-12;
    opts.abs_tol = std::max(1e-300, 1e-15 * bath.alpha * std::max(bath.omega_c, delta));
    return opts;
}

double rate_truncation(double delta, const BathSpec& bath) {
    return 50.0 * std::max({bath.omega_c, delta, bath.temperature});
}

void require_positive_delta(double delta, const char* who) {
    if (!(delta > 0.0) || !std::isfinite(delta)) {
        throw std::invalid_argument(std::string(who) +
                                    ": requires delta > 0 (compute_gamma handles the delta -> 0 limit)");
    }
}

}  // namespace

BathSpec make_bath_spec(double alpha, double omega_c, double temperature) {
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
        throw std::invalid_argument("bath spec: alpha must be >= 0 and finite");
    }
    if (!(omega_c > 0.0) || !std::isfinite(omega_c)) {
        throw std::invalid_argument("bath spec: omega_c must be positive and finite");
    }
    if (!(temperature >= 0.0) || !std::isfinite(temperature)) {
        throw std::invalid_argument("bath spec: temperature must be >= 0 and finite");
    }
    return BathSpec{alpha, omega_c, temperature};
}

double spectral_density(double omega, const BathSpec& bath) {
    if (!(omega >= 0.0)) {
        throw std::invalid_argument("spectral_density: omega must be >= 0");
    }
    return 2.0 * bath.alpha * omega * std::exp(-omega / bath.omega_c);
}

std::complex<double> compute_gamma_c(double delta, const BathSpec& bath) {
    require_positive_delta(delta, "compute_gamma_c");
    const double x = delta / bath.omega_c;
    // PV int rho/(w - delta) = 2 alpha [omega_c - delta e^-x Ei(x)]
    //    int rho/(w + delta) = 2 alpha [omega_c - delta e^+x E1(x)]
    const double a = detail::e1_scaled(x);
    const double b = detail::ei_scaled(x);
    const double im = -bath.alpha * (2.0 * bath.omega_c - delta * (a + b));
    const double cothf =
        bath.temperature == 0.0 ? 1.0 : coth_half(delta / (2.0 * bath.temperature));
    const double re = 0.5 * kPi * spectral_density(delta, bath) * cothf;
    return {re, im};
}

std::complex<double> compute_gamma_s(double delta, const BathSpec& bath) {
    require_positive_delta(delta, "compute_gamma_s");
    const double im = -0.5 * kPi * spectral_density(delta, bath);
    double re;
    if (bath.temperature == 0.0) {
        const double x = delta / bath.omega_c;
        re = bath.alpha * delta * (detail::ei_scaled(x) - detail::e1_scaled(x));
    } else {
        re = gamma_s_re_by_quadrature(delta, bath);
    }
    return {re, im};
}

std::complex<double> compute_gamma(const BathSpec& bath) {
    const double re = bath.temperature == 0.0 ? 0.0 : 2.0 * kPi * bath.alpha * bath.temperature;
    return {re, -2.0 * bath.alpha * bath.omega_c};
}

RateSet compute_rates(const SystemParams& params, const BathSpec& bath) {
    RateSet rates;
    rates.delta = params.delta;
    rates.gamma = compute_gamma(bath);
    rates.gamma_c = compute_gamma_c(params.delta, bath);
    rates.gamma_s = compute_gamma_s(params.delta, bath);
    return rates;
}

double gamma_c_im_by_quadrature(double delta, const BathSpec& bath) {
    require_positive_delta(delta, "gamma_c_im_by_quadrature");
    const QuadratureOptions quad = rate_quad_options(delta, bath);
    PvIntegralOptions pv_opts;
    pv_opts.quad = quad;
    pv_opts.truncation = rate_truncation(delta, bath);
    const auto rho = [&](double w) { return 2.0 * bath.alpha * w * std::exp(-w / bath.omega_c); };
    const double regular =
        integrate_adaptive([&](double w) { return rho(w) / (w + delta); }, 0.0,
                           pv_opts.truncation, quad);
    const double pv = pv_integral(rho, delta, bath.omega_c, pv_opts);
    return -0.5 * (regular + pv);
}

double gamma_s_re_by_quadrature(double delta, const BathSpec& bath) {
    require_positive_delta(delta, "gamma_s_re_by_quadrature");
    const QuadratureOptions quad = rate_quad_options(delta, bath);
    PvIntegralOptions pv_opts;
    pv_opts.quad = quad;
    pv_opts.truncation = rate_truncation(delta, bath);
    const auto num = [&](double w) { return 0.5 * rho_coth(w, bath); };
    const double regular =
        integrate_adaptive([&](double w) { return num(w) / (w + delta); }, 0.0,
                           pv_opts.truncation, quad);
    const double pv = pv_integral(num, delta, bath.omega_c, pv_opts);
    return regular - pv;
}

double gamma_s_integrand(double omega, double delta, const BathSpec& bath) {
    return 0.5 * rho_coth(omega, bath) * (1.0 / (omega + delta) - 1.0 / (omega - delta));
}

}  // namespace largespin
