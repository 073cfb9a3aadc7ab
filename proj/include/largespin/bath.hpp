// bath.hpp — ohmic spectral function and the complex bath rates

#pragma once

#include <complex>

#include "largespin/spin_ops.hpp"

namespace largespin {

// Ohmic bath: spectral function rho(w) = 2 alpha w exp(-w / omega_c).
// temperature = 0 selects the exact zero-temperature path (coth == 1)
// rather than a large-beta approximation.
struct BathSpec {
    double alpha{0.0};
    double omega_c{1.0};
    double temperature{0.0};

    // The perturbative treatment is only trustworthy for small couplings;
    // callers surface this as a warning, not an error.
    bool beyond_weak_coupling() const { return alpha > 0.1; }
};

BathSpec make_bath_spec(double alpha, double omega_c, double temperature);

// The three complex rates evaluated at level spacing delta. Real parts drive
// relaxation and dephasing, imaginary parts are energy shifts.
struct RateSet {
    std::complex<double> gamma{};    // Gamma = Gamma_c(delta -> 0)
    std::complex<double> gamma_c{};  // cosine-channel rate
    std::complex<double> gamma_s{};  // sine-channel rate
    double delta{0.0};
};

// rho(w) = 2 alpha w exp(-w / omega_c); rejects negative w.
double spectral_density(double omega, const BathSpec& bath);

// Gamma_c = (pi/2) rho(delta) coth(beta delta / 2)
//           - (i/2) PV int_0^inf rho(w) [1/(w+delta) + 1/(w-delta)] dw.
// Both parts evaluated in closed form (the imaginary part through Ei/E1).
std::complex<double> compute_gamma_c(double delta, const BathSpec& bath);

// Gamma_s = (1/2) PV int_0^inf rho(w) coth(beta w / 2) [1/(w+delta) - 1/(w-delta)] dw
//           - i (pi/2) rho(delta).
// The real part is closed-form at zero temperature and principal-value
// quadrature at finite temperature.
std::complex<double> compute_gamma_s(double delta, const BathSpec& bath);

// Gamma = Gamma_c(delta -> 0) in closed form:
// Re = 2 pi alpha k_B T (zero at temperature 0), Im = -2 alpha omega_c.
std::complex<double> compute_gamma(const BathSpec& bath);

RateSet compute_rates(const SystemParams& params, const BathSpec& bath);

// Principal-value quadrature routes for the components that also have closed
// forms; used as the independent cross-check path (and, for Re Gamma_s at
// finite temperature, as the production path).
double gamma_c_im_by_quadrature(double delta, const BathSpec& bath);
double gamma_s_re_by_quadrature(double delta, const BathSpec& bath);

// Full Gamma_s real-part integrand (1/2) rho(w) coth(beta w/2) [1/(w+delta) - 1/(w-delta)];
// regular at w -> 0 where rho coth tends to 4 alpha k_B T.
double gamma_s_integrand(double omega, double delta, const BathSpec& bath);

}  // namespace largespin
