#include "largespin/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "largespin/errors.hpp"

namespace largespin {

namespace {

// 15-point Kronrod abscissae/weights plus the embedded 7-point Gauss weights.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct GkResult {
    double value;
    double error;
};

GkResult gk15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double resg = kWg[3] * fc;
    double resk = kWgk[7] * fc;
    for (int j = 0; j < 3; ++j) {
        const int i = 2 * j + 1;
        const double f1 = f(c - h * kXgk[i]);
        const double f2 = f(c + h * kXgk[i]);
        resg += kWg[j] * (f1 + f2);
        resk += kWgk[i] * (f1 + f2);
    }
    for (int j = 0; j < 4; ++j) {
        const int i = 2 * j;
        const double f1 = f(c - h * kXgk[i]);
        const double f2 = f(c + h * kXgk[i]);
        resk += kWgk[i] * (f1 + f2);
    }
    return {resk * h, std::abs((resk - resg) * h)};
}

double adapt(const std::function<double(double)>& f, double a, double b, double tol,
             int depth, int max_depth) {
    const GkResult r = gk15(f, a, b);
    // roundoff floor: no subdivision can improve below ~eps of the local value
    if (r.error <= tol || r.error <= 1e-16 * std::abs(r.value)) return r.value;
    if (depth >= max_depth) {
        throw NumericalError("integrate_adaptive: subdivision budget exhausted before convergence");
    }
    const double m = 0.5 * (a + b);
    return adapt(f, a, m, 0.5 * tol, depth + 1, max_depth) +
           adapt(f, m, b, 0.5 * tol, depth + 1, max_depth);
}

double integrate_with_opts(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& opts) {
    const GkResult rough = gk15(f, a, b);
    const double tol = std::max(opts.abs_tol, opts.rel_tol * std::abs(rough.value));
    if (rough.error <= tol) return rough.value;
    const double m = 0.5 * (a + b);
    return adapt(f, a, m, 0.5 * tol, 1, opts.max_depth) +
           adapt(f, m, b, 0.5 * tol, 1, opts.max_depth);
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          const QuadratureOptions& opts) {
    if (!std::isfinite(a) || !std::isfinite(b) || !(a < b)) {
        throw std::invalid_argument("integrate_adaptive: requires finite a < b");
    }
    return integrate_with_opts(f, a, b, opts);
}

double pv_integral(const std::function<double(double)>& numerator, double pole,
                   double upper_scale, const PvIntegralOptions& opts) {
    if (!(pole > 0.0) || !std::isfinite(pole)) {
        throw std::invalid_argument("pv_integral: pole must be positive and finite");
    }
    if (!(upper_scale > 0.0) || !std::isfinite(upper_scale)) {
        throw std::invalid_argument("pv_integral: upper_scale must be positive and finite");
    }

    double upper = opts.truncation > 0.0 ? opts.truncation : 50.0 * std::max(upper_scale, pole);
    if (upper <= pole + upper_scale) {
        throw std::invalid_argument("pv_integral: truncation must lie well beyond the pole");
    }

    const double h = 0.5 * std::min(pole, upper_scale);
    const double g_pole = numerator(pole);
    const auto regular = [&](double w) { return numerator(w) / (w - pole); };
    // On the symmetric window the PV of g(pole)/(w - pole) is exactly zero; the
    // subtracted integrand extends continuously across the pole. The window is
    // split at the pole so quadrature nodes never coincide with it.
    const auto subtracted = [&](double w) { return (numerator(w) - g_pole) / (w - pole); };

    double result = integrate_with_opts(regular, 0.0, pole - h, opts.quad) +
                    integrate_with_opts(subtracted, pole - h, pole, opts.quad) +
                    integrate_with_opts(subtracted, pole, pole + h, opts.quad) +
                    integrate_with_opts(regular, pole + h, upper, opts.quad);

    // exponential-tail bound: |numerator| decaying with scale <= upper_scale gives
    // |tail| <= |numerator(upper)| * upper_scale / (upper - pole)
    for (int extension = 0;; ++extension) {
        const double tail = std::abs(numerator(upper)) * upper_scale / (upper - pole);
        if (tail < 1e-14 * (std::abs(result) + 1e-30)) break;
        if (extension >= 8) {
            throw NumericalError("pv_integral: integrand tail does not decay fast enough");
        }
        result += integrate_with_opts(regular, upper, 2.0 * upper, opts.quad);
        upper *= 2.0;
    }
    return result;
}

}  // namespace largespin
