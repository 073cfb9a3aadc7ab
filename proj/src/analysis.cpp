#include "largespin/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "largespin/errors.hpp"
#include "largespin/special.hpp"

namespace largespin {

namespace {

void require_spin_half(const SystemParams& params, const char* who) {
    if (params.spin.two_j != 1) {
        throw std::invalid_argument(std::string(who) + ": defined for J = 1/2 only");
    }
}

}  // namespace

EquilibriumValues equilibrium_bloch(const SystemParams& params, const RateSet& rates) {
    require_spin_half(params, "equilibrium_bloch");
    const double eps = params.epsilon;
    const double tc = params.tc;
    const double d = params.delta;

    const std::complex<double> weighted = eps * eps * rates.gamma + 4.0 * tc * tc * rates.gamma_c;
    const std::complex<double> diff = rates.gamma - rates.gamma_c;
    const double r = weighted.real();
    const double shifted = d + rates.gamma_s.real();

    const double den = d * r * shifted - eps * eps * d * d * diff.real();
    if (!(std::abs(den) > 0.0) || !std::isfinite(den)) {
        throw NumericalError("equilibrium_bloch: degenerate parameter point (vanishing denominator)");
    }

    EquilibriumValues eq;
    eq.jz_inf = eps * (r * diff.imag() + d * d * d * rates.gamma_s.imag()) / (2.0 * den);
    eq.jx_inf = (tc * d * d * rates.gamma_s.imag() * shifted +
                 eps * eps * tc * diff.real() * diff.imag()) /
                den;
    eq.jy_inf = 0.0;
    return eq;
}

EquilibriumValues equilibrium_thermodynamic(const SystemParams& params, double temperature) {
    require_spin_half(params, "equilibrium_thermodynamic");
    if (!(temperature >= 0.0)) {
        throw std::invalid_argument("equilibrium_thermodynamic: temperature must be >= 0");
    }
    const double th =
        temperature == 0.0 ? 1.0 : std::tanh(params.delta / (2.0 * temperature));
    EquilibriumValues eq;
    eq.jz_inf = -params.epsilon / (2.0 * params.delta) * th;
    eq.jx_inf = -params.tc / params.delta * th;
    eq.jy_inf = 0.0;
    return eq;
}

BeatPrediction beat_prediction(const SystemParams& params, const BathSpec& bath) {
    if (params.spin.two_j != 2) {
        throw std::invalid_argument("beat_prediction: derived for J = 1 (two_j = 2)");
    }
    if (params.epsilon != 0.0) {
        throw std::invalid_argument("beat_prediction: requires zero bias");
    }
    if (bath.temperature != 0.0) {
        throw std::invalid_argument("beat_prediction: requires zero temperature");
    }

    BeatPrediction pred;
    if (bath.alpha == 0.0) {
        pred.omega_0 = 2.0 * params.tc;
        return pred;
    }
    // Closed forms of the principal-value shifts for the ohmic density:
    //   PV int rho/(w - 2tc) = 2 alpha [omega_c - 2tc e^-y Ei(y)]
    //      int rho/(w + 2tc) = 2 alpha [omega_c - 2tc e^+y E1(y)],   y = 2tc/omega_c
    const double y = 2.0 * params.tc / bath.omega_c;
    pred.e2_plus = -bath.alpha * (bath.omega_c - 2.0 * params.tc * detail::ei_scaled(y));
    pred.e2_minus = -bath.alpha * (bath.omega_c - 2.0 * params.tc * detail::e1_scaled(y));
    pred.e2_zero = pred.e2_plus + pred.e2_minus;
    pred.omega_0 = 2.0 * params.tc + 0.5 * (pred.e2_plus - pred.e2_minus);
    pred.omega_b = -0.5 * pred.e2_zero;
    return pred;
}

std::vector<double> predicted_beat_trace(const BeatPrediction& pred,
                                         const std::vector<double>& times) {
    std::vector<double> out;
    out.reserve(times.size());
    for (const double t : times) {
        if (t < 0.0) throw std::invalid_argument("predicted_beat_trace: times must be >= 0");
        out.push_back(std::cos(pred.omega_0 * t) * std::cos(pred.omega_b * t));
    }
    return out;
}

std::optional<double> extract_decay_time(const Trajectory& traj, double level) {
    if (traj.size() < 2) {
        throw std::invalid_argument("extract_decay_time: trajectory too short");
    }
    const double z0 = traj.jz.front();
    if (z0 == 0.0) {
        throw std::invalid_argument("extract_decay_time: initial <Jz> vanishes, cannot normalize");
    }
    if (!(level < 1.0)) {
        throw std::invalid_argument("extract_decay_time: level must lie below the initial value 1");
    }
    double prev = traj.jz[0] / z0;
    for (std::size_t i = 1; i < traj.size(); ++i) {
        const double cur = traj.jz[i] / z0;
        if (prev > level && cur <= level) {
            const double f = (prev - level) / (prev - cur);
            return traj.times[i - 1] + f * (traj.times[i] - traj.times[i - 1]);
        }
        prev = cur;
    }
    return std::nullopt;
}

std::optional<double> extract_decay_time_one_over_e(const Trajectory& traj) {
    if (traj.size() < 2) {
        throw std::invalid_argument("extract_decay_time: trajectory too short");
    }
    const double z0 = traj.jz.front();
    if (z0 == 0.0) {
        throw std::invalid_argument("extract_decay_time: initial <Jz> vanishes, cannot normalize");
    }
    const double z_final = traj.jz.back() / z0;
    const double level = z_final + (1.0 - z_final) / std::numbers::e;
    return extract_decay_time(traj, level);
}

std::optional<double> extract_beat_frequency(const Trajectory& traj) {
    const std::size_t n = traj.size();
    if (n < 32) {
        throw std::invalid_argument("extract_beat_frequency: trajectory too short");
    }
    const double dt = (traj.times.back() - traj.times.front()) / static_cast<double>(n - 1);

    // carrier half-period from the median spacing of sign changes
    std::vector<double> crossings;
    for (std::size_t i = 1; i < n; ++i) {
        if (traj.jz[i - 1] * traj.jz[i] < 0.0) crossings.push_back(traj.times[i]);
    }
    if (crossings.size() < 4) return std::nullopt;
    std::vector<double> spacing(crossings.size() - 1);
    for (std::size_t i = 0; i + 1 < crossings.size(); ++i) {
        spacing[i] = crossings[i + 1] - crossings[i];
    }
    std::nth_element(spacing.begin(), spacing.begin() + spacing.size() / 2, spacing.end());
    const double half_period = spacing[spacing.size() / 2];
    const int w = std::max<int>(1, static_cast<int>(std::lround(1.2 * half_period / dt)));
    if (static_cast<std::size_t>(4 * w) >= n) return std::nullopt;

    std::vector<double> rect(n);
    for (std::size_t i = 0; i < n; ++i) rect[i] = std::abs(traj.jz[i]);

    // divide out a fitted single-exponential envelope (least squares on the
    // log of the strong carrier peaks) before measuring node spacings
    {
        std::vector<std::pair<double, double>> peaks;
        double peak_max = 0.0;
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (rect[i] > rect[i - 1] && rect[i] >= rect[i + 1]) {
                peaks.emplace_back(traj.times[i], rect[i]);
                peak_max = std::max(peak_max, rect[i]);
            }
        }
        double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
        std::size_t count = 0;
        for (const auto& [t, p] : peaks) {
            if (p < 0.25 * peak_max) continue;
            const double lp = std::log(p);
            sx += t; sy += lp; sxx += t * t; sxy += t * lp;
            ++count;
        }
        if (count >= 3) {
            const double det = count * sxx - sx * sx;
            const double slope = det != 0.0 ? (count * sxy - sx * sy) / det : 0.0;
            if (slope < 0.0) {
                for (std::size_t i = 0; i < n; ++i) {
                    rect[i] *= std::exp(-slope * (traj.times[i] - traj.times.front()));
                }
            }
        }
    }

    // envelope = windowed maximum over +-w samples (window spans a full
    // carrier period, so the maximum tracks the beat amplitude)
    std::vector<double> env(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = i >= static_cast<std::size_t>(w) ? i - w : 0;
        const std::size_t hi = std::min(n - 1, i + w);
        env[i] = *std::max_element(rect.begin() + lo, rect.begin() + hi + 1);
    }

    // envelope nodes: local minima over the +-w neighborhood that dip visibly
    // below the neighboring envelope (the sampling wobble of a node-free
    // carrier stays within a fraction of a percent), refined by a parabola
    // through the points one window away on either side. Damping makes later
    // nodes progressively shallower, so the depth requirement is mild.
    std::vector<double> nodes;
    for (std::size_t i = w; i + w < n; ++i) {
        const double lo_min = *std::min_element(env.begin() + (i - w), env.begin() + (i + w + 1));
        if (env[i] > lo_min || env[i] >= env[i - w] || env[i] >= env[i + w]) continue;
        if (env[i] > 0.95 * std::min(env[i - w], env[i + w])) continue;
        const double y0 = env[i - w], y1 = env[i], y2 = env[i + w];
        const double curvature = y0 - 2.0 * y1 + y2;
        double offset = 0.0;
        if (curvature > 0.0) offset = 0.5 * (y0 - y2) / curvature * w;
        nodes.push_back(traj.times[i] + offset * dt);
        i += w;
    }
    if (nodes.size() < 2) return std::nullopt;

    double mean_spacing = 0.0;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) mean_spacing += nodes[i + 1] - nodes[i];
    mean_spacing /= static_cast<double>(nodes.size() - 1);

    // a resolvable beat keeps its envelope well separated from the carrier and
    // its nodes evenly spaced; anything else counts as no detected pattern
    if (mean_spacing < 3.0 * half_period) return std::nullopt;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        const double spacing = nodes[i + 1] - nodes[i];
        if (spacing < 0.6 * mean_spacing || spacing > 1.6 * mean_spacing) return std::nullopt;
    }
    return std::numbers::pi / mean_spacing;
}

}  // namespace largespin
