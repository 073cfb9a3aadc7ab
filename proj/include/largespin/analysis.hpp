// analysis.hpp — closed-form equilibria, perturbative beat prediction, and
// trajectory post-processing

#pragma once

#include <optional>
#include <vector>

#include "largespin/bath.hpp"
#include "largespin/dynamics.hpp"
#include "largespin/spin_ops.hpp"

namespace largespin {

// Long-time spin expectation values; jy_inf vanishes identically.
struct EquilibriumValues {
    double jz_inf{0.0};
    double jx_inf{0.0};
    double jy_inf{0.0};
};

// Stationary point of the Bloch equations in closed form (J = 1/2 only).
// Throws NumericalError at degenerate parameter points (vanishing
// denominator, e.g. a fully decoupled bath).
EquilibriumValues equilibrium_bloch(const SystemParams& params, const RateSet& rates);

// Zero-coupling thermodynamic limit: -(eps / 2 delta) tanh(beta delta / 2) and
// -(tc / delta) tanh(beta delta / 2); temperature 0 uses tanh -> 1.
EquilibriumValues equilibrium_thermodynamic(const SystemParams& params, double temperature);

// Second-order level shifts of the three J = 1 states at zero bias and zero
// temperature, and the resulting carrier/beat frequencies of <Jz>.
struct BeatPrediction {
    double omega_0{0.0};   // carrier frequency, 2 tc plus the shift asymmetry
    double omega_b{0.0};   // beat (envelope) frequency, -e2_zero / 2
    double e2_plus{0.0};   // shift of |+> : -(1/2) PV int rho(w)/(w - 2 tc) dw
    double e2_minus{0.0};  // shift of |-> : -(1/2)     int rho(w)/(w + 2 tc) dw
    double e2_zero{0.0};   // shift of |0> = e2_plus + e2_minus
};

// Requires J = 1, epsilon = 0, temperature = 0 (the regime the perturbative
// derivation covers). Evaluated in closed form through Ei/E1.
BeatPrediction beat_prediction(const SystemParams& params, const BathSpec& bath);

// Undamped two-frequency trace cos(omega_0 t) cos(omega_b t).
std::vector<double> predicted_beat_trace(const BeatPrediction& pred,
                                         const std::vector<double>& times);

// First time the linearly interpolated normalized series <Jz>(t)/<Jz>(0)
// crosses `level` from above; nullopt when it never crosses.
std::optional<double> extract_decay_time(const Trajectory& traj, double level = 0.0);

// Same crossing search with the level set to 1/e of the decayed range
// (final + (initial - final)/e, normalized).
std::optional<double> extract_decay_time_one_over_e(const Trajectory& traj);

// Envelope (beat) angular frequency of an oscillating <Jz> series: rectifies
// the series, divides out a fitted exponential envelope, locates successive
// envelope minima by windowed-maximum local-minimum search with parabolic
// refinement, and returns pi / (mean node spacing). nullopt when fewer than
// two envelope nodes are found (no resolvable beat pattern).
std::optional<double> extract_beat_frequency(const Trajectory& traj);

}  // namespace largespin
