// largespin — batch front end: runs named scenarios, writes trajectory CSVs,
// summaries, and plot scripts; `predict` evaluates the closed-form results
// without integrating.

#include <complex>
#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "largespin/analysis.hpp"
#include "largespin/bath.hpp"
#include "largespin/dynamics.hpp"
#include "largespin/errors.hpp"
#include "largespin/scenario.hpp"
#include "largespin/spin_ops.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitIo = 3;

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    return buf;
}

void print_rate(const char* name, std::complex<double> v) {
    std::cout << name << "_re = " << fmt(v.real()) << "\n"
              << name << "_im = " << fmt(v.imag()) << "\n";
}

template <typename T>
std::optional<T> first_of(const std::optional<T>& a, const std::optional<T>& b) {
    return a ? a : b;
}

// flags take precedence over the config file, which takes precedence over the
// scenario preset
int do_run(const std::optional<largespin::ScenarioKind>& scenario_flag,
           const largespin::ConfigOverrides& flag_overrides,
           const std::optional<std::string>& output_flag, const std::string& config_path) {
    largespin::ParsedConfigFile file;
    if (!config_path.empty()) file = largespin::parse_config_file(config_path);

    const largespin::ScenarioKind scenario =
        scenario_flag ? *scenario_flag
                      : file.scenario.value_or(largespin::ScenarioKind::free_run);
    largespin::ConfigOverrides merged;
    merged.two_j = first_of(flag_overrides.two_j, file.overrides.two_j);
    merged.epsilon = first_of(flag_overrides.epsilon, file.overrides.epsilon);
    merged.tc = first_of(flag_overrides.tc, file.overrides.tc);
    merged.alpha = first_of(flag_overrides.alpha, file.overrides.alpha);
    merged.omega_c = first_of(flag_overrides.omega_c, file.overrides.omega_c);
    merged.temperature = first_of(flag_overrides.temperature, file.overrides.temperature);
    merged.t_end = first_of(flag_overrides.t_end, file.overrides.t_end);
    merged.dt = first_of(flag_overrides.dt, file.overrides.dt);
    merged.sample_every = first_of(flag_overrides.sample_every, file.overrides.sample_every);
    merged.initial_state = first_of(flag_overrides.initial_state, file.overrides.initial_state);
    const std::string output_prefix =
        output_flag ? *output_flag : file.output_prefix.value_or("run");

    const largespin::RunConfig config =
        largespin::make_run_config(scenario, merged, output_prefix);
    const largespin::ScenarioArtifacts artifacts = largespin::run_scenario(config);
    for (const std::string& w : artifacts.warnings) std::cerr << "warning: " << w << "\n";
    for (const std::string& p : artifacts.csv_paths) std::cout << "wrote " << p << "\n";
    std::cout << "wrote " << artifacts.summary_path << "\n";
    std::cout << "wrote " << artifacts.plot_path << "\n";
    return kExitOk;
}

int do_predict(int two_j, double epsilon, double tc, double alpha, double omega_c,
               double temperature) {
    const largespin::SpinSize spin = largespin::make_spin_size(two_j);
    const largespin::SystemParams params = largespin::make_system_params(spin, epsilon, tc);
    const largespin::BathSpec bath = largespin::make_bath_spec(alpha, omega_c, temperature);
    const largespin::RateSet rates = largespin::compute_rates(params, bath);

    std::cout << "two_j = " << two_j << "\n";
    std::cout << "delta = " << fmt(params.delta) << "\n";
    print_rate("gamma", rates.gamma);
    print_rate("gamma_c", rates.gamma_c);
    print_rate("gamma_s", rates.gamma_s);

    if (two_j == 1) {
        try {
            const largespin::EquilibriumValues eq = largespin::equilibrium_bloch(params, rates);
            std::cout << "jz_equilibrium = " << fmt(eq.jz_inf) << "\n";
            std::cout << "jx_equilibrium = " << fmt(eq.jx_inf) << "\n";
        } catch (const largespin::NumericalError& e) {
            std::cout << "jz_equilibrium = degenerate (" << e.what() << ")\n";
        }
        const largespin::EquilibriumValues thermo =
            largespin::equilibrium_thermodynamic(params, temperature);
        std::cout << "jz_equilibrium_thermodynamic = " << fmt(thermo.jz_inf) << "\n";
        std::cout << "jx_equilibrium_thermodynamic = " << fmt(thermo.jx_inf) << "\n";
    }
    if (two_j == 2 && epsilon == 0.0 && temperature == 0.0) {
        const largespin::BeatPrediction beat = largespin::beat_prediction(params, bath);
        std::cout << "beat_omega_0 = " << fmt(beat.omega_0) << "\n";
        std::cout << "beat_omega_b = " << fmt(beat.omega_b) << "\n";
        std::cout << "beat_e2_plus = " << fmt(beat.e2_plus) << "\n";
        std::cout << "beat_e2_minus = " << fmt(beat.e2_minus) << "\n";
        std::cout << "beat_e2_zero = " << fmt(beat.e2_zero) << "\n";
    }
    if (bath.beyond_weak_coupling()) {
        std::cerr << "warning: alpha = " << fmt(alpha)
                  << " lies beyond the validated weak-coupling regime (alpha > 0.1)\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"largespin: dissipative dynamics of a spin of size J coupled to an ohmic "
                 "boson bath (energies in units of tc, hbar = k_B = 1)"};
    app.require_subcommand(1);

    const std::map<std::string, largespin::ScenarioKind> scenario_names{
        {"free-run", largespin::ScenarioKind::free_run},
        {"figure1a", largespin::ScenarioKind::figure1a},
        {"figure1c", largespin::ScenarioKind::figure1c},
        {"figure2", largespin::ScenarioKind::figure2},
        {"figure3", largespin::ScenarioKind::figure3}};
    const std::map<std::string, largespin::InitialStateKind> state_names{
        {"z-up", largespin::InitialStateKind::z_up},
        {"x-up", largespin::InitialStateKind::x_up}};

    // run
    auto* run = app.add_subcommand("run", "integrate a scenario and write CSV/summary/plot files");
    std::optional<largespin::ScenarioKind> scenario;
    largespin::ConfigOverrides overrides;
    std::optional<std::string> output_prefix;
    std::string config_path;
    run->add_option("--scenario", scenario, "scenario preset (default free-run)")
        ->transform(CLI::CheckedTransformer(scenario_names));
    run->add_option("--two-j", overrides.two_j, "2J (1 -> J = 1/2); overrides the preset");
    run->add_option("--epsilon", overrides.epsilon, "bias (units of tc)");
    run->add_option("--tc", overrides.tc, "tunnel amplitude; the unit of energy");
    run->add_option("--alpha", overrides.alpha, "bath coupling strength");
    run->add_option("--omega-c", overrides.omega_c, "bath cutoff (units of tc)");
    run->add_option("--temperature", overrides.temperature, "k_B T (units of tc; 0 = exact zero)");
    run->add_option("--t-end", overrides.t_end, "final time (units of 1/tc)");
    run->add_option("--dt", overrides.dt, "integrator step (units of 1/tc)");
    run->add_option("--sample-every", overrides.sample_every, "store every k-th step (0 = auto)");
    run->add_option("--initial-state", overrides.initial_state, "z-up or x-up")
        ->transform(CLI::CheckedTransformer(state_names));
    run->add_option("--output", output_prefix, "output path prefix (default run)");
    run->add_option("--config", config_path,
                    "configuration file (key = value, keys match the long flags; "
                    "flags given on the command line win)");

    // list
    auto* list = app.add_subcommand("list", "list the named scenarios and their parameters");

    // predict
    auto* predict = app.add_subcommand(
        "predict", "evaluate rates, equilibria, and the beat prediction without integrating");
    int p_two_j = 1;
    double p_epsilon = 0.0, p_tc = 1.0, p_alpha = 0.05, p_omega_c = 50.0, p_temperature = 0.0;
    predict->add_option("--two-j", p_two_j, "2J")->capture_default_str();
    predict->add_option("--epsilon", p_epsilon, "bias (units of tc)")->capture_default_str();
    predict->add_option("--tc", p_tc, "tunnel amplitude")->capture_default_str();
    predict->add_option("--alpha", p_alpha, "bath coupling strength")->capture_default_str();
    predict->add_option("--omega-c", p_omega_c, "bath cutoff")->capture_default_str();
    predict->add_option("--temperature", p_temperature, "k_B T")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (run->parsed()) return do_run(scenario, overrides, output_prefix, config_path);
        if (list->parsed()) {
            std::cout << largespin::list_scenarios();
            return kExitOk;
        }
        if (predict->parsed()) {
            return do_predict(p_two_j, p_epsilon, p_tc, p_alpha, p_omega_c, p_temperature);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const largespin::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const largespin::NumericalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitOk;
}
