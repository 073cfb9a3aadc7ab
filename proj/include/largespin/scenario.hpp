// scenario.hpp — named run configurations, the batch runner, and file output

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "largespin/analysis.hpp"
#include "largespin/bath.hpp"
#include "largespin/dynamics.hpp"

namespace largespin {

enum class ScenarioKind { free_run, figure1a, figure1c, figure2, figure3 };
enum class InitialStateKind { z_up, x_up };

const char* to_string(ScenarioKind kind);
const char* to_string(InitialStateKind kind);

// Fully resolved run configuration: the scenario preset populates every field
// and explicit overrides replace individual entries. Sweeps (several spin
// sizes or coupling strengths) expand into one trajectory per entry.
struct RunConfig {
    ScenarioKind scenario{ScenarioKind::free_run};
    std::vector<int> two_j_values{1};
    std::vector<double> alpha_values{0.0};
    double epsilon{0.0};
    double tc{1.0};
    double omega_c{50.0};
    double temperature{0.0};
    double t_end{50.0};
    double dt{0.002};
    int sample_every{0};  // 0 -> choose automatically (at most ~5000 samples)
    InitialStateKind initial_state{InitialStateKind::z_up};
    std::string output_prefix{"run"};
};

// Optional per-field overrides on top of a scenario preset.
struct ConfigOverrides {
    std::optional<int> two_j;
    std::optional<double> epsilon, tc, alpha, omega_c, temperature, t_end, dt;
    std::optional<int> sample_every;
    std::optional<InitialStateKind> initial_state;
};

// Builds and validates a RunConfig; throws std::invalid_argument naming the
// offending field.
RunConfig make_run_config(ScenarioKind scenario, const ConfigOverrides& overrides,
                          std::string output_prefix);

// Contents of a `key = value` configuration file. Keys use the long flag
// names (scenario, two-j, epsilon, tc, alpha, omega-c, temperature, t-end,
// dt, sample-every, initial-state, output); `#` starts a comment. Unknown
// keys and malformed values are rejected with the offending line number.
struct ParsedConfigFile {
    std::optional<ScenarioKind> scenario;
    ConfigOverrides overrides;
    std::optional<std::string> output_prefix;
};

ParsedConfigFile parse_config_file(const std::string& path);

ScenarioKind scenario_from_string(const std::string& name);
InitialStateKind initial_state_from_string(const std::string& name);

// One executed trajectory together with its derived analysis results.
struct TrajectoryRun {
    std::string label;  // empty for single runs, "J2" / "alpha0.005" in sweeps
    SystemParams params;
    BathSpec bath;
    RateSet rates;
    Trajectory trajectory;
    std::optional<double> decay_time;             // zero-crossing of <Jz>/<Jz>(0)
    std::optional<double> beat_frequency;         // from envelope node spacing
    std::optional<BeatPrediction> beat_predicted; // J = 1, zero bias, zero temperature
    std::optional<EquilibriumValues> eq_bloch;    // J = 1/2 closed form
    std::optional<EquilibriumValues> eq_thermo;   // J = 1/2 zero-coupling limit
    double bloch_master_max_dev{0.0};             // J = 1/2 cross-check, else 0
    std::vector<std::string> warnings;
};

struct ScenarioArtifacts {
    std::vector<TrajectoryRun> runs;
    std::vector<std::string> csv_paths;
    std::string summary_path;
    std::string plot_path;
    std::vector<std::string> warnings;  // union of per-run warnings
};

// Executes every trajectory of the configuration (sweep entries run
// concurrently), writes one CSV per trajectory, a key-value summary, and a
// gnuplot script rendering the CSVs. Throws IoError on filesystem failures.
ScenarioArtifacts run_scenario(const RunConfig& config);

// Stable, byte-identical description of the named scenarios.
std::string list_scenarios();

// CSV serialization: header "t,jx,jy,jz,trace_err,herm_err,min_eig", one row
// per sample, 15 significant digits.
void write_trajectory_csv(const std::string& path, const Trajectory& traj);
Trajectory read_trajectory_csv(const std::string& path);

}  // namespace largespin
