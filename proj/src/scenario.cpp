#include "largespin/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>
#include <stdexcept>

#include "largespin/errors.hpp"

namespace fs = std::filesystem;

namespace largespin {

namespace {

std::string fmt(double v, const char* spec = "%.15g") {
    char buf[48];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

std::string fmt_short(double v) { return fmt(v, "%g"); }

struct Preset {
    std::vector<int> spins;
    std::vector<double> alphas;
    double epsilon, tc, omega_c, temperature, t_end, dt;
};

Preset preset_for(ScenarioKind kind) {
    switch (kind) {
        case ScenarioKind::free_run:
            return {{1}, {0.0}, 0.0, 1.0, 50.0, 0.0, 50.0, 0.002};
        case ScenarioKind::figure1a:
            return {{1}, {0.05}, 1.0, 1.0, 50.0, 2.0, 20.0, 0.002};
        case ScenarioKind::figure1c:
            return {{1}, {0.05}, 0.0, 1.0, 50.0, 0.0, 20.0, 0.002};
        case ScenarioKind::figure2:
            return {{1, 4, 10, 20}, {0.005}, 10.0, 1.0, 50.0, 1.0, 200.0, 0.002};
        case ScenarioKind::figure3:
            return {{2}, {0.0025, 0.005, 0.01, 0.025}, 0.0, 1.0, 50.0, 0.0, 100.0, 0.001};
    }
    throw std::invalid_argument("unknown scenario");
}

int auto_sample_every(const RunConfig& config) {
    const long long steps = std::llround(config.t_end / config.dt);
    return static_cast<int>(std::max<long long>(1, (steps + 4999) / 5000));
}

TrajectoryRun execute_run(const RunConfig& config, int two_j, double alpha,
                          std::string label) {
    TrajectoryRun run;
    run.label = std::move(label);

    const SpinSize spin = make_spin_size(two_j);
    run.params = make_system_params(spin, config.epsilon, config.tc);
    run.bath = make_bath_spec(alpha, config.omega_c, config.temperature);
    run.rates = compute_rates(run.params, run.bath);

    const SpinOperators ops = build_spin_operators(spin);
    const DensityMatrix rho0 = config.initial_state == InitialStateKind::x_up
                                   ? initial_state_x_up(spin, ops)
                                   : initial_state_spin_up(spin);

    IntegrationOptions opts;
    opts.t_end = config.t_end;
    opts.dt = config.dt;
    opts.sample_every = config.sample_every;

    run.trajectory = integrate_master(run.params, ops, run.rates, rho0, opts);

    if (two_j == 1) {
        BlochVector v0;
        v0.jx = (rho0.data * ops.jx).trace().real();
        v0.jy = (rho0.data * ops.jy).trace().real();
        v0.jz = (rho0.data * ops.jz).trace().real();
        const Trajectory bloch = integrate_bloch(run.params, run.rates, v0, opts);
        double dev = 0.0;
        for (std::size_t i = 0; i < run.trajectory.size(); ++i) {
            dev = std::max({dev, std::abs(run.trajectory.jx[i] - bloch.jx[i]),
                            std::abs(run.trajectory.jy[i] - bloch.jy[i]),
                            std::abs(run.trajectory.jz[i] - bloch.jz[i])});
        }
        run.bloch_master_max_dev = dev;
        try {
            run.eq_bloch = equilibrium_bloch(run.params, run.rates);
        } catch (const NumericalError&) {
            // degenerate point (e.g. decoupled bath); no closed-form equilibrium
        }
        run.eq_thermo = equilibrium_thermodynamic(run.params, config.temperature);
    }

    if (std::abs(run.trajectory.jz.front()) > 1e-12) {
        run.decay_time = extract_decay_time(run.trajectory, 0.0);
    }
    if (two_j == 2 && config.epsilon == 0.0 && config.temperature == 0.0) {
        run.beat_predicted = beat_prediction(run.params, run.bath);
        run.beat_frequency = extract_beat_frequency(run.trajectory);
    }

    if (run.bath.beyond_weak_coupling()) {
        run.warnings.push_back("alpha = " + fmt_short(alpha) +
                               " lies beyond the validated weak-coupling regime (alpha > 0.1)");
    }
    const auto min_it = std::min_element(run.trajectory.min_eig.begin(),
                                         run.trajectory.min_eig.end());
    if (min_it != run.trajectory.min_eig.end() && *min_it < -1e-6) {
        const std::size_t idx = static_cast<std::size_t>(min_it - run.trajectory.min_eig.begin());
        run.warnings.push_back("positivity: min eigenvalue " + fmt_short(*min_it) + " at t = " +
                               fmt_short(run.trajectory.times[idx]) + " (below -1e-6)");
    }
    return run;
}

void write_summary(const std::string& path, const RunConfig& config,
                   const std::vector<TrajectoryRun>& runs,
                   const std::vector<std::string>& csv_paths) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open summary file for writing: " + path);

    out << "# largespin run summary\n";
    out << "scenario = " << to_string(config.scenario) << "\n";
    out << "epsilon = " << fmt(config.epsilon) << "\n";
    out << "tc = " << fmt(config.tc) << "\n";
    out << "omega_c = " << fmt(config.omega_c) << "\n";
    out << "temperature = " << fmt(config.temperature) << "\n";
    out << "initial_state = " << to_string(config.initial_state) << "\n";
    out << "t_end = " << fmt(config.t_end) << "\n";
    out << "dt = " << fmt(config.dt) << "\n";
    out << "sample_every = " << config.sample_every << "\n";
    out << "trajectories = " << runs.size() << "\n";

    for (std::size_t i = 0; i < runs.size(); ++i) {
        const TrajectoryRun& r = runs[i];
        out << "\n[trajectory" << (r.label.empty() ? "" : " " + r.label) << "]\n";
        out << "file = " << fs::path(csv_paths[i]).filename().string() << "\n";
        out << "two_j = " << r.params.spin.two_j << "\n";
        out << "alpha = " << fmt(r.bath.alpha) << "\n";
        out << "delta = " << fmt(r.params.delta) << "\n";
        out << "gamma = " << fmt(r.rates.gamma.real()) << " + " << fmt(r.rates.gamma.imag())
            << "i\n";
        out << "gamma_c = " << fmt(r.rates.gamma_c.real()) << " + "
            << fmt(r.rates.gamma_c.imag()) << "i\n";
        out << "gamma_s = " << fmt(r.rates.gamma_s.real()) << " + "
            << fmt(r.rates.gamma_s.imag()) << "i\n";
        if (r.eq_bloch) {
            out << "jz_equilibrium = " << fmt(r.eq_bloch->jz_inf) << "\n";
            out << "jx_equilibrium = " << fmt(r.eq_bloch->jx_inf) << "\n";
        }
        if (r.eq_thermo) {
            out << "jz_equilibrium_thermodynamic = " << fmt(r.eq_thermo->jz_inf) << "\n";
            out << "jx_equilibrium_thermodynamic = " << fmt(r.eq_thermo->jx_inf) << "\n";
        }
        if (r.params.spin.two_j == 1) {
            out << "bloch_master_max_dev = " << fmt(r.bloch_master_max_dev) << "\n";
        }
        out << "decay_time_zero_crossing = "
            << (r.decay_time ? fmt(*r.decay_time) : std::string("none")) << "\n";
        if (r.beat_predicted) {
            out << "beat_omega_0_predicted = " << fmt(r.beat_predicted->omega_0) << "\n";
            out << "beat_omega_b_predicted = " << fmt(r.beat_predicted->omega_b) << "\n";
            out << "beat_e2_plus = " << fmt(r.beat_predicted->e2_plus) << "\n";
            out << "beat_e2_minus = " << fmt(r.beat_predicted->e2_minus) << "\n";
            out << "beat_e2_zero = " << fmt(r.beat_predicted->e2_zero) << "\n";
            out << "beat_omega_b_measured = "
                << (r.beat_frequency ? fmt(*r.beat_frequency) : std::string("not-detected"))
                << "\n";
        }
        out << "final_min_eigenvalue = " << fmt(r.trajectory.min_eig.back()) << "\n";
        for (const std::string& w : r.warnings) out << "warning = " << w << "\n";
    }
    if (!out) throw IoError("failed while writing summary file: " + path);
}

void write_plot_script(const std::string& path, const RunConfig& config,
                       const std::vector<TrajectoryRun>& runs,
                       const std::vector<std::string>& csv_paths) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open plot script for writing: " + path);

    const std::string stem = fs::path(config.output_prefix).filename().string();
    out << "# gnuplot script generated by largespin; run from this directory:\n";
    out << "#   gnuplot " << fs::path(path).filename().string() << "\n";
    out << "set datafile separator ','\n";
    out << "set terminal pngcairo size 1100,750 enhanced\n";
    out << "set output '" << stem << ".png'\n";
    out << "set xlabel 't / T_c^{-1}'\n";
    out << "set grid\n";

    const bool spin_sweep = runs.size() > 1 && config.scenario == ScenarioKind::figure2;
    if (spin_sweep) {
        out << "set ylabel '<J_z> / J'\n";
        out << "plot \\\n";
        for (std::size_t i = 0; i < runs.size(); ++i) {
            const double j = 0.5 * runs[i].params.spin.two_j;
            out << "  '" << fs::path(csv_paths[i]).filename().string() << "' every ::1 using 1:($4/"
                << fmt_short(j) << ") with lines title 'J = " << fmt_short(j) << "'"
                << (i + 1 < runs.size() ? ", \\\n" : "\n");
        }
    } else if (runs.size() > 1) {
        out << "set multiplot layout " << (runs.size() + 1) / 2 << ",2\n";
        for (std::size_t i = 0; i < runs.size(); ++i) {
            const std::string file = fs::path(csv_paths[i]).filename().string();
            out << "set title 'alpha = " << fmt_short(runs[i].bath.alpha) << "'\n";
            out << "plot '" << file << "' every ::1 using 1:4 with lines title '<J_z>', \\\n"
                << "     '" << file << "' every ::1 using 1:2 with lines title '<J_x>'\n";
        }
        out << "unset multiplot\n";
    } else {
        const std::string file = fs::path(csv_paths[0]).filename().string();
        out << "plot '" << file << "' every ::1 using 1:4 with lines title '<J_z>', \\\n"
            << "     '" << file << "' every ::1 using 1:2 with lines title '<J_x>', \\\n"
            << "     '" << file << "' every ::1 using 1:3 with lines title '<J_y>'\n";
    }
    if (!out) throw IoError("failed while writing plot script: " + path);
}

}  // namespace

const char* to_string(ScenarioKind kind) {
    switch (kind) {
        case ScenarioKind::free_run: return "free-run";
        case ScenarioKind::figure1a: return "figure1a";
        case ScenarioKind::figure1c: return "figure1c";
        case ScenarioKind::figure2: return "figure2";
        case ScenarioKind::figure3: return "figure3";
    }
    return "unknown";
}

const char* to_string(InitialStateKind kind) {
    return kind == InitialStateKind::x_up ? "x-up" : "z-up";
}

ScenarioKind scenario_from_string(const std::string& name) {
    for (const ScenarioKind kind :
         {ScenarioKind::free_run, ScenarioKind::figure1a, ScenarioKind::figure1c,
          ScenarioKind::figure2, ScenarioKind::figure3}) {
        if (name == to_string(kind)) return kind;
    }
    throw std::invalid_argument("unknown scenario '" + name + "'");
}

InitialStateKind initial_state_from_string(const std::string& name) {
    if (name == "z-up") return InitialStateKind::z_up;
    if (name == "x-up") return InitialStateKind::x_up;
    throw std::invalid_argument("unknown initial state '" + name + "' (expected z-up or x-up)");
}

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

double parse_double_field(const std::string& value, const std::string& where) {
    std::size_t consumed = 0;
    double parsed = 0.0;
    try {
        parsed = std::stod(value, &consumed);
    } catch (const std::exception&) {
        throw std::invalid_argument(where + ": invalid number '" + value + "'");
    }
    if (consumed != value.size()) {
        throw std::invalid_argument(where + ": invalid number '" + value + "'");
    }
    return parsed;
}

int parse_int_field(const std::string& value, const std::string& where) {
    std::size_t consumed = 0;
    int parsed = 0;
    try {
        parsed = std::stoi(value, &consumed);
    } catch (const std::exception&) {
        throw std::invalid_argument(where + ": invalid integer '" + value + "'");
    }
    if (consumed != value.size()) {
        throw std::invalid_argument(where + ": invalid integer '" + value + "'");
    }
    return parsed;
}

}  // namespace

ParsedConfigFile parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);

    ParsedConfigFile parsed;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto comment = line.find('#');
        if (comment != std::string::npos) line.erase(comment);
        const std::string text = trim(line);
        if (text.empty()) continue;

        const std::string where = path + ":" + std::to_string(line_no);
        const auto eq = text.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument(where + ": expected 'key = value'");
        }
        const std::string key = trim(text.substr(0, eq));
        const std::string value = trim(text.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw std::invalid_argument(where + ": expected 'key = value'");
        }

        try {
            if (key == "scenario") {
                parsed.scenario = scenario_from_string(value);
            } else if (key == "two-j") {
                parsed.overrides.two_j = parse_int_field(value, where);
            } else if (key == "epsilon") {
                parsed.overrides.epsilon = parse_double_field(value, where);
            } else if (key == "tc") {
                parsed.overrides.tc = parse_double_field(value, where);
            } else if (key == "alpha") {
                parsed.overrides.alpha = parse_double_field(value, where);
            } else if (key == "omega-c") {
                parsed.overrides.omega_c = parse_double_field(value, where);
            } else if (key == "temperature") {
                parsed.overrides.temperature = parse_double_field(value, where);
            } else if (key == "t-end") {
                parsed.overrides.t_end = parse_double_field(value, where);
            } else if (key == "dt") {
                parsed.overrides.dt = parse_double_field(value, where);
            } else if (key == "sample-every") {
                parsed.overrides.sample_every = parse_int_field(value, where);
            } else if (key == "initial-state") {
                parsed.overrides.initial_state = initial_state_from_string(value);
            } else if (key == "output") {
                parsed.output_prefix = value;
            } else {
                throw std::invalid_argument(where + ": unknown key '" + key + "'");
            }
        } catch (const std::invalid_argument& e) {
            const std::string what = e.what();
            if (what.rfind(path, 0) == 0) throw;  // already carries the location
            throw std::invalid_argument(where + ": " + what);
        }
    }
    return parsed;
}

RunConfig make_run_config(ScenarioKind scenario, const ConfigOverrides& overrides,
                          std::string output_prefix) {
    const Preset preset = preset_for(scenario);

    RunConfig config;
    config.scenario = scenario;
    config.two_j_values = overrides.two_j ? std::vector<int>{*overrides.two_j} : preset.spins;
    config.alpha_values =
        overrides.alpha ? std::vector<double>{*overrides.alpha} : preset.alphas;
    config.epsilon = overrides.epsilon.value_or(preset.epsilon);
    config.tc = overrides.tc.value_or(preset.tc);
    config.omega_c = overrides.omega_c.value_or(preset.omega_c);
    config.temperature = overrides.temperature.value_or(preset.temperature);
    config.t_end = overrides.t_end.value_or(preset.t_end);
    config.dt = overrides.dt.value_or(preset.dt);
    config.sample_every = overrides.sample_every.value_or(0);
    config.initial_state = overrides.initial_state.value_or(InitialStateKind::z_up);
    config.output_prefix = std::move(output_prefix);

    if (config.output_prefix.empty()) {
        throw std::invalid_argument("run config: output prefix must not be empty");
    }
    if (!(config.t_end > 0.0) || !std::isfinite(config.t_end)) {
        throw std::invalid_argument("run config: t_end must be positive");
    }
    if (!(config.dt > 0.0) || !std::isfinite(config.dt)) {
        throw std::invalid_argument("run config: dt must be positive");
    }
    if (config.sample_every < 0) {
        throw std::invalid_argument("run config: sample_every must be >= 0");
    }
    if (config.sample_every == 0) config.sample_every = auto_sample_every(config);

    // field validation with the offending name comes from the factories
    for (const int two_j : config.two_j_values) {
        make_system_params(make_spin_size(two_j), config.epsilon, config.tc);
    }
    for (const double alpha : config.alpha_values) {
        make_bath_spec(alpha, config.omega_c, config.temperature);
    }
    return config;
}

ScenarioArtifacts run_scenario(const RunConfig& config) {
    struct Entry {
        int two_j;
        double alpha;
        std::string label;
    };
    std::vector<Entry> entries;
    const bool spin_sweep = config.two_j_values.size() > 1;
    const bool alpha_sweep = config.alpha_values.size() > 1;
    for (const int two_j : config.two_j_values) {
        for (const double alpha : config.alpha_values) {
            std::string label;
            if (spin_sweep) label = "J" + fmt_short(0.5 * two_j);
            if (alpha_sweep) label += (label.empty() ? "" : "_") + ("alpha" + fmt_short(alpha));
            entries.push_back({two_j, alpha, label});
        }
    }

    std::vector<std::future<TrajectoryRun>> futures;
    futures.reserve(entries.size());
    for (const Entry& e : entries) {
        futures.push_back(std::async(std::launch::async, execute_run, std::cref(config), e.two_j,
                                     e.alpha, e.label));
    }

    ScenarioArtifacts artifacts;
    artifacts.runs.reserve(entries.size());
    for (auto& f : futures) artifacts.runs.push_back(f.get());

    const fs::path prefix(config.output_prefix);
    try {
        if (prefix.has_parent_path()) fs::create_directories(prefix.parent_path());
    } catch (const fs::filesystem_error& e) {
        throw IoError(std::string("cannot create output directory: ") + e.what());
    }

    for (const TrajectoryRun& run : artifacts.runs) {
        const std::string path =
            config.output_prefix + (run.label.empty() ? "" : "_" + run.label) + ".csv";
        write_trajectory_csv(path, run.trajectory);
        artifacts.csv_paths.push_back(path);
        artifacts.warnings.insert(artifacts.warnings.end(), run.warnings.begin(),
                                  run.warnings.end());
    }
    artifacts.summary_path = config.output_prefix + "_summary.txt";
    write_summary(artifacts.summary_path, config, artifacts.runs, artifacts.csv_paths);
    artifacts.plot_path = config.output_prefix + "_plot.gp";
    write_plot_script(artifacts.plot_path, config, artifacts.runs, artifacts.csv_paths);
    return artifacts;
}

std::string list_scenarios() {
    return
        "available scenarios (energies in units of tc; hbar = k_B = 1):\n"
        "\n"
        "  free-run   single trajectory from the provided flags\n"
        "             defaults: two_j=1 (J=1/2), epsilon=0, tc=1, alpha=0, omega_c=50,\n"
        "             temperature=0, t_end=50, dt=0.002, initial-state=z-up\n"
        "\n"
        "  figure1a   damped <Jz>, <Jx> oscillations of a biased spin 1/2 at finite\n"
        "             temperature: epsilon=1, alpha=0.05, omega_c=50, temperature=2,\n"
        "             t_end=20, dt=0.002\n"
        "\n"
        "  figure1c   unbiased spin 1/2 at zero temperature: epsilon=0, alpha=0.05,\n"
        "             omega_c=50, temperature=0, t_end=20, dt=0.002\n"
        "\n"
        "  figure2    superradiance-like decay of <Jz>/J for J = 0.5, 2, 5, 10:\n"
        "             epsilon=10, alpha=0.005, omega_c=50, temperature=1, t_end=200,\n"
        "             dt=0.002\n"
        "\n"
        "  figure3    quantum beats of a spin 1 at zero bias and zero temperature,\n"
        "             alpha sweep 0.0025, 0.005, 0.01, 0.025: omega_c=50,\n"
        "             temperature=0, t_end=100, dt=0.001\n";
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open CSV for writing: " + path);
    out << "t,jx,jy,jz,trace_err,herm_err,min_eig\n";
    for (std::size_t i = 0; i < traj.size(); ++i) {
        out << fmt(traj.times[i]) << ',' << fmt(traj.jx[i]) << ',' << fmt(traj.jy[i]) << ','
            << fmt(traj.jz[i]) << ',' << fmt(traj.trace_err[i]) << ',' << fmt(traj.herm_err[i])
            << ',' << fmt(traj.min_eig[i]) << '\n';
    }
    if (!out) throw IoError("failed while writing CSV: " + path);
}

Trajectory read_trajectory_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open CSV for reading: " + path);
    std::string line;
    if (!std::getline(in, line) || line != "t,jx,jy,jz,trace_err,herm_err,min_eig") {
        throw IoError("unexpected CSV header in " + path);
    }
    Trajectory traj;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream row(line);
        double v[7];
        char sep = ',';
        for (int k = 0; k < 7; ++k) {
            if (!(row >> v[k])) {
                throw IoError("malformed CSV row at " + path + ":" + std::to_string(line_no));
            }
            if (k < 6 && !(row >> sep && sep == ',')) {
                throw IoError("malformed CSV row at " + path + ":" + std::to_string(line_no));
            }
        }
        traj.times.push_back(v[0]);
        traj.jx.push_back(v[1]);
        traj.jy.push_back(v[2]);
        traj.jz.push_back(v[3]);
        traj.trace_err.push_back(v[4]);
        traj.herm_err.push_back(v[5]);
        traj.min_eig.push_back(v[6]);
    }
    return traj;
}

}  // namespace largespin
