#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "spectral.hpp"

namespace bathsim {

struct ExperimentConfig {
    std::string crystal_table_path;  // resolved against the config file location
    double epsilon = 1.96;
    double z_ref_ohm = 50.0;

    double f_lo_hz = 1.0e9;
    double f_hi_hz = 10.0e9;
    double f_step_hz = 1.0e6;

    double passband_lo_hz = 1.0e9;
    double passband_hi_hz = 3.0e9;
    double dos_drive_gain_hz2 = 4.0e12;

    PurcellParams purcell{200.0e6, 18.0e6, 7.801e9, 1.0 / 30.0};
    double omega_q_hz = 6.4766e9;
    double gamma_phi = 0.029;

    double omega_lo_hz = 0.0;
    double omega_hi_hz = 5.0e6;
    int omega_steps = 51;
    double delta_lo_hz = -5.0e6;
    double delta_hi_hz = 5.0e6;
    int delta_steps = 51;
    double t_final_us = 15.95;
    double drive_phase_rad = 0.0;

    double db_bracket_lo_hz = 1.0e5;
    double db_bracket_hi_hz = 5.0e6;

    bool tomography_enabled = true;
    double fidelity = 0.8;
    int shots = 2000;
    std::uint64_t seed = 12345;

    double traj_omega_hz = 2.0e6;
    double traj_delta_hz = -2.75e6;
    int traj_steps = 400;

    std::string out_dir = "out";
};

namespace detail {

template <class T>
T config_get(const nlohmann::json& j, const char* section, const char* key, T fallback) {
    if (!j.contains(section)) return fallback;
    const auto& sect = j.at(section);
    if (!sect.is_object())
        throw config_error(std::string(section) + ": expected an object of settings");
    if (!sect.contains(key)) return fallback;
    try {
        return sect.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw config_error(std::string(section) + "." + key + ": wrong value type");
    }
}

}  // namespace detail

inline std::vector<double> linspace(double lo, double hi, int steps) {
    if (steps < 1) throw std::invalid_argument("linspace: need at least one step");
    std::vector<double> out(static_cast<std::size_t>(steps));
    if (steps == 1) {
        out[0] = lo;
        return out;
    }
    for (int i = 0; i < steps; ++i) out[std::size_t(i)] = lo + (hi - lo) * double(i) / double(steps - 1);
    return out;
}

inline std::vector<double> frequency_grid(double lo_hz, double hi_hz, double step_hz) {
    if (!(step_hz > 0.0) || !(hi_hz > lo_hz))
        throw std::invalid_argument("frequency_grid: need hi > lo and step > 0");
    const auto count = std::size_t(std::floor((hi_hz - lo_hz) / step_hz * (1.0 + 1e-12))) + 1;
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = lo_hz + double(i) * step_hz;
    return out;
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("config file not readable: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw config_error("config parse failure in " + path + ": " + e.what());
    }
    if (!j.is_object()) throw config_error("config root must be an object: " + path);

    using detail::config_get;
    ExperimentConfig cfg;
    cfg.crystal_table_path = config_get<std::string>(j, "crystal", "table_path", "crystal_sections.txt");
    cfg.epsilon = config_get(j, "crystal", "epsilon", cfg.epsilon);
    cfg.z_ref_ohm = config_get(j, "crystal", "z_ref_ohm", cfg.z_ref_ohm);

    cfg.f_lo_hz = config_get(j, "grid", "f_lo_hz", cfg.f_lo_hz);
    cfg.f_hi_hz = config_get(j, "grid", "f_hi_hz", cfg.f_hi_hz);
    cfg.f_step_hz = config_get(j, "grid", "f_step_hz", cfg.f_step_hz);

    cfg.passband_lo_hz = config_get(j, "dos", "passband_lo_hz", cfg.passband_lo_hz);
    cfg.passband_hi_hz = config_get(j, "dos", "passband_hi_hz", cfg.passband_hi_hz);
    cfg.dos_drive_gain_hz2 = config_get(j, "dos", "drive_gain_hz2", cfg.dos_drive_gain_hz2);

    cfg.purcell.g_hz = config_get(j, "purcell", "g_hz", cfg.purcell.g_hz);
    cfg.purcell.kappa_hz = config_get(j, "purcell", "kappa_hz", cfg.purcell.kappa_hz);
    cfg.purcell.omega_c_hz = config_get(j, "purcell", "omega_c_hz", cfg.purcell.omega_c_hz);
    cfg.purcell.gamma_d = config_get(j, "purcell", "gamma_d_per_us", cfg.purcell.gamma_d);

    cfg.omega_q_hz = config_get(j, "qubit", "omega_q_hz", cfg.omega_q_hz);
    cfg.gamma_phi = config_get(j, "qubit", "gamma_phi_per_us", cfg.gamma_phi);

    cfg.omega_lo_hz = config_get(j, "drive", "omega_lo_hz", cfg.omega_lo_hz);
    cfg.omega_hi_hz = config_get(j, "drive", "omega_hi_hz", cfg.omega_hi_hz);
    cfg.omega_steps = config_get(j, "drive", "omega_steps", cfg.omega_steps);
    cfg.delta_lo_hz = config_get(j, "drive", "delta_lo_hz", cfg.delta_lo_hz);
    cfg.delta_hi_hz = config_get(j, "drive", "delta_hi_hz", cfg.delta_hi_hz);
    cfg.delta_steps = config_get(j, "drive", "delta_steps", cfg.delta_steps);
    cfg.t_final_us = config_get(j, "drive", "t_final_us", cfg.t_final_us);
    cfg.drive_phase_rad = config_get(j, "drive", "phase_rad", cfg.drive_phase_rad);

    cfg.db_bracket_lo_hz = config_get(j, "db", "bracket_lo_hz", cfg.db_bracket_lo_hz);
    cfg.db_bracket_hi_hz = config_get(j, "db", "bracket_hi_hz", cfg.db_bracket_hi_hz);

    cfg.tomography_enabled = config_get(j, "tomography", "enabled", cfg.tomography_enabled);
    cfg.fidelity = config_get(j, "tomography", "fidelity", cfg.fidelity);
    cfg.shots = config_get(j, "tomography", "shots", cfg.shots);
    cfg.seed = config_get(j, "tomography", "seed", cfg.seed);

    cfg.traj_omega_hz = config_get(j, "trajectory", "omega_hz", cfg.traj_omega_hz);
    cfg.traj_delta_hz = config_get(j, "trajectory", "delta_hz", cfg.traj_delta_hz);
    cfg.traj_steps = config_get(j, "trajectory", "steps", cfg.traj_steps);

    cfg.out_dir = config_get<std::string>(j, "output", "dir", cfg.out_dir);

    namespace fs = std::filesystem;
    fs::path table(cfg.crystal_table_path);
    if (table.is_relative()) table = fs::path(path).parent_path() / table;
    cfg.crystal_table_path = table.string();

    if (!(cfg.epsilon >= 1.0)) throw config_error("crystal.epsilon: must be >= 1");
    if (!(cfg.z_ref_ohm > 0.0)) throw config_error("crystal.z_ref_ohm: must be positive");
    if (!(cfg.f_step_hz > 0.0) || !(cfg.f_hi_hz > cfg.f_lo_hz))
        throw config_error("grid: need f_hi_hz > f_lo_hz and f_step_hz > 0");
    if (cfg.passband_lo_hz < cfg.f_lo_hz || cfg.passband_hi_hz > cfg.f_hi_hz ||
        !(cfg.passband_hi_hz > cfg.passband_lo_hz))
        throw config_error("dos: pass-band window must lie inside the frequency grid");
    if (!(cfg.purcell.g_hz > 0.0) || !(cfg.purcell.kappa_hz > 0.0) || !(cfg.purcell.omega_c_hz > 0.0))
        throw config_error("purcell: g_hz, kappa_hz, omega_c_hz must be positive");
    if (cfg.purcell.gamma_d < 0.0) throw config_error("purcell.gamma_d_per_us: must be >= 0");
    if (cfg.gamma_phi < 0.0) throw config_error("qubit.gamma_phi_per_us: must be >= 0");
    if (cfg.omega_steps < 1 || cfg.delta_steps < 1)
        throw config_error("drive: omega_steps and delta_steps must be >= 1");
    if (cfg.omega_lo_hz < 0.0) throw config_error("drive.omega_lo_hz: must be >= 0");
    if (!(cfg.t_final_us > 0.0)) throw config_error("drive.t_final_us: must be positive");
    if (!(cfg.db_bracket_lo_hz > 0.0) || !(cfg.db_bracket_hi_hz > cfg.db_bracket_lo_hz))
        throw config_error("db: bracket must satisfy 0 < lo < hi");
    if (!(cfg.fidelity >= 0.5 && cfg.fidelity <= 1.0))
        throw config_error("tomography.fidelity: must lie in [0.5, 1]");
    if (cfg.shots < 1) throw config_error("tomography.shots: must be >= 1");
    if (cfg.traj_steps < 2) throw config_error("trajectory.steps: must be >= 2");
    if (!fs::exists(cfg.crystal_table_path))
        throw config_error("crystal.table_path: file does not exist: " + cfg.crystal_table_path);

    return cfg;
}

}  // namespace bathsim
