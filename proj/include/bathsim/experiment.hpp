#pragma once

#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "csv.hpp"
#include "tomography.hpp"

namespace bathsim {

struct RunOptions {
    bool flat_dos = false;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
};

namespace detail {

inline std::filesystem::path prepare_out_dir(const ExperimentConfig& cfg, const RunOptions& opts) {
    const std::filesystem::path dir(opts.out_dir.value_or(cfg.out_dir));
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec && !std::filesystem::is_directory(dir))
        throw config_error("output.dir: cannot create " + dir.string() + ": " + ec.message());
    return dir;
}

inline ScatteringSpectrum crystal_spectrum(const ExperimentConfig& cfg) {
    const auto rows = parse_crystal_table(cfg.crystal_table_path);
    const auto sections = build_crystal(rows, cfg.epsilon);
    const auto grid = frequency_grid(cfg.f_lo_hz, cfg.f_hi_hz, cfg.f_step_hz);
    return sweep_spectrum(sections, grid, cfg.z_ref_ohm);
}

struct Bath {
    SpectralDensity dos;
    CavityAnchor anchor;
};

// The flat override replaces the sampled density with a unit density and
// freezes the cavity filter anchor at the qubit, so the bath is exactly
// colorless and the steady-state map is exactly mirror-symmetric in the
// detuning. The crystal path keeps the per-sideband anchor.
inline Bath make_bath(const ExperimentConfig& cfg, const RunOptions& opts) {
    if (opts.flat_dos)
        return Bath{flat_density(cfg.f_lo_hz, cfg.f_hi_hz), CavityAnchor::QubitFrequency};
    return Bath{dos_from_spectrum(crystal_spectrum(cfg), cfg.passband_lo_hz, cfg.passband_hi_hz),
                CavityAnchor::SampledFrequency};
}

inline std::uint64_t base_seed(const ExperimentConfig& cfg, const RunOptions& opts) {
    return opts.seed.value_or(cfg.seed);
}

inline int contour_rows(const ExperimentConfig& cfg, const Bath& bath, CsvWriter& csv) {
    const auto deltas = linspace(cfg.delta_lo_hz, cfg.delta_hi_hz, cfg.delta_steps);
    int ok = 0;
    for (double delta : deltas) {
        std::string omega_cell = "nan";
        std::string error;
        try {
            const auto root = detailed_balance_rabi(delta, bath.dos, cfg.purcell, cfg.omega_q_hz,
                                                    cfg.db_bracket_lo_hz, cfg.db_bracket_hi_hz,
                                                    bath.anchor);
            if (root) omega_cell = csv_num(*root);
            ++ok;  // a bracket without a sign change is a legitimate outcome
        } catch (const std::exception& e) {
            error = csv_sanitize(e.what());
        }
        csv.row({csv_num(delta), omega_cell, error});
    }
    return ok;
}

}  // namespace detail

inline int cmd_sparams(const ExperimentConfig& cfg, const RunOptions& opts) {
    const auto dir = detail::prepare_out_dir(cfg, opts);
    const ScatteringSpectrum spectrum = detail::crystal_spectrum(cfg);

    CsvWriter csv((dir / "sparams.csv").string(), "freq_hz,s11_re,s11_im,s21_re,s21_im");
    for (std::size_t i = 0; i < spectrum.frequencies.size(); ++i)
        csv.row({csv_num(spectrum.frequencies[i]), csv_num(spectrum.s11[i].real()), csv_num(spectrum.s11[i].imag()),
                 csv_num(spectrum.s21[i].real()), csv_num(spectrum.s21[i].imag())});

    const auto band = find_stop_band(spectrum, cfg.passband_lo_hz, cfg.passband_hi_hz, 3.0);
    if (band)
        std::printf("stop band: %.6g GHz to %.6g GHz (3 dB below pass-band mean); min |s21| = %.4g dB at %.6g GHz\n",
                    band->lo_hz * 1e-9, band->hi_hz * 1e-9, band->min_s21_db, band->min_s21_at_hz * 1e-9);
    else
        std::printf("no stop band found\n");
    return 0;
}

inline int cmd_dos(const ExperimentConfig& cfg, const RunOptions& opts) {
    const auto dir = detail::prepare_out_dir(cfg, opts);
    const detail::Bath bath = detail::make_bath(cfg, opts);

    {
        CsvWriter density((dir / "spectral_density.csv").string(), "freq_hz,rho");
        for (std::size_t i = 0; i < bath.dos.frequencies.size(); ++i)
            density.row({csv_num(bath.dos.frequencies[i]), csv_num(bath.dos.rho[i])});
    }

    CsvWriter csv((dir / "dos.csv").string(), "freq_hz,rho,gamma1_per_us,rabi_sq_proxy,error");
    const auto grid = frequency_grid(cfg.f_lo_hz, cfg.f_hi_hz, cfg.f_step_hz);
    int ok = 0;
    for (double f : grid) {
        std::string error;
        double rho = std::numeric_limits<double>::quiet_NaN();
        double gamma1 = std::numeric_limits<double>::quiet_NaN();
        double proxy = std::numeric_limits<double>::quiet_NaN();
        try {
            rho = density_at(bath.dos, f);
            proxy = rabi_squared_proxy(bath.dos, f, cfg.dos_drive_gain_hz2);
            gamma1 = purcell_rate(bath.dos, f, cfg.purcell);
            if (!std::isfinite(gamma1)) {
                gamma1 = std::numeric_limits<double>::quiet_NaN();
                error = "nonfinite decay rate at the cavity frequency";
            }
        } catch (const std::exception& e) {
            error = csv_sanitize(e.what());
        }
        if (error.empty()) ++ok;
        csv.row({csv_num(f), csv_num(rho), csv_num(gamma1), csv_num(proxy), error});
    }
    return ok > 0 ? 0 : 3;
}

inline int cmd_ssmap(const ExperimentConfig& cfg, const RunOptions& opts) {
    const auto dir = detail::prepare_out_dir(cfg, opts);
    const detail::Bath bath = detail::make_bath(cfg, opts);
    const auto omegas = linspace(cfg.omega_lo_hz, cfg.omega_hi_hz, cfg.omega_steps);
    const auto deltas = linspace(cfg.delta_lo_hz, cfg.delta_hi_hz, cfg.delta_steps);

    const std::uint64_t seed = detail::base_seed(cfg, opts);
    std::array<double, 3> scales{1.0, 1.0, 1.0};
    if (cfg.tomography_enabled)
        scales = calibrate(ReadoutModel{cfg.fidelity, cfg.shots, seed});

    CsvWriter csv((dir / "ssmap.csv").string(),
                  "omega_hz,delta_hz,x_ideal,y_ideal,z_ideal,x_meas,y_meas,z_meas,error");
    const double nan = std::numeric_limits<double>::quiet_NaN();
    int ok = 0;
    std::size_t row_index = 0;
    for (double omega : omegas) {
        for (double delta : deltas) {
            BlochVector ideal{nan, nan, nan};
            BlochVector meas{nan, nan, nan};
            std::string error;
            try {
                if (omega == 0.0 && delta == 0.0) {
                    ideal = {0.0, 0.0, 1.0};  // undriven: plain decay to the bare ground state
                } else {
                    const DriveParams drive{cfg.omega_q_hz + delta, cfg.omega_q_hz, omega,
                                            cfg.drive_phase_rad};
                    const RateSet rates = rate_set(drive, bath.dos, cfg.purcell, cfg.gamma_phi,
                                                   bath.anchor);
                    const Matrix2cd ss = steady_state(build_liouvillian(rates));
                    ideal = lab_frame_bloch(ss, rates.theta);
                }
                if (cfg.tomography_enabled) {
                    const ReadoutModel model{cfg.fidelity, cfg.shots, seed + row_index};
                    const TomographyRecord rec = measure_bloch(ideal, model, scales);
                    meas = {rec.corrected_x, rec.corrected_y, rec.corrected_z};
                }
                ++ok;
            } catch (const std::exception& e) {
                error = csv_sanitize(e.what());
            }
            csv.row({csv_num(omega), csv_num(delta), csv_num(ideal.x), csv_num(ideal.y),
                     csv_num(ideal.z), csv_num(meas.x), csv_num(meas.y), csv_num(meas.z), error});
            ++row_index;
        }
    }

    CsvWriter contour((dir / "contour.csv").string(), "delta_hz,omega_star_hz,error");
    detail::contour_rows(cfg, bath, contour);
    return ok > 0 ? 0 : 3;
}

inline int cmd_trajectory(const ExperimentConfig& cfg, const RunOptions& opts) {
    const auto dir = detail::prepare_out_dir(cfg, opts);
    const detail::Bath bath = detail::make_bath(cfg, opts);
    const double omega = cfg.traj_omega_hz;
    const double delta = cfg.traj_delta_hz;

    CsvWriter csv((dir / "trajectory.csv").string(), "t_us,x,y,z,error");
    const auto times = linspace(0.0, cfg.t_final_us, cfg.traj_steps);
    if (omega == 0.0 && delta == 0.0) {
        for (double t : times) csv.row({csv_num(t), csv_num(0.0), csv_num(0.0), csv_num(1.0), ""});
        return 0;
    }

    const DriveParams drive{cfg.omega_q_hz + delta, cfg.omega_q_hz, omega, cfg.drive_phase_rad};
    const RateSet rates = rate_set(drive, bath.dos, cfg.purcell, cfg.gamma_phi, bath.anchor);
    const Matrix4cd liouville = build_liouvillian(rates);
    // bare ground state written in the dressed basis
    const double s2 = std::sin(2.0 * rates.theta), c2 = std::cos(2.0 * rates.theta);
    const Matrix2cd rho0 = 0.5 * (Matrix2cd::Identity() + s2 * sigma_x() + c2 * sigma_z());

    const double nan = std::numeric_limits<double>::quiet_NaN();
    int ok = 0;
    for (double t : times) {
        BlochVector b{nan, nan, nan};
        std::string error;
        try {
            b = lab_frame_bloch(propagate(liouville, rho0, t), rates.theta);
            ++ok;
        } catch (const std::exception& e) {
            error = csv_sanitize(e.what());
        }
        csv.row({csv_num(t), csv_num(b.x), csv_num(b.y), csv_num(b.z), error});
    }
    return ok > 0 ? 0 : 3;
}

inline int cmd_dbcontour(const ExperimentConfig& cfg, const RunOptions& opts) {
    const auto dir = detail::prepare_out_dir(cfg, opts);
    const detail::Bath bath = detail::make_bath(cfg, opts);
    CsvWriter csv((dir / "contour.csv").string(), "delta_hz,omega_star_hz,error");
    const int ok = detail::contour_rows(cfg, bath, csv);
    return ok > 0 ? 0 : 3;
}

}  // namespace bathsim
