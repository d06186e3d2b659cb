#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <random>
#include <stdexcept>

#include "lindblad.hpp"

namespace bathsim {

struct ReadoutModel {
    double fidelity;     // probability of correct binary assignment, in [0.5, 1]
    int shots;           // >= 1
    std::uint64_t seed;  // root of the deterministic stream
};

struct TomographyRecord {
    double raw_x, raw_y, raw_z;
    double scale_x, scale_y, scale_z;
    double corrected_x, corrected_y, corrected_z;
};

enum class Axis { X = 0, Y = 1, Z = 2 };

inline const Matrix2cd& axis_operator(Axis a) {
    switch (a) {
        case Axis::X: return sigma_x();
        case Axis::Y: return sigma_y();
        default: return sigma_z();
    }
}

inline void validate_model(const ReadoutModel& m) {
    if (!(m.fidelity >= 0.5 && m.fidelity <= 1.0))
        throw std::invalid_argument("readout fidelity must lie in [0.5, 1]");
    if (m.shots < 1) throw std::invalid_argument("readout shots must be >= 1");
}

// Pinned random stream, bit-stable on any conforming implementation:
// mt19937_64 seeded through seed_seq{seed_lo, seed_hi, salt, axis}, uniform
// doubles from the top 53 bits. Distinct salts give independent streams; the
// calibration routine reserves salts 1..6 so calibration shots never reuse
// the data-measurement stream (salt 0).
inline std::mt19937_64 measurement_engine(std::uint64_t seed, std::uint32_t salt, Axis axis) {
    std::seed_seq seq{std::uint32_t(seed & 0xffffffffu), std::uint32_t(seed >> 32), salt,
                      std::uint32_t(axis)};
    return std::mt19937_64(seq);
}

inline double next_uniform(std::mt19937_64& eng) { return double(eng() >> 11) * 0x1.0p-53; }

// Born-rule shots on one Pauli axis with symmetric assignment error: each
// shot lands +1 with probability (1 + <axis>)/2 and is flipped with
// probability 1 - fidelity. Returns the sample mean in [-1, 1].
inline double simulate_axis_measurement(const Matrix2cd& rho, Axis axis, const ReadoutModel& model,
                                        std::uint32_t salt = 0) {
    validate_density(rho);
    validate_model(model);
    const double expectation = (axis_operator(axis) * rho).trace().real();
    const double p_plus = std::clamp(0.5 * (1.0 + expectation), 0.0, 1.0);
    std::mt19937_64 eng = measurement_engine(model.seed, salt, axis);
    long n_plus = 0;
    for (int s = 0; s < model.shots; ++s) {
        bool plus = next_uniform(eng) < p_plus;
        if (next_uniform(eng) < 1.0 - model.fidelity) plus = !plus;
        if (plus) ++n_plus;
    }
    return (2.0 * double(n_plus) - double(model.shots)) / double(model.shots);
}

// Per-axis calibration scale: measure both eigenstate preparations and take
// half the spread. An ideal readout gives 1, a fidelity-F readout 2F - 1.
inline std::array<double, 3> calibrate(const ReadoutModel& model) {
    std::array<double, 3> scales{};
    for (int a = 0; a < 3; ++a) {
        const Axis axis = Axis(a);
        const Matrix2cd plus = 0.5 * (Matrix2cd::Identity() + axis_operator(axis));
        const Matrix2cd minus = 0.5 * (Matrix2cd::Identity() - axis_operator(axis));
        const double m_plus = simulate_axis_measurement(plus, axis, model, std::uint32_t(1 + 2 * a));
        const double m_minus = simulate_axis_measurement(minus, axis, model, std::uint32_t(2 + 2 * a));
        scales[std::size_t(a)] = 0.5 * (m_plus - m_minus);
        if (scales[std::size_t(a)] < 0.05)
            throw std::runtime_error("calibrate: axis scale below 0.05, readout carries no information");
    }
    return scales;
}

inline double rescale_one(double raw, double scale) { return std::clamp(raw / scale, -1.0, 1.0); }

inline std::array<double, 3> rescale(const std::array<double, 3>& raw,
                                     const std::array<double, 3>& scales) {
    return {rescale_one(raw[0], scales[0]), rescale_one(raw[1], scales[1]),
            rescale_one(raw[2], scales[2])};
}

// Forward model for one sweep point: build the bare-basis state from the
// ideal Bloch vector, measure all three axes, rescale with the given scales.
inline TomographyRecord measure_bloch(const BlochVector& ideal, const ReadoutModel& model,
                                      const std::array<double, 3>& scales) {
    const Matrix2cd rho = density_from_bloch(ideal);
    TomographyRecord rec;
    rec.raw_x = simulate_axis_measurement(rho, Axis::X, model);
    rec.raw_y = simulate_axis_measurement(rho, Axis::Y, model);
    rec.raw_z = simulate_axis_measurement(rho, Axis::Z, model);
    rec.scale_x = scales[0];
    rec.scale_y = scales[1];
    rec.scale_z = scales[2];
    const auto corrected = rescale({rec.raw_x, rec.raw_y, rec.raw_z}, scales);
    rec.corrected_x = corrected[0];
    rec.corrected_y = corrected[1];
    rec.corrected_z = corrected[2];
    return rec;
}

}  // namespace bathsim
