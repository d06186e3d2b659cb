#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iostream>
#include <stdexcept>
#include <vector>

#include "microwave.hpp"

namespace bathsim {

struct SpectralDensity {
    std::vector<double> frequencies;  // Hz, strictly increasing
    std::vector<double> rho;          // dimensionless, >= 0
    double normalization;             // pass-band mean of the raw density
};

struct PurcellParams {
    double g_hz;        // qubit-cavity coupling g/2pi
    double kappa_hz;    // cavity linewidth kappa/2pi
    double omega_c_hz;  // cavity frequency omega_c/2pi
    double gamma_d;     // background decay into other channels, 1/us
};

// Density proxy: the fraction of incident power the network passes to the
// matched continuum, r = 1 - |s11|^2, scaled so the pass-band mean is 1.
inline SpectralDensity dos_from_spectrum(const ScatteringSpectrum& spectrum, double passband_lo_hz,
                                         double passband_hi_hz) {
    const std::size_t n = spectrum.frequencies.size();
    SpectralDensity dos;
    dos.frequencies = spectrum.frequencies;
    dos.rho.resize(n);
    double pass_sum = 0.0;
    std::size_t pass_count = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = std::max(0.0, 1.0 - std::norm(spectrum.s11[i]));
        dos.rho[i] = r;
        if (spectrum.frequencies[i] >= passband_lo_hz && spectrum.frequencies[i] <= passband_hi_hz) {
            pass_sum += r;
            ++pass_count;
        }
    }
    if (n == 0 || passband_lo_hz < spectrum.frequencies.front() || passband_hi_hz > spectrum.frequencies.back())
        throw std::invalid_argument("dos_from_spectrum: pass-band window outside the frequency grid");
    if (pass_count < 10)
        throw std::invalid_argument("dos_from_spectrum: pass-band window covers fewer than 10 grid points");
    const double mean = pass_sum / double(pass_count);
    if (mean < 1e-6)
        throw std::runtime_error("dos_from_spectrum: degenerate normalization window, pass-band mean " +
                                 std::to_string(mean));
    dos.normalization = mean;
    for (double& v : dos.rho) v /= mean;
    return dos;
}

inline SpectralDensity flat_density(double lo_hz, double hi_hz) {
    return SpectralDensity{{lo_hz, hi_hz}, {1.0, 1.0}, 1.0};
}

// Linear interpolation; queries outside the grid are errors, not extrapolations.
inline double density_at(const SpectralDensity& dos, double f_hz) {
    const auto& fs = dos.frequencies;
    if (fs.empty() || f_hz < fs.front() || f_hz > fs.back())
        throw std::out_of_range("density_at: " + std::to_string(f_hz) + " Hz outside the sampled grid [" +
                                std::to_string(fs.empty() ? 0.0 : fs.front()) + ", " +
                                std::to_string(fs.empty() ? 0.0 : fs.back()) + "]");
    const auto it = std::upper_bound(fs.begin(), fs.end(), f_hz);
    if (it == fs.begin()) return dos.rho.front();
    if (it == fs.end()) return dos.rho.back();
    const std::size_t hi = std::size_t(it - fs.begin());
    const std::size_t lo = hi - 1;
    const double t = (f_hz - fs[lo]) / (fs[hi] - fs[lo]);
    return dos.rho[lo] + t * (dos.rho[hi] - dos.rho[lo]);
}

inline void warn_if_dispersive_marginal(double detuning_hz, double kappa_hz) {
    static std::atomic<bool> warned{false};
    if (std::abs(detuning_hz) < 10.0 * kappa_hz && !warned.exchange(true))
        std::cerr << "warning: |omega_c - omega| < 10 kappa, dispersive filtering is marginal there\n";
}

// Decay rate with the cavity filter anchored at anchor_hz and the density
// sampled at sample_hz. The two coincide for a plain qubit decay query;
// sideband rates sample the density away from the anchor.
inline double purcell_rate_at(const SpectralDensity& dos, double sample_hz, double anchor_hz,
                              const PurcellParams& p) {
    const double rho = density_at(dos, sample_hz);
    const double detuning = p.omega_c_hz - anchor_hz;
    const double ratio = p.g_hz / detuning;
    return p.gamma_d + rho * ratio * ratio * angular_rate_per_us(p.kappa_hz);
}

inline double purcell_rate(const SpectralDensity& dos, double omega_q_hz, const PurcellParams& p) {
    warn_if_dispersive_marginal(p.omega_c_hz - omega_q_hz, p.kappa_hz);
    return purcell_rate_at(dos, omega_q_hz, omega_q_hz, p);
}

// Squared Rabi coupling proxy: both it and the filtered decay rate scale with
// the same local density, which is what a co-plot of the two demonstrates.
inline double rabi_squared_proxy(const SpectralDensity& dos, double omega_q_hz, double drive_gain_hz2) {
    return drive_gain_hz2 * density_at(dos, omega_q_hz);
}

}  // namespace bathsim
