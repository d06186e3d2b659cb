#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>

#include "spectral.hpp"

namespace bathsim {

struct DriveParams {
    double omega_d_hz;     // drive frequency
    double omega_q_hz;     // qubit frequency
    double rabi_hz;        // resonant Rabi frequency Omega/2pi, >= 0
    double phase_rad = 0;  // reserved; the steady-state machinery takes the real quadrature
};

inline double detuning_hz(const DriveParams& d) { return d.omega_d_hz - d.omega_q_hz; }

struct DressedFrame {
    double theta;       // mixing angle, radians
    double omega_r_hz;  // generalized Rabi frequency, sqrt(Omega^2 + Delta^2)
};

// Branch: theta -> 0 far red-detuned (dressed ground approaches bare ground),
// theta -> pi/2 far blue-detuned, pi/4 on resonance; strictly increasing in
// the detuning. atan2 realizes tan(2 theta) = -Omega/Delta on that branch.
inline DressedFrame dressed_frame(const DriveParams& d) {
    if (!(d.rabi_hz >= 0.0)) throw std::invalid_argument("dressed_frame: rabi amplitude must be >= 0");
    const double delta = detuning_hz(d);
    if (d.rabi_hz == 0.0 && delta == 0.0)
        throw std::invalid_argument("dressed_frame: undefined for zero drive at zero detuning");
    return DressedFrame{0.5 * std::atan2(d.rabi_hz, -delta), std::hypot(d.rabi_hz, delta)};
}

struct RateSet {
    double gamma_0;      // 1/us, samples the density at the drive frequency
    double gamma_plus;   // 1/us, samples the upper sideband, feeds dressed de-excitation
    double gamma_minus;  // 1/us, samples the lower sideband, feeds dressed excitation
    double gamma_phi;    // 1/us, lab-frame pure dephasing, passed through
    double theta;
    double omega_r_hz;
};

// Sideband assignment, kept in one place so it can be flipped wholesale:
// dressed de-excitation radiates at the upper sideband, so gamma_plus samples
// omega_d + Omega_R and gamma_minus samples omega_d - Omega_R.
inline std::pair<double, double> sideband_frequencies(double omega_d_hz, double omega_r_hz) {
    return {omega_d_hz + omega_r_hz, omega_d_hz - omega_r_hz};
}

// Where the cavity filter prefactor is anchored. SampledFrequency tracks each
// sideband (the default); QubitFrequency freezes the prefactor at the qubit,
// which makes a flat density give exactly colorless rates. The flat-density
// override uses the frozen anchor so mirror symmetry in the detuning is exact.
enum class CavityAnchor { SampledFrequency, QubitFrequency };

inline RateSet rate_set(const DriveParams& d, const SpectralDensity& dos, const PurcellParams& p,
                        double gamma_phi, CavityAnchor anchor = CavityAnchor::SampledFrequency) {
    if (!(gamma_phi >= 0.0)) throw std::invalid_argument("rate_set: gamma_phi must be >= 0");
    const DressedFrame frame = dressed_frame(d);
    const auto [f_plus, f_minus] = sideband_frequencies(d.omega_d_hz, frame.omega_r_hz);
    const auto anchor_of = [&](double sample_hz) {
        return anchor == CavityAnchor::SampledFrequency ? sample_hz : d.omega_q_hz;
    };
    RateSet r;
    r.gamma_plus = purcell_rate_at(dos, f_plus, anchor_of(f_plus), p);
    r.gamma_minus = purcell_rate_at(dos, f_minus, anchor_of(f_minus), p);
    r.gamma_0 = purcell_rate_at(dos, d.omega_d_hz, anchor_of(d.omega_d_hz), p);
    r.gamma_phi = gamma_phi;
    r.theta = frame.theta;
    r.omega_r_hz = frame.omega_r_hz;
    return r;
}

// Balance function whose root makes the dressed up- and down-rates cancel:
// f(Omega) = gamma_minus sin^4(theta) - gamma_plus cos^4(theta).
inline double detailed_balance_mismatch(double rabi_hz, double delta_hz, const SpectralDensity& dos,
                                        const PurcellParams& p, double omega_q_hz,
                                        CavityAnchor anchor = CavityAnchor::SampledFrequency) {
    const DriveParams d{omega_q_hz + delta_hz, omega_q_hz, rabi_hz};
    const RateSet r = rate_set(d, dos, p, 0.0, anchor);
    const double s = std::sin(r.theta), c = std::cos(r.theta);
    return r.gamma_minus * s * s * s * s - r.gamma_plus * c * c * c * c;
}

// Bisection for the Rabi amplitude that balances the dressed rates at a given
// detuning; nullopt when the bracket holds no sign change.
inline std::optional<double> detailed_balance_rabi(double delta_hz, const SpectralDensity& dos,
                                                   const PurcellParams& p, double omega_q_hz,
                                                   double bracket_lo_hz, double bracket_hi_hz,
                                                   CavityAnchor anchor = CavityAnchor::SampledFrequency) {
    if (!(bracket_lo_hz > 0.0) || !(bracket_hi_hz > bracket_lo_hz))
        throw std::invalid_argument("detailed_balance_rabi: bracket must satisfy 0 < lo < hi");
    const auto f = [&](double om) {
        return detailed_balance_mismatch(om, delta_hz, dos, p, omega_q_hz, anchor);
    };
    double lo = bracket_lo_hz, hi = bracket_hi_hz;
    double flo = f(lo);
    const double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0)) return std::nullopt;
    double mid = 0.5 * (lo + hi);
    for (int i = 0; i < 60; ++i) {
        mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((flo > 0.0) == (fm > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    if (std::abs(f(mid)) >= 1e-6)
        throw std::runtime_error("detailed_balance_rabi: bisection failed to reach |f| < 1e-6 per us");
    return mid;
}

}  // namespace bathsim
