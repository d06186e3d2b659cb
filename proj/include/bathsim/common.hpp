#pragma once

#include <stdexcept>

namespace bathsim {

inline constexpr double c_light = 299792458.0;  // m/s, exact
inline constexpr double pi = 3.141592653589793238462643383279502884;
inline constexpr double two_pi = 2.0 * pi;

// Unit conventions used throughout: frequencies are plain frequencies in Hz
// (nu = omega / 2pi), rates are 1/us, times are us. Formulas that need an
// angular quantity convert explicitly with two_pi.
inline constexpr double angular_rate_per_us(double freq_hz) {
    return two_pi * freq_hz * 1e-6;
}

// Malformed or unsatisfiable configuration. The CLI maps this to exit code 2.
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace bathsim
