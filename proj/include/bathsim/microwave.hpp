#pragma once

#include <cmath>
#include <complex>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "common.hpp"

namespace bathsim {

using cplx = std::complex<double>;

struct LineSection {
    double z0;       // characteristic impedance, ohm
    double length;   // physical length, m
    double epsilon;  // relative dielectric constant
};

struct AbcdMatrix {
    cplx a{1.0};
    cplx b{0.0};  // ohm
    cplx c{0.0};  // siemens
    cplx d{1.0};
};

struct ScatteringSpectrum {
    std::vector<double> frequencies;  // Hz, strictly increasing
    std::vector<cplx> s11;
    std::vector<cplx> s21;
    double z_ref;  // ohm
};

inline AbcdMatrix abcd_of_section(const LineSection& s, double frequency_hz) {
    if (!std::isfinite(frequency_hz) || frequency_hz < 0.0)
        throw std::invalid_argument("abcd_of_section: frequency must be finite and nonnegative");
    const double beta = two_pi * frequency_hz * std::sqrt(s.epsilon) / c_light;
    const double bl = beta * s.length;
    AbcdMatrix m;
    m.a = std::cos(bl);
    m.b = cplx(0.0, s.z0 * std::sin(bl));
    m.c = cplx(0.0, std::sin(bl) / s.z0);
    m.d = std::cos(bl);
    return m;
}

// Left-to-right product in port order; port 1 belongs to the first matrix.
inline AbcdMatrix cascade(const std::vector<AbcdMatrix>& ms) {
    AbcdMatrix acc;
    for (const AbcdMatrix& m : ms) {
        AbcdMatrix r;
        r.a = acc.a * m.a + acc.b * m.c;
        r.b = acc.a * m.b + acc.b * m.d;
        r.c = acc.c * m.a + acc.d * m.c;
        r.d = acc.c * m.b + acc.d * m.d;
        acc = r;
    }
    return acc;
}

struct SParams {
    cplx s11;
    cplx s21;
};

// ABCD -> S conversion with the same reference impedance on both ports.
inline SParams s_params(const AbcdMatrix& m, double z_ref) {
    if (!(z_ref > 0.0)) throw std::invalid_argument("s_params: z_ref must be positive");
    const cplx den = m.a + m.b / z_ref + m.c * z_ref + m.d;
    SParams out;
    out.s11 = (m.a + m.b / z_ref - m.c * z_ref - m.d) / den;
    out.s21 = 2.0 / den;
    const bool finite = std::isfinite(out.s11.real()) && std::isfinite(out.s11.imag()) &&
                        std::isfinite(out.s21.real()) && std::isfinite(out.s21.imag());
    if (!finite) throw std::runtime_error("s_params: degenerate two-port, nonfinite S-parameters");
    return out;
}

inline std::vector<LineSection> build_crystal(const std::vector<std::pair<double, double>>& rows,
                                              double epsilon) {
    if (!(epsilon >= 1.0)) throw std::invalid_argument("build_crystal: epsilon must be >= 1");
    std::vector<LineSection> sections;
    sections.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& [z0, length] = rows[i];
        if (!(z0 > 0.0))
            throw std::invalid_argument("build_crystal: row " + std::to_string(i + 1) +
                                        ": impedance must be positive");
        if (!(length > 0.0))
            throw std::invalid_argument("build_crystal: row " + std::to_string(i + 1) +
                                        ": length must be positive");
        sections.push_back({z0, length, epsilon});
    }
    return sections;
}

// Table format: "step z0_ohm length_mm" per line, '#' comments and blank
// lines ignored. Lengths are converted to meters.
inline std::vector<std::pair<double, double>> parse_crystal_table(std::istream& in) {
    std::vector<std::pair<double, double>> rows;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        long step = 0;
        double z0 = 0.0, length_mm = 0.0;
        if (!(ls >> step)) continue;  // blank after comment stripping
        if (!(ls >> z0 >> length_mm))
            throw config_error("crystal table line " + std::to_string(lineno) +
                               ": expected 'step z0_ohm length_mm'");
        std::string trailing;
        if (ls >> trailing)
            throw config_error("crystal table line " + std::to_string(lineno) +
                               ": unexpected trailing field '" + trailing + "'");
        rows.emplace_back(z0, length_mm * 1e-3);
    }
    return rows;
}

inline std::vector<std::pair<double, double>> parse_crystal_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("crystal table not readable: " + path);
    return parse_crystal_table(in);
}

inline ScatteringSpectrum sweep_spectrum(const std::vector<LineSection>& sections,
                                         const std::vector<double>& frequencies, double z_ref) {
    for (std::size_t i = 1; i < frequencies.size(); ++i)
        if (!(frequencies[i] > frequencies[i - 1]))
            throw std::invalid_argument("sweep_spectrum: frequency grid must be strictly increasing");
    ScatteringSpectrum spectrum;
    spectrum.frequencies = frequencies;
    spectrum.z_ref = z_ref;
    spectrum.s11.reserve(frequencies.size());
    spectrum.s21.reserve(frequencies.size());
    std::vector<AbcdMatrix> chain(sections.size());
    for (double f : frequencies) {
        for (std::size_t k = 0; k < sections.size(); ++k) chain[k] = abcd_of_section(sections[k], f);
        try {
            const SParams sp = s_params(cascade(chain), z_ref);
            spectrum.s11.push_back(sp.s11);
            spectrum.s21.push_back(sp.s21);
        } catch (const std::runtime_error& e) {
            throw std::runtime_error("sweep_spectrum: at " + std::to_string(f) + " Hz: " + e.what());
        }
    }
    return spectrum;
}

struct StopBand {
    double lo_hz;
    double hi_hz;
    double min_s21_db;     // global minimum over the whole sweep
    double min_s21_at_hz;
};

// Longest contiguous run where |s21| sits at least drop_db below the
// pass-band mean (mean taken over dB values inside the window).
inline std::optional<StopBand> find_stop_band(const ScatteringSpectrum& spectrum, double passband_lo_hz,
                                              double passband_hi_hz, double drop_db) {
    const std::size_t n = spectrum.frequencies.size();
    double pass_sum = 0.0;
    std::size_t pass_count = 0;
    std::vector<double> s21_db(n);
    for (std::size_t i = 0; i < n; ++i) {
        s21_db[i] = 20.0 * std::log10(std::abs(spectrum.s21[i]));
        if (spectrum.frequencies[i] >= passband_lo_hz && spectrum.frequencies[i] <= passband_hi_hz) {
            pass_sum += s21_db[i];
            ++pass_count;
        }
    }
    if (pass_count == 0) throw std::invalid_argument("find_stop_band: pass-band window misses the grid");
    const double threshold = pass_sum / double(pass_count) - drop_db;

    std::size_t best_lo = 0, best_hi = 0;
    bool found = false;
    for (std::size_t i = 0; i < n;) {
        if (s21_db[i] < threshold) {
            std::size_t j = i;
            while (j + 1 < n && s21_db[j + 1] < threshold) ++j;
            if (!found || j - i > best_hi - best_lo) {
                best_lo = i;
                best_hi = j;
                found = true;
            }
            i = j + 1;
        } else {
            ++i;
        }
    }
    if (!found) return std::nullopt;

    std::size_t min_idx = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (s21_db[i] < s21_db[min_idx]) min_idx = i;
    return StopBand{spectrum.frequencies[best_lo], spectrum.frequencies[best_hi], s21_db[min_idx],
                    spectrum.frequencies[min_idx]};
}

}  // namespace bathsim
