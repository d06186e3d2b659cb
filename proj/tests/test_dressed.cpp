#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "bathsim/dressed.hpp"

using namespace bathsim;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

SpectralDensity crystal_dos() {
    const auto rows = parse_crystal_table(std::string(BATHSIM_SOURCE_DIR "/data/crystal_sections.txt"));
    const auto sections = build_crystal(rows, 1.96);
    std::vector<double> grid;
    grid.reserve(9001);
    for (int i = 0; i <= 9000; ++i) grid.push_back(1.0e9 + 1.0e6 * double(i));
    return dos_from_spectrum(sweep_spectrum(sections, grid, 50.0), 1.0e9, 3.0e9);
}

SpectralDensity exponential_dos(double omega_q_hz, double sigma_hz) {
    SpectralDensity dos;
    dos.normalization = 1.0;
    const int n = 1201;
    for (int i = 0; i < n; ++i) {
        const double f = omega_q_hz - 30.0e6 + 60.0e6 * double(i) / double(n - 1);
        dos.frequencies.push_back(f);
        dos.rho.push_back(std::exp((f - omega_q_hz) / sigma_hz));
    }
    return dos;
}

constexpr double kOmegaQ = 6.4766e9;
constexpr PurcellParams kCrystalParams{200.0e6, 18.0e6, 7.801e9, 1.0 / 30.0};
constexpr PurcellParams kBareParams{200.0e6, 18.0e6, 7.801e9, 0.0};

}  // namespace

TEST_CASE("mixing angle branch") {
    SECTION("resonance sits at pi/4") {
        const DressedFrame f = dressed_frame({kOmegaQ, kOmegaQ, 3.0e6});
        CHECK_THAT(f.theta, WithinRel(pi / 4.0, 1e-15));
        CHECK(f.omega_r_hz == 3.0e6);
    }
    SECTION("zero drive, red detuned drive frequency") {
        const DressedFrame f = dressed_frame({kOmegaQ - 2.0e6, kOmegaQ, 0.0});
        CHECK(f.theta == 0.0);
        CHECK(f.omega_r_hz == 2.0e6);
    }
    SECTION("zero drive, blue detuned drive frequency") {
        const DressedFrame f = dressed_frame({kOmegaQ + 2.0e6, kOmegaQ, 0.0});
        CHECK_THAT(f.theta, WithinRel(pi / 2.0, 1e-15));
    }
    SECTION("equal drive and red detuning gives pi/8") {
        const DressedFrame f = dressed_frame({kOmegaQ - 2.0e6, kOmegaQ, 2.0e6});
        CHECK_THAT(f.theta, WithinRel(pi / 8.0, 1e-14));
        CHECK_THAT(f.omega_r_hz, WithinRel(2.0e6 * std::sqrt(2.0), 1e-15));
    }
    SECTION("guards") {
        CHECK_THROWS_AS(dressed_frame({kOmegaQ, kOmegaQ, -1.0}), std::invalid_argument);
        CHECK_THROWS_AS(dressed_frame({kOmegaQ, kOmegaQ, 0.0}), std::invalid_argument);
    }
    SECTION("theta increases monotonically with detuning") {
        double prev = -1.0;
        for (double delta = -5.0e6; delta <= 5.0e6; delta += 0.5e6) {
            const DressedFrame f = dressed_frame({kOmegaQ + delta, kOmegaQ, 1.0e6});
            CHECK(f.theta > prev);
            CHECK(f.theta >= 0.0);
            CHECK(f.theta <= pi / 2.0);
            prev = f.theta;
        }
    }
    SECTION("generalized Rabi frequency dominates both inputs") {
        const DressedFrame f = dressed_frame({kOmegaQ + 4.0e6, kOmegaQ, 3.0e6});
        CHECK(f.omega_r_hz == 5.0e6);  // 3-4-5 triangle, exact in ieee
    }
}

TEST_CASE("sideband assignment") {
    const auto [upper, lower] = sideband_frequencies(6.0e9, 2.0e6);
    CHECK(upper == 6.002e9);
    CHECK(lower == 5.998e9);
}

TEST_CASE("resonant rates on the crystal density") {
    const SpectralDensity dos = crystal_dos();
    const RateSet r = rate_set({kOmegaQ, kOmegaQ, 3.0e6}, dos, kCrystalParams, 0.029);
    CHECK_THAT(r.gamma_minus, WithinRel(0.362708936372389, 1e-9));
    CHECK_THAT(r.gamma_plus, WithinRel(0.36519627968870316, 1e-9));
    CHECK_THAT(r.gamma_0, WithinRel(0.36359577395652504, 1e-9));
    CHECK(r.gamma_phi == 0.029);
    CHECK_THAT(r.theta, WithinRel(pi / 4.0, 1e-15));

    // the upper sideband sits closer to both the band edge and the cavity
    CHECK(r.gamma_plus > r.gamma_0);
    CHECK(r.gamma_0 > r.gamma_minus);
    const double asym = (r.gamma_plus - r.gamma_minus) / r.gamma_minus;
    CHECK_THAT(asym, WithinRel(0.00685768412874296, 1e-6));
    CHECK(asym > 1e-3);
}

TEST_CASE("flat density with a frozen anchor gives colorless rates") {
    const SpectralDensity dos = flat_density(1.0e9, 10.0e9);
    const RateSet r = rate_set({kOmegaQ + 1.0e6, kOmegaQ, 3.0e6}, dos, kCrystalParams, 0.0,
                               CavityAnchor::QubitFrequency);
    CHECK(r.gamma_plus == r.gamma_minus);
    CHECK(r.gamma_plus == r.gamma_0);
    CHECK_THAT(r.gamma_plus, WithinRel(1.0 / 30.0 + 2.5791346767201446, 1e-12));
}

TEST_CASE("flat density with the tracking anchor keeps the cavity tilt") {
    const SpectralDensity dos = flat_density(1.0e9, 10.0e9);
    const RateSet r = rate_set({kOmegaQ, kOmegaQ, 3.0e6}, dos, kCrystalParams, 0.0,
                               CavityAnchor::SampledFrequency);
    CHECK(r.gamma_plus > r.gamma_0);
    CHECK(r.gamma_0 > r.gamma_minus);
}

TEST_CASE("tilted density splits the sideband rates by the density ratio") {
    const SpectralDensity dos{{kOmegaQ - 10.0e6, kOmegaQ + 10.0e6}, {0.5, 1.5}, 1.0};
    const RateSet r = rate_set({kOmegaQ, kOmegaQ, 4.0e6}, dos, kBareParams, 0.0,
                               CavityAnchor::QubitFrequency);
    const double rho_plus = density_at(dos, kOmegaQ + 4.0e6);
    const double rho_minus = density_at(dos, kOmegaQ - 4.0e6);
    CHECK_THAT(r.gamma_plus / r.gamma_minus, WithinRel(rho_plus / rho_minus, 1e-12));
}

TEST_CASE("rate set guards") {
    const SpectralDensity dos = flat_density(1.0e9, 10.0e9);
    CHECK_THROWS_AS(rate_set({kOmegaQ, kOmegaQ, 3.0e6}, dos, kCrystalParams, -0.1),
                    std::invalid_argument);
    const SpectralDensity narrow{{kOmegaQ - 1.0e6, kOmegaQ + 1.0e6}, {1.0, 1.0}, 1.0};
    CHECK_THROWS_AS(rate_set({kOmegaQ, kOmegaQ, 3.0e6}, narrow, kCrystalParams, 0.0),
                    std::out_of_range);  // sidebands leave the sampled grid
}

TEST_CASE("balance mismatch symmetry on a colorless bath") {
    const SpectralDensity dos = flat_density(1.0e9, 10.0e9);
    const auto f = [&](double om, double de) {
        return detailed_balance_mismatch(om, de, dos, kCrystalParams, kOmegaQ,
                                         CavityAnchor::QubitFrequency);
    };
    CHECK_THAT(f(3.0e6, 0.0), WithinAbs(0.0, 1e-14));
    for (double om : {0.5e6, 2.0e6, 5.0e6})
        for (double de : {0.2e6, 1.0e6, 4.0e6}) {
            CHECK_THAT(f(om, de) + f(om, -de), WithinAbs(0.0, 1e-12));
            CHECK(f(om, de) > 0.0);  // blue detuning weights the up-pump side
        }
}

TEST_CASE("colorless bath has no balance root off resonance") {
    const SpectralDensity dos = flat_density(1.0e9, 10.0e9);
    CHECK_FALSE(detailed_balance_rabi(2.0e6, dos, kCrystalParams, kOmegaQ, 1.0e5, 5.0e6,
                                      CavityAnchor::QubitFrequency)
                    .has_value());
    CHECK_FALSE(detailed_balance_rabi(-2.0e6, dos, kCrystalParams, kOmegaQ, 1.0e5, 5.0e6,
                                      CavityAnchor::QubitFrequency)
                    .has_value());
}

TEST_CASE("steep density balance roots") {
    const SpectralDensity dos = exponential_dos(kOmegaQ, 2.0e6);
    SECTION("frozen root positions") {
        const auto r1 = detailed_balance_rabi(1.0e6, dos, kBareParams, kOmegaQ, 1.0e5, 5.0e6);
        REQUIRE(r1.has_value());
        CHECK_THAT(*r1, WithinRel(1.828838e6, 1e-4));
        const auto r3 = detailed_balance_rabi(3.0e6, dos, kBareParams, kOmegaQ, 1.0e5, 5.0e6);
        REQUIRE(r3.has_value());
        CHECK_THAT(*r3, WithinRel(2.579418e6, 1e-4));
    }
    SECTION("roots satisfy the mismatch tolerance") {
        for (double de : {0.5e6, 1.0e6, 2.0e6, 3.0e6, 4.0e6}) {
            const auto root = detailed_balance_rabi(de, dos, kBareParams, kOmegaQ, 1.0e5, 5.0e6);
            REQUIRE(root.has_value());
            CHECK(std::abs(detailed_balance_mismatch(*root, de, dos, kBareParams, kOmegaQ)) < 1e-6);
        }
    }
    SECTION("red detuning has no root against a rising density") {
        CHECK_FALSE(detailed_balance_rabi(-1.0e6, dos, kBareParams, kOmegaQ, 1.0e5, 5.0e6).has_value());
    }
}

TEST_CASE("balance bracket guards") {
    const SpectralDensity dos = flat_density(1.0e9, 10.0e9);
    CHECK_THROWS_AS(detailed_balance_rabi(1.0e6, dos, kCrystalParams, kOmegaQ, 0.0, 5.0e6),
                    std::invalid_argument);
    CHECK_THROWS_AS(detailed_balance_rabi(1.0e6, dos, kCrystalParams, kOmegaQ, 5.0e6, 1.0e5),
                    std::invalid_argument);
}
