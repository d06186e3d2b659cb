#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "bathsim/tomography.hpp"

using namespace bathsim;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

Matrix2cd eigenstate(Axis axis, int sign) {
    return 0.5 * (Matrix2cd::Identity() + double(sign) * axis_operator(axis));
}

}  // namespace

TEST_CASE("axis operators are the paulis") {
    CHECK((axis_operator(Axis::X) - sigma_x()).norm() == 0.0);
    CHECK((axis_operator(Axis::Y) - sigma_y()).norm() == 0.0);
    CHECK((axis_operator(Axis::Z) - sigma_z()).norm() == 0.0);
}

TEST_CASE("model validation") {
    CHECK_NOTHROW(validate_model({0.5, 1, 0}));
    CHECK_NOTHROW(validate_model({1.0, 100000, 7}));
    CHECK_THROWS_AS(validate_model({0.49, 100, 0}), std::invalid_argument);
    CHECK_THROWS_AS(validate_model({1.01, 100, 0}), std::invalid_argument);
    CHECK_THROWS_AS(validate_model({0.8, 0, 0}), std::invalid_argument);
}

TEST_CASE("measurement stream is deterministic") {
    const ReadoutModel model{0.8, 500, 987654321};
    const Matrix2cd rho = eigenstate(Axis::Z, +1);
    const double a = simulate_axis_measurement(rho, Axis::Z, model);
    const double b = simulate_axis_measurement(rho, Axis::Z, model);
    CHECK(a == b);

    ReadoutModel other = model;
    other.seed = 987654322;
    CHECK(simulate_axis_measurement(rho, Axis::Z, other) != a);

    SECTION("salts and axes separate the streams") {
        CHECK(simulate_axis_measurement(rho, Axis::Z, model, 1) != a);
        const Matrix2cd mixed = 0.5 * Matrix2cd::Identity();
        CHECK(simulate_axis_measurement(mixed, Axis::X, model) !=
              simulate_axis_measurement(mixed, Axis::Y, model));
    }
}

TEST_CASE("perfect readout reproduces eigenstates exactly") {
    const ReadoutModel perfect{1.0, 333, 42};
    for (int a = 0; a < 3; ++a) {
        const Axis axis = Axis(a);
        CHECK(simulate_axis_measurement(eigenstate(axis, +1), axis, perfect) == 1.0);
        CHECK(simulate_axis_measurement(eigenstate(axis, -1), axis, perfect) == -1.0);
    }
    const auto scales = calibrate(perfect);
    CHECK(scales[0] == 1.0);
    CHECK(scales[1] == 1.0);
    CHECK(scales[2] == 1.0);
}

TEST_CASE("finite fidelity compresses the read value toward zero") {
    const ReadoutModel model{0.8, 200000, 7};
    const double raw = simulate_axis_measurement(eigenstate(Axis::Z, +1), Axis::Z, model);
    // expectation 2F - 1 = 0.6, standard error 1.8e-3 at this shot count
    CHECK_THAT(raw, WithinAbs(0.6, 0.008));

    const double mixed = simulate_axis_measurement(0.5 * Matrix2cd::Identity(), Axis::Z, model);
    CHECK_THAT(mixed, WithinAbs(0.0, 0.008));
}

TEST_CASE("calibration scale approaches 2F - 1") {
    const auto scales = calibrate({0.8, 100000, 2024});
    for (double s : scales) CHECK_THAT(s, WithinAbs(0.6, 0.01));
}

TEST_CASE("uninformative readout fails calibration") {
    CHECK_THROWS_AS(calibrate({0.5, 2000, 1}), std::runtime_error);
}

TEST_CASE("rescaling arithmetic and clipping") {
    CHECK_THAT(rescale_one(0.3, 0.6), WithinRel(0.5, 1e-15));
    CHECK(rescale_one(0.9, 0.6) == 1.0);
    CHECK(rescale_one(-0.9, 0.6) == -1.0);
    const auto r = rescale({0.3, -0.15, 0.6}, {0.6, 0.6, 0.6});
    CHECK_THAT(r[0], WithinRel(0.5, 1e-15));
    CHECK_THAT(r[1], WithinRel(-0.25, 1e-15));
    CHECK_THAT(r[2], WithinRel(1.0, 1e-15));
}

TEST_CASE("record wiring is consistent") {
    const ReadoutModel model{0.8, 1000, 5150};
    const std::array<double, 3> scales{0.61, 0.59, 0.6};
    const TomographyRecord rec = measure_bloch({0.2, -0.4, 0.55}, model, scales);
    CHECK(rec.scale_x == scales[0]);
    CHECK(rec.scale_y == scales[1]);
    CHECK(rec.scale_z == scales[2]);
    CHECK(rec.corrected_x == rescale_one(rec.raw_x, scales[0]));
    CHECK(rec.corrected_y == rescale_one(rec.raw_y, scales[1]));
    CHECK(rec.corrected_z == rescale_one(rec.raw_z, scales[2]));
    CHECK(std::abs(rec.raw_x) <= 1.0);
    CHECK(std::abs(rec.corrected_z) <= 1.0);
}

TEST_CASE("calibrated round trip is unbiased") {
    const BlochVector ideal{0.0, 0.0, 0.5};
    const int n_seeds = 20;
    double sum = 0.0;
    for (int k = 0; k < n_seeds; ++k) {
        const ReadoutModel model{0.8, 2000, 90000 + std::uint64_t(k)};
        const auto scales = calibrate(model);
        sum += measure_bloch(ideal, model, scales).corrected_z;
    }
    const double mean = sum / double(n_seeds);
    // per-seed standard error ~ 0.036; 4 sigma of the 20-seed mean is 0.032
    CHECK_THAT(mean, WithinAbs(0.5, 0.032));
}
