#include <cmath>
#include <vector>

#include "doctest.h"
#include "slitwave/calibration.hpp"

using namespace slitwave;

namespace {

Pattern pattern_at(std::vector<double> positions,
                   std::vector<double> intensities) {
    Pattern p;
    p.positions = std::move(positions);
    p.intensities = std::move(intensities);
    return p;
}

ExperimentalSeries series_at(std::vector<double> positions,
                             std::vector<double> counts) {
    ExperimentalSeries s;
    s.positions = std::move(positions);
    s.counts = std::move(counts);
    return s;
}

// Dyadic sample values keep the profiled-amplitude algebra exact in
// floating point, so scale recovery can be checked bitwise.
const std::vector<double> dyadic_base{1.0, 2.0, 4.0, 0.5, 8.0};

PatternModel scaled_base_model() {
    return [](double amplitude, double, double) {
        std::vector<double> v;
        for (double b : dyadic_base) v.push_back(amplitude * amplitude * b);
        return pattern_at({0.0, 1.0, 2.0, 3.0, 4.0}, std::move(v));
    };
}

}  // namespace

TEST_CASE("residual sum interpolates the model onto the data") {
    const Pattern model = pattern_at({0.0, 1.0, 2.0}, {5.0, 7.0, 6.0});

    CHECK(residual_ss(model, series_at({0.0, 1.0, 2.0}, {5.0, 7.0, 6.0})) ==
          0.0);
    CHECK(residual_ss(model, series_at({0.0, 1.0, 2.0}, {5.5, 7.5, 6.5})) ==
          0.75);
    CHECK(residual_ss(model, series_at({0.5}, {6.0})) == 0.0);
    CHECK(residual_ss(model, series_at({2.0}, {6.0})) == 0.0);
    CHECK(residual_ss(model, series_at({1.25}, {0.0})) ==
          doctest::Approx(6.75 * 6.75).epsilon(1e-15));

    CHECK_THROWS_AS(residual_ss(model, series_at({2.1}, {1.0})), domain_error);
    CHECK_THROWS_AS(residual_ss(model, series_at({-0.1}, {1.0})),
                    domain_error);
    CHECK_THROWS_AS(
        residual_ss(pattern_at({0.0}, {1.0}), series_at({0.0}, {1.0})),
        invalid_parameter_error);
    CHECK_THROWS_AS(
        residual_ss(pattern_at({0.0, 1.0}, {1.0, -2.0}),
                    series_at({0.5}, {1.0})),
        invalid_parameter_error);
}

TEST_CASE("experimental series validation") {
    CHECK_NOTHROW(validate(series_at({0.0, 1.0}, {3.0, 4.0})));
    CHECK_THROWS_AS(validate(series_at({0.0, 1.0}, {3.0})), validation_error);
    CHECK_THROWS_AS(validate(series_at({1.0, 1.0}, {3.0, 4.0})),
                    validation_error);
    CHECK_THROWS_AS(validate(series_at({0.0, 1.0}, {3.0, -4.0})),
                    validation_error);
}

TEST_CASE("fit specification validation") {
    FitSpec good;
    CHECK_NOTHROW(validate(good));

    FitSpec bad = good;
    bad.free = {"A", "phase"};
    CHECK_THROWS_AS(validate(bad), invalid_parameter_error);

    bad = good;
    bad.a_min = 0.0;
    CHECK_THROWS_AS(validate(bad), invalid_parameter_error);

    bad = good;
    bad.a_min = 2.0;
    bad.a_max = 1.0;
    CHECK_THROWS_AS(validate(bad), invalid_parameter_error);

    bad = good;
    bad.c1_max = 1.5;
    CHECK_THROWS_AS(validate(bad), invalid_parameter_error);

    bad = good;
    bad.lambda_min = -0.5;
    CHECK_THROWS_AS(validate(bad), invalid_parameter_error);

    bad = good;
    bad.max_evaluations = 0;
    CHECK_THROWS_AS(validate(bad), invalid_parameter_error);

    bad = good;
    bad.tolerance = 0.0;
    CHECK_THROWS_AS(validate(bad), invalid_parameter_error);

    bad = good;
    bad.a_init = 1e31;
    CHECK_THROWS_AS(validate(bad), invalid_parameter_error);
}

TEST_CASE("amplitude-only fit is closed-form and exact") {
    const PatternModel model = scaled_base_model();
    std::vector<double> counts;
    for (double b : dyadic_base) counts.push_back(9.0 * b);
    const ExperimentalSeries data =
        series_at({0.0, 1.0, 2.0, 3.0, 4.0}, std::move(counts));

    FitSpec spec;
    spec.free = {"A"};
    const FitResult result = fit_least_squares(model, data, spec);
    CHECK(result.amplitude == 3.0);
    CHECK(result.objective == 0.0);
    CHECK(result.evaluations == 1);
    CHECK(result.converged);
    CHECK(result.c1 == spec.c1_init);
    CHECK(result.lambda_t == spec.lambda_init);

    FitSpec boxed = spec;
    boxed.a_max = 2.0;
    const FitResult clamped = fit_least_squares(model, data, boxed);
    CHECK(clamped.amplitude == 2.0);
    CHECK(clamped.objective > 0.0);
}

TEST_CASE("empty free set reports the initial residual") {
    const PatternModel model = scaled_base_model();
    const ExperimentalSeries data =
        series_at({0.0, 1.0, 2.0, 3.0, 4.0}, {9.0, 18.0, 36.0, 4.5, 72.0});

    FitSpec spec;
    spec.free = {};
    const FitResult result = fit_least_squares(model, data, spec);
    const double expected = residual_ss(
        model(spec.a_init, spec.c1_init, spec.lambda_init), data);
    CHECK(result.objective == expected);
    CHECK(result.evaluations == 1);
    CHECK(result.converged);
    CHECK(result.amplitude == spec.a_init);
}

TEST_CASE("shape search locates an off-grid quadratic minimum") {
    const PatternModel model = [](double, double c1, double lambda) {
        const double g = (c1 - 0.37) * (c1 - 0.37) +
                         (lambda - 0.81) * (lambda - 0.81);
        return pattern_at({0.0, 1.0, 2.0, 3.0, 4.0},
                          std::vector<double>(5, 1.0 + g));
    };
    const ExperimentalSeries data =
        series_at({0.0, 1.0, 2.0, 3.0, 4.0}, {0.0, 0.0, 0.0, 0.0, 0.0});

    FitSpec spec;
    spec.free = {"c1", "lambda_t"};
    const FitResult result = fit_least_squares(model, data, spec);
    CHECK(result.converged);
    CHECK(std::abs(result.c1 - 0.37) < 1e-4);
    CHECK(std::abs(result.lambda_t - 0.81) < 1e-4);
    CHECK(result.objective == doctest::Approx(5.0).epsilon(1e-6));
    CHECK(result.amplitude == spec.a_init);

    // Restarting from the optimum must not lose ground.
    FitSpec restart = spec;
    restart.c1_init = result.c1;
    restart.lambda_init = result.lambda_t;
    const FitResult again = fit_least_squares(model, data, restart);
    CHECK(again.objective <= result.objective * (1.0 + 1e-12));
}

TEST_CASE("exhausted budget still returns the best point seen") {
    const PatternModel model = [](double, double c1, double lambda) {
        const double g = (c1 - 0.37) * (c1 - 0.37) +
                         (lambda - 0.81) * (lambda - 0.81);
        return pattern_at({0.0, 1.0, 2.0, 3.0, 4.0},
                          std::vector<double>(5, 1.0 + g));
    };
    const ExperimentalSeries data =
        series_at({0.0, 1.0, 2.0, 3.0, 4.0}, {0.0, 0.0, 0.0, 0.0, 0.0});

    FitSpec spec;
    spec.free = {"c1", "lambda_t"};
    spec.max_evaluations = 5;
    const FitResult result = fit_least_squares(model, data, spec);
    CHECK(!result.converged);
    CHECK(result.evaluations == 5);

    const double at_init = residual_ss(
        model(spec.a_init, spec.c1_init, spec.lambda_init), data);
    CHECK(result.objective <= at_init);
}

TEST_CASE("fit rejects unusable data") {
    const PatternModel model = scaled_base_model();
    FitSpec spec;
    spec.free = {"A"};

    CHECK_THROWS_AS(
        fit_least_squares(model, series_at({0.0, 1.0}, {1.0, 2.0}), spec),
        validation_error);
    CHECK_THROWS_AS(
        fit_least_squares(
            model, series_at({0.0, 1.0, 1.0, 2.0, 3.0}, {1, 2, 3, 4, 5}),
            spec),
        validation_error);
}

TEST_CASE("full calibration recovers a synthetic diffraction run") {
    PhysicalParams p;
    p.mass = 1.4e-24;
    p.velocity = 220.0;
    const Kinematics kin = derive_kinematics(p);
    const SlitGeometry geo{5e-8, 1e-2, 1.3e-6, 5e-8};
    const ModeTruncation trunc{8, 8, 1e-6};
    const ScreenGeometry scan = uniform_scan(1.25, -8e-5, 8e-5, 41);

    const PatternModel model = [&](double amplitude, double c1,
                                   double lambda) {
        return intensity_double_decoherent(
            scan, make_superposition(c1), decoherence_from_lambda(lambda),
            Kernel::fresnel, trunc, kin, geo, amplitude);
    };

    const Pattern truth = model(2.0, 0.6, 0.5);
    ExperimentalSeries data;
    data.positions = truth.positions;
    data.counts = truth.intensities;

    FitSpec spec;
    spec.free = {"A", "c1", "lambda_t"};
    spec.a_init = 1.0;
    spec.a_min = 0.1;
    spec.a_max = 10.0;
    spec.max_evaluations = 800;

    const FitResult result = fit_least_squares(model, data, spec);

    // The coarse grid lands exactly on the generating parameters, where the
    // profiled amplitude and the residual are both exact.
    CHECK(result.amplitude == 2.0);
    CHECK(result.c1 == 0.6);
    CHECK(result.lambda_t == 0.5);
    CHECK(result.objective == 0.0);
    CHECK(result.evaluations <= spec.max_evaluations);
}
