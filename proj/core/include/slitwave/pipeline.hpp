#pragma once

#include "slitwave/calibration.hpp"
#include "slitwave/config.hpp"

namespace slitwave {

// Run the configured scan: derive kinematics, generate the pattern for the
// configured mode, apply the truncation-doubling policy, and stamp the
// metadata block (config echo, achieved truncation, residual, version).
Pattern generate_pattern(const RunConfig& config);

// The three-parameter model the calibration module optimizes, built from a
// run configuration. Amplitude, c1 and lambda_t override the configured
// values; everything else is taken from the config. The doubling loop runs
// once up front to pick the truncation, which is then held fixed so the
// objective is smooth in the parameters.
PatternModel make_pattern_model(const RunConfig& config);

// Fit the configured model to a measured series using the [fit] section of
// the config. Returns the result together with the fitted-model pattern.
struct FitRun {
    FitResult result;
    Pattern fitted_pattern;
};

FitRun fit_run(const RunConfig& config, const ExperimentalSeries& data);

// Plain-text key = value fit report, deterministic formatting.
std::string write_fit_report(const FitResult& result, const RunConfig& config,
                             const ExperimentalSeries& data);

}  // namespace slitwave
