#pragma once

#include <functional>
#include <string>
#include <vector>

#include "slitwave/intensity.hpp"

namespace slitwave {

// Measured counts versus screen position. Positions strictly increasing
// after construction; duplicate positions are averaged at load time.
struct ExperimentalSeries {
    std::vector<double> positions;  // m
    std::vector<double> counts;     // >= 0
    std::string label;
};

void validate(const ExperimentalSeries& series);

// Which parameters a fit may move and inside which box. The model scale A
// multiplies every intensity by A^2; c1 determines c2 = sqrt(1 - c1^2);
// lambda_t is the coherence degree. Parameters not listed in free stay at
// their initial values.
struct FitSpec {
    std::vector<std::string> free;  // subset of {"A", "c1", "lambda_t"}

    double a_init = 1.0;
    double a_min = 1e-30;
    double a_max = 1e30;

    double c1_init = 0.5;
    double c1_min = 0.0;
    double c1_max = 1.0;

    double lambda_init = 0.5;
    double lambda_min = 0.0;
    double lambda_max = 1.0;

    int max_evaluations = 4000;
    double tolerance = 1e-10;
};

void validate(const FitSpec& spec);

struct FitResult {
    double amplitude = 0.0;
    double c1 = 0.0;
    double lambda_t = 0.0;
    double objective = 0.0;
    int evaluations = 0;
    bool converged = false;
};

// Sum of squared residuals between the model pattern, linearly interpolated
// onto the data positions, and the measured counts. Data outside the model's
// sampled range is a domain_error rather than an extrapolation.
double residual_ss(const Pattern& model, const ExperimentalSeries& data);

// The model seen by the optimizer: a pattern as a function of the three
// calibratable parameters. Implementations should hold everything else
// (geometry, kinematics, truncation, scan) fixed inside the closure.
using PatternModel =
    std::function<Pattern(double amplitude, double c1, double lambda_t)>;

// Derivative-free bounded least squares: a deterministic coarse grid over
// the free parameters followed by a local simplex polish around the best
// node. When A is free its conditionally optimal value is closed-form
// (intensities scale by A^2), so the search runs over the remaining
// parameters with A profiled out. converged reports whether the polish
// reached the relative objective tolerance before the evaluation budget.
FitResult fit_least_squares(const PatternModel& model,
                            const ExperimentalSeries& data,
                            const FitSpec& spec);

}  // namespace slitwave
