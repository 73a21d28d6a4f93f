#include "slitwave/pipeline.hpp"

#include <cmath>
#include <utility>

#include "slitwave/pattern_io.hpp"
#include "slitwave/version.hpp"

namespace slitwave {

namespace {

struct ModelParams {
    double amplitude = 0.0;
    SuperpositionSpec superposition;
    DecoherenceSpec decoherence;
};

ModelParams params_from_config(const RunConfig& config) {
    ModelParams p;
    p.amplitude = config.physics.amplitude;
    if (config.superposition) p.superposition = *config.superposition;
    if (config.decoherence) p.decoherence = *config.decoherence;
    return p;
}

Pattern run_scan(RunMode mode, Kernel kernel, const ModeTruncation& trunc,
                 const Kinematics& kin, const SlitGeometry& slit,
                 const ScreenGeometry& scan, const ModelParams& p) {
    switch (mode) {
        case RunMode::single:
            return intensity_single(scan, kernel, trunc, kin, slit,
                                    p.amplitude);
        case RunMode::double_coherent:
            return intensity_double_coherent(scan, p.superposition, kernel,
                                             trunc, kin, slit, p.amplitude);
        default:
            return intensity_double_decoherent(scan, p.superposition,
                                               p.decoherence, kernel, trunc,
                                               kin, slit, p.amplitude);
    }
}

void stamp_metadata(Pattern& pattern, const RunConfig& config,
                    const ModeTruncation& achieved,
                    const ConvergedPattern* convergence) {
    pattern.metadata = detail_config::items(config);
    pattern.metadata.emplace_back("achieved.max_m",
                                  std::to_string(achieved.max_m));
    pattern.metadata.emplace_back("achieved.max_n",
                                  std::to_string(achieved.max_n));
    if (convergence) {
        pattern.metadata.emplace_back("convergence.residual",
                                      format_double(convergence->residual));
        pattern.metadata.emplace_back(
            "convergence.converged",
            convergence->converged ? "true" : "false");
        pattern.metadata.emplace_back(
            "convergence.doublings", std::to_string(convergence->doublings));
    }
    pattern.metadata.emplace_back("version", version_string);
}

}  // namespace

Pattern generate_pattern(const RunConfig& config) {
    validate(config);
    const Kinematics kin = derive_kinematics(config.physics);
    const ScreenGeometry scan =
        uniform_scan(config.screen_distance, config.s_min, config.s_max,
                     config.n_points, config.alpha);
    const ModelParams p = params_from_config(config);
    const auto generate = [&](const ModeTruncation& trunc) {
        return run_scan(config.mode, config.kernel, trunc, kin, config.slit,
                        scan, p);
    };

    if (config.convergence.auto_converge) {
        ConvergedPattern result =
            converge_pattern(generate, config.truncation,
                             config.truncation.tail_tol,
                             config.convergence.max_doublings);
        stamp_metadata(result.pattern, config, result.achieved, &result);
        return std::move(result.pattern);
    }

    Pattern pattern = generate(config.truncation);
    stamp_metadata(pattern, config, config.truncation, nullptr);
    return pattern;
}

PatternModel make_pattern_model(const RunConfig& config) {
    validate(config);
    const Kinematics kin = derive_kinematics(config.physics);
    const ScreenGeometry scan =
        uniform_scan(config.screen_distance, config.s_min, config.s_max,
                     config.n_points, config.alpha);
    const ModelParams base = params_from_config(config);

    ModeTruncation trunc = config.truncation;
    if (config.convergence.auto_converge) {
        const auto generate = [&](const ModeTruncation& t) {
            return run_scan(config.mode, config.kernel, t, kin, config.slit,
                            scan, base);
        };
        trunc = converge_pattern(generate, config.truncation,
                                 config.truncation.tail_tol,
                                 config.convergence.max_doublings)
                    .achieved;
    }

    const RunMode mode = config.mode;
    const Kernel kernel = config.kernel;
    const SlitGeometry slit = config.slit;
    return [=](double amplitude, double c1, double lambda_t) {
        ModelParams p = base;
        p.amplitude = amplitude;
        if (mode != RunMode::single) p.superposition = make_superposition(c1);
        if (mode == RunMode::double_decoherent)
            p.decoherence = decoherence_from_lambda(lambda_t);
        return run_scan(mode, kernel, trunc, kin, slit, scan, p);
    };
}

FitRun fit_run(const RunConfig& config, const ExperimentalSeries& data) {
    if (!config.has_fit)
        throw validation_error("config has no [fit] section");
    const PatternModel model = make_pattern_model(config);

    FitRun run;
    run.result = fit_least_squares(model, data, config.fit);
    run.fitted_pattern =
        model(run.result.amplitude, run.result.c1, run.result.lambda_t);

    run.fitted_pattern.metadata = detail_config::items(config);
    const double c2 =
        std::sqrt(std::max(0.0, 1.0 - run.result.c1 * run.result.c1));
    run.fitted_pattern.metadata.emplace_back(
        "fitted.amplitude", format_double(run.result.amplitude));
    run.fitted_pattern.metadata.emplace_back("fitted.c1",
                                             format_double(run.result.c1));
    run.fitted_pattern.metadata.emplace_back("fitted.c2", format_double(c2));
    run.fitted_pattern.metadata.emplace_back(
        "fitted.lambda_t", format_double(run.result.lambda_t));
    run.fitted_pattern.metadata.emplace_back(
        "fitted.objective", format_double(run.result.objective));
    run.fitted_pattern.metadata.emplace_back(
        "fitted.evaluations", std::to_string(run.result.evaluations));
    run.fitted_pattern.metadata.emplace_back(
        "fitted.converged", run.result.converged ? "true" : "false");
    run.fitted_pattern.metadata.emplace_back("version", version_string);
    return run;
}

std::string write_fit_report(const FitResult& result, const RunConfig& config,
                             const ExperimentalSeries& data) {
    const double c2 = std::sqrt(std::max(0.0, 1.0 - result.c1 * result.c1));
    std::string out;
    out += "mode = " + std::string(to_string(config.mode)) + "\n";
    out += "fit.converged = " + std::string(result.converged ? "true" : "false") + "\n";
    out += "fit.evaluations = " + std::to_string(result.evaluations) + "\n";
    out += "fit.objective = " + format_double(result.objective) + "\n";
    out += "fit.amplitude = " + format_double(result.amplitude) + "\n";
    out += "fit.c1 = " + format_double(result.c1) + "\n";
    out += "fit.c2 = " + format_double(c2) + "\n";
    out += "fit.lambda_t = " + format_double(result.lambda_t) + "\n";
    out += "data.label = " + data.label + "\n";
    out += "data.points = " + std::to_string(data.positions.size()) + "\n";
    out += "version = " + std::string(version_string) + "\n";
    return out;
}

}  // namespace slitwave
