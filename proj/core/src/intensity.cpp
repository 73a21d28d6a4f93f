#include "slitwave/intensity.hpp"

#include <cmath>
#include <limits>

#include "slitwave/errors.hpp"

namespace slitwave {

void validate(const SuperpositionSpec& spec) {
    if (spec.c1 < 0.0 || spec.c2 < 0.0)
        throw invalid_parameter_error("superposition weights must be non-negative");
    const double norm = std::hypot(spec.c1, spec.c2);
    if (std::abs(norm - 1.0) > 1e-3)
        throw validation_error(
            "superposition weights must have unit norm sqrt(c1^2 + c2^2) "
            "within 1e-3");
}

SuperpositionSpec make_superposition(double c1) {
    if (c1 < 0.0 || c1 > 1.0)
        throw invalid_parameter_error("c1 must lie in [0, 1]");
    return {c1, std::sqrt((1.0 - c1) * (1.0 + c1))};
}

void validate(const DecoherenceSpec& spec) {
    if (spec.alpha_t < 0.0 || spec.alpha_t > 1.0)
        throw invalid_parameter_error("alpha_t must lie in [0, 1]");
    const double expected = lambda_from_alpha(spec.alpha_t);
    if (std::abs(spec.lambda_t - expected) > 1e-12)
        throw invalid_parameter_error(
            "lambda_t is inconsistent with alpha_t");
}

DecoherenceSpec decoherence_from_alpha(double alpha_t) {
    return {alpha_t, lambda_from_alpha(alpha_t)};
}

DecoherenceSpec decoherence_from_lambda(double lambda_t) {
    return {alpha_from_lambda(lambda_t), lambda_t};
}

double lambda_from_alpha(double alpha_t) {
    if (alpha_t < 0.0 || alpha_t > 1.0)
        throw invalid_parameter_error("alpha_t must lie in [0, 1]");
    return 2.0 * alpha_t / (1.0 + alpha_t * alpha_t);
}

double alpha_from_lambda(double lambda_t) {
    if (lambda_t < 0.0 || lambda_t > 1.0)
        throw invalid_parameter_error("lambda_t must lie in [0, 1]");
    const double root = std::sqrt((1.0 - lambda_t) * (1.0 + lambda_t));
    return lambda_t / (1.0 + root);
}

void validate(const Pattern& pattern) {
    if (pattern.positions.size() != pattern.intensities.size())
        throw invalid_parameter_error(
            "pattern positions and intensities differ in length");
    for (std::size_t i = 1; i < pattern.positions.size(); ++i) {
        if (!(pattern.positions[i - 1] < pattern.positions[i]))
            throw invalid_parameter_error(
                "pattern positions must be strictly increasing");
    }
    for (double v : pattern.intensities) {
        if (!(v >= 0.0))
            throw invalid_parameter_error("pattern intensities must be non-negative");
    }
}

namespace {

Pattern scan_pattern(const ScreenGeometry& scan,
                     const std::function<double(const ScreenPoint&)>& sample) {
    validate(scan);
    Pattern pattern;
    pattern.positions = scan.positions;
    pattern.intensities.reserve(scan.positions.size());
    for (double s : scan.positions) {
        const ScreenPoint pt = make_screen_point(s, scan.distance, scan.alpha);
        pattern.intensities.push_back(sample(pt));
    }
    return pattern;
}

}  // namespace

Pattern intensity_single(const ScreenGeometry& scan, Kernel kernel,
                         const ModeTruncation& trunc, const Kinematics& kin,
                         const SlitGeometry& geometry, double amplitude) {
    ScreenAmplitudeEvaluator eval(kernel, SlitLayout::single, trunc, kin,
                                  geometry, amplitude, scan.alpha);
    return scan_pattern(scan, [&](const ScreenPoint& pt) {
        return std::norm(eval.reduced(Slit::one, pt));
    });
}

Pattern intensity_double_coherent(const ScreenGeometry& scan,
                                  const SuperpositionSpec& spec,
                                  Kernel kernel, const ModeTruncation& trunc,
                                  const Kinematics& kin,
                                  const SlitGeometry& geometry,
                                  double amplitude) {
    validate(spec);
    ScreenAmplitudeEvaluator eval(kernel, SlitLayout::pair, trunc, kin,
                                  geometry, amplitude, scan.alpha);
    return scan_pattern(scan, [&](const ScreenPoint& pt) {
        const std::complex<double> psi1 = eval.reduced(Slit::one, pt);
        const std::complex<double> psi2 = eval.reduced(Slit::two, pt);
        return std::norm(spec.c1 * psi1 + spec.c2 * psi2);
    });
}

Pattern intensity_double_decoherent(const ScreenGeometry& scan,
                                    const SuperpositionSpec& spec,
                                    const DecoherenceSpec& deco,
                                    Kernel kernel,
                                    const ModeTruncation& trunc,
                                    const Kinematics& kin,
                                    const SlitGeometry& geometry,
                                    double amplitude) {
    validate(spec);
    validate(deco);
    ScreenAmplitudeEvaluator eval(kernel, SlitLayout::pair, trunc, kin,
                                  geometry, amplitude, scan.alpha);
    const double scale = 1.0 + deco.alpha_t * deco.alpha_t;
    const double lambda = deco.lambda_t;
    return scan_pattern(scan, [&](const ScreenPoint& pt) {
        const std::complex<double> psi1 = eval.reduced(Slit::one, pt);
        const std::complex<double> psi2 = eval.reduced(Slit::two, pt);
        const double incoherent = spec.c1 * spec.c1 * std::norm(psi1) +
                                  spec.c2 * spec.c2 * std::norm(psi2);
        const double coherent = std::norm(spec.c1 * psi1 + spec.c2 * psi2);
        return scale * ((1.0 - lambda) * incoherent + lambda * coherent);
    });
}

double visibility_from_extrema(double i_max, double i_min) {
    if (!(i_max >= i_min) || i_min < 0.0)
        throw invalid_parameter_error(
            "extrema must satisfy i_max >= i_min >= 0");
    const double total = i_max + i_min;
    if (total == 0.0)
        throw invalid_parameter_error("extrema must not both be zero");
    return (i_max - i_min) / total;
}

namespace {

struct Run {
    std::size_t index;  // leftmost sample of a constant run
    double value;
};

}  // namespace

double fringe_visibility(const Pattern& pattern) {
    validate(pattern);
    const auto& v = pattern.intensities;

    std::vector<Run> runs;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (runs.empty() || runs.back().value != v[i]) runs.push_back({i, v[i]});
    }

    std::vector<Run> maxima;
    std::vector<Run> minima;
    for (std::size_t j = 1; j + 1 < runs.size(); ++j) {
        if (runs[j].value > runs[j - 1].value && runs[j].value > runs[j + 1].value)
            maxima.push_back(runs[j]);
        if (runs[j].value < runs[j - 1].value && runs[j].value < runs[j + 1].value)
            minima.push_back(runs[j]);
    }
    if (maxima.empty() || minima.empty())
        throw analysis_error(
            "pattern has no interior maximum/minimum pair for visibility");

    const Run* central = &maxima.front();
    for (const Run& candidate : maxima) {
        const double cur = std::abs(pattern.positions[central->index]);
        const double cand = std::abs(pattern.positions[candidate.index]);
        if (cand < cur) central = &candidate;
    }

    const Run* adjacent = nullptr;
    for (const Run& candidate : minima) {
        if (adjacent == nullptr) {
            adjacent = &candidate;
            continue;
        }
        const auto distance = [&](const Run& run) {
            return std::abs(static_cast<long>(run.index) -
                            static_cast<long>(central->index));
        };
        if (distance(candidate) < distance(*adjacent)) adjacent = &candidate;
    }

    return visibility_from_extrema(central->value, adjacent->value);
}

ConvergedPattern converge_pattern(
    const std::function<Pattern(const ModeTruncation&)>& generate,
    ModeTruncation start, double tail_tol, int max_doublings) {
    validate(start);
    if (!(tail_tol > 0.0))
        throw invalid_parameter_error("tail_tol must be positive");
    if (max_doublings < 0)
        throw invalid_parameter_error("max_doublings must be non-negative");

    ConvergedPattern out;
    out.pattern = generate(start);
    out.achieved = start;
    out.residual = std::numeric_limits<double>::infinity();

    for (int i = 1; i <= max_doublings; ++i) {
        ModeTruncation next = out.achieved;
        next.max_m *= 2;
        next.max_n *= 2;
        Pattern refined = generate(next);
        if (refined.intensities.size() != out.pattern.intensities.size())
            throw invalid_parameter_error(
                "pattern generator changed its sampling between truncations");

        double change = 0.0;
        double scale = 0.0;
        for (std::size_t p = 0; p < refined.intensities.size(); ++p) {
            change += std::abs(refined.intensities[p] -
                               out.pattern.intensities[p]);
            scale += std::abs(refined.intensities[p]);
        }
        out.residual = (scale > 0.0) ? change / scale : 0.0;
        out.pattern = std::move(refined);
        out.achieved = next;
        out.doublings = i;
        if (out.residual <= tail_tol) {
            out.converged = true;
            return out;
        }
    }
    out.converged = false;
    return out;
}

}  // namespace slitwave
