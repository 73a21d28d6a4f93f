#include "slitwave/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "slitwave/errors.hpp"

namespace slitwave {

void validate(const ExperimentalSeries& series) {
    if (series.positions.size() != series.counts.size())
        throw validation_error("series positions and counts differ in length");
    for (std::size_t i = 1; i < series.positions.size(); ++i) {
        if (!(series.positions[i - 1] < series.positions[i]))
            throw validation_error("series positions must be strictly increasing");
    }
    for (double c : series.counts) {
        if (!(c >= 0.0)) throw validation_error("counts must be non-negative");
    }
}

void validate(const FitSpec& spec) {
    for (const std::string& name : spec.free) {
        if (name != "A" && name != "c1" && name != "lambda_t")
            throw invalid_parameter_error("unknown fit parameter '" + name + "'");
    }
    if (!(spec.a_min > 0.0) || !(spec.a_min <= spec.a_max))
        throw invalid_parameter_error("fit bounds for A are infeasible");
    if (spec.c1_min < 0.0 || spec.c1_max > 1.0 || !(spec.c1_min <= spec.c1_max))
        throw invalid_parameter_error("fit bounds for c1 are infeasible");
    if (spec.lambda_min < 0.0 || spec.lambda_max > 1.0 ||
        !(spec.lambda_min <= spec.lambda_max))
        throw invalid_parameter_error("fit bounds for lambda_t are infeasible");
    if (spec.max_evaluations < 1)
        throw invalid_parameter_error("max_evaluations must be positive");
    if (!(spec.tolerance > 0.0))
        throw invalid_parameter_error("fit tolerance must be positive");

    const auto inside = [](double v, double lo, double hi) {
        return v >= lo && v <= hi;
    };
    if (!inside(spec.a_init, spec.a_min, spec.a_max) ||
        !inside(spec.c1_init, spec.c1_min, spec.c1_max) ||
        !inside(spec.lambda_init, spec.lambda_min, spec.lambda_max))
        throw invalid_parameter_error("fit initial values must lie inside bounds");
}

double residual_ss(const Pattern& model, const ExperimentalSeries& data) {
    validate(model);
    validate(data);
    if (model.positions.size() < 2)
        throw invalid_parameter_error(
            "model pattern needs at least two samples to interpolate");

    const auto& px = model.positions;
    const auto& py = model.intensities;
    double ss = 0.0;
    for (std::size_t i = 0; i < data.positions.size(); ++i) {
        const double s = data.positions[i];
        if (s < px.front() || s > px.back())
            throw domain_error("data point lies outside the model's s-range");
        double value;
        if (s == px.back()) {
            value = py.back();
        } else {
            const auto it = std::upper_bound(px.begin(), px.end(), s);
            const std::size_t j = static_cast<std::size_t>(it - px.begin()) - 1;
            const double t = (s - px[j]) / (px[j + 1] - px[j]);
            value = py[j] + (py[j + 1] - py[j]) * t;
        }
        const double diff = value - data.counts[i];
        ss += diff * diff;
    }
    return ss;
}

namespace {

// Interpolate a pattern onto the data positions once, so the profiled-A
// inner products can be reformed without regenerating the model.
std::vector<double> sample_at_data(const Pattern& model,
                                   const ExperimentalSeries& data) {
    std::vector<double> out;
    out.reserve(data.positions.size());
    const auto& px = model.positions;
    const auto& py = model.intensities;
    for (double s : data.positions) {
        if (s < px.front() || s > px.back())
            throw domain_error("data point lies outside the model's s-range");
        if (s == px.back()) {
            out.push_back(py.back());
            continue;
        }
        const auto it = std::upper_bound(px.begin(), px.end(), s);
        const std::size_t j = static_cast<std::size_t>(it - px.begin()) - 1;
        const double t = (s - px[j]) / (px[j + 1] - px[j]);
        out.push_back(py[j] + (py[j + 1] - py[j]) * t);
    }
    return out;
}

struct ProfiledObjective {
    double objective = 0.0;
    double amplitude = 0.0;
};

// Least-squares objective at shape parameters (c1, lambda), minimizing over
// A in closed form when it is free: intensities scale as A^2, so with the
// shape generated at a_ref the optimum of sum (data - t*shape)^2 over the
// scale t = (A/a_ref)^2 is t* = sum(data*shape)/sum(shape^2), clamped into
// the A bounds.
class Objective {
public:
    Objective(const PatternModel& model, const ExperimentalSeries& data,
              const FitSpec& spec, bool a_free)
        : model_(model), data_(data), spec_(spec), a_free_(a_free) {}

    ProfiledObjective evaluate(double c1, double lambda) {
        ++evaluations_;
        ProfiledObjective result;
        if (!a_free_) {
            result.amplitude = spec_.a_init;
            Pattern pattern = model_(spec_.a_init, c1, lambda);
            result.objective = residual_ss(pattern, data_);
            return result;
        }

        const double a_ref = spec_.a_init;
        Pattern pattern = model_(a_ref, c1, lambda);
        const std::vector<double> shape = sample_at_data(pattern, data_);

        double num = 0.0;
        double den = 0.0;
        for (std::size_t i = 0; i < shape.size(); ++i) {
            num += data_.counts[i] * shape[i];
            den += shape[i] * shape[i];
        }
        double t = (den > 0.0) ? std::max(0.0, num / den) : 0.0;

        const double t_lo = (spec_.a_min / a_ref) * (spec_.a_min / a_ref);
        const double t_hi = (spec_.a_max / a_ref) * (spec_.a_max / a_ref);
        t = std::clamp(t, t_lo, t_hi);

        double ss = 0.0;
        for (std::size_t i = 0; i < shape.size(); ++i) {
            const double diff = t * shape[i] - data_.counts[i];
            ss += diff * diff;
        }
        result.objective = ss;
        result.amplitude = a_ref * std::sqrt(t);
        return result;
    }

    int evaluations() const noexcept { return evaluations_; }
    bool exhausted() const noexcept {
        return evaluations_ >= spec_.max_evaluations;
    }

private:
    const PatternModel& model_;
    const ExperimentalSeries& data_;
    const FitSpec& spec_;
    bool a_free_;
    int evaluations_ = 0;
};

struct BestPoint {
    double c1 = 0.0;
    double lambda = 0.0;
    double amplitude = 0.0;
    double objective = std::numeric_limits<double>::infinity();
};

}  // namespace

FitResult fit_least_squares(const PatternModel& model,
                            const ExperimentalSeries& data,
                            const FitSpec& spec) {
    validate(spec);
    validate(data);
    if (data.positions.size() < 5)
        throw validation_error("fitting requires at least 5 data points");

    const auto has = [&spec](const char* name) {
        return std::find(spec.free.begin(), spec.free.end(), name) !=
               spec.free.end();
    };
    const bool a_free = has("A");
    const bool c1_free = has("c1");
    const bool lambda_free = has("lambda_t");

    Objective objective(model, data, spec, a_free);

    FitResult result;
    result.amplitude = spec.a_init;
    result.c1 = spec.c1_init;
    result.lambda_t = spec.lambda_init;

    // Objective at the initial point doubles as the fallback optimum, so the
    // fitted objective can never exceed the initial one.
    BestPoint best;
    {
        ProfiledObjective at_init =
            objective.evaluate(spec.c1_init, spec.lambda_init);
        best = {spec.c1_init, spec.lambda_init,
                a_free ? at_init.amplitude : spec.a_init, at_init.objective};
    }

    if (spec.free.empty()) {
        // Pure evaluation: report the residual at the initial values. The
        // profiled amplitude is not applied because nothing is free.
        result.objective = best.objective;
        result.evaluations = objective.evaluations();
        result.converged = true;
        return result;
    }

    if (!c1_free && !lambda_free) {
        // Only A moves and its optimum is closed-form; the single evaluation
        // above already profiled it.
        result.amplitude = best.amplitude;
        result.objective = best.objective;
        result.evaluations = objective.evaluations();
        result.converged = true;
        return result;
    }

    // Coarse stage: a fixed grid over the free shape parameters. 11 nodes
    // per dimension spans each bound interval in steps of a tenth of its
    // width, which keeps conventional decade values (0.1, 0.2, ...) on-grid
    // whenever the bounds themselves are decade-valued.
    constexpr int grid_nodes = 11;
    const auto grid_value = [](double lo, double hi, int i) {
        if (i == grid_nodes - 1) return hi;
        return lo + (hi - lo) * static_cast<double>(i) /
                   static_cast<double>(grid_nodes - 1);
    };

    const int c1_count = c1_free ? grid_nodes : 1;
    const int lambda_count = lambda_free ? grid_nodes : 1;
    for (int i = 0; i < c1_count && !objective.exhausted(); ++i) {
        const double c1 =
            c1_free ? grid_value(spec.c1_min, spec.c1_max, i) : spec.c1_init;
        for (int j = 0; j < lambda_count && !objective.exhausted(); ++j) {
            const double lambda =
                lambda_free ? grid_value(spec.lambda_min, spec.lambda_max, j)
                            : spec.lambda_init;
            const ProfiledObjective probe = objective.evaluate(c1, lambda);
            if (probe.objective < best.objective) {
                best = {c1, lambda, probe.amplitude, probe.objective};
            }
        }
    }

    // Local polish: Nelder-Mead on the free shape parameters, clamped to the
    // bounds, with a small initial simplex around the grid optimum.
    std::vector<int> dims;  // 0 = c1, 1 = lambda
    if (c1_free) dims.push_back(0);
    if (lambda_free) dims.push_back(1);
    const std::size_t d = dims.size();

    const auto lower = [&spec](int dim) {
        return dim == 0 ? spec.c1_min : spec.lambda_min;
    };
    const auto upper = [&spec](int dim) {
        return dim == 0 ? spec.c1_max : spec.lambda_max;
    };

    using Point = std::vector<double>;
    const auto clamp_point = [&](Point p) {
        for (std::size_t i = 0; i < d; ++i)
            p[i] = std::clamp(p[i], lower(dims[i]), upper(dims[i]));
        return p;
    };
    const auto eval_point = [&](const Point& p) {
        double c1 = best.c1;
        double lambda = best.lambda;
        for (std::size_t i = 0; i < d; ++i) {
            if (dims[i] == 0) c1 = p[i];
            else lambda = p[i];
        }
        ProfiledObjective probe = objective.evaluate(c1, lambda);
        if (probe.objective < best.objective)
            best = {c1, lambda, probe.amplitude, probe.objective};
        return probe.objective;
    };

    struct Vertex {
        Point x;
        double f;
    };
    std::vector<Vertex> simplex;
    {
        Point origin(d);
        for (std::size_t i = 0; i < d; ++i)
            origin[i] = (dims[i] == 0) ? best.c1 : best.lambda;
        simplex.push_back({origin, best.objective});
        for (std::size_t i = 0; i < d && !objective.exhausted(); ++i) {
            Point p = origin;
            const double span = upper(dims[i]) - lower(dims[i]);
            double step = 0.02 * span;
            if (step == 0.0) step = 1e-6;
            p[i] += (p[i] + step <= upper(dims[i])) ? step : -step;
            p = clamp_point(p);
            simplex.push_back({p, eval_point(p)});
        }
    }

    bool converged = false;
    while (simplex.size() == d + 1 && !objective.exhausted()) {
        std::sort(simplex.begin(), simplex.end(),
                  [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
        const double f_best = simplex.front().f;
        const double f_worst = simplex.back().f;
        const double scale = std::abs(f_best) + 1e-300;
        if ((f_worst - f_best) / scale < spec.tolerance) {
            converged = true;
            break;
        }

        Point centroid(d, 0.0);
        for (std::size_t v = 0; v + 1 < simplex.size(); ++v)
            for (std::size_t i = 0; i < d; ++i)
                centroid[i] += simplex[v].x[i] / static_cast<double>(d);

        const auto blend = [&](double factor) {
            Point p(d);
            for (std::size_t i = 0; i < d; ++i)
                p[i] = centroid[i] + factor * (centroid[i] - simplex.back().x[i]);
            return clamp_point(p);
        };

        Point reflected = blend(1.0);
        const double f_reflected = eval_point(reflected);
        if (f_reflected < f_best && !objective.exhausted()) {
            Point expanded = blend(2.0);
            const double f_expanded = eval_point(expanded);
            if (f_expanded < f_reflected)
                simplex.back() = {expanded, f_expanded};
            else
                simplex.back() = {reflected, f_reflected};
        } else if (f_reflected < simplex[simplex.size() - 2].f) {
            simplex.back() = {reflected, f_reflected};
        } else if (!objective.exhausted()) {
            Point contracted = blend(-0.5);
            const double f_contracted = eval_point(contracted);
            if (f_contracted < f_worst) {
                simplex.back() = {contracted, f_contracted};
            } else {
                // Shrink toward the best vertex.
                for (std::size_t v = 1;
                     v < simplex.size() && !objective.exhausted(); ++v) {
                    for (std::size_t i = 0; i < d; ++i)
                        simplex[v].x[i] = simplex.front().x[i] +
                                          0.5 * (simplex[v].x[i] -
                                                 simplex.front().x[i]);
                    simplex[v].x = clamp_point(simplex[v].x);
                    simplex[v].f = eval_point(simplex[v].x);
                }
            }
        }
    }

    result.c1 = c1_free ? best.c1 : spec.c1_init;
    result.lambda_t = lambda_free ? best.lambda : spec.lambda_init;
    result.amplitude = a_free ? best.amplitude : spec.a_init;
    result.objective = best.objective;
    result.evaluations = objective.evaluations();
    result.converged = converged;
    return result;
}

}  // namespace slitwave
