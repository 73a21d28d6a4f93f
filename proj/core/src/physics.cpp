#include "slitwave/physics.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace slitwave {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw invalid_parameter_error(what);
}

}  // namespace

void validate(const PhysicalParams& params) {
    require(params.mass > 0.0, "mass must be positive");
    require(params.velocity > 0.0, "velocity must be positive");
    require(params.hbar > 0.0, "hbar must be positive");
    require(params.amplitude > 0.0, "amplitude must be positive");
    require(std::isfinite(params.mass) && std::isfinite(params.velocity) &&
                std::isfinite(params.hbar) && std::isfinite(params.amplitude),
            "physical parameters must be finite");
}

void validate(const SlitGeometry& geometry) {
    require(geometry.width > 0.0, "slit width must be positive");
    require(geometry.length > 0.0, "slit length must be positive");
    require(geometry.thickness > 0.0, "slit thickness must be positive");
    require(geometry.gap > 0.0, "slit gap must be positive");
}

void validate(const ScreenGeometry& screen) {
    require(screen.distance > 0.0, "screen distance must be positive");
    require(!screen.positions.empty(), "screen scan must contain positions");
    for (std::size_t i = 1; i < screen.positions.size(); ++i) {
        require(screen.positions[i - 1] < screen.positions[i],
                "screen positions must be strictly increasing");
    }
    require(std::isfinite(screen.alpha), "alpha must be finite");
}

Kinematics derive_kinematics(const PhysicalParams& params) {
    validate(params);
    Kinematics kin;
    kin.k = params.mass * params.velocity / params.hbar;
    kin.wavelength = 2.0 * std::numbers::pi / kin.k;
    kin.energy = 0.5 * params.mass * params.velocity * params.velocity;
    return kin;
}

double sin_beta(double s, double l) {
    if (!(l > 0.0)) throw invalid_parameter_error("screen distance must be positive");
    return s / std::hypot(l, s);
}

ScreenGeometry uniform_scan(double distance, double s_min, double s_max,
                            int n_points, double alpha) {
    if (!(distance > 0.0))
        throw invalid_parameter_error("screen distance must be positive");
    if (n_points < 2) throw invalid_parameter_error("n_points must be at least 2");
    if (!(s_min < s_max)) throw invalid_parameter_error("s_min must be below s_max");

    ScreenGeometry screen;
    screen.distance = distance;
    screen.alpha = alpha;
    screen.positions.resize(static_cast<std::size_t>(n_points));

    const double step = (s_max - s_min) / (n_points - 1);
    if (s_min == -s_max) {
        // Mirror the positive half so that s[i] == -s[n-1-i] bitwise.
        for (int i = 0; i < n_points; ++i) {
            const int j = n_points - 1 - i;
            double value;
            if (2 * i == n_points - 1) value = 0.0;
            else if (i > j) value = s_max - static_cast<double>(j) * step;
            else value = -(s_max - static_cast<double>(i) * step);
            screen.positions[static_cast<std::size_t>(i)] = value;
        }
    } else {
        for (int i = 0; i < n_points; ++i) {
            screen.positions[static_cast<std::size_t>(i)] =
                (i == n_points - 1) ? s_max : s_min + static_cast<double>(i) * step;
        }
    }
    validate(screen);
    return screen;
}

}  // namespace slitwave
