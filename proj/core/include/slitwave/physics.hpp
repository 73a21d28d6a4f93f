#pragma once

#include <vector>

#include "slitwave/errors.hpp"

namespace slitwave {

inline constexpr double default_hbar = 1.055e-34;  // J s

// Particle and model-scale parameters. SI units throughout; amplitude is the
// dimensionless incident-wave scale that multiplies every mode coefficient.
struct PhysicalParams {
    double mass = 0.0;      // kg
    double velocity = 0.0;  // m/s
    double hbar = default_hbar;
    double amplitude = 1.0;
};

// Quantities derived from PhysicalParams once and shared by every module.
struct Kinematics {
    double k = 0.0;           // wavenumber, rad/m
    double wavelength = 0.0;  // m
    double energy = 0.0;      // J
};

// Slit channel dimensions. Slit 1 occupies y in [0, a]; slit 2 occupies
// y in [a+d, 2a+d]. The gap d is unused for single-slit runs.
struct SlitGeometry {
    double width = 0.0;      // a, m
    double length = 0.0;     // b, m
    double thickness = 0.0;  // c, m
    double gap = 0.0;        // d, m
};

// Screen placement and the scan positions to evaluate. alpha is the fixed
// diffraction angle in the xz-plane; every position shares it.
struct ScreenGeometry {
    double distance = 0.0;  // l, m
    std::vector<double> positions;
    double alpha = 0.0;  // rad
};

void validate(const PhysicalParams& params);
void validate(const SlitGeometry& geometry);
void validate(const ScreenGeometry& screen);

// k = M v / hbar, wavelength = 2 pi / k, energy = M v^2 / 2.
Kinematics derive_kinematics(const PhysicalParams& params);

// s / sqrt(l^2 + s^2). Odd in s, strictly increasing, |result| < 1.
double sin_beta(double s, double l);

// Uniform scan on [s_min, s_max] with n_points samples. For a range that is
// exactly symmetric (s_min == -s_max) the grid is built by mirroring the
// positive nodes, so paired screen positions are exact floating-point
// negations and pattern symmetry checks are not polluted by grid asymmetry.
ScreenGeometry uniform_scan(double distance, double s_min, double s_max,
                            int n_points, double alpha = 0.0);

}  // namespace slitwave
