#pragma once

#include <complex>

#include "slitwave/physics.hpp"

namespace slitwave {

// Index into the odd-only mode sums. The physical standing-wave numbers are
// 2m+1 (transverse, width direction y) and 2n+1 (transverse, length
// direction x); even physical modes have zero overlap with a flat incident
// wave and never appear.
struct ModeIndex {
    int m = 0;
    int n = 0;
};

struct ModeTruncation {
    int max_m = 50;  // highest m index kept (inclusive)
    int max_n = 50;  // highest n index kept (inclusive)
    double tail_tol = 1e-6;
};

enum class Slit { one = 1, two = 2 };

void validate(const ModeIndex& idx);
void validate(const ModeTruncation& trunc);

// Overlap coefficient of a flat incident wave of the given amplitude with
// mode (2m+1, 2n+1): 16 A / ((2m+1)(2n+1) pi^2). Real and positive.
double fourier_coefficient(const ModeIndex& idx, double amplitude);

// Same overlap addressed by physical mode numbers; zero when either index
// is even.
double fourier_coefficient_raw(int m_physical, int n_physical,
                               double amplitude);

// Principal square root of k^2 - ((2n+1) pi / b)^2 - ((2m+1) pi / a)^2.
// Real for propagating modes; purely imaginary with Im > 0 for evanescent
// ones, so the through-slit factor e^{i k_z c} always decays.
std::complex<double> longitudinal_wavevector(const ModeIndex& idx,
                                             const Kinematics& kin,
                                             const SlitGeometry& geometry);

namespace detail {
// Branch helper shared by the wavevector and its tests: sqrt on the
// Im >= 0 branch of a real radicand.
std::complex<double> kz_from_radicand(double radicand);
}  // namespace detail

// Truncated guided-mode wavefunction inside a slit channel, time factor
// e^{-i E t / hbar} included. Coordinates are the aperture frame of the
// geometry: x in [0, b] for both slits, y in [0, a] for slit 1 and
// y in [a+d, 2a+d] for slit 2, z in [0, c]. Points outside raise
// domain_error; wall points return exactly zero.
std::complex<double> in_slit_wavefunction(Slit slit, double x, double y,
                                          double z, double t,
                                          const ModeTruncation& trunc,
                                          const PhysicalParams& params,
                                          const SlitGeometry& geometry);

// The z = c cross-section with the time factor stripped; this is the field
// the screen-side propagation integrates over.
std::complex<double> exit_plane_wavefunction(Slit slit, double x0, double y0,
                                             const ModeTruncation& trunc,
                                             const PhysicalParams& params,
                                             const SlitGeometry& geometry);

}  // namespace slitwave
