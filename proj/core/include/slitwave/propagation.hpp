#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "slitwave/modes.hpp"
#include "slitwave/physics.hpp"

namespace slitwave {

// One evaluation point on the detection screen. r is the distance from the
// aperture-plane origin to the point, r = sqrt(l^2 + s^2); the same value
// serves as R in the rayleigh kernel. alpha is the fixed diffraction angle
// in the xz-plane.
struct ScreenPoint {
    double s = 0.0;         // m
    double alpha = 0.0;     // rad
    double r = 0.0;         // m
    double sin_beta = 0.0;  // s / sqrt(l^2 + s^2)
};

ScreenPoint make_screen_point(double s, double distance, double alpha = 0.0);

// The two propagation prefactor families. Both slits always use the same
// kernel; mixing families between slits would corrupt their relative phase.
enum class Kernel { fresnel, rayleigh };

const char* to_string(Kernel kernel);
Kernel kernel_from_string(const std::string& name);

// Free-particle propagator (M / (2 pi i hbar dt))^{3/2} exp(i M R^2 / (2 hbar dt)).
// Provided for oracle and test use; the screen pipeline works with the
// geometric reductions below instead.
std::complex<double> free_propagator(double R, double dt, double mass,
                                     double hbar = default_hbar);

// Closed form of int_0^extent e^{-i q u} sin(mode pi u / extent) du for odd
// positive mode. Exact for every q including the removable singularity at
// |q| = mode pi / extent.
std::complex<double> aperture_integral_closed(double q, int mode,
                                              double extent);

// Same integral by adaptive Gauss-Kronrod quadrature, to absolute tolerance
// tol * extent. Independent of the closed form by construction; used by the
// oracle suite and tests only.
std::complex<double> aperture_integral_quadrature(double q, int mode,
                                                  double extent, double tol);

namespace detail {

struct IntegrationResult {
    std::complex<double> value;
    double error_estimate = 0.0;
    long evaluations = 0;
    bool converged = false;
};

// Adaptive Gauss-Kronrod 7-15 on [lo, hi]. Splits the interval into enough
// initial panels for the expected oscillation count, then bisects the panel
// with the largest error estimate until the total is below abs_tol or the
// evaluation budget runs out. Error estimates bottom out at rounding noise,
// so a request below 100 eps times the L1 sum of panel values is treated as
// converged at that floor rather than split forever.
IntegrationResult integrate_gk15(
    const std::function<std::complex<double>(double)>& f, double lo,
    double hi, double abs_tol, long initial_panels, long max_evaluations);

}  // namespace detail

// Unit-modulus carrier split off the screen amplitude: e^{i k r / 2} for the
// fresnel kernel, e^{i k R} for rayleigh. Both slits share it, so relative
// phase (all that intensity needs) never involves evaluating a ~1e12 rad
// argument inside the mode loops.
std::complex<double> phase_reference(const ScreenPoint& pt, Kernel kernel,
                                     const Kinematics& kin);

// Aperture placement on the screen coordinate axis. The screen origin s = 0
// sits on the symmetry axis of the aperture system: the slit pair for
// double-slit runs, the single slit itself otherwise. Patterns come out
// centered like the usual presentation of diffraction data.
enum class SlitLayout { single, pair };

// Mode-summed screen amplitude for one slit. Construction precomputes the
// per-m tables of the n-sums (coefficient, through-slit factor, x-direction
// aperture integral), so each screen point costs one pass over m.
class ScreenAmplitudeEvaluator {
public:
    ScreenAmplitudeEvaluator(Kernel kernel, SlitLayout layout,
                             const ModeTruncation& trunc,
                             const Kinematics& kin,
                             const SlitGeometry& geometry, double amplitude,
                             double alpha = 0.0);

    // Screen amplitude with the phase_reference carrier divided out. This is
    // the quantity intensity code works with; the carrier has unit modulus
    // and is common to both slits.
    std::complex<double> reduced(Slit slit, const ScreenPoint& pt) const;

    // reduced(...) times phase_reference(...): the literal amplitude.
    std::complex<double> full(Slit slit, const ScreenPoint& pt) const;

    Kernel kernel() const noexcept { return kernel_; }

private:
    Kernel kernel_;
    SlitLayout layout_;
    Kinematics kin_;
    SlitGeometry geo_;
    double amplitude_;
    double alpha_;
    double y_offset_1_ = 0.0;  // lower edge of slit 1 on the centered axis
    double y_offset_2_ = 0.0;
    std::vector<std::complex<double>> c0_;  // sum_n D e^{i k_z c} I_x[n]
    std::vector<std::complex<double>> c1_;  // same with an extra i k_z (rayleigh)
};

// One-shot wrapper over ScreenAmplitudeEvaluator in the double-slit frame.
std::complex<double> slit_screen_wavefunction(Slit slit, const ScreenPoint& pt,
                                              Kernel kernel,
                                              const ModeTruncation& trunc,
                                              const Kinematics& kin,
                                              const SlitGeometry& geometry,
                                              double amplitude);

}  // namespace slitwave
