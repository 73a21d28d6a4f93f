#include "slitwave/modes.hpp"

#include <cmath>
#include <numbers>

#include "slitwave/errors.hpp"
#include "slitwave/numeric.hpp"

namespace slitwave {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double pi_sq = pi * pi;

}  // namespace

void validate(const ModeIndex& idx) {
    if (idx.m < 0 || idx.n < 0)
        throw invalid_parameter_error("mode indices must be non-negative");
}

void validate(const ModeTruncation& trunc) {
    if (trunc.max_m < 0 || trunc.max_n < 0)
        throw invalid_parameter_error("truncation bounds must be non-negative");
    if (!(trunc.tail_tol > 0.0))
        throw invalid_parameter_error("tail_tol must be positive");
}

double fourier_coefficient(const ModeIndex& idx, double amplitude) {
    validate(idx);
    const double mp = 2.0 * idx.m + 1.0;
    const double np = 2.0 * idx.n + 1.0;
    return 16.0 * amplitude / (mp * np * pi_sq);
}

double fourier_coefficient_raw(int m_physical, int n_physical,
                               double amplitude) {
    if (m_physical < 1 || n_physical < 1)
        throw invalid_parameter_error("physical mode numbers start at 1");
    if (m_physical % 2 == 0 || n_physical % 2 == 0) return 0.0;
    return 16.0 * amplitude /
           (static_cast<double>(m_physical) * static_cast<double>(n_physical) *
            pi_sq);
}

namespace detail {

std::complex<double> kz_from_radicand(double radicand) {
    if (radicand >= 0.0) return {std::sqrt(radicand), 0.0};
    return {0.0, std::sqrt(-radicand)};
}

}  // namespace detail

std::complex<double> longitudinal_wavevector(const ModeIndex& idx,
                                             const Kinematics& kin,
                                             const SlitGeometry& geometry) {
    validate(idx);
    const double wa = (2.0 * idx.m + 1.0) * pi / geometry.width;
    const double wb = (2.0 * idx.n + 1.0) * pi / geometry.length;
    return detail::kz_from_radicand(kin.k * kin.k - wb * wb - wa * wa);
}

namespace {

// Shared mode-sum core. The through-slit factor is split as
// e^{i k z} e^{i (k_z - k) z}: the difference k_z - k is computed without
// cancellation from the transverse frequencies, so the relative phases
// between modes never touch the ~1e7 rad absolute argument.
std::complex<double> mode_sum(double x_local, double y_local, double z,
                              const ModeTruncation& trunc,
                              const Kinematics& kin,
                              const SlitGeometry& geometry, double amplitude) {
    const double a = geometry.width;
    const double b = geometry.length;
    const double k = kin.k;
    const double common_angle = std::remainder(k * z, 2.0 * pi);

    const double xt = x_local / b;
    const double yt = y_local / a;

    std::complex<double> acc{0.0, 0.0};
    for (int m = 0; m <= trunc.max_m; ++m) {
        const double mp = 2.0 * m + 1.0;
        const double wa = mp * pi / a;
        const double sy = detail::sin_pi(mp * yt);
        for (int n = 0; n <= trunc.max_n; ++n) {
            const double np = 2.0 * n + 1.0;
            const double wb = np * pi / b;
            const double sx = detail::sin_pi(np * xt);
            const double coeff = 16.0 * amplitude / (mp * np * pi_sq) * sx * sy;

            const double radicand = k * k - wb * wb - wa * wa;
            std::complex<double> through;
            if (radicand >= 0.0) {
                const double kz = std::sqrt(radicand);
                const double delta = -(wa * wa + wb * wb) / (kz + k);
                through = std::polar(1.0, common_angle + delta * z);
            } else {
                through = {std::exp(-std::sqrt(-radicand) * z), 0.0};
            }
            acc += coeff * through;
        }
    }
    return acc;
}

void check_inside(Slit slit, double x, double y, double z,
                  const SlitGeometry& geometry) {
    const double a = geometry.width;
    const double y_lo = (slit == Slit::one) ? 0.0 : a + geometry.gap;
    const double y_hi = y_lo + a;
    if (x < 0.0 || x > geometry.length || y < y_lo || y > y_hi || z < 0.0 ||
        z > geometry.thickness) {
        throw domain_error("point lies outside the slit channel");
    }
}

}  // namespace

std::complex<double> in_slit_wavefunction(Slit slit, double x, double y,
                                          double z, double t,
                                          const ModeTruncation& trunc,
                                          const PhysicalParams& params,
                                          const SlitGeometry& geometry) {
    validate(trunc);
    validate(params);
    validate(geometry);
    check_inside(slit, x, y, z, geometry);

    const Kinematics kin = derive_kinematics(params);
    const double y_local =
        (slit == Slit::one) ? y : (y - geometry.width) - geometry.gap;

    std::complex<double> psi = mode_sum(x, y_local, z, trunc, kin, geometry,
                                        params.amplitude);
    if (t != 0.0) {
        const double angle =
            -std::remainder(kin.energy * t / params.hbar, 2.0 * pi);
        psi *= std::polar(1.0, angle);
    }
    return psi;
}

std::complex<double> exit_plane_wavefunction(Slit slit, double x0, double y0,
                                             const ModeTruncation& trunc,
                                             const PhysicalParams& params,
                                             const SlitGeometry& geometry) {
    return in_slit_wavefunction(slit, x0, y0, geometry.thickness, 0.0, trunc,
                                params, geometry);
}

}  // namespace slitwave
