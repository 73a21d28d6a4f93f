#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "doctest.h"
#include "slitwave/modes.hpp"

using namespace slitwave;

namespace {

PhysicalParams fullerene(double amplitude = 1.0) {
    PhysicalParams p;
    p.mass = 1.4e-24;
    p.velocity = 220.0;
    p.amplitude = amplitude;
    return p;
}

SlitGeometry narrow_channel() {
    // Single-slit far-field shape: 10 um wide, 1 cm long, 1.3 um deep.
    return {1e-5, 1e-2, 1.3e-6, 1e-5};
}

}  // namespace

TEST_CASE("flat-wave overlap coefficients") {
    CHECK(fourier_coefficient({0, 0}, 1.0) ==
          doctest::Approx(1.6211389382774043).epsilon(1e-14));
    CHECK(fourier_coefficient({0, 1}, 1.0) ==
          doctest::Approx(0.5403796460924681).epsilon(1e-14));
    CHECK(fourier_coefficient({1, 0}, 1.0) ==
          doctest::Approx(0.5403796460924681).epsilon(1e-14));
    CHECK(fourier_coefficient({0, 0}, 2.5) ==
          doctest::Approx(2.5 * 1.6211389382774043).epsilon(1e-14));

    CHECK(fourier_coefficient_raw(1, 1, 1.0) ==
          fourier_coefficient({0, 0}, 1.0));
    CHECK(fourier_coefficient_raw(3, 1, 1.0) ==
          fourier_coefficient({1, 0}, 1.0));
    CHECK(fourier_coefficient_raw(2, 1, 1.0) == 0.0);
    CHECK(fourier_coefficient_raw(1, 4, 1.0) == 0.0);
}

TEST_CASE("longitudinal wavevector satisfies the dispersion identity") {
    const Kinematics kin = derive_kinematics(fullerene());
    const SlitGeometry geo = narrow_channel();

    const std::complex<double> kz00 = longitudinal_wavevector({0, 0}, kin, geo);
    CHECK(kz00.imag() == 0.0);
    CHECK(kz00.real() ==
          doctest::Approx(2919431279620.8364).epsilon(1e-12));

    std::mt19937 rng(2024u);
    std::uniform_int_distribution<int> index(0, 200);
    for (int trial = 0; trial < 1000; ++trial) {
        const ModeIndex idx{index(rng), index(rng)};
        const std::complex<double> kz = longitudinal_wavevector(idx, kin, geo);
        const double wy = (2 * idx.m + 1) * std::numbers::pi / geo.width;
        const double wx = (2 * idx.n + 1) * std::numbers::pi / geo.length;
        const double reconstructed = (kz * kz).real() + wy * wy + wx * wx;
        CHECK(reconstructed ==
              doctest::Approx(kin.k * kin.k).epsilon(1e-12));
    }
}

TEST_CASE("evanescent modes sit on the decaying branch") {
    const Kinematics kin = derive_kinematics(fullerene());
    SlitGeometry geo = narrow_channel();
    geo.width = 1e-12;  // forces (pi/a)^2 far above k^2
    const std::complex<double> kz = longitudinal_wavevector({0, 0}, kin, geo);
    CHECK(kz.real() == 0.0);
    CHECK(kz.imag() > 0.0);
}

TEST_CASE("guided wave vanishes on the channel walls") {
    const PhysicalParams params = fullerene(2.87e14);
    const SlitGeometry geo = narrow_channel();
    const ModeTruncation trunc{40, 40, 1e-6};

    std::mt19937 rng(99u);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int trial = 0; trial < 1000; ++trial) {
        const double z = geo.thickness * u01(rng);
        const double t = 1e-5 * u01(rng);
        double x = geo.length * u01(rng);
        double y = geo.width * u01(rng);
        switch (trial % 4) {
            case 0: x = 0.0; break;
            case 1: x = geo.length; break;
            case 2: y = 0.0; break;
            default: y = geo.width; break;
        }
        const std::complex<double> psi =
            in_slit_wavefunction(Slit::one, x, y, z, t, trunc, params, geo);
        CHECK(std::abs(psi) < 1e-12 * params.amplitude);
    }
}

TEST_CASE("second slit is the first slit translated by width plus gap") {
    const PhysicalParams params = fullerene();
    const SlitGeometry geo = narrow_channel();
    const ModeTruncation trunc{12, 12, 1e-6};

    std::mt19937 rng(7u);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const double x = geo.length * u01(rng);
        const double z = geo.thickness * u01(rng);
        const double t = 1e-6 * u01(rng);
        const double lo = geo.width + geo.gap;
        const double y2 = lo + geo.width * u01(rng);
        const std::complex<double> psi2 =
            in_slit_wavefunction(Slit::two, x, y2, z, t, trunc, params, geo);
        const std::complex<double> psi1 = in_slit_wavefunction(
            Slit::one, x, (y2 - geo.width) - geo.gap, z, t, trunc, params, geo);
        CHECK(psi2 == psi1);
    }
}

TEST_CASE("points outside the channel are rejected") {
    const PhysicalParams params = fullerene();
    const SlitGeometry geo = narrow_channel();
    const ModeTruncation trunc{4, 4, 1e-6};

    CHECK_THROWS_AS(in_slit_wavefunction(Slit::one, -1e-9, 5e-6, 0.0, 0.0,
                                         trunc, params, geo),
                    domain_error);
    CHECK_THROWS_AS(in_slit_wavefunction(Slit::one, 5e-3, 2e-5, 0.0, 0.0,
                                         trunc, params, geo),
                    domain_error);
    CHECK_THROWS_AS(in_slit_wavefunction(Slit::one, 5e-3, 5e-6, 2e-6, 0.0,
                                         trunc, params, geo),
                    domain_error);
    CHECK_THROWS_AS(in_slit_wavefunction(Slit::one, 5e-3, 5e-6, -1e-9, 0.0,
                                         trunc, params, geo),
                    domain_error);
    // The gap between the slits belongs to neither channel.
    CHECK_THROWS_AS(in_slit_wavefunction(Slit::two, 5e-3, 1.2e-5, 0.0, 0.0,
                                         trunc, params, geo),
                    domain_error);
}

TEST_CASE("exit plane equals the in-slit wave at full depth") {
    const PhysicalParams params = fullerene(3.0);
    const SlitGeometry geo = narrow_channel();
    const ModeTruncation trunc{16, 16, 1e-6};

    for (double frac : {0.1, 0.37, 0.5, 0.9}) {
        const double x = geo.length * frac;
        const double y = geo.width * (1.0 - frac * 0.5);
        CHECK(exit_plane_wavefunction(Slit::one, x, y, trunc, params, geo) ==
              in_slit_wavefunction(Slit::one, x, y, geo.thickness, 0.0, trunc,
                                   params, geo));
    }
}

TEST_CASE("entry-plane partial sums approach the incident amplitude") {
    const PhysicalParams params = fullerene();
    const SlitGeometry geo = narrow_channel();
    const double x = 0.5 * geo.length;
    const double y = 0.5 * geo.width;

    double previous_change = 1.0;
    std::complex<double> previous{0.0, 0.0};
    bool first = true;
    for (int levels : {25, 50, 100, 200}) {
        const ModeTruncation trunc{levels, levels, 1e-6};
        const std::complex<double> psi =
            in_slit_wavefunction(Slit::one, x, y, 0.0, 0.0, trunc, params, geo);
        if (!first) {
            const double change = std::abs(psi - previous);
            CHECK(change < previous_change);
            previous_change = change;
        }
        previous = psi;
        first = false;
    }
    CHECK(std::abs(previous.real() - 1.0031697508077643) < 1e-9);
    CHECK(std::abs(previous - std::complex<double>(1.0, 0.0)) < 0.02);
}

TEST_CASE("mid-depth field of a deep channel settles under refinement") {
    PhysicalParams params = fullerene();
    SlitGeometry geo = narrow_channel();
    geo.thickness = 1e-4;
    const double x = 0.5 * geo.length;
    const double y = 0.5 * geo.width;
    const double z = 0.5 * geo.thickness;

    std::complex<double> coarse = in_slit_wavefunction(
        Slit::one, x, y, z, 0.0, ModeTruncation{100, 100, 1e-6}, params, geo);
    std::complex<double> fine = in_slit_wavefunction(
        Slit::one, x, y, z, 0.0, ModeTruncation{200, 200, 1e-6}, params, geo);
    CHECK(std::abs(fine - coarse) < 0.05 * std::abs(fine));
}
