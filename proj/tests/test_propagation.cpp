#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "doctest.h"
#include "slitwave/propagation.hpp"

using namespace slitwave;

namespace {

constexpr double pi = std::numbers::pi;

Kinematics fullerene_kinematics() {
    PhysicalParams p;
    p.mass = 1.4e-24;
    p.velocity = 220.0;
    return derive_kinematics(p);
}

SlitGeometry pair_geometry() {
    // Two 50 nm slits with a 50 nm gap, 1.3 um deep.
    return {5e-8, 1e-2, 1.3e-6, 5e-8};
}

double rel_diff(std::complex<double> a, std::complex<double> b) {
    const double scale = std::abs(a) + std::abs(b);
    return scale > 0.0 ? 2.0 * std::abs(a - b) / scale : 0.0;
}

}  // namespace

TEST_CASE("screen points carry the exact chord distance") {
    const ScreenPoint pt = make_screen_point(1e-4, 1.25);
    CHECK(pt.s == 1e-4);
    CHECK(pt.alpha == 0.0);
    CHECK(pt.r == doctest::Approx(1.2500000039999999936).epsilon(1e-15));
    CHECK(pt.sin_beta ==
          doctest::Approx(7.9999999744000005e-5).epsilon(1e-13));

    const ScreenPoint angled = make_screen_point(-2e-5, 2.29, 0.01);
    CHECK(angled.alpha == 0.01);
    CHECK(angled.sin_beta < 0.0);
}

TEST_CASE("kernel names round-trip") {
    CHECK(kernel_from_string("fresnel") == Kernel::fresnel);
    CHECK(kernel_from_string("rayleigh") == Kernel::rayleigh);
    CHECK(to_string(Kernel::fresnel) == std::string("fresnel"));
    CHECK(to_string(Kernel::rayleigh) == std::string("rayleigh"));
    CHECK_THROWS_AS(kernel_from_string("fraunhofer"), invalid_parameter_error);
}

TEST_CASE("free propagator modulus and small-phase value") {
    const double mass = 1.4e-24;
    const double dt = 1e-3;

    const std::complex<double> g = free_propagator(1e-6, dt, mass);
    CHECK(std::abs(g) ==
          doctest::Approx(3069329839406846259.7).epsilon(1e-12));
    CHECK(g.real() ==
          doctest::Approx(-1289305325946682704.6).epsilon(1e-12));
    CHECK(g.imag() ==
          doctest::Approx(-2785404358357826459.0).epsilon(1e-12));

    // The modulus is independent of distance; only the phase winds.
    const std::complex<double> far = free_propagator(0.01, dt, mass);
    CHECK(std::abs(far) == doctest::Approx(std::abs(g)).epsilon(1e-12));
}

TEST_CASE("closed-form aperture integral special values") {
    CHECK(aperture_integral_closed(0.0, 3, 1.3) ==
          std::complex<double>(2.0 * 1.3 / (3.0 * pi), 0.0));

    const double w = 3.0 * pi / 1.3;
    const std::complex<double> at_resonance =
        aperture_integral_closed(w, 3, 1.3);
    CHECK(at_resonance.real() == 0.0);
    CHECK(at_resonance.imag() == -0.65);

    const std::complex<double> frozen =
        aperture_integral_closed(3.7, 3, 1.3);
    CHECK(frozen.real() ==
          doctest::Approx(0.2046916490842189).epsilon(1e-13));
    CHECK(frozen.imag() ==
          doctest::Approx(0.1856268175913949).epsilon(1e-13));

    // Tiny q joins continuously onto the exact q = 0 value.
    const std::complex<double> near_zero =
        aperture_integral_closed(1e-300, 1, 1.0);
    CHECK(near_zero.real() == doctest::Approx(2.0 / pi).epsilon(1e-12));

    CHECK_THROWS_AS(aperture_integral_closed(1.0, 2, 1.3),
                    invalid_parameter_error);
    CHECK_THROWS_AS(aperture_integral_closed(1.0, 3, 0.0),
                    invalid_parameter_error);
}

TEST_CASE("negative q is the complex conjugate") {
    for (double q : {1e-3, 3.7, 100.0, 401.22}) {
        for (int mode : {1, 5, 17}) {
            const std::complex<double> plus =
                aperture_integral_closed(q, mode, 1.3);
            const std::complex<double> minus =
                aperture_integral_closed(-q, mode, 1.3);
            CHECK(minus == std::conj(plus));
        }
    }
}

TEST_CASE("quadrature oracle reproduces the frozen aperture value") {
    const std::complex<double> quad =
        aperture_integral_quadrature(3.7, 3, 1.3, 1e-14);
    CHECK(quad.real() == doctest::Approx(0.2046916490842189).epsilon(1e-12));
    CHECK(quad.imag() == doctest::Approx(0.1856268175913949).epsilon(1e-12));
}

TEST_CASE("closed form agrees with quadrature on random triples") {
    std::mt19937 rng(777u);
    std::uniform_real_distribution<double> u01(0.0, 1.0);

    double max_rel = 0.0;
    for (int i = 0; i < 200; ++i) {
        double extent = 1.0;
        int mode = 1;
        double q = 0.0;
        std::complex<double> closed;
        for (int attempt = 0; attempt < 100; ++attempt) {
            extent = std::pow(10.0, -9.0 + 7.0 * u01(rng));
            mode = 2 * static_cast<int>(21.0 * u01(rng)) + 1;
            const double w = mode * pi / extent;
            if (u01(rng) < 0.70) {
                q = 600.0 * u01(rng) / extent;
            } else {
                const double offset = std::pow(10.0, -8.0 + 5.0 * u01(rng));
                q = w * (1.0 + (u01(rng) < 0.5 ? offset : -offset));
            }
            if (u01(rng) < 0.5) q = -q;
            closed = aperture_integral_closed(q, mode, extent);
            if (std::abs(closed) >= 5e-6 * extent) break;
        }
        const std::complex<double> quad =
            aperture_integral_quadrature(q, mode, extent, 1e-15);
        max_rel = std::max(max_rel, rel_diff(closed, quad));
    }
    CHECK(max_rel < 1e-9);
}

TEST_CASE("adaptive integrator on smooth references") {
    const auto rotating = [](double x) {
        return std::polar(1.0, x);
    };
    const detail::IntegrationResult result =
        detail::integrate_gk15(rotating, 0.0, 1.0, 1e-14, 4, 100000);
    CHECK(result.converged);
    CHECK(result.value.real() == doctest::Approx(std::sin(1.0)).epsilon(1e-13));
    CHECK(result.value.imag() ==
          doctest::Approx(1.0 - std::cos(1.0)).epsilon(1e-13));

    // A budget too small to refine an oscillatory integrand is reported,
    // not hidden.
    const auto fast = [](double x) { return std::polar(1.0, 4000.0 * x); };
    const detail::IntegrationResult starved =
        detail::integrate_gk15(fast, 0.0, 1.0, 1e-12, 4, 90);
    CHECK_FALSE(starved.converged);
    CHECK(starved.evaluations <= 90);
}

TEST_CASE("phase reference squares from the half-phase kernel") {
    const Kinematics kin = fullerene_kinematics();
    for (double s : {0.0, 1e-5, 7.7e-5, 1.4e-4}) {
        const ScreenPoint pt = make_screen_point(s, 1.25);
        const std::complex<double> half = phase_reference(pt, Kernel::fresnel, kin);
        const std::complex<double> full = phase_reference(pt, Kernel::rayleigh, kin);
        CHECK(std::abs(half) == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(std::abs(full) == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(rel_diff(half * half, full) < 1e-12);
    }
}

TEST_CASE("screen wave of slit two is a pure phase shift of slit one") {
    const Kinematics kin = fullerene_kinematics();
    const SlitGeometry geo = pair_geometry();
    const ModeTruncation trunc{30, 30, 1e-6};

    for (Kernel kernel : {Kernel::fresnel, Kernel::rayleigh}) {
        const ScreenAmplitudeEvaluator eval(kernel, SlitLayout::pair, trunc,
                                            kin, geo, 1.0);
        for (double s : {-6.3e-5, -1e-5, 0.0, 2.2e-5, 1.1e-4}) {
            const ScreenPoint pt = make_screen_point(s, 1.25);
            const std::complex<double> psi1 = eval.reduced(Slit::one, pt);
            const std::complex<double> psi2 = eval.reduced(Slit::two, pt);
            const double q = kin.k * pt.sin_beta;
            const std::complex<double> shift =
                std::polar(1.0, -q * (geo.width + geo.gap));
            CHECK(rel_diff(psi2, psi1 * shift) < 1e-12);
        }
    }
}

TEST_CASE("one-shot screen wavefunction matches the evaluator") {
    const Kinematics kin = fullerene_kinematics();
    const SlitGeometry geo = pair_geometry();
    const ModeTruncation trunc{20, 20, 1e-6};
    const ScreenAmplitudeEvaluator eval(Kernel::fresnel, SlitLayout::pair,
                                        trunc, kin, geo, 2.0);

    const ScreenPoint pt = make_screen_point(3.1e-5, 1.25);
    const std::complex<double> via_eval =
        eval.full(Slit::one, pt);
    const std::complex<double> one_shot = slit_screen_wavefunction(
        Slit::one, pt, Kernel::fresnel, trunc, kin, geo, 2.0);
    CHECK(rel_diff(via_eval, one_shot) < 1e-15);

    CHECK(rel_diff(eval.full(Slit::two, pt),
                   eval.reduced(Slit::two, pt) *
                       phase_reference(pt, Kernel::fresnel, kin)) < 1e-15);
}

TEST_CASE("kernel amplitudes decay with their geometric powers") {
    const Kinematics kin = fullerene_kinematics();
    const SlitGeometry geo = pair_geometry();
    const ModeTruncation trunc{20, 20, 1e-6};

    // Fix the transverse scale s/l while the distance grows tenfold; the
    // fresnel kernel then falls as r^{-3/2}, the rayleigh kernel as 1/r.
    const double l0 = 1.25;
    const double ratio = 4e-5 / l0;

    for (Kernel kernel : {Kernel::fresnel, Kernel::rayleigh}) {
        const ScreenAmplitudeEvaluator eval(kernel, SlitLayout::pair, trunc,
                                            kin, geo, 1.0);
        const ScreenPoint near = make_screen_point(ratio * l0, l0);
        const ScreenPoint far = make_screen_point(ratio * 10.0 * l0, 10.0 * l0);
        const double measured = std::abs(eval.reduced(Slit::one, far)) /
                                std::abs(eval.reduced(Slit::one, near));
        const double expected =
            (kernel == Kernel::fresnel) ? std::pow(10.0, -1.5) : 0.1;
        CHECK(measured == doctest::Approx(expected).epsilon(0.01));
    }
}

TEST_CASE("rayleigh kernel rejects geometry beyond grazing") {
    const Kinematics kin = fullerene_kinematics();
    const SlitGeometry geo = pair_geometry();
    const ModeTruncation trunc{4, 4, 1e-6};
    const double alpha = 0.1;
    const ScreenAmplitudeEvaluator eval(Kernel::rayleigh, SlitLayout::pair,
                                        trunc, kin, geo, 1.0, alpha);
    const ScreenPoint grazing = make_screen_point(12.5, 1.25, alpha);
    CHECK_THROWS_AS(eval.reduced(Slit::one, grazing), domain_error);
}

TEST_CASE("evaluator guards slit and alpha consistency") {
    const Kinematics kin = fullerene_kinematics();
    const SlitGeometry geo = pair_geometry();
    const ModeTruncation trunc{4, 4, 1e-6};

    const ScreenAmplitudeEvaluator single_eval(
        Kernel::fresnel, SlitLayout::single, trunc, kin, geo, 1.0);
    const ScreenPoint pt = make_screen_point(1e-5, 1.25);
    CHECK_THROWS_AS(single_eval.reduced(Slit::two, pt),
                    invalid_parameter_error);

    const ScreenAmplitudeEvaluator tilted(Kernel::fresnel, SlitLayout::pair,
                                          trunc, kin, geo, 1.0, 0.05);
    CHECK_THROWS_AS(tilted.reduced(Slit::one, pt), invalid_parameter_error);
}
