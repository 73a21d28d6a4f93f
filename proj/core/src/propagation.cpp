#include "slitwave/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <string>

#include "slitwave/errors.hpp"

namespace slitwave {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double two_pi = 2.0 * std::numbers::pi;

void require(bool ok, const std::string& what) {
    if (!ok) throw invalid_parameter_error(what);
}

void require_odd_mode(int mode) {
    require(mode >= 1 && mode % 2 == 1, "mode must be a positive odd integer");
}

}  // namespace

ScreenPoint make_screen_point(double s, double distance, double alpha) {
    require(distance > 0.0, "screen distance must be positive");
    ScreenPoint pt;
    pt.s = s;
    pt.alpha = alpha;
    pt.r = std::hypot(distance, s);
    pt.sin_beta = s / pt.r;
    return pt;
}

const char* to_string(Kernel kernel) {
    return kernel == Kernel::fresnel ? "fresnel" : "rayleigh";
}

Kernel kernel_from_string(const std::string& name) {
    if (name == "fresnel") return Kernel::fresnel;
    if (name == "rayleigh") return Kernel::rayleigh;
    throw invalid_parameter_error("unknown kernel '" + name +
                                  "' (expected fresnel or rayleigh)");
}

std::complex<double> free_propagator(double R, double dt, double mass,
                                     double hbar) {
    require(dt > 0.0, "propagation time must be positive");
    require(mass > 0.0 && hbar > 0.0, "mass and hbar must be positive");
    const double modulus = std::pow(mass / (two_pi * hbar * dt), 1.5);
    // (1/i)^{3/2} on the principal branch.
    const double branch = -0.75 * pi;
    const double angle =
        std::remainder(mass * R * R / (2.0 * hbar * dt), two_pi);
    return modulus * std::polar(1.0, branch + angle);
}

std::complex<double> aperture_integral_closed(double q, int mode,
                                              double extent) {
    require(extent > 0.0, "extent must be positive");
    require_odd_mode(mode);
    const double w = mode * pi / extent;
    if (q == 0.0) return {2.0 * extent / (mode * pi), 0.0};
    if (q < 0.0) return std::conj(aperture_integral_closed(-q, mode, extent));

    // For odd mode the antiderivative value w (1 + e^{-i q extent}) / (w^2 - q^2)
    // is rewritten around delta = q - w:
    //     I = -2 i w sin(x) e^{-i x} / (delta (w + q)),   x = delta extent / 2.
    // The 1 + e^{-i q extent} form cancels catastrophically near resonance;
    // this one is exact for all q and has the analytic limit built in.
    const double delta = q - w;
    if (delta == 0.0) return {0.0, -0.5 * extent};
    const double x = 0.5 * delta * extent;
    const std::complex<double> rotating =
        std::sin(x) * std::polar(1.0, -x);
    const std::complex<double> minus_two_i{0.0, -2.0};
    return minus_two_i * w * rotating / (delta * (w + q));
}

namespace detail {

namespace {

// Gauss-Kronrod 7-15 nodes and weights on [-1, 1] (positive half; the rule
// is symmetric). Even positions carry the embedded Gauss-7 rule.
constexpr double gk_nodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.0};
constexpr double gk_weights[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
constexpr double gauss_weights[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

struct Panel {
    double lo = 0.0;
    double hi = 0.0;
    std::complex<double> value;
    double error = 0.0;
};

Panel evaluate_panel(const std::function<std::complex<double>(double)>& f,
                     double lo, double hi) {
    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);

    std::complex<double> kronrod{0.0, 0.0};
    std::complex<double> gauss{0.0, 0.0};
    for (int i = 0; i < 8; ++i) {
        const double offset = half * gk_nodes[i];
        std::complex<double> pair_sum;
        if (i == 7) {
            pair_sum = f(center);
        } else {
            pair_sum = f(center - offset) + f(center + offset);
        }
        kronrod += gk_weights[i] * pair_sum;
        if (i % 2 == 1) gauss += gauss_weights[i / 2] * pair_sum;
    }
    Panel panel;
    panel.lo = lo;
    panel.hi = hi;
    panel.value = half * kronrod;
    panel.error = std::abs(half * (kronrod - gauss));
    return panel;
}

struct WorseError {
    bool operator()(const Panel& a, const Panel& b) const {
        if (a.error != b.error) return a.error < b.error;
        return a.lo > b.lo;  // deterministic tie-break
    }
};

}  // namespace

IntegrationResult integrate_gk15(
    const std::function<std::complex<double>(double)>& f, double lo,
    double hi, double abs_tol, long initial_panels, long max_evaluations) {
    if (!(abs_tol > 0.0))
        throw invalid_parameter_error("quadrature tolerance must be positive");
    initial_panels = std::max(initial_panels, 1L);

    IntegrationResult result;
    std::priority_queue<Panel, std::vector<Panel>, WorseError> queue;
    double total_error = 0.0;

    // Below noise_coeff * sum(|panel value|) the per-panel error estimates
    // are rounding noise, and splitting such a panel raises the sum instead
    // of lowering it. Treat that level as converged, the way QUADPACK does.
    constexpr double noise_coeff =
        100.0 * std::numeric_limits<double>::epsilon();
    double value_l1 = 0.0;

    const double width = hi - lo;
    for (long i = 0; i < initial_panels; ++i) {
        const double a = lo + width * static_cast<double>(i) /
                                   static_cast<double>(initial_panels);
        const double b = (i + 1 == initial_panels)
                             ? hi
                             : lo + width * static_cast<double>(i + 1) /
                                        static_cast<double>(initial_panels);
        Panel panel = evaluate_panel(f, a, b);
        result.evaluations += 15;
        total_error += panel.error;
        value_l1 += std::abs(panel.value);
        queue.push(panel);
        if (result.evaluations + 15 > max_evaluations && i + 1 < initial_panels)
            break;  // budget cannot even cover the initial pass
    }

    const double min_width = 1e-15 * std::abs(width);
    while (total_error > abs_tol && total_error > noise_coeff * value_l1 &&
           result.evaluations + 30 <= max_evaluations) {
        Panel worst = queue.top();
        if (worst.hi - worst.lo <= min_width) break;
        queue.pop();
        total_error -= worst.error;
        value_l1 -= std::abs(worst.value);
        const double mid = 0.5 * (worst.lo + worst.hi);
        Panel left = evaluate_panel(f, worst.lo, mid);
        Panel right = evaluate_panel(f, mid, worst.hi);
        result.evaluations += 30;
        total_error += left.error + right.error;
        value_l1 += std::abs(left.value) + std::abs(right.value);
        queue.push(left);
        queue.push(right);
    }

    // Drain into start-ordered form so the final summation order does not
    // depend on heap internals.
    std::vector<Panel> panels;
    panels.reserve(queue.size());
    while (!queue.empty()) {
        panels.push_back(queue.top());
        queue.pop();
    }
    std::sort(panels.begin(), panels.end(),
              [](const Panel& a, const Panel& b) { return a.lo < b.lo; });
    double exact_l1 = 0.0;
    for (const Panel& panel : panels) {
        result.value += panel.value;
        exact_l1 += std::abs(panel.value);
    }

    result.error_estimate = total_error;
    result.converged =
        total_error <= abs_tol || total_error <= noise_coeff * exact_l1;
    return result;
}

}  // namespace detail

std::complex<double> aperture_integral_quadrature(double q, int mode,
                                                  double extent, double tol) {
    require(extent > 0.0, "extent must be positive");
    require_odd_mode(mode);
    require(tol > 0.0, "quadrature tolerance must be positive");

    const double w = mode * pi / extent;
    const auto integrand = [q, w](double u) {
        return std::polar(1.0, -q * u) * std::sin(w * u);
    };

    // About 1.5 oscillations per initial panel, counting both the e^{-iqu}
    // and the sin(wu) factors.
    const double cycles = (std::abs(q) + w) * extent / two_pi;
    const long initial = std::clamp<long>(
        static_cast<long>(cycles / 1.5) + 1, 8, 150000);
    constexpr long budget = 2'000'000;

    detail::IntegrationResult result = detail::integrate_gk15(
        integrand, 0.0, extent, tol * extent, initial, budget);
    if (!result.converged) {
        throw convergence_error(
            "aperture quadrature did not reach tolerance within its budget");
    }
    return result.value;
}

std::complex<double> phase_reference(const ScreenPoint& pt, Kernel kernel,
                                     const Kinematics& kin) {
    const double arg = (kernel == Kernel::fresnel) ? 0.5 * kin.k * pt.r
                                                   : kin.k * pt.r;
    return std::polar(1.0, std::remainder(arg, two_pi));
}

ScreenAmplitudeEvaluator::ScreenAmplitudeEvaluator(
    Kernel kernel, SlitLayout layout, const ModeTruncation& trunc,
    const Kinematics& kin, const SlitGeometry& geometry, double amplitude,
    double alpha)
    : kernel_(kernel),
      layout_(layout),
      kin_(kin),
      geo_(geometry),
      amplitude_(amplitude),
      alpha_(alpha) {
    validate(trunc);
    validate(geometry);
    require(amplitude > 0.0, "amplitude must be positive");
    require(kin.k > 0.0, "wavenumber must be positive");

    const double a = geo_.width;
    const double b = geo_.length;
    const double c = geo_.thickness;
    const double k = kin_.k;

    if (layout_ == SlitLayout::single) {
        y_offset_1_ = -0.5 * a;
        y_offset_2_ = y_offset_1_;  // slit 2 is rejected at evaluation time
    } else {
        y_offset_1_ = -(a + 0.5 * geo_.gap);
        y_offset_2_ = 0.5 * geo_.gap;
    }

    // x-direction aperture integrals at the fixed diffraction angle,
    // including the phase picked up by centering the aperture on x = 0.
    const double qx = k * std::sin(alpha_);
    std::vector<std::complex<double>> ix(
        static_cast<std::size_t>(trunc.max_n) + 1);
    const std::complex<double> x_edge = std::polar(1.0, qx * 0.5 * b);
    for (int n = 0; n <= trunc.max_n; ++n) {
        ix[static_cast<std::size_t>(n)] =
            x_edge * aperture_integral_closed(qx, 2 * n + 1, b);
    }

    const double common_angle = std::remainder(k * c, two_pi);
    const bool rayleigh = (kernel_ == Kernel::rayleigh);

    c0_.assign(static_cast<std::size_t>(trunc.max_m) + 1, {0.0, 0.0});
    if (rayleigh) c1_.assign(c0_.size(), {0.0, 0.0});

    for (int m = 0; m <= trunc.max_m; ++m) {
        const double mp = 2.0 * m + 1.0;
        const double wa = mp * pi / a;
        std::complex<double> acc0{0.0, 0.0};
        std::complex<double> acc1{0.0, 0.0};
        for (int n = 0; n <= trunc.max_n; ++n) {
            const double np = 2.0 * n + 1.0;
            const double wb = np * pi / b;
            const double coeff =
                16.0 * amplitude_ / (mp * np * pi * pi);

            const double radicand = k * k - wb * wb - wa * wa;
            std::complex<double> kz;
            std::complex<double> through;
            if (radicand >= 0.0) {
                kz = {std::sqrt(radicand), 0.0};
                const double delta = -(wa * wa + wb * wb) / (kz.real() + k);
                through = std::polar(1.0, common_angle + delta * c);
            } else {
                kz = {0.0, std::sqrt(-radicand)};
                through = {std::exp(-kz.imag() * c), 0.0};
            }

            const std::complex<double> base =
                coeff * through * ix[static_cast<std::size_t>(n)];
            acc0 += base;
            if (rayleigh) acc1 += base * (std::complex<double>{0.0, 1.0} * kz);
        }
        c0_[static_cast<std::size_t>(m)] = acc0;
        if (rayleigh) c1_[static_cast<std::size_t>(m)] = acc1;
    }
}

std::complex<double> ScreenAmplitudeEvaluator::reduced(
    Slit slit, const ScreenPoint& pt) const {
    if (layout_ == SlitLayout::single && slit == Slit::two)
        throw invalid_parameter_error(
            "single-slit evaluator cannot address slit 2");
    if (pt.alpha != alpha_)
        throw invalid_parameter_error(
            "screen point alpha differs from the evaluator's diffraction angle");

    const double a = geo_.width;
    const double k = kin_.k;
    const double q = k * pt.sin_beta;
    const double y_offset = (slit == Slit::one) ? y_offset_1_ : y_offset_2_;
    const std::complex<double> edge = std::polar(1.0, -q * y_offset);

    std::complex<double> grazing{0.0, 0.0};
    if (kernel_ == Kernel::rayleigh) {
        const double cos_alpha = std::cos(pt.alpha);
        const double radicand =
            cos_alpha * cos_alpha - pt.sin_beta * pt.sin_beta;
        if (radicand < 0.0)
            throw domain_error(
                "rayleigh obliquity radical is imaginary for this point");
        const double radical = std::sqrt(radicand);
        grazing = {-radical / pt.r, k * radical};
    }

    std::complex<double> acc{0.0, 0.0};
    const int max_m = static_cast<int>(c0_.size()) - 1;
    for (int m = 0; m <= max_m; ++m) {
        const std::complex<double> iy =
            aperture_integral_closed(q, 2 * m + 1, a);
        const std::size_t mi = static_cast<std::size_t>(m);
        const std::complex<double> term =
            (kernel_ == Kernel::rayleigh) ? c1_[mi] + grazing * c0_[mi]
                                          : c0_[mi];
        acc += term * iy;
    }

    std::complex<double> prefactor;
    if (kernel_ == Kernel::fresnel) {
        const double root = std::numbers::sqrt2 / 2.0;
        prefactor = std::complex<double>{-root, -root} *
                    std::pow(k / (two_pi * pt.r), 1.5);
    } else {
        prefactor = {-1.0 / (4.0 * pi * pt.r), 0.0};
    }
    return prefactor * edge * acc;
}

std::complex<double> ScreenAmplitudeEvaluator::full(
    Slit slit, const ScreenPoint& pt) const {
    return reduced(slit, pt) * phase_reference(pt, kernel_, kin_);
}

std::complex<double> slit_screen_wavefunction(Slit slit, const ScreenPoint& pt,
                                              Kernel kernel,
                                              const ModeTruncation& trunc,
                                              const Kinematics& kin,
                                              const SlitGeometry& geometry,
                                              double amplitude) {
    ScreenAmplitudeEvaluator evaluator(kernel, SlitLayout::pair, trunc, kin,
                                       geometry, amplitude, pt.alpha);
    return evaluator.full(slit, pt);
}

}  // namespace slitwave
