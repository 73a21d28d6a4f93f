#include <cmath>
#include <complex>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <string>

#include "CLI11.hpp"
#include "slitwave/slitwave.hpp"

namespace {

namespace sw = slitwave;

constexpr int exit_ok = 0;
constexpr int exit_usage = 2;
constexpr int exit_invalid = 3;
constexpr int exit_no_convergence = 4;

int run_generate(bool want_single, const std::string& config_path,
                 const std::string& out_path, const std::string& kernel_name) {
    sw::RunConfig config = sw::load_config(config_path);
    const bool is_single = config.mode == sw::RunMode::single;
    if (want_single && !is_single)
        throw sw::validation_error(std::string("config mode is '") +
                                   sw::to_string(config.mode) +
                                   "'; use the double command");
    if (!want_single && is_single)
        throw sw::validation_error(
            "config mode is 'single'; use the single command");
    if (!kernel_name.empty()) config.kernel = sw::kernel_from_string(kernel_name);
    if (!out_path.empty()) config.output_path = out_path;

    const sw::Pattern pattern = sw::generate_pattern(config);
    sw::write_pattern_file(pattern, config.output_path);
    std::cout << "wrote " << config.output_path << " ("
              << pattern.positions.size() << " samples)\n";
    return exit_ok;
}

int run_fit(const std::string& config_path, const std::string& data_path,
            const std::string& report_path, const std::string& pattern_path,
            const std::string& kernel_name) {
    sw::RunConfig config = sw::load_config(config_path);
    if (!kernel_name.empty()) config.kernel = sw::kernel_from_string(kernel_name);
    if (!pattern_path.empty()) config.output_path = pattern_path;

    const sw::ExperimentalSeries data = sw::load_experimental_csv(data_path);
    const sw::FitRun run = sw::fit_run(config, data);
    const std::string report = sw::write_fit_report(run.result, config, data);

    std::ofstream report_file(report_path, std::ios::binary);
    if (!report_file)
        throw sw::io_error("cannot open '" + report_path + "' for writing");
    report_file << report;
    if (!report_file) throw sw::io_error("failed writing '" + report_path + "'");

    sw::write_pattern_file(run.fitted_pattern, config.output_path);
    std::cout << report;
    std::cout << "wrote " << report_path << " and " << config.output_path
              << "\n";
    return exit_ok;
}

int run_visibility(const std::string& pattern_path) {
    const sw::Pattern pattern = sw::load_pattern_file(pattern_path);
    const double nu = sw::fringe_visibility(pattern);
    std::cout << std::fixed << std::setprecision(6) << nu << "\n";
    return exit_ok;
}

// Randomized cross-check of the two aperture-integral routes. The closed
// form and the adaptive quadrature share no code beyond the integrand
// definition, so agreement here exercises both.
int run_oracle_check(int cases) {
    std::mt19937 rng(12345u);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);

    double max_rel = 0.0;
    for (int i = 0; i < cases; ++i) {
        double extent = 0.0;
        int mode = 0;
        double q = 0.0;
        std::complex<double> closed;

        // q extent up to 600 keeps the integral large enough relative to the
        // integrand that a 1e-9 match is meaningful in double precision;
        // beyond that the cancellation alone costs more than nine digits.
        // The same conditioning limit rules out samples that land too close
        // to a zero of the integral, where the quadrature's rounding floor
        // (about 1e-15 of the extent) dominates any relative comparison, so
        // such draws are rejected and redrawn.
        for (int attempt = 0; attempt < 100; ++attempt) {
            extent = std::pow(10.0, -9.0 + 7.0 * uniform(rng));
            mode = 2 * static_cast<int>(21.0 * uniform(rng)) + 1;
            const double w = static_cast<double>(mode) * M_PI / extent;
            if (uniform(rng) < 0.70) {
                q = 600.0 * uniform(rng) / extent;
            } else {
                const double offset =
                    std::pow(10.0, -8.0 + 5.0 * uniform(rng));
                q = w * (1.0 + (uniform(rng) < 0.5 ? offset : -offset));
            }
            if (uniform(rng) < 0.5) q = -q;
            closed = sw::aperture_integral_closed(q, mode, extent);
            if (std::abs(closed) >= 5e-6 * extent) break;
        }

        const auto quad = sw::aperture_integral_quadrature(q, mode, extent, 1e-15);
        const double scale = std::abs(closed) + std::abs(quad);
        const double rel = scale > 0.0 ? 2.0 * std::abs(closed - quad) / scale : 0.0;
        if (rel > max_rel) max_rel = rel;
    }

    std::cout << "oracle-check: " << cases << " cases, max relative error = "
              << sw::format_double(max_rel) << "\n";
    if (!(max_rel < 1e-9))
        throw sw::convergence_error(
            "closed-form and quadrature aperture integrals disagree beyond "
            "1e-9");
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"matter-wave slit diffraction: guided-mode pattern "
                 "generation, decoherence, and calibration"};
    app.require_subcommand(1);
    app.set_version_flag("--version", slitwave::version_string);

    std::string config_path;
    std::string data_path;
    std::string pattern_path;
    std::string out_path;
    std::string report_path = "fit_report.txt";
    std::string kernel_name;
    int oracle_cases = 1000;

    const auto kernel_check = CLI::IsMember({"fresnel", "rayleigh"});

    CLI::App* single = app.add_subcommand(
        "single", "generate a single-slit diffraction pattern");
    single->add_option("--config", config_path, "run configuration file")
        ->required();
    single->add_option("--out", out_path,
                       "output pattern path (overrides the config)");
    single->add_option("--kernel", kernel_name,
                       "propagation kernel (overrides the config)")
        ->check(kernel_check);

    CLI::App* dbl = app.add_subcommand(
        "double", "generate a double-slit pattern, coherent or decoherent");
    dbl->add_option("--config", config_path, "run configuration file")
        ->required();
    dbl->add_option("--out", out_path,
                    "output pattern path (overrides the config)");
    dbl->add_option("--kernel", kernel_name,
                    "propagation kernel (overrides the config)")
        ->check(kernel_check);

    CLI::App* fit = app.add_subcommand(
        "fit", "least-squares calibration against measured counts");
    fit->add_option("--config", config_path, "run configuration file")
        ->required();
    fit->add_option("--data", data_path, "measured counts CSV")->required();
    fit->add_option("--out", report_path, "fit report path");
    fit->add_option("--pattern", pattern_path,
                    "fitted pattern path (overrides the config)");
    fit->add_option("--kernel", kernel_name,
                    "propagation kernel (overrides the config)")
        ->check(kernel_check);

    CLI::App* visibility = app.add_subcommand(
        "visibility", "fringe visibility of a stored pattern");
    visibility->add_option("--pattern", pattern_path, "pattern CSV to analyze")
        ->required();

    CLI::App* oracle = app.add_subcommand(
        "oracle-check",
        "cross-check closed-form aperture integrals against quadrature");
    oracle->add_option("--cases", oracle_cases, "number of random cases")
        ->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (single->parsed())
            return run_generate(true, config_path, out_path, kernel_name);
        if (dbl->parsed())
            return run_generate(false, config_path, out_path, kernel_name);
        if (fit->parsed())
            return run_fit(config_path, data_path, report_path, pattern_path,
                           kernel_name);
        if (visibility->parsed()) return run_visibility(pattern_path);
        if (oracle->parsed()) return run_oracle_check(oracle_cases);
        std::cerr << "error: no command selected\n";
        return exit_usage;
    } catch (const slitwave::convergence_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_no_convergence;
    } catch (const slitwave::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_invalid;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 1;
    }
}
