#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "slitwave/calibration.hpp"
#include "slitwave/intensity.hpp"

namespace slitwave {

enum class RunMode { single, double_coherent, double_decoherent };

const char* to_string(RunMode mode);
RunMode run_mode_from_string(const std::string& name);

// Numerical policy for pattern generation: starting truncation plus the
// automatic doubling loop that re-runs the scan with max_m, max_n doubled
// until the pattern settles (relative L1 change below tail_tol) or
// max_doublings is spent. The loop is capped because the mode tails decay
// slowly enough that a sub-1e-6 target is far beyond any sensible runtime;
// the achieved residual is reported in the pattern metadata instead.
struct ConvergencePolicy {
    bool auto_converge = true;
    int max_doublings = 3;
};

// Everything one CLI run needs. Sections map one-to-one onto the config
// file grammar; see configs/ for annotated examples.
struct RunConfig {
    RunMode mode = RunMode::single;

    PhysicalParams physics;
    SlitGeometry slit;

    // screen section
    double screen_distance = 0.0;  // l, m
    double s_min = -150e-6;
    double s_max = 150e-6;
    int n_points = 1501;
    double alpha = 0.0;

    std::optional<SuperpositionSpec> superposition;
    std::optional<DecoherenceSpec> decoherence;

    Kernel kernel = Kernel::fresnel;
    ModeTruncation truncation;
    ConvergencePolicy convergence;

    FitSpec fit;
    bool has_fit = false;

    std::string output_path = "pattern.csv";
};

void validate(const RunConfig& config);

// Parse the sectioned key = value grammar. Unknown keys and sections are
// errors, so typos cannot silently fall back to defaults.
RunConfig parse_config(std::istream& in);
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

// Canonical serialization: stable section and key order, full round-trip
// number precision. parse(write(c)) == write-identical config.
std::string write_config(const RunConfig& config);

namespace detail_config {
// Flat section-prefixed key/value view of a config in canonical order.
// Backs write_config and the metadata echo stamped into generated patterns.
std::vector<std::pair<std::string, std::string>> items(const RunConfig& config);
}  // namespace detail_config

// CSV with header `s_m,counts`. Rows may arrive unsorted; duplicates are
// averaged; `#` lines are ignored.
ExperimentalSeries parse_experimental_csv(std::istream& in,
                                          const std::string& label);
ExperimentalSeries load_experimental_csv(const std::string& path);

}  // namespace slitwave
