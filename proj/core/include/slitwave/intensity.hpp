#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "slitwave/propagation.hpp"

namespace slitwave {

// Superposition weights of the two single-slit waves. Both non-negative,
// with sqrt(c1^2 + c2^2) = 1 within 1e-3: loose enough to accept published
// rounded pairs without silent renormalization, tight enough to reject
// weights that are not a unit vector.
struct SuperpositionSpec {
    double c1 = 0.0;
    double c2 = 0.0;
};

void validate(const SuperpositionSpec& spec);

// c2 completed from c1 so the weights are exactly normalized.
SuperpositionSpec make_superposition(double c1);

// Environment overlap magnitude alpha_t and the coherence degree
// Lambda_t = 2 alpha_t / (1 + alpha_t^2) it induces. Both kept so formulas
// can use whichever form reads naturally.
struct DecoherenceSpec {
    double alpha_t = 0.0;
    double lambda_t = 0.0;
};

void validate(const DecoherenceSpec& spec);

DecoherenceSpec decoherence_from_alpha(double alpha_t);
DecoherenceSpec decoherence_from_lambda(double lambda_t);

// Forward map Lambda = 2 alpha / (1 + alpha^2).
double lambda_from_alpha(double alpha_t);

// Inverse on [0, 1]. Evaluated as Lambda / (1 + sqrt(1 - Lambda^2)), which
// is the same root as (1 - sqrt(1 - Lambda^2)) / Lambda but has no
// cancellation or 0/0 at the endpoints.
double alpha_from_lambda(double lambda_t);

// A sampled intensity pattern plus a free-form metadata snapshot of the run
// that produced it. Positions strictly increasing, intensities >= 0.
struct Pattern {
    std::vector<double> positions;    // m
    std::vector<double> intensities;  // relative units
    std::vector<std::pair<std::string, std::string>> metadata;
};

void validate(const Pattern& pattern);

// |psi_1|^2 over the scan, single-slit frame (slit centered on s = 0).
Pattern intensity_single(const ScreenGeometry& scan, Kernel kernel,
                         const ModeTruncation& trunc, const Kinematics& kin,
                         const SlitGeometry& geometry, double amplitude);

// |c1 psi_1 + c2 psi_2|^2 over the scan, slit pair centered on s = 0.
Pattern intensity_double_coherent(const ScreenGeometry& scan,
                                  const SuperpositionSpec& spec,
                                  Kernel kernel, const ModeTruncation& trunc,
                                  const Kinematics& kin,
                                  const SlitGeometry& geometry,
                                  double amplitude);

// Environment-damped double-slit pattern,
//   I = (1 + alpha_t^2) [ c1^2 |psi1|^2 + c2^2 |psi2|^2
//                         + 2 c1 c2 Lambda_t Re(psi1* psi2) ].
// Assembled in the equivalent convex form
//   (1 + alpha_t^2) [ (1 - Lambda_t)(c1^2 |psi1|^2 + c2^2 |psi2|^2)
//                     + Lambda_t |c1 psi1 + c2 psi2|^2 ]
// which cannot go negative in floating point.
Pattern intensity_double_decoherent(const ScreenGeometry& scan,
                                    const SuperpositionSpec& spec,
                                    const DecoherenceSpec& deco,
                                    Kernel kernel,
                                    const ModeTruncation& trunc,
                                    const Kinematics& kin,
                                    const SlitGeometry& geometry,
                                    double amplitude);

// (I_max - I_min) / (I_max + I_min) for a given extremum pair.
double visibility_from_extrema(double i_max, double i_min);

// Fringe visibility from the central maximum and the first minimum beside
// it. An extremum is a sample strictly above (below) both neighbors;
// plateaus are broken by taking the leftmost sample. The central maximum is
// the detected maximum nearest s = 0. Throws analysis_error when the
// pattern has no interior maximum with an adjacent minimum.
double fringe_visibility(const Pattern& pattern);

// Result of the automatic truncation-doubling loop.
struct ConvergedPattern {
    Pattern pattern;
    ModeTruncation achieved;
    double residual = 0.0;  // relative L1 change of the last doubling
    bool converged = false;
    int doublings = 0;
};

// Regenerates the pattern with max_m, max_n doubled until the relative L1
// change falls below tail_tol or max_doublings is exhausted. The generator
// is expected to be deterministic in the truncation.
ConvergedPattern converge_pattern(
    const std::function<Pattern(const ModeTruncation&)>& generate,
    ModeTruncation start, double tail_tol, int max_doublings);

}  // namespace slitwave
