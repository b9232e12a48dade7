#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "sd/curves.hpp"
#include "sd/heights.hpp"

namespace sd {

/// Weighted complex point cloud approximating mu_f (or a pullback to a
/// curve); weights sum to 1 after construction.
struct EmpiricalMeasure {
    std::vector<std::pair<ProjPointC, double>> samples;
    std::string provenance; // map id + depth + seed
};

/// Point cloud on a curve in P^1 x P^1; the pair records (pi_1, pi_2).
struct CurveMeasure {
    std::vector<std::pair<std::pair<ProjPointC, ProjPointC>, double>> samples;
    std::string provenance;

    EmpiricalMeasure marginal(int which) const;
};

/// Divisor on P^1 with integer multiplicities; degree = sum of them.
struct DivisorP1 {
    std::vector<std::pair<ProjPointC, long>> points;

    long degree() const {
        long s = 0;
        for (const auto& [p, m] : points) s += m;
        return s;
    }
};

/// Uniform random preimage walk: width independent walks of the given depth,
/// each step replacing z by a uniformly chosen root of f(w) = z. Final points
/// carry weight 1/width; deterministic given the seed.
/// Throws ExceptionalStart when the total preimage of z0 is {z0}.
EmpiricalMeasure backward_sample(const RationalMap& f, const ProjPointC& z0, unsigned depth,
                                 unsigned width, std::uint64_t seed);

/// First non-exceptional point from a fixed candidate list; what the CLI and
/// the equality test use as the walk start.
ProjPointC default_sample_start(const RationalMap& f);

/// Archimedean invariant potential of mu_f via the escape rate of the lift.
double potential_green(const RationalMap& f, const ProjPointC& z, unsigned n);

/// Energy of the signed measure mu1 - mu2 against the -log chordal kernel,
/// U-statistic (off-diagonal pairs only). Identical sample sets give 0
/// exactly. Throws InsufficientSamples below 100 points per side.
double mutual_energy(const EmpiricalMeasure& mu1, const EmpiricalMeasure& mu2);

/// Subsample bootstrap standard error of the mutual energy, rescaled to the
/// full sample sizes; 200 resamples on a seed stream separate from sampling.
double mutual_energy_se(const EmpiricalMeasure& mu1, const EmpiricalMeasure& mu2,
                        unsigned resamples = 200, unsigned subsample = 400,
                        std::uint64_t seed = 0x0b5e55ed);

/// log|r(z)| for the explicit rational function with div(r) = D on the
/// genus-0 fiber; requires degree(D) = 0 (points at infinity enter through
/// the finite part's exponent sum).
std::function<double(const ProjPointC&)> flat_potential(const DivisorP1& d);

/// Fiber transport of mu through the curve: which = 1 solves C(x, .) = 0 and
/// spreads each sample over its deg-many fiber roots; mass stays 1.
CurveMeasure curve_pullback_sample(const CurveP1xP1& c, const EmpiricalMeasure& mu, int which,
                                   double tol = 1e-10);

struct MeasureParams {
    unsigned depth = 20;
    unsigned width = 4000;
    std::uint64_t seed = 0;
    double tol = 1e-8;
    unsigned bootstrap = 200;
    unsigned subsample = 400;
};

struct MeasureEqualityReport {
    MeasureDecision decision{MeasureDecision::Inconclusive};
    double statistic{0.0};
    double se{0.0};
};

/// Measure-equality dichotomy: compares the two normalized pullbacks of
/// mu_f and mu_g on C through their coordinate marginals. NotEqual above
/// 3x the bootstrap SE, Equal below 1x.
MeasureEqualityReport measure_equality_test(const RationalMap& f, const RationalMap& g,
                                            const CurveP1xP1& c, const MeasureParams& params = {});

/// Adapter handing the equality test to the weakly-special screen.
MeasureTest make_measure_rejector(const MeasureParams& params = {});

/// Mean archimedean local height of g over Fix(f^n): certified canonical
/// heights on rational periodic points, flagged Green surrogates on numeric
/// ones. The certificate does not include an equidistribution rate.
HeightEstimate arakelov_zhang_estimate(const RationalMap& f, const RationalMap& g, unsigned n,
                                       double target_error, unsigned degree_cap = 4200);

} // namespace sd
