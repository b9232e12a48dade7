#include "sd/measures.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sd/errors.hpp"
#include "sd/parallel.hpp"
#include "sd/rng.hpp"

namespace sd {

EmpiricalMeasure CurveMeasure::marginal(int which) const {
    EmpiricalMeasure out;
    out.provenance = provenance + (which == 1 ? ";marginal=1" : ";marginal=2");
    out.samples.reserve(samples.size());
    for (const auto& [pq, w] : samples)
        out.samples.emplace_back(which == 1 ? pq.first : pq.second, w);
    return out;
}

namespace {

std::vector<Complex> preimage_form(const RationalMap& f, const ProjPointC& z) {
    // z_y * P(u,v) - z_x * Q(u,v)
    std::vector<Complex> coeffs(f.degree() + 1);
    for (unsigned i = 0; i <= f.degree(); ++i)
        coeffs[i] = z.y * mpz_get_d(f.num().coeff(i).get_mpz_t()) -
                    z.x * mpz_get_d(f.den().coeff(i).get_mpz_t());
    return coeffs;
}

bool total_preimage_is_self(const RationalMap& f, const ProjPointC& z, double tol) {
    std::vector<ProjPointC> pre;
    try {
        pre = binary_form_roots(preimage_form(f, z));
    } catch (const NoConvergence&) {
        return false;
    }
    for (const auto& w : pre)
        if (chordal(w, z) > tol) return false;
    return true;
}

} // namespace

ProjPointC default_sample_start(const RationalMap& f) {
    const double cands[][2] = {{3.0, 0.0}, {2.5, 0.0}, {7.0, 0.0}, {0.4, 1.3}, {-1.7, 0.6}};
    for (const auto& c : cands) {
        ProjPointC z{Complex(c[0], c[1])};
        if (!total_preimage_is_self(f, z, 1e-8)) return z;
    }
    throw ExceptionalStart("default_sample_start: no non-exceptional candidate");
}

EmpiricalMeasure backward_sample(const RationalMap& f, const ProjPointC& z0, unsigned depth,
                                 unsigned width, std::uint64_t seed) {
    if (depth < 1 || width < 1)
        throw std::invalid_argument("backward_sample: depth and width must be >= 1");
    if (total_preimage_is_self(f, z0, 1e-8))
        throw ExceptionalStart("backward_sample: start point is exceptional for the map");

    EmpiricalMeasure out;
    {
        std::ostringstream prov;
        prov << "map=" << f.str() << ";depth=" << depth << ";width=" << width
             << ";seed=" << seed;
        out.provenance = prov.str();
    }
    out.samples.assign(width, {ProjPointC(), 0.0});
    const double w = 1.0 / static_cast<double>(width);
    RootSolveOptions opts;
    opts.tol = 1e-9;

    parallel_for(width, [&](size_t walk) {
        Rng rng = Rng::substream(seed, walk);
        ProjPointC z = z0;
        z.renormalize();
        for (unsigned step = 0; step < depth; ++step) {
            auto roots = binary_form_roots(preimage_form(f, z), opts);
            z = roots[rng.below(roots.size())];
            z.renormalize();
        }
        out.samples[walk] = {z, w};
    });
    return out;
}

double potential_green(const RationalMap& f, const ProjPointC& z, unsigned n) {
    return green_arch(f, z, n).value;
}

namespace {

struct UnitSample {
    Complex x, y;
    double w;
};

std::vector<UnitSample> to_unit(const EmpiricalMeasure& mu, double sign) {
    std::vector<UnitSample> out;
    out.reserve(mu.samples.size());
    for (const auto& [p, w] : mu.samples) {
        double n = std::sqrt(std::norm(p.x) + std::norm(p.y));
        out.push_back({p.x / n, p.y / n, sign * w});
    }
    return out;
}

/// sum_{i != j} s_i s_j * (-log |x_i y_j - x_j y_i|) over the merged signed
/// cloud, rows reduced in index order for determinism.
double signed_energy(const std::vector<UnitSample>& pts) {
    size_t n = pts.size();
    std::vector<long double> row(n, 0.0L);
    parallel_for(n, [&](size_t i) {
        long double acc = 0.0L;
        for (size_t j = i + 1; j < n; ++j) {
            Complex cross = pts[i].x * pts[j].y - pts[j].x * pts[i].y;
            double d2 = std::norm(cross);
            if (d2 <= 0.0) d2 = 1e-300; // coincident points: clip, do not blow up
            acc += static_cast<long double>(pts[i].w * pts[j].w) *
                   static_cast<long double>(-0.5 * std::log(d2));
        }
        row[i] = acc;
    });
    long double total = 0.0L;
    for (size_t i = 0; i < n; ++i) total += row[i];
    return static_cast<double>(2.0L * total);
}

bool identical_samples(const EmpiricalMeasure& a, const EmpiricalMeasure& b) {
    if (a.samples.size() != b.samples.size()) return false;
    for (size_t i = 0; i < a.samples.size(); ++i) {
        if (a.samples[i].first.x != b.samples[i].first.x) return false;
        if (a.samples[i].first.y != b.samples[i].first.y) return false;
        if (a.samples[i].second != b.samples[i].second) return false;
    }
    return true;
}

} // namespace

namespace {

/// Deterministic order so mutual_energy(a, b) == mutual_energy(b, a) down to
/// the last bit (the signed energy is even in the sign of mu1 - mu2).
bool measure_before(const EmpiricalMeasure& a, const EmpiricalMeasure& b) {
    if (a.samples.size() != b.samples.size()) return a.samples.size() < b.samples.size();
    for (size_t i = 0; i < a.samples.size(); ++i) {
        const Complex &ax = a.samples[i].first.x, &bx = b.samples[i].first.x;
        if (ax.real() != bx.real()) return ax.real() < bx.real();
        if (ax.imag() != bx.imag()) return ax.imag() < bx.imag();
        const Complex &ay = a.samples[i].first.y, &by = b.samples[i].first.y;
        if (ay.real() != by.real()) return ay.real() < by.real();
        if (ay.imag() != by.imag()) return ay.imag() < by.imag();
    }
    return false;
}

} // namespace

double mutual_energy(const EmpiricalMeasure& mu1, const EmpiricalMeasure& mu2) {
    if (mu1.samples.size() < 100 || mu2.samples.size() < 100)
        throw InsufficientSamples("mutual_energy: need at least 100 samples per measure");
    if (identical_samples(mu1, mu2)) return 0.0;
    const EmpiricalMeasure& first = measure_before(mu2, mu1) ? mu2 : mu1;
    const EmpiricalMeasure& second = measure_before(mu2, mu1) ? mu1 : mu2;
    std::vector<UnitSample> pts = to_unit(first, 1.0);
    std::vector<UnitSample> neg = to_unit(second, -1.0);
    pts.insert(pts.end(), neg.begin(), neg.end());
    return signed_energy(pts);
}

double mutual_energy_se(const EmpiricalMeasure& mu1, const EmpiricalMeasure& mu2,
                        unsigned resamples, unsigned subsample, std::uint64_t seed) {
    size_t n1 = mu1.samples.size(), n2 = mu2.samples.size();
    size_t m1 = std::min<size_t>(n1, subsample), m2 = std::min<size_t>(n2, subsample);
    std::vector<double> stats(resamples);
    for (unsigned b = 0; b < resamples; ++b) {
        Rng rng = Rng::substream(seed, b);
        EmpiricalMeasure r1, r2;
        r1.samples.reserve(m1);
        r2.samples.reserve(m2);
        for (size_t i = 0; i < m1; ++i)
            r1.samples.emplace_back(mu1.samples[rng.below(n1)].first, 1.0 / m1);
        for (size_t i = 0; i < m2; ++i)
            r2.samples.emplace_back(mu2.samples[rng.below(n2)].first, 1.0 / m2);
        std::vector<UnitSample> pts = to_unit(r1, 1.0);
        std::vector<UnitSample> neg = to_unit(r2, -1.0);
        pts.insert(pts.end(), neg.begin(), neg.end());
        stats[b] = signed_energy(pts);
    }
    double mean = 0.0;
    for (double s : stats) mean += s;
    mean /= resamples;
    double var = 0.0;
    for (double s : stats) var += (s - mean) * (s - mean);
    var /= (resamples > 1 ? resamples - 1 : 1);
    double scale = (1.0 / static_cast<double>(n1) + 1.0 / static_cast<double>(n2)) /
                   (1.0 / static_cast<double>(m1) + 1.0 / static_cast<double>(m2));
    return std::sqrt(var * scale);
}

std::function<double(const ProjPointC&)> flat_potential(const DivisorP1& d) {
    if (d.degree() != 0) throw DegreeNonZero("flat_potential: divisor degree must be 0");
    // r(z) = prod over finite points (z - a)^m; infinity carries the
    // balancing exponent and drops out of the formula.
    std::vector<std::pair<Complex, long>> finite;
    for (const auto& [p, m] : d.points) {
        if (p.near_infinity()) continue;
        finite.emplace_back(p.affine(), m);
    }
    return [finite](const ProjPointC& z) {
        long double acc = 0.0L;
        long sum_m = 0;
        for (const auto& [a, m] : finite) {
            acc += static_cast<long double>(m) *
                   static_cast<long double>(std::log(std::abs(z.x - a * z.y)));
            sum_m += m;
        }
        acc -= static_cast<long double>(sum_m) * static_cast<long double>(std::log(std::abs(z.y)));
        return static_cast<double>(acc);
    };
}

CurveMeasure curve_pullback_sample(const CurveP1xP1& c, const EmpiricalMeasure& mu, int which,
                                   double tol) {
    if (which != 1 && which != 2) throw std::invalid_argument("curve_pullback_sample: which");
    unsigned fiber_deg = which == 1 ? c.d2() : c.d1();
    if (fiber_deg == 0)
        throw NonDominant("curve_pullback_sample: projection is not dominant");
    CurveMeasure out;
    out.provenance = mu.provenance + (which == 1 ? ";pullback=pi1" : ";pullback=pi2");
    RootSolveOptions opts;
    opts.tol = std::min(tol, 1e-9);
    for (const auto& [p, w] : mu.samples) {
        std::vector<Complex> fiber =
            which == 1 ? c.fiber_over_first(p) : c.fiber_over_second(p);
        auto roots = binary_form_roots(fiber, opts);
        double share = w / static_cast<double>(roots.size());
        for (const auto& r : roots) {
            if (which == 1)
                out.samples.push_back({{p, r}, share});
            else
                out.samples.push_back({{r, p}, share});
        }
    }
    return out;
}

MeasureEqualityReport measure_equality_test(const RationalMap& f, const RationalMap& g,
                                            const CurveP1xP1& c, const MeasureParams& params) {
    if (c.d1() == 0 || c.d2() == 0)
        throw NonDominant("measure_equality_test: both projections must be dominant");

    EmpiricalMeasure mu_f =
        backward_sample(f, default_sample_start(f), params.depth, params.width,
                        Rng::substream(params.seed, 101).next());
    EmpiricalMeasure mu_g =
        backward_sample(g, default_sample_start(g), params.depth, params.width,
                        Rng::substream(params.seed, 202).next());

    CurveMeasure nu1 = curve_pullback_sample(c, mu_f, 1, params.tol);
    CurveMeasure nu2 = curve_pullback_sample(c, mu_g, 2, params.tol);

    // Marginal energies of the normalized difference, averaged over the two
    // coordinates; sound in the NotEqual direction.
    EmpiricalMeasure a1 = nu1.marginal(1), b1 = nu2.marginal(1);
    EmpiricalMeasure a2 = nu1.marginal(2), b2 = nu2.marginal(2);
    double e1 = mutual_energy(a1, b1);
    double e2 = mutual_energy(a2, b2);
    double se1 = mutual_energy_se(a1, b1, params.bootstrap, params.subsample,
                                  Rng::substream(params.seed, 303).next());
    double se2 = mutual_energy_se(a2, b2, params.bootstrap, params.subsample,
                                  Rng::substream(params.seed, 404).next());

    MeasureEqualityReport rep;
    rep.statistic = 0.5 * (e1 + e2);
    rep.se = 0.5 * (se1 + se2);
    if (rep.statistic > 3.0 * rep.se)
        rep.decision = MeasureDecision::NotEqual;
    else if (rep.statistic < rep.se)
        rep.decision = MeasureDecision::Equal;
    else
        rep.decision = MeasureDecision::Inconclusive;
    return rep;
}

MeasureTest make_measure_rejector(const MeasureParams& params) {
    return [params](const CurveP1xP1& c, const RationalMap& f,
                    const RationalMap& g) -> std::pair<MeasureDecision, double> {
        MeasureEqualityReport rep = measure_equality_test(f, g, c, params);
        return {rep.decision, rep.statistic};
    };
}

HeightEstimate arakelov_zhang_estimate(const RationalMap& f, const RationalMap& g, unsigned n,
                                       double target_error, unsigned degree_cap) {
    if (!(target_error > 0.0))
        throw std::invalid_argument("arakelov_zhang_estimate: target_error <= 0");
    auto fix = periodic_points(f, n, 1e-10, degree_cap);
    RationalMap fn = iterate(f, n);
    HeightContext ctx_g(g);

    unsigned green_iters = 30;
    long double total = 0.0L;
    double err = 0.0;
    for (const auto& z : fix) {
        // Try snapping to a rational periodic point for a certified height.
        bool certified = false;
        if (std::abs(z.y) > 1e-9 && std::abs(z.x / z.y) < 1e6) {
            Complex aff = z.affine();
            if (std::fabs(aff.imag()) <= 1e-7 * (1.0 + std::fabs(aff.real()))) {
                double x = aff.real();
                double rx = std::round(x * 64.0) / 64.0; // small denominators
                if (std::fabs(rx - x) <= 1e-7) {
                    Rat cand(static_cast<long>(std::llround(rx * 64.0)), 64);
                    cand.canonicalize();
                    ProjPointQ zq(cand);
                    if (fn.eval(zq) == zq) {
                        HeightEstimate h = canonical_height(ctx_g, zq, target_error);
                        total += static_cast<long double>(h.value);
                        err += h.error;
                        certified = true;
                    }
                }
            }
        } else if (z.near_infinity(1e-9)) {
            ProjPointQ inf = ProjPointQ::infinity();
            if (fn.eval(inf) == inf) {
                HeightEstimate h = canonical_height(ctx_g, inf, target_error);
                total += static_cast<long double>(h.value);
                err += h.error;
                certified = true;
            }
        }
        if (!certified) {
            // Flagged numeric surrogate: the invariant potential G_g(z, 1)
            // of the affine lift, zero on the Julia set of g.
            ProjPointC lift(z.affine());
            HeightEstimate gr = green_arch(ctx_g, lift, green_iters);
            total += static_cast<long double>(gr.value);
            err += gr.error;
        }
    }
    HeightEstimate out;
    out.value = static_cast<double>(total / static_cast<long double>(fix.size()));
    out.error = err / static_cast<double>(fix.size());
    return out;
}

} // namespace sd
