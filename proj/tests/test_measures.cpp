#include "doctest.h"

#include <cmath>

#include "oracles.hpp"
#include "sd/measures.hpp"
#include "sd/rng.hpp"

using namespace sd;

namespace {

RationalMap quad(long c0) {
    return map_from_poly({Int(c0), Int(0), Int(1)}, {Int(1)});
}

RationalMap recip_square() {
    return map_from_poly({Int(1)}, {Int(0), Int(0), Int(1)});
}

double uniform_angle_cdf(double t) { return (t + M_PI) / (2.0 * M_PI); }

} // namespace

TEST_CASE("backward_sample determinism and basic shape") {
    RationalMap sq = quad(0);
    auto mu1 = backward_sample(sq, ProjPointC(Complex(2.0)), 10, 300, 42);
    auto mu2 = backward_sample(sq, ProjPointC(Complex(2.0)), 10, 300, 42);
    REQUIRE(mu1.samples.size() == 300);
    for (size_t i = 0; i < 300; ++i) {
        CHECK(mu1.samples[i].first.x == mu2.samples[i].first.x);
        CHECK(mu1.samples[i].first.y == mu2.samples[i].first.y);
    }
    double mass = 0.0;
    for (auto& [p, w] : mu1.samples) mass += w;
    CHECK(std::fabs(mass - 1.0) < 1e-12);
    // the walk approaches the unit circle geometrically: after depth steps
    // the radius is 2^(1/2^depth)
    double band = std::pow(2.0, 1.0 / 1024.0) - 1.0;
    for (auto& [p, w] : mu1.samples)
        CHECK(std::fabs(std::abs(p.affine()) - 1.0) <= band + 1e-12);
}

TEST_CASE("single backward step is a seeded preimage choice") {
    RationalMap sq = quad(0);
    bool saw_plus = false, saw_minus = false;
    for (std::uint64_t seed = 0; seed < 24; ++seed) {
        auto mu = backward_sample(sq, ProjPointC(Complex(4.0)), 1, 1, seed);
        REQUIRE(mu.samples.size() == 1);
        Complex z = mu.samples[0].first.affine();
        CHECK(std::abs(std::abs(z) - 2.0) < 1e-12);
        if (z.real() > 0) saw_plus = true;
        if (z.real() < 0) saw_minus = true;
    }
    CHECK(saw_plus);
    CHECK(saw_minus);
}

TEST_CASE("exceptional starts are rejected") {
    RationalMap sq = quad(0);
    CHECK_THROWS_AS(backward_sample(sq, ProjPointC(Complex(0.0)), 5, 10, 1), ExceptionalStart);
    CHECK_THROWS_AS(backward_sample(sq, ProjPointC::infinity(), 5, 10, 1), ExceptionalStart);
    CHECK_NOTHROW(backward_sample(sq, ProjPointC(Complex(2.0)), 5, 10, 1));
}

TEST_CASE("sample distributions match the classical measures") {
    RationalMap sq = quad(0);
    auto mu = backward_sample(sq, ProjPointC(Complex(2.0)), 15, 3000, 7);
    std::vector<double> angles;
    for (auto& [p, w] : mu.samples) angles.push_back(std::arg(p.affine()));
    CHECK(oracle::ks_distance(angles, uniform_angle_cdf) < 0.04);

    RationalMap z2m2 = quad(-2);
    auto nu = backward_sample(z2m2, ProjPointC(Complex(5.0)), 15, 3000, 7);
    std::vector<double> xs;
    for (auto& [p, w] : nu.samples) {
        Complex z = p.affine();
        CHECK(std::fabs(z.imag()) < 1e-4); // transverse noise decays toward [-2,2]
        xs.push_back(z.real());
    }
    CHECK(oracle::ks_distance(xs, oracle::arcsine_cdf) < 0.04);
}

TEST_CASE("pushforward invariance via the energy statistic") {
    // discrete form of f_* mu_f = mu_f
    RationalMap z2m2 = quad(-2);
    auto mu = backward_sample(z2m2, ProjPointC(Complex(5.0)), 16, 1500, 11);
    EmpiricalMeasure pushed;
    pushed.samples.reserve(mu.samples.size());
    for (auto& [p, w] : mu.samples) pushed.samples.emplace_back(z2m2.eval(p), w);
    auto fresh = backward_sample(z2m2, ProjPointC(Complex(5.0)), 16, 1500, 12);
    double e = mutual_energy(pushed, fresh);
    double se = mutual_energy_se(pushed, fresh);
    CHECK(e <= 2.0 * se);
}

TEST_CASE("mutual energy identities") {
    RationalMap sq = quad(0);
    auto mu = backward_sample(sq, ProjPointC(Complex(2.0)), 12, 1200, 3);
    CHECK(mutual_energy(mu, mu) == 0.0);

    auto nu = backward_sample(sq, ProjPointC(Complex(2.0)), 12, 1200, 4);
    double e12 = mutual_energy(mu, nu);
    CHECK(e12 == mutual_energy(nu, mu)); // symmetric
    CHECK(std::fabs(e12) <= 0.05);       // same measure, independent samples
    double se = mutual_energy_se(mu, nu);
    CHECK(e12 >= -2.0 * se);

    EmpiricalMeasure small;
    small.samples.assign(50, {ProjPointC(Complex(1.0)), 1.0 / 50});
    CHECK_THROWS_AS(mutual_energy(small, mu), InsufficientSamples);
}

TEST_CASE("mutual energy against the Clausen closed form") {
    double truth = 2.0 / M_PI * oracle::clausen_pi_over_3();
    RationalMap sq = quad(0), z2m2 = quad(-2);
    auto mu = backward_sample(sq, ProjPointC(Complex(2.0)), 18, 4000, 5);
    auto nu = backward_sample(z2m2, ProjPointC(Complex(5.0)), 18, 4000, 6);
    double e = mutual_energy(mu, nu);
    CHECK(std::fabs(e - truth) < 0.05);
}

TEST_CASE("flat potentials") {
    DivisorP1 d1{{{ProjPointC(Complex(1.0)), 1}, {ProjPointC(Complex(-1.0)), -1}}};
    auto phi1 = flat_potential(d1);
    CHECK(std::fabs(phi1(ProjPointC(Complex(0.0)))) < 1e-14);

    DivisorP1 d2{{{ProjPointC(Complex(0.0)), 2}, {ProjPointC::infinity(), -2}}};
    auto phi2 = flat_potential(d2);
    CHECK(phi2(ProjPointC(Complex(3.0))) == doctest::Approx(2.0 * std::log(3.0)).epsilon(1e-12));

    DivisorP1 d3{{{ProjPointC(Complex(2.0)), 1},
                  {ProjPointC(Complex(-2.0)), 1},
                  {ProjPointC::infinity(), -2}}};
    auto phi3 = flat_potential(d3);
    CHECK(phi3(ProjPointC(Complex(0.0, 1.0))) == doctest::Approx(std::log(5.0)).epsilon(1e-12));

    DivisorP1 bad{{{ProjPointC(Complex(1.0)), 1}}};
    CHECK_THROWS_AS(flat_potential(bad), DegreeNonZero);

    // additivity
    DivisorP1 sum{{{ProjPointC(Complex(1.0)), 1},
                   {ProjPointC(Complex(-1.0)), -1},
                   {ProjPointC(Complex(0.0)), 2},
                   {ProjPointC::infinity(), -2}}};
    auto phis = flat_potential(sum);
    for (double t : {0.3, 1.7, -2.4}) {
        ProjPointC z{Complex(t, 0.4)};
        CHECK(phis(z) == doctest::Approx(phi1(z) + phi2(z)).epsilon(1e-12));
    }
}

TEST_CASE("curve pullbacks transport mass") {
    RationalMap sq = quad(0);
    auto mu = backward_sample(sq, ProjPointC(Complex(2.0)), 12, 500, 9);

    // diagonal: the pullback is the measure itself
    auto nu = curve_pullback_sample(CurveP1xP1::diagonal(), mu, 1);
    REQUIRE(nu.samples.size() == mu.samples.size());
    double mass = 0.0;
    for (auto& [pq, w] : nu.samples) {
        CHECK(chordal(pq.first, pq.second) < 1e-8);
        mass += w;
    }
    CHECK(std::fabs(mass - 1.0) < 1e-12);

    // graph of z + 1: second marginal is the translated near-circle
    CurveP1xP1 graph = CurveP1xP1::graph({Int(1), Int(1)}, {Int(1)});
    auto trans = curve_pullback_sample(graph, mu, 1);
    for (auto& [pq, w] : trans.samples)
        CHECK(std::fabs(std::abs(pq.second.affine() - Complex(1.0)) - 1.0) < 1e-3);

    // pi_1 of a vertical curve is the one that fails dominance
    CHECK_THROWS_AS(
        curve_pullback_sample(CurveP1xP1::vertical(ProjPointQ(Int(1), Int(1))), mu, 1),
        NonDominant);
}

TEST_CASE("measure equality dichotomy") {
    MeasureParams p;
    p.width = 2500;
    p.depth = 16;
    p.seed = 77;
    CurveP1xP1 diag = CurveP1xP1::diagonal();

    auto same = measure_equality_test(quad(0), quad(0), diag, p);
    CHECK(same.decision == MeasureDecision::Equal);

    auto diff = measure_equality_test(quad(0), quad(-2), diag, p);
    CHECK(diff.decision == MeasureDecision::NotEqual);
    double truth = 2.0 / M_PI * oracle::clausen_pi_over_3();
    CHECK(std::fabs(diff.statistic - truth) < 0.06);

    // z^2 and 1/z^2 share the circle measure
    auto shared = measure_equality_test(quad(0), recip_square(), diag, p);
    CHECK(shared.decision == MeasureDecision::Equal);
}

TEST_CASE("self-comparison is Equal for random quadratics") {
    Rng rng(2718);
    MeasureParams p;
    p.width = 1000;
    p.depth = 14;
    p.bootstrap = 60;
    p.subsample = 200;
    CurveP1xP1 diag = CurveP1xP1::diagonal();
    int done = 0;
    while (done < 10) {
        std::vector<Int> a(3), b(3);
        for (auto& x : a) x = static_cast<long>(rng.below(9)) - 4;
        for (auto& x : b) x = static_cast<long>(rng.below(9)) - 4;
        try {
            RationalMap f(BinaryForm(2, a), BinaryForm(2, b));
            p.seed = 1000 + done;
            auto rep = measure_equality_test(f, f, diag, p);
            CHECK(rep.decision == MeasureDecision::Equal);
            ++done;
        } catch (const DegenerateMap&) {
        } catch (const ExceptionalStart&) {
        }
    }
}

TEST_CASE("arakelov-zhang estimates") {
    RationalMap sq = quad(0), z2m2 = quad(-2);
    auto zero = arakelov_zhang_estimate(sq, sq, 6, 1e-6);
    CHECK(std::fabs(zero.value) <= zero.error + 1e-6);

    auto zero2 = arakelov_zhang_estimate(z2m2, z2m2, 6, 1e-6);
    CHECK(std::fabs(zero2.value) <= zero2.error + 0.01);

    // quadrature oracle: mean of the z^2-2 local height over the circle
    HeightContext ctx(z2m2);
    double quad_mean = 0.0;
    const int nodes = 2048;
    for (int k = 0; k < nodes; ++k) {
        double th = 2.0 * M_PI * (k + 0.5) / nodes;
        ProjPointC z{Complex(std::cos(th), std::sin(th)), Complex(1.0)};
        quad_mean += green_arch(ctx, z, 30).value;
    }
    quad_mean /= nodes;
    CHECK(quad_mean > 0.1); // the pairing is visibly positive

    auto e6 = arakelov_zhang_estimate(sq, z2m2, 6, 1e-6);
    auto e8 = arakelov_zhang_estimate(sq, z2m2, 8, 1e-6);
    CHECK(std::fabs(e6.value - quad_mean) < 0.05);
    CHECK(std::fabs(e8.value - quad_mean) < 0.05);
    CHECK(std::fabs(e6.value - e8.value) < 0.05);
}
