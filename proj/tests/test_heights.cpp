#include "doctest.h"

#include <cmath>

#include "oracles.hpp"
#include "sd/heights.hpp"
#include "sd/rng.hpp"

using namespace sd;

namespace {

RationalMap quad(long c0) {
    return map_from_poly({Int(c0), Int(0), Int(1)}, {Int(1)});
}

RationalMap random_quad(Rng& rng, long span) {
    for (;;) {
        std::vector<Int> a(3), b(3);
        for (auto& x : a) x = static_cast<long>(rng.below(2 * span + 1)) - span;
        for (auto& x : b) x = static_cast<long>(rng.below(2 * span + 1)) - span;
        try {
            return RationalMap(BinaryForm(2, a), BinaryForm(2, b));
        } catch (const DegenerateMap&) {
        }
    }
}

} // namespace

TEST_CASE("green_arch exactness for the power map") {
    RationalMap sq = quad(0);
    for (unsigned n : {1u, 5u, 20u}) {
        auto g = green_arch(sq, ProjPointC(Complex(2.0), Complex(1.0)), n);
        CHECK(g.error == 0.0);
        CHECK(g.value == doctest::Approx(std::log(2.0)).epsilon(1e-12));
        auto g1 = green_arch(sq, ProjPointC(Complex(1.0), Complex(1.0)), n);
        CHECK(g1.error == 0.0);
        CHECK(std::fabs(g1.value) < 1e-15);
    }
}

TEST_CASE("green_arch against the Chebyshev closed form") {
    RationalMap z2m2 = quad(-2);
    auto g = green_arch(z2m2, ProjPointC(Complex(3.0), Complex(1.0)), 30);
    double truth = oracle::chebyshev_height_of_3();
    CHECK(std::fabs(g.value - truth) <= g.error + 1e-12);
    CHECK(g.error < 1e-8);
}

TEST_CASE("unit-sphere validation of the c+/c- bounds") {
    // The certificates assume c- <= log||F(u)|| - d log||u|| <= c+ on the
    // max-norm sphere; sample it densely before trusting them.
    Rng rng(31);
    for (int m = 0; m < 6; ++m) {
        RationalMap f = random_quad(rng, 4);
        HeightContext ctx(f);
        for (int s = 0; s < 400; ++s) {
            double th1 = 6.2831853 * rng.uniform(), th2 = 6.2831853 * rng.uniform();
            double r = rng.uniform();
            Complex x, y;
            if (s % 2 == 0) {
                x = Complex(std::cos(th1), std::sin(th1));
                y = r * Complex(std::cos(th2), std::sin(th2));
            } else {
                x = r * Complex(std::cos(th1), std::sin(th1));
                y = Complex(std::cos(th2), std::sin(th2));
            }
            double v =
                std::log(std::max(std::abs(f.num().eval(x, y)), std::abs(f.den().eval(x, y))));
            CHECK(v <= ctx.c_plus() + 1e-9);
            CHECK(v >= ctx.c_minus() - 1e-9);
        }
    }
}

TEST_CASE("green_nonarch good reduction is exactly zero") {
    RationalMap z2p1 = quad(1);
    auto g = green_nonarch(z2p1, ProjPointQ(Int(1), Int(1)), Int(5), 10);
    CHECK(g.value == 0.0);
    CHECK(g.error == 0.0);

    // orbit of 0 under z^2-2 is preperiodic; the lift has unit resultant so
    // every prime is good
    RationalMap z2m2 = quad(-2);
    auto g2 = green_nonarch(z2m2, ProjPointQ(Int(0), Int(1)), Int(2), 10);
    CHECK(g2.value == 0.0);
    CHECK(g2.error == 0.0);

    RationalMap sq = quad(0);
    auto g3 = green_nonarch(sq, ProjPointQ(Int(1), Int(2)), Int(2), 10);
    CHECK(g3.value == 0.0);
    CHECK(g3.error == 0.0);
}

TEST_CASE("good-reduction primes contribute exactly zero on random triples") {
    Rng rng(97);
    const long primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29};
    int done = 0;
    while (done < 20) {
        RationalMap f = random_quad(rng, 4);
        Int p(primes[rng.below(10)]);
        if (mpz_divisible_p(f.res().get_mpz_t(), p.get_mpz_t())) continue;
        Int a(static_cast<long>(rng.below(31)) - 15);
        Int b(static_cast<long>(rng.below(15)) + 1);
        ProjPointQ z(a, b);
        auto g = green_nonarch(f, z, p, 8);
        CHECK(g.value == 0.0);
        CHECK(g.error == 0.0);
        // direct exact iteration: the gcd of every iterate stays prime to p
        Int x = z.x, y = z.y;
        for (int k = 0; k < 6; ++k) {
            Int wx = f.num().eval(x, y), wy = f.den().eval(x, y);
            Int gg = gcd(abs(wx), abs(wy));
            CHECK_FALSE(mpz_divisible_p(gg.get_mpz_t(), p.get_mpz_t()));
            if (gg > 1) {
                wx /= gg;
                wy /= gg;
            }
            x = wx;
            y = wy;
        }
        ++done;
    }
}

TEST_CASE("green_nonarch matches direct exact iteration at a bad prime") {
    // f = 2z^2 + 1: lift (2x^2 + y^2, y^2), resultant 4, so p = 2 is bad.
    RationalMap f = map_from_poly({Int(1), Int(0), Int(2)}, {Int(1)});
    REQUIRE(abs(f.res()) == 4);

    auto direct = [&](ProjPointQ z, unsigned n) {
        // exact integer iteration, stripping full gcd, summing d^-(k+1) e_k
        Int x = z.x, y = z.y;
        long double acc = 0.0L, dpow = 1.0L;
        for (unsigned k = 0; k < n; ++k) {
            Int wx = f.num().eval(x, y), wy = f.den().eval(x, y);
            Int g = gcd(abs(wx), abs(wy));
            unsigned long e = g == 0 ? 0 : valuation(g, Int(2));
            if (g > 1) {
                wx /= g;
                wy /= g;
            }
            x = wx;
            y = wy;
            dpow *= 2.0L;
            acc -= static_cast<long double>(e) * 0.69314718055994530942L / dpow;
        }
        return static_cast<double>(acc);
    };

    for (auto& z : {ProjPointQ(Int(1), Int(1)), ProjPointQ(Int(1), Int(2)),
                    ProjPointQ(Int(3), Int(4)), ProjPointQ(Int(5), Int(6))}) {
        auto g = green_nonarch(f, z, Int(2), 12);
        double d = direct(z, 12);
        CHECK(g.value == doctest::Approx(d).epsilon(1e-12));
        CHECK(g.error > 0.0);
        CHECK(g.error < 1e-3);
    }
}

TEST_CASE("canonical height of the power map is the naive height, exactly certified") {
    RationalMap sq = quad(0);
    Rng rng(41);
    for (int t = 0; t < 40; ++t) {
        Int p(static_cast<long>(rng.below(2000001)) - 1000000);
        Int q(static_cast<long>(rng.below(1000000)) + 1);
        if (p == 0) p = 7;
        ProjPointQ z(p, q);
        auto h = canonical_height(sq, z, 1e-9);
        CHECK(h.error == 0.0);
        CHECK(std::fabs(h.value - naive_height(z)) < 1e-9);
    }
    auto h1 = canonical_height(sq, ProjPointQ(Int(1), Int(1)), 1e-9);
    CHECK(h1.value == 0.0);
    CHECK(h1.error == 0.0);
    auto h32 = canonical_height(sq, ProjPointQ(Rat(3, 2)), 1e-9);
    CHECK(h32.value == doctest::Approx(std::log(3.0)).epsilon(1e-12));
}

TEST_CASE("canonical height Chebyshev closed form") {
    RationalMap z2m2 = quad(-2);
    auto h = canonical_height(z2m2, ProjPointQ(Int(3), Int(1)), 1e-6);
    CHECK(h.error <= 1e-6);
    CHECK(std::fabs(h.value - oracle::chebyshev_height_of_3()) <= h.error + 1e-9);
}

TEST_CASE("place decomposition sums exactly and good primes are absent") {
    RationalMap f = map_from_poly({Int(1), Int(0), Int(2)}, {Int(1)});
    auto h = canonical_height(f, ProjPointQ(Int(3), Int(4)), 1e-7);
    double sum = 0.0;
    for (auto& [pl, v] : h.place_breakdown) sum += v;
    CHECK(sum == h.value);
    REQUIRE(h.place_breakdown.size() == 2); // arch + p=2
    CHECK(h.place_breakdown[0].first.archimedean);
    CHECK(h.place_breakdown[1].first.prime == 2);
}

TEST_CASE("split heights") {
    RationalMap sq = quad(0), z2m2 = quad(-2);
    auto h = canonical_height_split(
        {sq, sq}, {ProjPointQ(Int(2), Int(1)), ProjPointQ(Int(3), Int(1))}, 1e-9);
    CHECK(h.value == doctest::Approx(std::log(2.0) + std::log(3.0)).epsilon(1e-12));

    auto h2 = canonical_height_split(
        {sq, z2m2}, {ProjPointQ(Int(1), Int(1)), ProjPointQ(Int(0), Int(1))}, 1e-7);
    CHECK(std::fabs(h2.value) <= h2.error + 1e-12);

    auto h3 = canonical_height_split(
        {z2m2, z2m2}, {ProjPointQ(Int(3), Int(1)), ProjPointQ(Int(3), Int(1))}, 1e-7);
    CHECK(std::fabs(h3.value - 2.0 * oracle::chebyshev_height_of_3()) <= h3.error + 1e-9);
}

TEST_CASE("naive height") {
    CHECK(naive_height(ProjPointQ(Int(3), Int(2))) == doctest::Approx(std::log(3.0)));
    CHECK(naive_height(ProjPointQ(Int(1), Int(1))) == 0.0);
    CHECK(naive_height(ProjPointQ(Int(7), Int(12))) == doctest::Approx(std::log(12.0)));
}

TEST_CASE("height difference bound dominates sampled |h_hat - h|") {
    Rng rng(59);
    for (long c : {0L, -2L, 1L}) {
        RationalMap f = quad(c);
        double bound = height_difference_bound(f);
        if (c == 0) CHECK(bound == 0.0);
        double worst = 0.0;
        for (int t = 0; t < 1000; ++t) {
            Int p(static_cast<long>(rng.below(401)) - 200);
            Int q(static_cast<long>(rng.below(200)) + 1);
            if (p == 0) continue;
            ProjPointQ z(p, q);
            auto h = canonical_height(f, z, 1e-8);
            worst = std::max(worst, std::fabs(h.value - naive_height(z)) - h.error);
        }
        CHECK(worst <= bound + 1e-9);
    }
}

TEST_CASE("functional equation h(f(z)) = d h(z) within certificates") {
    Rng rng(71);
    for (int tested = 0; tested < 8; ++tested) {
        RationalMap f = random_quad(rng, 5);
        for (int t = 0; t < 10; ++t) {
            Int p(static_cast<long>(rng.below(41)) - 20);
            Int q(static_cast<long>(rng.below(20)) + 1);
            ProjPointQ z(p, q);
            auto hz = canonical_height(f, z, 1e-7);
            auto hfz = canonical_height(f, f.eval(z), 1e-7);
            CHECK(std::fabs(hfz.value - 2.0 * hz.value) <= hfz.error + 2.0 * hz.error + 1e-9);
        }
    }
}

TEST_CASE("monotone certification in the iteration depth") {
    RationalMap z2m2 = quad(-2);
    HeightContext ctx(z2m2);
    double prev = 1e300;
    for (unsigned n = 1; n <= 24; ++n) {
        auto g = green_arch(ctx, ProjPointC(Complex(0.3, 0.7), Complex(1.0)), n);
        CHECK(g.error <= prev);
        prev = g.error;
    }
}

TEST_CASE("nonnegativity of the canonical height") {
    Rng rng(83);
    for (int t = 0; t < 30; ++t) {
        RationalMap f = random_quad(rng, 3);
        Int p(static_cast<long>(rng.below(21)) - 10);
        Int q(static_cast<long>(rng.below(10)) + 1);
        if (p == 0) p = 1;
        ProjPointQ z(p, q);
        auto h = canonical_height(f, z, 1e-6);
        CHECK(h.value >= -h.error - 1e-9);
    }
}
