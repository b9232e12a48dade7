#include "doctest.h"

#include <cmath>

#include "oracles.hpp"
#include "sd/dynamics.hpp"
#include "sd/rng.hpp"

using namespace sd;

namespace {

RationalMap quad(long c0) {
    return map_from_poly({Int(c0), Int(0), Int(1)}, {Int(1)});
}

RationalMap cube() { // z^3
    return map_from_poly({Int(0), Int(0), Int(0), Int(1)}, {Int(1)});
}

RationalMap cheb3() { // z^3 - 3z
    return map_from_poly({Int(0), Int(-3), Int(0), Int(1)}, {Int(1)});
}

RationalMap lattes_i() { // duplication on y^2 = x^3 + x
    return map_from_poly({Int(1), Int(0), Int(-2), Int(0), Int(1)},
                         {Int(0), Int(4), Int(0), Int(4)});
}

bool contains(const std::vector<ProjPointC>& pts, const ProjPointC& p, double tol = 1e-7) {
    for (const auto& q : pts)
        if (chordal(p, q) <= tol) return true;
    return false;
}

} // namespace

TEST_CASE("orbit records") {
    RationalMap z2m1 = quad(-1);
    OrbitRecord rec = orbit(z2m1, ProjPointQ(Int(0), Int(1)), 100, 50.0);
    CHECK(rec.verdict == OrbitRecord::Verdict::Preperiodic);
    CHECK(rec.tail == 0);
    CHECK(rec.cycle == 2); // 0 <-> -1
    CHECK(rec.points[rec.tail + *rec.cycle] == rec.points[rec.tail]);

    RationalMap z2m2 = quad(-2);
    rec = orbit(z2m2, ProjPointQ(Int(0), Int(1)), 100, 50.0);
    CHECK(rec.verdict == OrbitRecord::Verdict::Preperiodic);
    CHECK(rec.tail == 2);
    CHECK(rec.cycle == 1); // 0 -> -2 -> 2 -> 2

    RationalMap z2p1 = quad(1);
    rec = orbit(z2p1, ProjPointQ(Int(1), Int(1)),
                100, height_difference_bound(z2p1) + 1.0);
    CHECK(rec.verdict == OrbitRecord::Verdict::Escaping);
}

TEST_CASE("exact preperiodicity agrees with brute force") {
    RationalMap sq = quad(0), z2m1 = quad(-1), z2m2 = quad(-2);
    CHECK(is_preperiodic_exact(sq, ProjPointQ(Int(1), Int(1))));
    CHECK_FALSE(is_preperiodic_exact(z2m2, ProjPointQ(Int(3), Int(1))));
    CHECK(is_preperiodic_exact(z2m1, ProjPointQ(Int(-1), Int(1))));

    Rng rng(3);
    for (int t = 0; t < 60; ++t) {
        long c = static_cast<long>(rng.below(5)) - 3;
        RationalMap f = quad(c);
        Int p(static_cast<long>(rng.below(9)) - 4);
        Int q(static_cast<long>(rng.below(4)) + 1);
        ProjPointQ z(p, q);
        CHECK(is_preperiodic_exact(f, z) == oracle::brute_is_preperiodic(f, z));
    }
}

TEST_CASE("preperiodic points have zero canonical height and conversely") {
    // sampled preperiodic Q-points found via rational roots of f^(m+n) - f^m
    for (long c : {0L, -1L, -2L}) {
        RationalMap f = quad(c);
        HeightContext ctx(f);
        int found = 0;
        for (unsigned m = 0; m <= 2; ++m)
            for (unsigned n = 1; n <= 3; ++n) {
                RationalMap fmn = iterate(f, m + n);
                BinaryForm pm = m == 0 ? BinaryForm::monomial_x(1) : iterate(f, m).num();
                BinaryForm qm = m == 0 ? BinaryForm::monomial_y(1) : iterate(f, m).den();
                BinaryForm form = fmn.num() * qm - pm * fmn.den();
                for (const Rat& r : rational_roots_int(form.coeffs())) {
                    ProjPointQ z(r);
                    CHECK(is_preperiodic_exact(ctx, z));
                    auto h = canonical_height(ctx, z, 1e-9);
                    CHECK(std::fabs(h.value) <= h.error + 1e-9);
                    ++found;
                }
            }
        CHECK(found > 0);
    }
}

TEST_CASE("periodic point counts and values") {
    RationalMap sq = quad(0);
    auto fix1 = periodic_points(sq, 1);
    REQUIRE(fix1.size() == 3); // 0, infinity, 1
    CHECK(contains(fix1, ProjPointC(Complex(0.0))));
    CHECK(contains(fix1, ProjPointC::infinity()));
    CHECK(contains(fix1, ProjPointC(Complex(1.0))));

    auto fix2 = periodic_points(sq, 2);
    REQUIRE(fix2.size() == 5); // 0, infinity, cube roots of unity
    CHECK(contains(fix2, ProjPointC(Complex(-0.5, std::sqrt(3.0) / 2))));

    RationalMap z2m1 = quad(-1);
    auto f1 = periodic_points(z2m1, 1);
    REQUIRE(f1.size() == 3);
    double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    CHECK(contains(f1, ProjPointC::infinity()));
    CHECK(contains(f1, ProjPointC(Complex(phi, 0.0))));
    CHECK(contains(f1, ProjPointC(Complex(1.0 - phi, 0.0))));

    // counted with multiplicity for every n under the cap
    for (unsigned n = 1; n <= 4; ++n)
        CHECK(periodic_points(quad(-2), n).size() == (1u << n) + 1);
}

TEST_CASE("preperiodic point enumeration") {
    RationalMap sq = quad(0);
    auto pts = preperiodic_points(sq, 1, 1);
    // roots of x^2 y^2 (x^2 - y^2): 0, infinity, +-1 after dedup
    REQUIRE(pts.size() == 4);
    CHECK(contains(pts, ProjPointC(Complex(0.0))));
    CHECK(contains(pts, ProjPointC::infinity()));
    CHECK(contains(pts, ProjPointC(Complex(1.0))));
    CHECK(contains(pts, ProjPointC(Complex(-1.0))));
    // i enters at m = 2
    auto deeper = preperiodic_points(sq, 2, 1);
    CHECK(contains(deeper, ProjPointC(Complex(0.0, 1.0))));

    RationalMap z2m2 = quad(-2);
    auto p01 = preperiodic_points(z2m2, 0, 1);
    REQUIRE(p01.size() == 3); // infinity, 2, -1
    CHECK(contains(p01, ProjPointC::infinity()));
    CHECK(contains(p01, ProjPointC(Complex(2.0))));
    CHECK(contains(p01, ProjPointC(Complex(-1.0))));

    // m = 0 consistency with periodic_points, any map
    auto a = preperiodic_points(z2m2, 0, 2);
    auto b = periodic_points(z2m2, 2);
    for (const auto& q : b) CHECK(contains(a, q));
}

TEST_CASE("residual bound on preperiodic outputs") {
    // |f^(m+n)(z) - f^m(z)| small in the spherical metric
    RationalMap f = quad(-1);
    for (unsigned m : {0u, 1u, 2u})
        for (unsigned n : {1u, 2u}) {
            for (const auto& z : preperiodic_points(f, m, n, 1e-8)) {
                ProjPointC a = z, b = z;
                for (unsigned k = 0; k < m + n; ++k) a = f.eval(a);
                for (unsigned k = 0; k < m; ++k) b = f.eval(b);
                CHECK(chordal(a, b) <= 1e-7);
            }
        }
}

TEST_CASE("critical points") {
    auto c1 = critical_points(quad(0));
    REQUIRE(c1.size() == 2);
    CHECK(contains(c1, ProjPointC(Complex(0.0))));
    CHECK(contains(c1, ProjPointC::infinity()));

    auto c2 = critical_points(quad(-2));
    REQUIRE(c2.size() == 2);
    CHECK(contains(c2, ProjPointC(Complex(0.0))));
    CHECK(contains(c2, ProjPointC::infinity()));

    auto c3 = critical_points(lattes_i());
    CHECK(c3.size() == 6); // 2d - 2 with multiplicity
    CHECK(contains(c3, ProjPointC(Complex(1.0))));
    CHECK(contains(c3, ProjPointC(Complex(-1.0))));
}

TEST_CASE("pcf screening") {
    CHECK(is_pcf(quad(0)) == Tristate::True);
    CHECK(is_pcf(quad(-2)) == Tristate::True);
    CHECK(is_pcf(quad(1)) == Tristate::False); // 0 -> 1 -> 2 -> 5 escapes
    CHECK(is_pcf(quad(-1)) == Tristate::True); // basilica
    CHECK(is_pcf(lattes_i()) == Tristate::True);
}

TEST_CASE("classification of the worked examples") {
    CHECK(classify_exceptional(cube()).tag == ExceptionalClass::Tag::PowerConjugate);
    CHECK(classify_exceptional(quad(0)).tag == ExceptionalClass::Tag::PowerConjugate);
    CHECK(classify_exceptional(quad(-2)).tag == ExceptionalClass::Tag::ChebyshevConjugate);
    CHECK(classify_exceptional(cheb3()).tag == ExceptionalClass::Tag::ChebyshevConjugate);
    CHECK(classify_exceptional(lattes_i()).tag == ExceptionalClass::Tag::LattesLike);
    CHECK(classify_exceptional(quad(1)).tag == ExceptionalClass::Tag::Ordinary);
    // PCF but not exceptional; the exact portrait certifies ordinariness
    CHECK(classify_exceptional(quad(-1)).tag == ExceptionalClass::Tag::Ordinary);

    // conjugated power map (z-1)^2 + 1
    RationalMap conj = map_from_poly({Int(2), Int(-2), Int(1)}, {Int(1)});
    CHECK(classify_exceptional(conj).tag == ExceptionalClass::Tag::PowerConjugate);

    // negated Chebyshev portrait
    RationalMap neg_cheb = map_from_poly({Int(2), Int(0), Int(-1)}, {Int(1)});
    CHECK(classify_exceptional(neg_cheb).tag == ExceptionalClass::Tag::ChebyshevConjugate);
}

TEST_CASE("random non-PCF quadratics classify Ordinary") {
    Rng rng(17);
    int done = 0;
    while (done < 10) {
        std::vector<Int> a(3), b(3);
        for (auto& x : a) x = static_cast<long>(rng.below(9)) - 4;
        for (auto& x : b) x = static_cast<long>(rng.below(9)) - 4;
        try {
            RationalMap f(BinaryForm(2, a), BinaryForm(2, b));
            if (is_pcf(f) != Tristate::False) continue;
            CHECK(classify_exceptional(f).tag == ExceptionalClass::Tag::Ordinary);
            ++done;
        } catch (const DegenerateMap&) {
        }
    }
}

TEST_CASE("exceptional point detection") {
    CHECK(is_exceptional_point(quad(0), ProjPointQ(Int(0), Int(1))));
    CHECK(is_exceptional_point(quad(0), ProjPointQ::infinity()));
    CHECK_FALSE(is_exceptional_point(quad(0), ProjPointQ(Int(1), Int(1))));
    CHECK(is_exceptional_point(quad(-2), ProjPointQ::infinity()));
    CHECK_FALSE(is_exceptional_point(quad(-2), ProjPointQ(Int(2), Int(1))));
    CHECK_FALSE(is_exceptional_point(lattes_i(), ProjPointQ::infinity()));
}
