#include "doctest.h"

#include <algorithm>
#include <complex>

#include "oracles.hpp"
#include "sd/binary_form.hpp"
#include "sd/errors.hpp"
#include "sd/rational_map.hpp"
#include "sd/rng.hpp"
#include "sd/roots.hpp"

using namespace sd;

namespace {

BinaryForm form(std::vector<long> asc) {
    std::vector<Int> c(asc.size());
    for (size_t i = 0; i < asc.size(); ++i) c[i] = asc[i];
    return BinaryForm(static_cast<unsigned>(asc.size() - 1), std::move(c));
}

RationalMap quad(long c0) { // z^2 + c0
    return map_from_poly({Int(c0), Int(0), Int(1)}, {Int(1)});
}

} // namespace

TEST_CASE("point normalization") {
    ProjPointQ a(Int(6), Int(-4));
    CHECK(a.x == -3);
    CHECK(a.y == 2);
    ProjPointQ inf(Int(-5), Int(0));
    CHECK(inf.x == 1);
    CHECK(inf.y == 0);
    CHECK(inf.is_infinity());
    CHECK(ProjPointQ(Rat(3, 2)) == ProjPointQ(Int(3), Int(2)));
    CHECK_THROWS(ProjPointQ(Int(0), Int(0)));
}

TEST_CASE("complex point band") {
    ProjPointC p(Complex(1024.0, 0.0), Complex(1.0, 0.0));
    p.renormalize();
    CHECK(std::max(std::abs(p.x), std::abs(p.y)) <= 2.0);
    CHECK(std::max(std::abs(p.x), std::abs(p.y)) >= 0.5);
    CHECK(std::abs(p.affine() - Complex(1024.0, 0.0)) < 1e-9);
}

TEST_CASE("resultant matches the Sylvester determinant oracle") {
    auto x2 = BinaryForm::monomial_x(2);
    auto y2 = BinaryForm::monomial_y(2);
    CHECK(resultant(x2, y2) == 1);

    // z^2 - 2 over 1, homogenized
    BinaryForm p = form({-2, 0, 1}), q = form({1, 0, 0});
    Int expect = oracle::sylvester_oracle(p.coeffs(), 2, q.coeffs(), 2);
    CHECK(resultant(p, q) == expect);
    CHECK(expect == 1); // the 4x4 determinant expands to 1

    // (x^2 + y^2, x y): +-1 up to the fixed sign convention
    BinaryForm r = form({1, 0, 1}), s = form({0, 1, 0});
    Int rs = resultant(r, s);
    CHECK(rs == oracle::sylvester_oracle(r.coeffs(), 2, s.coeffs(), 2));
    CHECK(abs(rs) == 1);

    // random degree-2 pairs against the oracle
    Rng rng(7);
    for (int t = 0; t < 30; ++t) {
        std::vector<Int> a(3), b(3);
        for (auto& c : a) c = static_cast<long>(rng.below(11)) - 5;
        for (auto& c : b) c = static_cast<long>(rng.below(11)) - 5;
        CHECK(sylvester_resultant(a, 2, b, 2) == oracle::sylvester_oracle(a, 2, b, 2));
    }
}

TEST_CASE("normalize_lift") {
    RationalMap f = normalize_lift(form({1, 0, 1}), form({1, 0, 0})); // z^2 + 1
    CHECK(f.degree() == 2);
    CHECK(f.res() == 1);

    RationalMap g = normalize_lift(BinaryForm::monomial_x(2), BinaryForm::monomial_y(2));
    CHECK(g.res() == 1);

    CHECK_THROWS_AS(normalize_lift(form({-1, 0, 1}), form({-1, 0, 1})), DegenerateMap);
    CHECK_THROWS_AS(normalize_lift(form({0, 1}), form({1, 0})), DegenerateMap); // degree 1

    // joint content is stripped
    RationalMap h = normalize_lift(form({2, 0, 2}), form({2, 0, 0}));
    CHECK(h.num().coeff(0) == 1);
    CHECK(h.den().coeff(0) == 1);
}

TEST_CASE("eval_map") {
    RationalMap sq = quad(0);
    CHECK(sq.eval(ProjPointQ(Int(2), Int(1))) == ProjPointQ(Int(4), Int(1)));
    RationalMap z2m2 = quad(-2);
    CHECK(z2m2.eval(ProjPointQ(Int(0), Int(1))) == ProjPointQ(Int(-2), Int(1)));
    RationalMap z2p1 = quad(1);
    CHECK(z2p1.eval(ProjPointQ::infinity()) == ProjPointQ::infinity());

    // normalized output: gcd stripped, sign fixed; renormalizing is a no-op
    ProjPointQ img = sq.eval(ProjPointQ(Int(2), Int(4)));
    CHECK(img == ProjPointQ(Int(1), Int(4)));
    CHECK(ProjPointQ(img.x, img.y) == img);
    ProjPointQ img2 = z2m2.eval(ProjPointQ(Int(-6), Int(4)));
    CHECK(ProjPointQ(img2.x, img2.y) == img2);

    ProjPointC c = z2m2.eval(ProjPointC(Complex(3.0, 0.0)));
    CHECK(std::abs(c.affine() - Complex(7.0, 0.0)) < 1e-12);
}

TEST_CASE("compose and iterate") {
    RationalMap sq = quad(0);
    RationalMap it3 = iterate(sq, 3);
    CHECK(it3.degree() == 8);
    CHECK(it3.num() == BinaryForm::monomial_x(8));
    CHECK(it3.den() == BinaryForm::monomial_y(8));

    // compose(z^2-2, z^2-2) = z^4 - 4 z^2 + 2, expanded by hand
    RationalMap z2m2 = quad(-2);
    RationalMap c = compose(z2m2, z2m2);
    CHECK(c.num() == form({2, 0, -4, 0, 1}));
    CHECK(c.den() == form({1, 0, 0, 0, 0}));

    CHECK(iterate(z2m2, 1) == z2m2);

    CHECK_THROWS_AS(iterate(z2m2, 12, 64), BudgetExceeded);
}

TEST_CASE("composition is associative after normalization") {
    Rng rng(19);
    int done = 0;
    while (done < 5) {
        std::vector<Int> a(3), b(3), c(3), d(3), e(3), g(3);
        for (auto* v : {&a, &b, &c, &d, &e, &g})
            for (auto& x : *v) x = static_cast<long>(rng.below(5)) - 2;
        try {
            RationalMap f1(BinaryForm(2, a), BinaryForm(2, b));
            RationalMap f2(BinaryForm(2, c), BinaryForm(2, d));
            RationalMap f3(BinaryForm(2, e), BinaryForm(2, g));
            CHECK(compose(compose(f1, f2), f3) == compose(f1, compose(f2, f3)));
            ++done;
        } catch (const DegenerateMap&) {
        }
    }
}

TEST_CASE("composition resultant law") {
    // Res(F o G) = Res(F)^(deg G) * Res(G)^(deg F ^ 2) up to sign
    Rng rng(11);
    int checked = 0;
    while (checked < 8) {
        std::vector<Int> a(3), b(3), c(3), d(3);
        for (auto* v : {&a, &b, &c, &d})
            for (auto& x : *v) x = static_cast<long>(rng.below(7)) - 3;
        try {
            RationalMap f = normalize_lift(BinaryForm(2, a), BinaryForm(2, b));
            RationalMap g = normalize_lift(BinaryForm(2, c), BinaryForm(2, d));
            RationalMap fg = compose(f, g);
            Int law = pow(f.res(), 2) * pow(g.res(), 4);
            CHECK(abs(fg.res()) == abs(law));
            ++checked;
        } catch (const DegenerateMap&) {
            continue;
        }
    }
}

TEST_CASE("cofactor identities behind the escape-rate bounds") {
    Rng rng(13);
    for (int t = 0; t < 6; ++t) {
        std::vector<Int> a(4), b(4);
        for (auto& x : a) x = static_cast<long>(rng.below(9)) - 4;
        for (auto& x : b) x = static_cast<long>(rng.below(9)) - 4;
        BinaryForm p(3, a), q(3, b);
        if (resultant(p, q) == 0) continue;
        auto rc = resultant_cofactors(p, q);
        BinaryForm lhs_y = rc.ay * p + rc.by * q;
        BinaryForm lhs_x = rc.ax * p + rc.bx * q;
        CHECK(lhs_y == BinaryForm::monomial_y(5).scaled(rc.res));
        CHECK(lhs_x == BinaryForm::monomial_x(5).scaled(rc.res));
    }
}

TEST_CASE("poly_roots_complex on closed forms") {
    auto near = [](Complex a, Complex b) { return std::abs(a - b) < 1e-8; };

    auto r1 = poly_roots_complex({Complex(-1), Complex(0), Complex(1)}); // z^2 - 1
    REQUIRE(r1.size() == 2);
    CHECK(near(r1[0], Complex(-1)));
    CHECK(near(r1[1], Complex(1)));

    auto r2 = poly_roots_complex({Complex(-1), Complex(0), Complex(0), Complex(1)}); // z^3 - 1
    REQUIRE(r2.size() == 3);
    bool has_one = false, has_omega = false, has_omegabar = false;
    for (auto z : r2) {
        if (near(z, Complex(1))) has_one = true;
        if (near(z, Complex(-0.5, std::sqrt(3.0) / 2))) has_omega = true;
        if (near(z, Complex(-0.5, -std::sqrt(3.0) / 2))) has_omegabar = true;
    }
    CHECK(has_one);
    CHECK(has_omega);
    CHECK(has_omegabar);

    // z^2 - z - 1: golden ratio pair from the quadratic formula
    double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    auto r3 = poly_roots_complex({Complex(-1), Complex(-1), Complex(1)});
    REQUIRE(r3.size() == 2);
    CHECK(near(r3[0], Complex(1.0 - phi)));
    CHECK(near(r3[1], Complex(phi)));
}

TEST_CASE("root finder reconstruction property") {
    Rng rng(101);
    for (int t = 0; t < 12; ++t) {
        unsigned deg = 3 + static_cast<unsigned>(rng.below(10)); // up to 12
        // well-separated roots on a logarithmic annulus
        std::vector<Complex> roots;
        for (unsigned i = 0; i < deg; ++i) {
            double r = 0.4 + 2.2 * i / deg + 0.1 * rng.uniform();
            double th = 6.2831853 * (i + 0.35 * rng.uniform()) / deg;
            roots.emplace_back(r * std::cos(th), r * std::sin(th));
        }
        // expand prod (z - r_i); the convolution already yields ascending order
        std::vector<Complex> coeffs{Complex(1.0)};
        for (auto r : roots) {
            std::vector<Complex> next(coeffs.size() + 1, Complex(0));
            for (size_t i = 0; i < coeffs.size(); ++i) {
                next[i + 1] += coeffs[i];
                next[i] -= r * coeffs[i];
            }
            coeffs = next;
        }
        auto found = poly_roots_complex(coeffs);
        REQUIRE(found.size() == deg);
        // rebuild the monic polynomial and compare coefficients
        std::vector<Complex> rebuilt{Complex(1.0)};
        for (auto r : found) {
            std::vector<Complex> next(rebuilt.size() + 1, Complex(0));
            for (size_t i = 0; i < rebuilt.size(); ++i) {
                next[i + 1] += rebuilt[i];
                next[i] -= r * rebuilt[i];
            }
            rebuilt = next;
        }
        double scale = 0.0;
        for (auto c : coeffs) scale = std::max(scale, std::abs(c));
        for (size_t i = 0; i < coeffs.size(); ++i)
            CHECK(std::abs(rebuilt[i] - coeffs[i]) < 1e-6 * scale);
    }
}

TEST_CASE("rational_roots") {
    auto roots_of = [](std::vector<long> asc) {
        std::vector<Rat> c(asc.size());
        for (size_t i = 0; i < asc.size(); ++i) c[i] = asc[i];
        return rational_roots(c);
    };

    auto r1 = roots_of({-4, 0, 1});
    REQUIRE(r1.size() == 2);
    CHECK(r1[0] == Rat(-2));
    CHECK(r1[1] == Rat(2));

    CHECK(roots_of({-2, 0, 1}).empty());

    auto r3 = roots_of({2, -3, -3, 2});
    REQUIRE(r3.size() == 3);
    CHECK(r3[0] == Rat(-1));
    CHECK(r3[1] == Rat(1, 2));
    CHECK(r3[2] == Rat(2));

    // multiplicity via exact deflation
    auto r4 = roots_of({1, 2, 1}); // (z+1)^2
    REQUIRE(r4.size() == 2);
    CHECK(r4[0] == Rat(-1));
    CHECK(r4[1] == Rat(-1));
}

TEST_CASE("rational roots embed in the complex root set") {
    Rng rng(77);
    for (int t = 0; t < 100; ++t) {
        // plant a rational root p/q in a random cubic
        long p = static_cast<long>(rng.below(13)) - 6;
        long q = 1 + static_cast<long>(rng.below(4));
        std::vector<Int> lin{Int(-p), Int(q)};
        std::vector<Int> quadc{Int(static_cast<long>(rng.below(9)) - 4),
                               Int(static_cast<long>(rng.below(9)) - 4),
                               Int(1 + static_cast<long>(rng.below(3)))};
        std::vector<Int> cubic(4, Int(0));
        for (size_t i = 0; i < 2; ++i)
            for (size_t j = 0; j < 3; ++j) cubic[i + j] += lin[i] * quadc[j];
        auto rr = rational_roots_int(cubic);
        Rat planted(p, q);
        planted.canonicalize();
        bool planted_found = false;
        for (const auto& r : rr)
            if (r == planted) planted_found = true;
        CHECK(planted_found);

        auto cc = binary_form_roots(BinaryForm(3, cubic));
        for (const auto& r : rr) {
            ProjPointC rc{Complex(to_double(r), 0.0)};
            double best = 1e9;
            for (const auto& z : cc) best = std::min(best, chordal(rc, z));
            CHECK(best < 1e-5);
        }
    }
}

TEST_CASE("form power root") {
    // x*y as a quadratic: coefficient of x^1 y^1
    BinaryForm xy(2, {Int(0), Int(1), Int(0)});
    BinaryForm w = xy.pow(3);
    BinaryForm root;
    REQUIRE(form_power_root(w, 3, root));
    CHECK(root == xy);

    BinaryForm gen = form({1, -2, 1}); // (z-1)^2
    BinaryForm r2;
    REQUIRE(form_power_root(gen, 2, r2));
    CHECK(r2 == form({-1, 1}).sign_normalized());

    BinaryForm no = form({1, 0, 1});
    BinaryForm dummy;
    CHECK_FALSE(form_power_root(no, 2, dummy));
}
