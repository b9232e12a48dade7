#include "sd/curves.hpp"

#include <array>
#include <cassert>
#include <map>
#include <sstream>

#include "sd/errors.hpp"
#include "sd/ipoly.hpp"

namespace sd {

CurveP1xP1::CurveP1xP1(unsigned d1, unsigned d2, std::vector<std::vector<Int>> coeffs)
    : d1_(d1), d2_(d2), c_(std::move(coeffs)) {
    if (c_.size() != d1_ + 1) throw std::invalid_argument("CurveP1xP1: row count != d1+1");
    for (const auto& row : c_)
        if (row.size() != d2_ + 1) throw std::invalid_argument("CurveP1xP1: col count != d2+1");
}

CurveP1xP1 CurveP1xP1::diagonal() {
    // x v - u y
    std::vector<std::vector<Int>> m(2, std::vector<Int>(2, Int(0)));
    m[1][0] = 1;  // x v
    m[0][1] = -1; // y u
    return CurveP1xP1(1, 1, std::move(m));
}

CurveP1xP1 CurveP1xP1::graph(const std::vector<Int>& num, const std::vector<Int>& den) {
    size_t d = std::max(num.size(), den.size()) - 1;
    std::vector<std::vector<Int>> m(d + 1, std::vector<Int>(2, Int(0)));
    for (size_t i = 0; i < num.size(); ++i) m[i][0] = num[i];  // v * N(x,y)
    for (size_t i = 0; i < den.size(); ++i) m[i][1] = -den[i]; // -u * D(x,y)
    return CurveP1xP1(static_cast<unsigned>(d), 1, std::move(m));
}

CurveP1xP1 CurveP1xP1::vertical(const ProjPointQ& a) {
    // a_y x - a_x y
    std::vector<std::vector<Int>> m(2, std::vector<Int>(1, Int(0)));
    m[1][0] = a.y;
    m[0][0] = -a.x;
    return CurveP1xP1(1, 0, std::move(m));
}

CurveP1xP1 CurveP1xP1::horizontal(const ProjPointQ& b) {
    std::vector<std::vector<Int>> m(1, std::vector<Int>(2, Int(0)));
    m[0][1] = b.y;
    m[0][0] = -b.x;
    return CurveP1xP1(0, 1, std::move(m));
}

bool CurveP1xP1::is_zero() const {
    for (const auto& row : c_)
        for (const auto& v : row)
            if (v != 0) return false;
    return true;
}

CurveP1xP1 CurveP1xP1::normalized() const {
    Int g = 0;
    for (const auto& row : c_)
        for (const auto& v : row) g = gcd(g, abs(v));
    std::vector<std::vector<Int>> m(c_);
    if (g > 1)
        for (auto& row : m)
            for (auto& v : row) v /= g;
    int sign = 0;
    for (size_t i = m.size(); i-- > 0 && sign == 0;)
        for (size_t j = m[i].size(); j-- > 0 && sign == 0;)
            sign = mpz_sgn(m[i][j].get_mpz_t());
    if (sign < 0)
        for (auto& row : m)
            for (auto& v : row) v = -v;
    return CurveP1xP1(d1_, d2_, std::move(m));
}

Int CurveP1xP1::eval(const Int& x, const Int& y, const Int& u, const Int& v) const {
    Int acc = 0;
    for (unsigned i = 0; i <= d1_; ++i) {
        Int xv = pow(x, i) * pow(y, d1_ - i);
        for (unsigned j = 0; j <= d2_; ++j) {
            if (c_[i][j] == 0) continue;
            acc += c_[i][j] * xv * pow(u, j) * pow(v, d2_ - j);
        }
    }
    return acc;
}

Complex CurveP1xP1::eval(const Complex& x, const Complex& y, const Complex& u,
                         const Complex& v) const {
    Complex acc = 0.0;
    for (unsigned i = 0; i <= d1_; ++i) {
        Complex xv = std::pow(x, static_cast<double>(i)) * std::pow(y, static_cast<double>(d1_ - i));
        for (unsigned j = 0; j <= d2_; ++j) {
            if (c_[i][j] == 0) continue;
            acc += mpz_get_d(c_[i][j].get_mpz_t()) * xv * std::pow(u, static_cast<double>(j)) *
                   std::pow(v, static_cast<double>(d2_ - j));
        }
    }
    return acc;
}

BinaryForm CurveP1xP1::fiber_over_first(const ProjPointQ& a) const {
    std::vector<Int> out(d2_ + 1, Int(0));
    for (unsigned j = 0; j <= d2_; ++j)
        for (unsigned i = 0; i <= d1_; ++i)
            out[j] += c_[i][j] * pow(a.x, i) * pow(a.y, d1_ - i);
    return BinaryForm(d2_, std::move(out));
}

std::vector<Complex> CurveP1xP1::fiber_over_first(const ProjPointC& a) const {
    std::vector<Complex> out(d2_ + 1, Complex(0.0));
    for (unsigned j = 0; j <= d2_; ++j)
        for (unsigned i = 0; i <= d1_; ++i) {
            if (c_[i][j] == 0) continue;
            out[j] += mpz_get_d(c_[i][j].get_mpz_t()) * std::pow(a.x, static_cast<double>(i)) *
                      std::pow(a.y, static_cast<double>(d1_ - i));
        }
    return out;
}

BinaryForm CurveP1xP1::fiber_over_second(const ProjPointQ& b) const {
    std::vector<Int> out(d1_ + 1, Int(0));
    for (unsigned i = 0; i <= d1_; ++i)
        for (unsigned j = 0; j <= d2_; ++j)
            out[i] += c_[i][j] * pow(b.x, j) * pow(b.y, d2_ - j);
    return BinaryForm(d1_, std::move(out));
}

std::vector<Complex> CurveP1xP1::fiber_over_second(const ProjPointC& b) const {
    std::vector<Complex> out(d1_ + 1, Complex(0.0));
    for (unsigned i = 0; i <= d1_; ++i)
        for (unsigned j = 0; j <= d2_; ++j) {
            if (c_[i][j] == 0) continue;
            out[i] += mpz_get_d(c_[i][j].get_mpz_t()) * std::pow(b.x, static_cast<double>(j)) *
                      std::pow(b.y, static_cast<double>(d2_ - j));
        }
    return out;
}

std::string CurveP1xP1::str() const {
    std::ostringstream os;
    os << d1_ << "," << d2_ << ":";
    for (const auto& row : c_)
        for (const auto& v : row) os << v.get_str() << ";";
    return os.str();
}

// ---------------------------------------------------------------------------
// Bivariate helpers on top of the shared exact polynomial layer.

namespace {

using IPoly = ipoly::Poly;

// Bivariate forms as s-major integer matrices: rows[i] = ascending t-poly.
struct BiPoly {
    std::vector<IPoly> rows;
};

BiPoly bimul(const BiPoly& a, const BiPoly& b) {
    BiPoly out;
    out.rows.assign(a.rows.size() + b.rows.size() - 1, IPoly{Int(0)});
    for (size_t i = 0; i < a.rows.size(); ++i)
        for (size_t j = 0; j < b.rows.size(); ++j) {
            if (ipoly::is_zero(a.rows[i]) || ipoly::is_zero(b.rows[j])) continue;
            IPoly prod = ipoly::mul(a.rows[i], b.rows[j]);
            IPoly& dst = out.rows[i + j];
            if (dst.size() < prod.size()) dst.resize(prod.size(), Int(0));
            for (size_t k = 0; k < prod.size(); ++k) dst[k] += prod[k];
        }
    return out;
}

BiPoly bipow(const BiPoly& p, unsigned e) {
    BiPoly acc;
    acc.rows = {IPoly{Int(1)}};
    for (unsigned k = 0; k < e; ++k) acc = bimul(acc, p);
    return acc;
}

bool bi_equal(const BiPoly& a, const BiPoly& b) {
    size_t n = std::max(a.rows.size(), b.rows.size());
    for (size_t i = 0; i < n; ++i) {
        IPoly pa = i < a.rows.size() ? a.rows[i] : IPoly{Int(0)};
        IPoly pb = i < b.rows.size() ? b.rows[i] : IPoly{Int(0)};
        ipoly::trim(pa);
        ipoly::trim(pb);
        if (pa != pb) return false;
    }
    return true;
}

BiPoly bi_negate(BiPoly p) {
    for (auto& row : p.rows)
        for (auto& v : row) v = -v;
    return p;
}

/// m-th root of the bivariate block (margins already stripped by the caller).
std::optional<BiPoly> bipoly_power_root(const BiPoly& b, unsigned m) {
    size_t S = b.rows.size() - 1;
    if (S % m != 0) return std::nullopt;
    size_t sigma = S / m;
    auto top = ipoly::power_root(b.rows[S], m);
    bool negated = false;
    BiPoly target = b;
    if (!top && m % 2 == 1) {
        target = bi_negate(b);
        top = ipoly::power_root(target.rows[S], m);
        negated = true;
    }
    if (!top) return std::nullopt;
    (void)negated;

    BiPoly g;
    g.rows.assign(sigma + 1, IPoly{Int(0)});
    g.rows[sigma] = *top;
    IPoly denom = ipoly::pow(*top, m - 1);
    for (auto& v : denom) v *= m;
    for (size_t j = sigma; j-- > 0;) {
        BiPoly pw = bipow(g, m);
        size_t idx = S - (sigma - j);
        IPoly have = idx < pw.rows.size() ? pw.rows[idx] : IPoly{Int(0)};
        IPoly diff = ipoly::sub(target.rows[idx], have);
        auto q = ipoly::divexact(diff, denom);
        if (!q) return std::nullopt;
        g.rows[j] = *q;
        if (j == 0) break;
    }
    if (!bi_equal(bipow(g, m), target)) return std::nullopt;
    return g;
}

} // namespace

CurveP1xP1 curve_image(const CurveP1xP1& c, const RationalMap& f, const RationalMap& g,
                       unsigned bidegree_cap) {
    if (c.is_zero()) throw std::invalid_argument("curve_image: zero form");
    const unsigned df = f.degree(), dg = g.degree();
    const unsigned D1 = dg * c.d1(); // (X,Y)-degree bound of the eliminant
    const unsigned D2 = df * c.d2(); // (U,V)-degree bound
    if (D1 > bidegree_cap || D2 > bidegree_cap)
        throw BudgetExceeded("curve_image: bidegree cap exceeded");

    std::vector<long> snodes(D1 + 1), tnodes(D2 + 1);
    for (unsigned a = 0; a <= D1; ++a) snodes[a] = static_cast<long>(a) - D1 / 2;
    for (unsigned b = 0; b <= D2; ++b) tnodes[b] = static_cast<long>(b) - D2 / 2;

    // Stage 1: eliminate the first factor. R1(s_a; u, v) is interpolated in
    // the second-factor variable from integer Sylvester resultants.
    std::vector<IPoly> r1(D1 + 1);
    for (unsigned a = 0; a <= D1; ++a) {
        BinaryForm graph_a = f.den().scaled(Int(snodes[a])) - f.num();
        std::vector<Int> samples(D2 + 1);
        for (unsigned cidx = 0; cidx <= D2; ++cidx) {
            BinaryForm cw = c.fiber_over_second(ProjPointQ(Int(tnodes[cidx]), Int(1)));
            samples[cidx] = sylvester_resultant(cw.coeffs(), c.d1(), graph_a.coeffs(), df);
        }
        r1[a] = D2 == 0 ? IPoly{samples[0]} : ipoly::lagrange(tnodes, samples);
        r1[a].resize(D2 + 1, Int(0));
    }

    // Stage 2: eliminate the second factor against the graph of g.
    std::vector<std::vector<Int>> r2(D1 + 1, std::vector<Int>(D2 + 1));
    for (unsigned a = 0; a <= D1; ++a) {
        for (unsigned b = 0; b <= D2; ++b) {
            BinaryForm graph_b = g.den().scaled(Int(tnodes[b])) - g.num();
            r2[a][b] = sylvester_resultant(r1[a], D2, graph_b.coeffs(), dg);
        }
    }

    // Interpolate the bivariate eliminant R(s, t).
    std::vector<IPoly> by_a(D1 + 1);
    for (unsigned a = 0; a <= D1; ++a) {
        by_a[a] = D2 == 0 ? IPoly{r2[a][0]} : ipoly::lagrange(tnodes, r2[a]);
        by_a[a].resize(D2 + 1, Int(0));
    }
    std::vector<std::vector<Int>> mat(D1 + 1, std::vector<Int>(D2 + 1, Int(0)));
    for (unsigned k = 0; k <= D2; ++k) {
        std::vector<Int> col(D1 + 1);
        for (unsigned a = 0; a <= D1; ++a) col[a] = by_a[a][k];
        IPoly interp = D1 == 0 ? IPoly{col[0]} : ipoly::lagrange(snodes, col);
        interp.resize(D1 + 1, Int(0));
        for (unsigned i = 0; i <= D1; ++i) mat[i][k] = interp[i];
    }

    CurveP1xP1 full = CurveP1xP1(D1, D2, std::move(mat)).normalized();
    if (full.is_zero()) throw std::runtime_error("curve_image: eliminant vanished identically");

    // The eliminant of an irreducible curve is a pure power of the image
    // form; strip the multiplicity by exact root extraction, largest first.
    unsigned row_lo = D1 + 1, row_hi = 0, col_lo = D2 + 1, col_hi = 0;
    for (unsigned i = 0; i <= D1; ++i)
        for (unsigned j = 0; j <= D2; ++j)
            if (full.coeffs()[i][j] != 0) {
                row_lo = std::min(row_lo, i);
                row_hi = std::max(row_hi, i);
                col_lo = std::min(col_lo, j);
                col_hi = std::max(col_hi, j);
            }

    for (unsigned m = std::max(D1, D2); m >= 2; --m) {
        if (D1 % m || D2 % m) continue;
        if (row_lo % m || (D1 - row_hi) % m || col_lo % m || (D2 - col_hi) % m) continue;
        if ((row_hi - row_lo) % m || (col_hi - col_lo) % m) continue;
        BiPoly block;
        block.rows.reserve(row_hi - row_lo + 1);
        for (unsigned i = row_lo; i <= row_hi; ++i) {
            IPoly row(full.coeffs()[i].begin() + col_lo, full.coeffs()[i].begin() + col_hi + 1);
            block.rows.push_back(std::move(row));
        }
        auto root = bipoly_power_root(block, m);
        if (!root) continue;
        unsigned b1 = D1 / m, b2 = D2 / m;
        std::vector<std::vector<Int>> rm(b1 + 1, std::vector<Int>(b2 + 1, Int(0)));
        for (unsigned i = 0; i < root->rows.size(); ++i)
            for (unsigned k = 0; k < root->rows[i].size(); ++k)
                rm[row_lo / m + i][col_lo / m + k] = root->rows[i][k];
        return CurveP1xP1(b1, b2, std::move(rm)).normalized();
    }
    return full;
}

CurvePrepVerdict curve_preperiodic_test(const CurveP1xP1& c, const RationalMap& f,
                                        const RationalMap& g, unsigned max_iters,
                                        unsigned bidegree_cap) {
    CurvePrepVerdict out;
    std::map<std::string, unsigned> seen;
    CurveP1xP1 cur = c.normalized();
    for (unsigned k = 0; k <= max_iters; ++k) {
        auto [it, fresh] = seen.emplace(cur.str(), k);
        if (!fresh) {
            out.preperiodic = true;
            out.tail = it->second;
            out.cycle = k - it->second;
            return out;
        }
        if (k == max_iters) break;
        try {
            cur = curve_image(cur, f, g, bidegree_cap);
        } catch (const BudgetExceeded&) {
            out.note = "bidegree cap reached without repetition";
            return out;
        }
    }
    out.note = "no repetition within the iteration budget";
    return out;
}

namespace {

/// (M1 x M2)(C) for integral Moebius matrices acting on each factor;
/// computed by substituting the inverse (adjugate) linear forms.
CurveP1xP1 moebius_transform(const CurveP1xP1& c, const std::array<Int, 4>& m1,
                             const std::array<Int, 4>& m2) {
    // m = {a, b, cc, d} represents z -> (a z + b) / (cc z + d); the inverse
    // substitution is x = d X - b Y, y = -cc X + a Y.
    auto side_forms = [](const std::array<Int, 4>& m, unsigned deg) {
        BinaryForm lx(1, {Int(-m[1]), Int(m[3])}); // d X - b Y
        BinaryForm ly(1, {Int(m[0]), Int(-m[2])}); // -cc X + a Y
        std::vector<BinaryForm> out;
        for (unsigned i = 0; i <= deg; ++i) {
            BinaryForm t(0, {Int(1)});
            for (unsigned k = 0; k < i; ++k) t = t * lx;
            for (unsigned k = 0; k < deg - i; ++k) t = t * ly;
            out.push_back(t);
        }
        return out;
    };
    auto xs = side_forms(m1, c.d1());
    auto us = side_forms(m2, c.d2());
    std::vector<std::vector<Int>> out(c.d1() + 1, std::vector<Int>(c.d2() + 1, Int(0)));
    for (unsigned i = 0; i <= c.d1(); ++i)
        for (unsigned j = 0; j <= c.d2(); ++j) {
            if (c.coeffs()[i][j] == 0) continue;
            for (unsigned r = 0; r <= c.d1(); ++r)
                for (unsigned s = 0; s <= c.d2(); ++s)
                    out[r][s] += c.coeffs()[i][j] * xs[i].coeff(r) * us[j].coeff(s);
        }
    return CurveP1xP1(c.d1(), c.d2(), std::move(out)).normalized();
}

/// Rational root pair of a quadratic form, if it splits over Q.
std::optional<std::pair<ProjPointQ, ProjPointQ>> rational_pair(const BinaryForm& q) {
    const Int& q0 = q.coeff(0);
    const Int& q1 = q.coeff(1);
    const Int& q2 = q.coeff(2);
    if (q2 == 0) {
        if (q1 == 0) return std::nullopt;
        return std::make_pair(ProjPointQ::infinity(), ProjPointQ(-q0, q1));
    }
    Int disc = q1 * q1 - 4 * q2 * q0;
    if (disc <= 0) return std::nullopt;
    if (!mpz_perfect_square_p(disc.get_mpz_t())) return std::nullopt;
    Int s;
    mpz_sqrt(s.get_mpz_t(), disc.get_mpz_t());
    return std::make_pair(ProjPointQ(-q1 + s, 2 * q2), ProjPointQ(-q1 - s, 2 * q2));
}

bool is_monomial_support(const CurveP1xP1& c) {
    unsigned count = 0;
    bool corner_a = false, corner_b = false;
    for (unsigned i = 0; i <= c.d1(); ++i)
        for (unsigned j = 0; j <= c.d2(); ++j)
            if (c.coeffs()[i][j] != 0) {
                ++count;
                if ((i == c.d1() && j == c.d2()) || (i == 0 && j == 0)) corner_a = true;
                if ((i == c.d1() && j == 0) || (i == 0 && j == c.d2())) corner_b = true;
            }
    if (count != 2) return false;
    // both nonzero entries on one of the two corner diagonals
    unsigned on_a = (c.coeffs()[c.d1()][c.d2()] != 0 ? 1 : 0) + (c.coeffs()[0][0] != 0 ? 1 : 0);
    unsigned on_b = (c.coeffs()[c.d1()][0] != 0 ? 1 : 0) + (c.coeffs()[0][c.d2()] != 0 ? 1 : 0);
    (void)corner_a;
    (void)corner_b;
    return on_a == 2 || on_b == 2;
}

} // namespace

ScreenResult weakly_special_screen(const CurveP1xP1& c, const RationalMap& f,
                                   const RationalMap& g, unsigned budget_iters,
                                   const MeasureTest& measure_test) {
    ScreenResult out;
    if (c.is_zero()) throw std::invalid_argument("weakly_special_screen: zero form");

    if (c.d1() == 0 || c.d2() == 0) {
        out.verdict = SpecialVerdict::Special;
        out.evidence = "non-dominant projection (fibral curve)";
        return out;
    }

    CurvePrepVerdict prep = curve_preperiodic_test(c, f, g, budget_iters);
    if (prep.preperiodic) {
        std::ostringstream ev;
        ev << "curve preperiodic with tail " << prep.tail << " and cycle " << prep.cycle;
        out.verdict = SpecialVerdict::Special;
        out.evidence = ev.str();
        return out;
    }

    auto qf = exceptional_pair_form(f);
    auto qg = exceptional_pair_form(g);
    if (qf && qg) {
        auto pf = rational_pair(*qf);
        auto pg = rational_pair(*qg);
        if (pf && pg) {
            // Moebius z -> (z - a)/(z - b) sends the exceptional pair {a, b}
            // to {0, infinity}; homogeneous matrix rows (ay, -ax), (by, -bx).
            auto mk = [](const std::pair<ProjPointQ, ProjPointQ>& pr) {
                const auto& [a, b] = pr;
                return std::array<Int, 4>{a.y, -a.x, b.y, -b.x};
            };
            CurveP1xP1 moved = moebius_transform(c, mk(*pf), mk(*pg));
            if (is_monomial_support(moved)) {
                out.verdict = SpecialVerdict::Special;
                out.evidence = "monomial curve through the power-map conjugacies";
                return out;
            }
        } else {
            out.evidence = "power-conjugate pair with irrational exceptional points; ";
        }
    }

    if (measure_test) {
        auto [decision, stat] = measure_test(c, f, g);
        out.statistic = stat;
        if (decision == MeasureDecision::NotEqual) {
            out.verdict = SpecialVerdict::NotSpecialEvidence;
            out.evidence += "pullback measures differ (energy statistic)";
            return out;
        }
        out.evidence += decision == MeasureDecision::Equal
                            ? "measure test consistent with equality"
                            : "measure test inconclusive";
    } else {
        out.evidence += "no measure test supplied";
    }
    out.verdict = SpecialVerdict::Unknown;
    return out;
}

} // namespace sd
