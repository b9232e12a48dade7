#include "sd/families.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "sd/errors.hpp"
#include "sd/heights.hpp"

namespace sd {

namespace {

size_t max_tdeg(const ParamFamily::MapPolys& m) {
    size_t e = 0;
    for (const auto* side : {&m.num, &m.den})
        for (const auto& p : *side) e = std::max(e, p.size() - 1);
    return e;
}

void strip_joint_content(ParamFamily::MapPolys& m) {
    Int g = 0;
    for (const auto* side : {&m.num, &m.den})
        for (const auto& p : *side)
            for (const auto& c : p) g = gcd(g, abs(c));
    if (g > 1)
        for (auto* side : {&m.num, &m.den})
            for (auto& p : *side)
                for (auto& c : p) c /= g;
}

BinaryForm eval_side(const std::vector<ipoly::Poly>& side, unsigned degree, const Int& t) {
    std::vector<Int> c(degree + 1, Int(0));
    for (unsigned i = 0; i < side.size(); ++i) c[i] = ipoly::eval(side[i], t);
    return BinaryForm(degree, std::move(c));
}

} // namespace

ParamFamily::ParamFamily(unsigned degree, MapPolys first, std::optional<MapPolys> second)
    : degree_(degree), first_(std::move(first)), second_(std::move(second)) {
    if (degree_ < 2) throw DegenerateMap("ParamFamily: degree must be >= 2");
    auto check = [&](const MapPolys& m) {
        if (m.num.size() > degree_ + 1 || m.den.size() > degree_ + 1 || m.num.empty() ||
            m.den.empty())
            throw DegenerateMap("ParamFamily: coefficient lists exceed degree+1 or are empty");
    };
    check(first_);
    strip_joint_content(first_);
    if (second_) {
        check(*second_);
        strip_joint_content(*second_);
    }

    // Res(t) by interpolation from integer specializations.
    size_t e = max_tdeg(first_);
    size_t nodes_needed = 2 * static_cast<size_t>(degree_) * e + 1;
    std::vector<long> nodes(nodes_needed);
    std::vector<Int> values(nodes_needed);
    for (size_t k = 0; k < nodes_needed; ++k) {
        long t = static_cast<long>(k) - static_cast<long>(nodes_needed / 2);
        nodes[k] = t;
        BinaryForm p = eval_side(first_.num, degree_, Int(t));
        BinaryForm q = eval_side(first_.den, degree_, Int(t));
        values[k] = resultant(p, q);
    }
    res_poly_ = nodes_needed == 1 ? ipoly::Poly{values[0]} : ipoly::lagrange(nodes, values);
    if (ipoly::is_zero(res_poly_))
        throw DegenerateMap("ParamFamily: resultant vanishes identically");
}

ParamFamily ParamFamily::unicritical(unsigned degree) {
    MapPolys m;
    m.num.assign(degree + 1, ipoly::Poly{Int(0)});
    m.num[0] = ipoly::Poly{Int(0), Int(1)}; // t
    m.num[degree] = ipoly::Poly{Int(1)};
    m.den.assign(degree + 1, ipoly::Poly{Int(0)});
    m.den[0] = ipoly::Poly{Int(1)};
    return ParamFamily(degree, std::move(m));
}

std::string ParamFamily::str() const {
    std::ostringstream os;
    os << "family(degree=" << degree_ << (second_ ? ", pair" : "") << ")";
    return os.str();
}

namespace {

RationalMap specialize_one(const ParamFamily::MapPolys& m, unsigned degree, const Rat& t) {
    std::vector<Rat> num(degree + 1, Rat(0)), den(degree + 1, Rat(0));
    Int lcm_den = 1;
    for (unsigned i = 0; i < m.num.size(); ++i) num[i] = ipoly::eval(m.num[i], t);
    for (unsigned i = 0; i < m.den.size(); ++i) den[i] = ipoly::eval(m.den[i], t);
    for (const auto* side : {&num, &den})
        for (const auto& v : *side) lcm_den = lcm(lcm_den, v.get_den());
    std::vector<Int> ni(degree + 1), di(degree + 1);
    for (unsigned i = 0; i <= degree; ++i) {
        ni[i] = Int(num[i] * Rat(lcm_den));
        di[i] = Int(den[i] * Rat(lcm_den));
    }
    return RationalMap(BinaryForm(degree, std::move(ni)), BinaryForm(degree, std::move(di)));
}

} // namespace

RationalMap specialize(const ParamFamily& f, const Rat& t) {
    try {
        return specialize_one(f.first(), f.degree(), t);
    } catch (const DegenerateMap& e) {
        throw DegenerateFiber("degenerate fiber at t = " + Rat(t).get_str() + ": " + e.what());
    }
}

std::pair<RationalMap, RationalMap> specialize_pair(const ParamFamily& f, const Rat& t) {
    if (!f.is_pair()) throw std::invalid_argument("specialize_pair: family has one component");
    try {
        return {specialize_one(f.first(), f.degree(), t),
                specialize_one(f.second(), f.degree(), t)};
    } catch (const DegenerateMap& e) {
        throw DegenerateFiber("degenerate fiber at t = " + Rat(t).get_str() + ": " + e.what());
    }
}

BadParameters bad_parameters(const ParamFamily& f) {
    BadParameters out;
    const ipoly::Poly& res = f.resultant_poly();
    out.rational = rational_roots_int(res);
    if (res.size() >= 2) {
        BinaryForm form(static_cast<unsigned>(res.size() - 1), res);
        for (const auto& z : binary_form_roots(form))
            if (!z.near_infinity(1e-12)) out.complex_roots.push_back(z.affine());
    }
    return out;
}

// ---------------------------------------------------------------------------
// Exact fixed-point multiplier moduli for quadratic maps.

namespace {

using RPoly = std::vector<Rat>;

void rtrim(RPoly& p) {
    while (p.size() > 1 && p.back() == 0) p.pop_back();
}

RPoly rmul(const RPoly& a, const RPoly& b) {
    RPoly out(a.size() + b.size() - 1, Rat(0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    rtrim(out);
    return out;
}

/// Remainder of a modulo b over Q.
RPoly rmod(RPoly a, const RPoly& b) {
    rtrim(a);
    while (a.size() >= b.size() && !(a.size() == 1 && a[0] == 0)) {
        Rat q = a.back() / b.back();
        size_t shift = a.size() - b.size();
        for (size_t i = 0; i < b.size(); ++i) a[shift + i] -= q * b[i];
        rtrim(a);
        if (a.size() < b.size()) break;
    }
    return a;
}

/// Inverse of a modulo phi via the extended Euclidean algorithm.
RPoly rinv_mod(const RPoly& a, const RPoly& phi) {
    RPoly r0 = phi, r1 = rmod(a, phi);
    RPoly s0{Rat(0)}, s1{Rat(1)};
    while (!(r1.size() == 1 && r1[0] == 0)) {
        // r0 = q r1 + r2
        RPoly q{Rat(0)};
        RPoly rem = r0;
        rtrim(rem);
        RPoly quot(rem.size() > r1.size() ? rem.size() - r1.size() + 1 : 1, Rat(0));
        while (rem.size() >= r1.size() && !(rem.size() == 1 && rem[0] == 0)) {
            Rat c = rem.back() / r1.back();
            size_t shift = rem.size() - r1.size();
            quot[shift] += c;
            for (size_t i = 0; i < r1.size(); ++i) rem[shift + i] -= c * r1[i];
            rtrim(rem);
            if (rem.size() < r1.size()) break;
        }
        RPoly s2 = s0;
        {
            RPoly qs = rmul(quot, s1);
            s2.resize(std::max(s2.size(), qs.size()), Rat(0));
            for (size_t i = 0; i < qs.size(); ++i) s2[i] -= qs[i];
            rtrim(s2);
        }
        r0 = r1;
        r1 = rem;
        s0 = s1;
        s1 = s2;
    }
    // r0 is the gcd, a unit for coprime inputs
    if (r0.size() != 1 || r0[0] == 0)
        throw std::logic_error("rinv_mod: inputs not coprime");
    RPoly out = s0;
    for (auto& c : out) c /= r0[0];
    return rmod(out, phi);
}

RPoly deriv(const RPoly& p) {
    if (p.size() <= 1) return RPoly{Rat(0)};
    RPoly out(p.size() - 1);
    for (size_t i = 1; i < p.size(); ++i) out[i - 1] = Rat(static_cast<long>(i)) * p[i];
    return out;
}

} // namespace

std::pair<Rat, Rat> multiplier_moduli(const RationalMap& f) {
    if (f.degree() != 2)
        throw std::invalid_argument("multiplier_moduli: implemented for degree 2");
    BinaryForm fix = f.num() * BinaryForm::monomial_y(1) - BinaryForm::monomial_x(1) * f.den();
    unsigned k = fix.mult_at_infinity();

    // Multipliers: finite ones through the multiplication operator on
    // Q[z]/(phi), the one at infinity in the reciprocal chart; a multiple
    // fixed point has multiplier 1.
    std::vector<Rat> elem{Rat(1)}; // coefficients of prod (T - lambda), ascending
    auto absorb = [&](const Rat& lambda) {
        std::vector<Rat> next(elem.size() + 1, Rat(0));
        for (size_t i = 0; i < elem.size(); ++i) {
            next[i + 1] += elem[i];
            next[i] -= lambda * elem[i];
        }
        elem = std::move(next);
    };

    unsigned e = 3 - k;
    if (e > 0) {
        RPoly phi(e + 1);
        for (unsigned i = 0; i <= e; ++i) phi[i] = Rat(fix.coeff(i));
        RPoly p(f.num().coeffs().size()), q(f.den().coeffs().size());
        for (size_t i = 0; i < p.size(); ++i) p[i] = Rat(f.num().coeff(i));
        for (size_t i = 0; i < q.size(); ++i) q[i] = Rat(f.den().coeff(i));
        RPoly numer = rmod(rmul(deriv(p), q), phi);
        {
            RPoly t2 = rmul(p, deriv(q));
            numer.resize(std::max(numer.size(), t2.size()), Rat(0));
            for (size_t i = 0; i < t2.size(); ++i) numer[i] -= t2[i];
            rtrim(numer);
            numer = rmod(numer, phi);
        }
        RPoly q2 = rmod(rmul(q, q), phi);
        RPoly h = rmod(rmul(numer, rinv_mod(q2, phi)), phi);

        // multiplication-by-h matrix on the basis 1, z, ..., z^(e-1)
        std::vector<std::vector<Rat>> H(e, std::vector<Rat>(e, Rat(0)));
        RPoly zj = h;
        for (unsigned j = 0; j < e; ++j) {
            for (unsigned i = 0; i < e && i < zj.size(); ++i) H[i][j] = zj[i];
            // multiply by z and reduce
            RPoly next(zj.size() + 1, Rat(0));
            for (size_t i = 0; i < zj.size(); ++i) next[i + 1] = zj[i];
            zj = rmod(next, phi);
        }
        // characteristic polynomial for e <= 3, expanded directly
        if (e == 1) {
            absorb(H[0][0]);
        } else if (e == 2) {
            Rat tr = H[0][0] + H[1][1];
            Rat det = H[0][0] * H[1][1] - H[0][1] * H[1][0];
            // roots of T^2 - tr T + det absorbed symbolically
            std::vector<Rat> next(elem.size() + 2, Rat(0));
            for (size_t i = 0; i < elem.size(); ++i) {
                next[i + 2] += elem[i];
                next[i + 1] -= tr * elem[i];
                next[i] += det * elem[i];
            }
            elem = std::move(next);
        } else {
            Rat tr = H[0][0] + H[1][1] + H[2][2];
            Rat c2 = H[0][0] * H[1][1] - H[0][1] * H[1][0] + H[0][0] * H[2][2] -
                     H[0][2] * H[2][0] + H[1][1] * H[2][2] - H[1][2] * H[2][1];
            Rat det = H[0][0] * (H[1][1] * H[2][2] - H[1][2] * H[2][1]) -
                      H[0][1] * (H[1][0] * H[2][2] - H[1][2] * H[2][0]) +
                      H[0][2] * (H[1][0] * H[2][1] - H[1][1] * H[2][0]);
            std::vector<Rat> next(elem.size() + 3, Rat(0));
            for (size_t i = 0; i < elem.size(); ++i) {
                next[i + 3] += elem[i];
                next[i + 2] -= tr * elem[i];
                next[i + 1] += c2 * elem[i];
                next[i] -= det * elem[i];
            }
            elem = std::move(next);
        }
    }
    if (k == 1) {
        // lambda_infinity = q_(d-1)/p_d in the reciprocal chart
        Rat lam(f.den().coeff(1), f.num().coeff(2));
        lam.canonicalize();
        absorb(lam);
    } else {
        for (unsigned j = 0; j < k; ++j) absorb(Rat(1));
    }

    // elem = T^3 - e1 T^2 + e2 T - e3
    Rat s1 = -elem[2], s2 = elem[1];
    s1.canonicalize();
    s2.canonicalize();
    return {s1, s2};
}

namespace {

/// Sorted multiplier spectrum of period-n points, numerically.
std::vector<Complex> multiplier_spectrum(const RationalMap& f, unsigned n) {
    auto pts = periodic_points(f, n, 1e-10);
    std::vector<Complex> p(f.num().coeffs().size()), q(f.den().coeffs().size());
    for (size_t i = 0; i < p.size(); ++i) p[i] = mpz_get_d(f.num().coeff(i).get_mpz_t());
    for (size_t i = 0; i < q.size(); ++i) q[i] = mpz_get_d(f.den().coeff(i).get_mpz_t());
    std::vector<Complex> pr(q.rbegin(), q.rend()), qr(p.rbegin(), p.rend());
    auto jet = [](const std::vector<Complex>& num, const std::vector<Complex>& den, Complex z,
                  Complex& val, Complex& der) {
        Complex a = 0.0, da = 0.0, b = 0.0, db = 0.0;
        for (size_t i = num.size(); i-- > 0;) a = a * z + num[i];
        for (size_t i = num.size(); i-- > 1;) da = da * z + static_cast<double>(i) * num[i];
        for (size_t i = den.size(); i-- > 0;) b = b * z + den[i];
        for (size_t i = den.size(); i-- > 1;) db = db * z + static_cast<double>(i) * den[i];
        val = a / b;
        der = (da * b - a * db) / (b * b);
    };
    std::vector<Complex> mults;
    for (const auto& z0 : pts) {
        bool flip = std::abs(z0.y) < 0.25 * std::abs(z0.x);
        Complex z = flip ? z0.y / z0.x : z0.x / z0.y;
        const auto& num = flip ? pr : p;
        const auto& den = flip ? qr : q;
        Complex lambda = 1.0;
        bool ok = true;
        for (unsigned kk = 0; kk < n; ++kk) {
            Complex v, d;
            jet(num, den, z, v, d);
            if (!std::isfinite(std::abs(v)) || !std::isfinite(std::abs(d))) {
                ok = false;
                break;
            }
            lambda *= d;
            z = v;
        }
        mults.push_back(ok ? lambda : Complex(std::nan(""), 0.0));
    }
    std::sort(mults.begin(), mults.end(), [](Complex a, Complex b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return mults;
}

} // namespace

Isotriviality isotrivial_check(const ParamFamily& f, unsigned samples) {
    if (f.degree() == 2) {
        size_t e = std::max<size_t>(max_tdeg(f.first()), 1);
        size_t needed = samples > 0 ? samples : 48 * (e + 1) + 2;
        std::optional<std::pair<Rat, Rat>> ref;
        size_t seen = 0;
        for (long t = 1; seen < needed && t < static_cast<long>(8 * needed + 64); ++t) {
            try {
                RationalMap ft = specialize(f, Rat(t));
                auto mod = multiplier_moduli(ft);
                if (!ref) {
                    ref = mod;
                } else if (mod != *ref) {
                    return Isotriviality::NonIsotrivial;
                }
                ++seen;
            } catch (const DegenerateFiber&) {
                continue;
            }
        }
        return Isotriviality::Isotrivial;
    }

    // Degree > 2: numeric screen on multiplier spectra of periods 1..3.
    std::vector<std::vector<Complex>> ref;
    unsigned seen = 0;
    for (long t = 1; seen < 4 && t < 64; t += 3) {
        try {
            RationalMap ft = specialize(f, Rat(t));
            std::vector<std::vector<Complex>> spec;
            for (unsigned n = 1; n <= 3; ++n) spec.push_back(multiplier_spectrum(ft, n));
            if (ref.empty()) {
                ref = spec;
            } else {
                for (unsigned n = 0; n < spec.size(); ++n) {
                    if (spec[n].size() != ref[n].size()) return Isotriviality::NonIsotrivial;
                    for (size_t i = 0; i < spec[n].size(); ++i)
                        if (std::abs(spec[n][i] - ref[n][i]) >
                            1e-5 * (1.0 + std::abs(ref[n][i])))
                            return Isotriviality::NonIsotrivial;
                }
            }
            ++seen;
        } catch (const DegenerateFiber&) {
            continue;
        }
    }
    return Isotriviality::Unknown;
}

// ---------------------------------------------------------------------------

namespace {

std::string pair_key(const ProjPointQ& a, const ProjPointQ& b) {
    return a.str() + "|" + b.str();
}

/// Exact rational preperiodic candidates of f within the (m, n) budget,
/// including the point at infinity when the forms vanish there.
std::vector<ProjPointQ> rational_preperiodic(const RationalMap& f,
                                             const SmallPointBudget& budget) {
    std::vector<ProjPointQ> out;
    std::set<std::string> seen;
    for (unsigned m = 0; m <= budget.m; ++m)
        for (unsigned n = 1; n <= budget.n; ++n) {
            double deg = std::pow(f.degree(), m + n) + std::pow(f.degree(), m);
            if (deg > budget.degree_cap)
                throw BudgetExceeded("fiber_small_points: preperiodicity degree cap");
            BinaryForm form = preperiodicity_form(f, m, n);
            for (const Rat& r : rational_roots_int(form.coeffs())) {
                ProjPointQ z(r);
                if (seen.insert(z.str()).second) out.push_back(z);
            }
            if (form.mult_at_infinity() > 0) {
                ProjPointQ z = ProjPointQ::infinity();
                if (seen.insert(z.str()).second) out.push_back(z);
            }
        }
    return out;
}

std::vector<ProjPointQ> rational_fiber(const BinaryForm& fiber) {
    std::vector<ProjPointQ> out;
    if (fiber.is_zero()) return out;
    for (const Rat& r : rational_roots_int(fiber.coeffs())) out.emplace_back(r);
    if (fiber.mult_at_infinity() > 0) out.push_back(ProjPointQ::infinity());
    return out;
}

} // namespace

SmallPointReport fiber_small_points(const RationalMap& f, const RationalMap& g,
                                    const CurveP1xP1& c, double eps,
                                    const SmallPointBudget& budget) {
    ScreenResult screen = weakly_special_screen(c, f, g, 4);
    if (screen.verdict == SpecialVerdict::Special)
        throw SpecialCurve("fiber_small_points: " + screen.evidence);

    HeightContext ctxf(f), ctxg(g);
    const double target = std::max(1e-12, std::min(1e-8, eps / 10.0));
    SmallPointReport rep;
    rep.empirical_min = std::numeric_limits<double>::infinity();

    struct Cand {
        ProjPointC a, b;
        double height;
    };
    std::vector<Cand> cands;

    // Exact Q-rational candidates from both coordinates.
    std::set<std::string> exact_keys;
    auto add_exact = [&](const ProjPointQ& a, const ProjPointQ& b) {
        if (!exact_keys.insert(pair_key(a, b)).second) return;
        double h = 0.0;
        if (!is_preperiodic_exact(ctxf, a)) h += canonical_height(ctxf, a, target).value;
        if (!is_preperiodic_exact(ctxg, b)) h += canonical_height(ctxg, b, target).value;
        cands.push_back({ProjPointC(a), ProjPointC(b), h});
    };
    for (const auto& a : rational_preperiodic(f, budget))
        for (const auto& b : rational_fiber(c.fiber_over_first(a))) add_exact(a, b);
    for (const auto& b : rational_preperiodic(g, budget))
        for (const auto& a : rational_fiber(c.fiber_over_second(b))) add_exact(a, b);

    // Numeric candidates; Green surrogates of the affine lifts, flagged by
    // construction (they never enter the certified path). The escape rate
    // alone vanishes on the whole filled Julia set, so it is floored by the
    // best in-budget preperiodicity residual: zero only when the coordinate
    // is numerically preperiodic.
    auto relation_residual = [&](const RationalMap& h, const ProjPointC& z) {
        std::vector<ProjPointC> orbit{z};
        for (unsigned k = 1; k <= budget.m + budget.n; ++k)
            orbit.push_back(h.eval(orbit.back()));
        double best = 1.0;
        for (unsigned m = 0; m <= budget.m; ++m)
            for (unsigned n = 1; n <= budget.n; ++n)
                best = std::min(best, chordal(orbit[m + n], orbit[m]));
        return best;
    };
    auto surrogate = [&](const HeightContext& ctx, const ProjPointC& z) {
        ProjPointC lift = z.near_infinity(1e-9) ? ProjPointC::infinity()
                                                : ProjPointC(z.affine());
        double green = std::max(green_arch(ctx, lift, 33).value, 0.0);
        return std::max(green, relation_residual(ctx.map(), z));
    };
    auto matches_exact = [&](const ProjPointC& a, const ProjPointC& b) {
        for (const auto& cd : cands)
            if (chordal(cd.a, a) <= 1e-7 && chordal(cd.b, b) <= 1e-7) return true;
        return false;
    };
    std::vector<std::pair<ProjPointC, ProjPointC>> numeric;
    auto add_numeric = [&](const ProjPointC& a, const ProjPointC& b) {
        if (matches_exact(a, b)) return;
        for (const auto& [x, u] : numeric)
            if (chordal(x, a) <= 1e-7 && chordal(u, b) <= 1e-7) return;
        numeric.emplace_back(a, b);
    };
    for (unsigned m = 0; m <= budget.m; ++m)
        for (unsigned n = 1; n <= budget.n; ++n) {
            for (const auto& a : preperiodic_points(f, m, n, 1e-8, budget.degree_cap)) {
                for (const auto& b : binary_form_roots(c.fiber_over_first(a)))
                    add_numeric(a, b);
            }
            for (const auto& b : preperiodic_points(g, m, n, 1e-8, budget.degree_cap)) {
                for (const auto& a : binary_form_roots(c.fiber_over_second(b)))
                    add_numeric(a, b);
            }
        }
    for (const auto& [a, b] : numeric)
        cands.push_back({a, b, surrogate(ctxf, a) + surrogate(ctxg, b)});

    rep.candidates = static_cast<unsigned>(cands.size());
    for (const auto& cd : cands) {
        rep.empirical_min = std::min(rep.empirical_min, cd.height);
        if (cd.height < eps) {
            ++rep.count;
            rep.points.emplace_back(cd.a, cd.b);
        }
    }
    return rep;
}

SmallPointReport fiber_small_points(const ParamFamily& fam, const CurveP1xP1& c, const Rat& t,
                                    double eps, const SmallPointBudget& budget) {
    auto [f, g] = specialize_pair(fam, t);
    return fiber_small_points(f, g, c, eps, budget);
}

DkyTable dky_scan(const std::vector<Rat>& t1_list, const std::vector<Rat>& t2_list, double eps,
                  const SmallPointBudget& budget) {
    DkyTable table;
    CurveP1xP1 diag = CurveP1xP1::diagonal();
    for (const Rat& t1 : t1_list) {
        for (const Rat& t2 : t2_list) {
            DkyCell cell;
            cell.t1 = t1;
            cell.t2 = t2;
            if (t1 == t2) {
                cell.skipped = true; // identical maps share their preperiodic set
                table.cells.push_back(cell);
                continue;
            }
            Int d1 = t1.get_den(), n1 = t1.get_num();
            Int d2 = t2.get_den(), n2 = t2.get_num();
            RationalMap f(BinaryForm(2, {n1, Int(0), d1}), BinaryForm(2, {d1, Int(0), Int(0)}));
            RationalMap g(BinaryForm(2, {n2, Int(0), d2}), BinaryForm(2, {d2, Int(0), Int(0)}));
            SmallPointReport rep = fiber_small_points(f, g, diag, eps, budget);
            cell.count = rep.count;
            table.max_count = std::max(table.max_count, cell.count);
            table.cells.push_back(cell);
        }
    }
    return table;
}

HeightFit fit_height_inequality(const ParamFamily& fam, const Section& section,
                                const std::vector<Rat>& t_grid, double target_error) {
    HeightFit fit;
    for (const Rat& t : t_grid) {
        try {
            RationalMap ft = specialize(fam, t);
            Rat z(0);
            for (size_t i = section.size(); i-- > 0;) z = z * t + section[i];
            z.canonicalize();
            HeightEstimate h = canonical_height(ft, ProjPointQ(z), target_error);
            fit.support.emplace_back(naive_height(ProjPointQ(t)), h.value);
        } catch (const DegenerateFiber&) {
            fit.skipped.push_back(t);
        } catch (const BudgetExceeded&) {
            fit.skipped.push_back(t);
        }
    }
    if (fit.support.empty()) return fit;

    // Lower convex hull; report the steepest edge extended leftward.
    std::vector<std::pair<double, double>> pts(fit.support);
    std::sort(pts.begin(), pts.end());
    std::vector<std::pair<double, double>> hull;
    for (const auto& p : pts) {
        if (!hull.empty() && hull.back().first == p.first) {
            if (p.second >= hull.back().second) continue;
            hull.pop_back();
        }
        while (hull.size() >= 2) {
            const auto& a = hull[hull.size() - 2];
            const auto& b = hull.back();
            if ((b.second - a.second) * (p.first - a.first) >=
                (p.second - a.second) * (b.first - a.first))
                hull.pop_back();
            else
                break;
        }
        hull.push_back(p);
    }
    if (hull.size() >= 2) {
        const auto& a = hull[hull.size() - 2];
        const auto& b = hull.back();
        fit.c1 = (b.second - a.second) / (b.first - a.first);
        fit.c2 = fit.c1 * b.first - b.second;
    } else {
        fit.c1 = 0.0;
        fit.c2 = -hull[0].second;
    }
    for (const auto& [x, y] : fit.support)
        if (y < fit.c1 * x - fit.c2 - 1e-9) ++fit.violations;

    // Asymptotic slope from a least-squares fit on the top half of the grid.
    double xmin = pts.front().first, xmax = pts.back().first;
    double cut = 0.5 * (xmin + xmax);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    size_t n = 0;
    for (const auto& [x, y] : pts)
        if (x >= cut) {
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            ++n;
        }
    if (n >= 2 && sxx * n - sx * sx > 1e-15)
        fit.slope_estimate = (sxy * n - sx * sy) / (sxx * n - sx * sx);
    else
        fit.slope_estimate = fit.c1;

    fit.isotrivial_flag = isotrivial_check(fam) == Isotriviality::Isotrivial;
    return fit;
}

} // namespace sd
