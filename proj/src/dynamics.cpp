#include "sd/dynamics.hpp"

#include <cmath>
#include <sstream>
#include <unordered_map>

#include "sd/errors.hpp"

namespace sd {

OrbitRecord orbit(const RationalMap& f, const ProjPointQ& z0, unsigned max_steps,
                  double height_cutoff) {
    OrbitRecord rec;
    std::unordered_map<ProjPointQ, unsigned, ProjPointQHash> index;
    ProjPointQ z = z0;
    for (unsigned k = 0;; ++k) {
        auto it = index.find(z);
        if (it != index.end()) {
            rec.points.push_back(z);
            rec.tail = it->second;
            rec.cycle = k - it->second;
            rec.verdict = OrbitRecord::Verdict::Preperiodic;
            return rec;
        }
        if (naive_height(z) > height_cutoff) {
            rec.points.push_back(z);
            rec.verdict = OrbitRecord::Verdict::Escaping;
            return rec;
        }
        if (k >= max_steps) {
            rec.verdict = OrbitRecord::Verdict::Budget;
            return rec;
        }
        index.emplace(z, k);
        rec.points.push_back(z);
        z = f.eval(z);
    }
}

bool is_preperiodic_exact(const HeightContext& ctx, const ProjPointQ& z) {
    double cutoff = height_difference_bound(ctx) + 1.0;
    // Points below the cutoff form a finite set, so a cycle must appear
    // within #lattice-points steps if the orbit never escapes.
    double count = std::pow(2.0 * std::exp(cutoff) + 1.0, 2.0);
    unsigned max_steps =
        count > 2e6 ? 2000000u : static_cast<unsigned>(count) + 2u;
    OrbitRecord rec = orbit(ctx.map(), z, max_steps, cutoff);
    switch (rec.verdict) {
        case OrbitRecord::Verdict::Preperiodic: return true;
        case OrbitRecord::Verdict::Escaping: return false;
        default: throw BudgetExceeded("is_preperiodic_exact: orbit budget exhausted");
    }
}

bool is_preperiodic_exact(const RationalMap& f, const ProjPointQ& z) {
    return is_preperiodic_exact(HeightContext(f), z);
}

namespace {

BinaryForm identity_num() { return BinaryForm::monomial_x(1); }
BinaryForm identity_den() { return BinaryForm::monomial_y(1); }

std::vector<ProjPointC> dedup_chordal(const std::vector<ProjPointC>& pts, double tol) {
    std::vector<ProjPointC> out;
    for (const auto& p : pts) {
        bool seen = false;
        for (const auto& q : out)
            if (chordal(p, q) <= tol) {
                seen = true;
                break;
            }
        if (!seen) out.push_back(p);
    }
    return out;
}

/// Affine value and derivative of the map's dehomogenization at z.
struct AffineJet {
    Complex value;
    Complex deriv;
    bool ok;
};

AffineJet eval_jet(const std::vector<Complex>& p, const std::vector<Complex>& q, Complex z) {
    auto horner = [&](const std::vector<Complex>& c) {
        Complex acc = 0.0;
        for (size_t i = c.size(); i-- > 0;) acc = acc * z + c[i];
        return acc;
    };
    auto horner_d = [&](const std::vector<Complex>& c) {
        Complex acc = 0.0;
        for (size_t i = c.size(); i-- > 1;) acc = acc * z + static_cast<double>(i) * c[i];
        return acc;
    };
    Complex num = horner(p), den = horner(q);
    if (std::abs(den) < 1e-290) return {Complex(0), Complex(0), false};
    Complex dnum = horner_d(p), dden = horner_d(q);
    return {num / den, (dnum * den - num * dden) / (den * den), true};
}

std::vector<Complex> to_complex_coeffs(const BinaryForm& f) {
    std::vector<Complex> out(f.degree() + 1);
    for (unsigned i = 0; i <= f.degree(); ++i) out[i] = mpz_get_d(f.coeff(i).get_mpz_t());
    return out;
}

/// Newton refinement of f^(m+n)(z) = f^m(z) against orbit evaluation of the
/// low-degree map; the monomial expansion of the iterate is numerically
/// useless for this, its coefficient scale drowns double precision.
ProjPointC refine_relation(const RationalMap& f, unsigned m, unsigned n, const ProjPointC& z0) {
    std::vector<Complex> p = to_complex_coeffs(f.num());
    std::vector<Complex> q = to_complex_coeffs(f.den());
    // reciprocal chart: 1/f(1/w) has the reversed coefficient vectors
    std::vector<Complex> pr(q.rbegin(), q.rend());
    std::vector<Complex> qr(p.rbegin(), p.rend());

    bool flip = std::abs(z0.y) < 0.25 * std::abs(z0.x);
    const std::vector<Complex>& np = flip ? pr : p;
    const std::vector<Complex>& nq = flip ? qr : q;
    Complex z = flip ? z0.y / z0.x : z0.x / z0.y;

    for (int step = 0; step < 10; ++step) {
        Complex v = z, d_tail = 1.0;
        bool ok = true;
        for (unsigned k = 0; k < m && ok; ++k) {
            AffineJet j = eval_jet(np, nq, v);
            ok = j.ok;
            d_tail *= j.deriv;
            v = j.value;
        }
        if (!ok) return z0;
        Complex w1 = v, d_cycle = 1.0;
        for (unsigned k = 0; k < n && ok; ++k) {
            AffineJet j = eval_jet(np, nq, v);
            ok = j.ok;
            d_cycle *= j.deriv;
            v = j.value;
        }
        if (!ok) return z0;
        Complex h = v - w1;
        Complex hp = d_tail * (d_cycle - 1.0);
        if (std::abs(hp) < 1e-290) break;
        Complex delta = h / hp;
        if (!(std::abs(delta) < 0.5 * (1.0 + std::abs(z)))) break;
        z -= delta;
        if (std::abs(delta) < 1e-15 * (1.0 + std::abs(z))) break;
    }
    ProjPointC out = flip ? ProjPointC(Complex(1.0), z) : ProjPointC(z, Complex(1.0));
    out.renormalize();
    return out;
}

std::vector<ProjPointC> refine_all(const RationalMap& f, unsigned m, unsigned n,
                                   std::vector<ProjPointC> roots) {
    for (auto& z : roots)
        if (!(z.x == Complex(1.0) && z.y == Complex(0.0))) z = refine_relation(f, m, n, z);
    return roots;
}

} // namespace

BinaryForm preperiodicity_form(const RationalMap& f, unsigned m, unsigned n) {
    BinaryForm pm = m == 0 ? identity_num() : iterate(f, m).num();
    BinaryForm qm = m == 0 ? identity_den() : iterate(f, m).den();
    RationalMap fmn = iterate(f, m + n);
    return fmn.num() * qm - pm * fmn.den();
}

std::vector<ProjPointC> periodic_points(const RationalMap& f, unsigned n, double tol,
                                        unsigned degree_cap) {
    if (n < 1) throw std::invalid_argument("periodic_points: n >= 1 required");
    double count = std::pow(static_cast<double>(f.degree()), static_cast<double>(n)) + 1.0;
    if (count > static_cast<double>(degree_cap))
        throw BudgetExceeded("periodic_points: degree cap exceeded");
    RationalMap fn = n == 1 ? f : iterate(f, n);
    BinaryForm fix = fn.num() * identity_den() - identity_num() * fn.den();
    // The iterate's coefficients can exceed double precision, so the raw
    // solve certifies coarsely; the dynamical Newton refinement below
    // restores forward accuracy against the exact map.
    RootSolveOptions opts;
    opts.tol = std::max(tol, 1e-7);
    return refine_all(f, 0, n, binary_form_roots(fix, opts));
}

std::vector<ProjPointC> preperiodic_points(const RationalMap& f, unsigned m, unsigned n,
                                           double tol, unsigned degree_cap) {
    if (n < 1) throw std::invalid_argument("preperiodic_points: n >= 1 required");
    double deg = std::pow(static_cast<double>(f.degree()), static_cast<double>(m + n)) +
                 std::pow(static_cast<double>(f.degree()), static_cast<double>(m));
    if (deg > static_cast<double>(degree_cap))
        throw BudgetExceeded("preperiodic_points: degree cap exceeded");
    BinaryForm form = preperiodicity_form(f, m, n);
    if (form.is_zero())
        throw DegenerateMap("preperiodic_points: identically zero preperiodicity form");
    RootSolveOptions opts;
    opts.tol = std::max(std::min(tol, 1e-9), 1e-7);
    return dedup_chordal(refine_all(f, m, n, binary_form_roots(form, opts)), tol);
}

std::vector<ProjPointC> critical_points(const RationalMap& f, double tol) {
    BinaryForm w = f.num().dx() * f.den().dy() - f.num().dy() * f.den().dx();
    RootSolveOptions opts;
    opts.tol = tol;
    return binary_form_roots(w, opts);
}

std::optional<BinaryForm> exceptional_pair_form(const RationalMap& f) {
    unsigned d = f.degree();
    BinaryForm w = f.num().dx() * f.den().dy() - f.num().dy() * f.den().dx();
    BinaryForm q;
    if (!form_power_root(w, d - 1, q)) return std::nullopt;
    if (q.degree() != 2) return std::nullopt;
    Int disc = q.coeff(1) * q.coeff(1) - 4 * q.coeff(2) * q.coeff(0);
    if (disc == 0) return std::nullopt;
    BinaryForm pulled = q.substitute(f.num(), f.den()).primitive().sign_normalized();
    BinaryForm power = q.pow(d).primitive().sign_normalized();
    if (pulled == power) return q;
    return std::nullopt;
}

bool is_exceptional_point(const RationalMap& f, const ProjPointQ& z) {
    BinaryForm preimage = f.num().scaled(z.y) - f.den().scaled(z.x);
    if (preimage.is_zero()) return false;
    BinaryForm lin;
    if (!form_power_root(preimage, f.degree(), lin)) return false;
    if (lin.degree() != 1) return false;
    BinaryForm expected = BinaryForm(1, {Int(-z.x), Int(z.y)}).primitive().sign_normalized();
    return lin == expected;
}

namespace {

struct NumericOrbit {
    std::vector<ProjPointC> points;
    bool preperiodic{false};
    unsigned tail{0};
};

NumericOrbit numeric_orbit(const RationalMap& f, const ProjPointC& z0, unsigned steps,
                           double tol) {
    NumericOrbit rec;
    ProjPointC z = z0;
    z.renormalize();
    for (unsigned k = 0; k < steps; ++k) {
        for (unsigned j = 0; j < rec.points.size(); ++j) {
            if (chordal(rec.points[j], z) <= tol) {
                rec.preperiodic = true;
                rec.tail = j;
                return rec;
            }
        }
        rec.points.push_back(z);
        z = f.eval(z);
    }
    return rec;
}

struct CriticalSet {
    std::vector<ProjPointQ> rational;
    std::vector<ProjPointC> numeric;
};

CriticalSet split_critical_points(const RationalMap& f, double tol) {
    CriticalSet out;
    BinaryForm w = f.num().dx() * f.den().dy() - f.num().dy() * f.den().dx();
    for (const Rat& r : rational_roots_int(w.coeffs())) out.rational.emplace_back(r);
    if (w.mult_at_infinity() > 0) out.rational.push_back(ProjPointQ::infinity());
    for (const auto& c : binary_form_roots(w)) {
        bool matches_rational = false;
        for (const auto& r : out.rational)
            if (chordal(ProjPointC(r), c) <= tol) {
                matches_rational = true;
                break;
            }
        if (!matches_rational) {
            bool dup = false;
            for (const auto& seen : out.numeric)
                if (chordal(seen, c) <= tol) {
                    dup = true;
                    break;
                }
            if (!dup) out.numeric.push_back(c);
        }
    }
    return out;
}

} // namespace

Tristate is_pcf(const RationalMap& f, const ClassifyBudget& budget) {
    CriticalSet crit = split_critical_points(f, budget.tol);
    HeightContext ctx(f);
    bool unknown = false;
    for (const auto& c : crit.rational)
        if (!is_preperiodic_exact(ctx, c)) return Tristate::False;
    for (const auto& c : crit.numeric) {
        NumericOrbit rec = numeric_orbit(f, c, budget.orbit_steps, budget.tol);
        if (!rec.preperiodic) unknown = true;
    }
    return unknown ? Tristate::Unknown : Tristate::True;
}

ExceptionalClass classify_exceptional(const RationalMap& f, const ClassifyBudget& budget) {
    ExceptionalClass out;
    std::ostringstream ev;

    if (auto pair = exceptional_pair_form(f)) {
        out.tag = ExceptionalClass::Tag::PowerConjugate;
        ev << "totally invariant pair on { " << pair->str() << " = 0 }";
        out.evidence = ev.str();
        return out;
    }

    Tristate pcf = is_pcf(f, budget);
    if (pcf == Tristate::False) {
        out.tag = ExceptionalClass::Tag::Ordinary;
        out.evidence = "certified escaping rational critical orbit; no exceptional pair";
        return out;
    }
    if (pcf == Tristate::Unknown) {
        out.tag = ExceptionalClass::Tag::Unknown;
        out.evidence = "critical-orbit budget exhausted";
        return out;
    }

    // PCF portrait. Orbits of all critical points, recorded from the first
    // image onward; rational orbits are exact, so the portrait is certified
    // whenever every critical point is rational.
    CriticalSet crit = split_critical_points(f, budget.tol);
    HeightContext ctx(f);
    double cutoff = height_difference_bound(ctx) + 1.0;
    bool portrait_exact = crit.numeric.empty();

    struct CritRecord {
        ProjPointC at;
        unsigned tail;
    };
    std::vector<CritRecord> records;
    std::vector<ProjPointC> postcritical;

    auto add_pc = [&](const ProjPointC& p) {
        for (const auto& q : postcritical)
            if (chordal(p, q) <= budget.tol) return;
        postcritical.push_back(p);
    };

    for (const auto& c : crit.rational) {
        OrbitRecord rec = orbit(f, c, 100000, cutoff);
        if (rec.verdict != OrbitRecord::Verdict::Preperiodic) {
            out.tag = ExceptionalClass::Tag::Unknown;
            out.evidence = "rational critical orbit exceeded budget";
            return out;
        }
        records.push_back({ProjPointC(c), rec.tail});
        for (size_t k = 1; k < rec.points.size(); ++k) add_pc(ProjPointC(rec.points[k]));
    }
    for (const auto& c : crit.numeric) {
        NumericOrbit rec = numeric_orbit(f, c, budget.orbit_steps, budget.tol);
        records.push_back({c, rec.tail});
        for (size_t k = 1; k < rec.points.size(); ++k) add_pc(rec.points[k]);
        if (rec.preperiodic && !rec.points.empty()) add_pc(f.eval(rec.points.back()));
    }

    // Candidate exceptional single point: a rational fixed point whose total
    // preimage is itself (checked exactly).
    std::optional<ProjPointQ> exceptional_single;
    {
        BinaryForm fix =
            f.num() * BinaryForm::monomial_y(1) - BinaryForm::monomial_x(1) * f.den();
        std::vector<ProjPointQ> fixed_rationals;
        for (const Rat& r : rational_roots_int(fix.coeffs())) fixed_rationals.emplace_back(r);
        if (fix.mult_at_infinity() > 0) fixed_rationals.push_back(ProjPointQ::infinity());
        for (const auto& cand : fixed_rationals)
            if (is_exceptional_point(f, cand)) {
                exceptional_single = cand;
                break;
            }
    }

    // Chebyshev shape: the exceptional point plus strictly preperiodic finite
    // critical points whose values land on a 2-element invariant set.
    if (exceptional_single) {
        ProjPointC e(*exceptional_single);
        bool finite_crits_strict = true;
        for (const auto& r : records)
            if (chordal(r.at, e) > budget.tol && r.tail == 0) finite_crits_strict = false;
        std::vector<ProjPointC> finite_pc;
        for (const auto& p : postcritical)
            if (chordal(p, e) > budget.tol) finite_pc.push_back(p);
        bool invariant = true;
        for (const auto& p : finite_pc) {
            ProjPointC img = f.eval(p);
            bool lands = false;
            for (const auto& q : finite_pc)
                if (chordal(img, q) <= 10 * budget.tol) lands = true;
            if (!lands) invariant = false;
        }
        if (finite_crits_strict && finite_pc.size() == 2 && invariant) {
            out.tag = ExceptionalClass::Tag::ChebyshevConjugate;
            ev << "exceptional point " << exceptional_single->str()
               << "; two finite critical values on an invariant pair";
            out.evidence = ev.str();
            return out;
        }
    }

    bool all_strict = true;
    for (const auto& r : records)
        if (r.tail == 0) all_strict = false;
    if (!exceptional_single && all_strict &&
        (postcritical.size() == 3 || postcritical.size() == 4)) {
        out.tag = ExceptionalClass::Tag::LattesLike;
        ev << "PCF, strictly preperiodic critical orbits, postcritical set of size "
           << postcritical.size();
        out.evidence = ev.str();
        return out;
    }

    if (portrait_exact) {
        // Every critical orbit was decided exactly, so failing all three
        // exceptional shapes is a certificate of ordinariness.
        out.tag = ExceptionalClass::Tag::Ordinary;
        ev << "exact PCF portrait (postcritical size " << postcritical.size()
           << ") matches no exceptional shape";
        out.evidence = ev.str();
        return out;
    }

    out.tag = ExceptionalClass::Tag::Unknown;
    ev << "numeric PCF portrait (postcritical size " << postcritical.size()
       << ") matches no exceptional shape";
    out.evidence = ev.str();
    return out;
}

} // namespace sd
