#include "sd/roots.hpp"

#include <algorithm>
#include <cmath>

#include "sd/errors.hpp"
#include "sd/rng.hpp"

namespace sd {

namespace {

Complex horner(const std::vector<Complex>& c, Complex z) {
    Complex acc = 0.0;
    for (size_t i = c.size(); i-- > 0;) acc = acc * z + c[i];
    return acc;
}

Complex horner_deriv(const std::vector<Complex>& c, Complex z) {
    Complex acc = 0.0;
    for (size_t i = c.size(); i-- > 1;) acc = acc * z + static_cast<double>(i) * c[i];
    return acc;
}

/// sum |c_k| |z|^k, the backward-error scale at z.
double eval_scale(const std::vector<Complex>& c, Complex z) {
    double az = std::abs(z), acc = 0.0;
    for (size_t i = c.size(); i-- > 0;) acc = acc * az + std::abs(c[i]);
    return acc;
}

} // namespace

namespace {
std::vector<Complex> solve_once(const std::vector<Complex>& coeffs, const RootSolveOptions& opts);
}

std::vector<Complex> poly_roots_complex(const std::vector<Complex>& coeffs,
                                        const RootSolveOptions& opts) {
    try {
        return solve_once(coeffs, opts);
    } catch (const NoConvergence&) {
        // one deterministic retry from a reseeded circle with a larger budget
        RootSolveOptions retry = opts;
        retry.seed = opts.seed ^ 0x9e3779b97f4a7c15ULL;
        retry.max_iterations = 3 * opts.max_iterations;
        return solve_once(coeffs, retry);
    }
}

namespace {

std::vector<Complex> solve_once(const std::vector<Complex>& coeffs,
                                const RootSolveOptions& opts) {
    std::vector<Complex> c(coeffs);
    while (!c.empty() && std::abs(c.back()) == 0.0) c.pop_back();
    if (c.size() < 2) throw NoConvergence("poly_roots_complex: degree must be >= 1");

    std::vector<Complex> roots;
    size_t zero_mult = 0;
    while (zero_mult + 1 < c.size() && std::abs(c[zero_mult]) == 0.0) ++zero_mult;
    if (zero_mult > 0) {
        roots.assign(zero_mult, Complex(0.0, 0.0));
        c.erase(c.begin(), c.begin() + static_cast<long>(zero_mult));
    }
    size_t n = c.size() - 1;
    if (n == 0) return roots;

    if (n == 1) {
        roots.push_back(-c[0] / c[1]);
        return roots;
    }

    // Initial moduli from the upper convex hull of (k, log|c_k|): one
    // annulus per hull edge, the way MPSolve seeds its iteration. The plain
    // Cauchy bound is hopeless for iterated maps whose mid coefficients dwarf
    // the leading one.
    std::vector<double> radius(n, 1.0);
    {
        std::vector<std::pair<double, double>> pts; // (k, log|c_k|)
        for (size_t k = 0; k <= n; ++k)
            if (std::abs(c[k]) > 0.0) pts.emplace_back(static_cast<double>(k), std::log(std::abs(c[k])));
        std::vector<std::pair<double, double>> hull;
        for (const auto& p : pts) {
            while (hull.size() >= 2) {
                const auto& a = hull[hull.size() - 2];
                const auto& b = hull[hull.size() - 1];
                if ((b.second - a.second) * (p.first - a.first) <=
                    (p.second - a.second) * (b.first - a.first))
                    hull.pop_back();
                else
                    break;
            }
            hull.push_back(p);
        }
        for (size_t seg = 0; seg + 1 < hull.size(); ++seg) {
            double k1 = hull[seg].first, y1 = hull[seg].second;
            double k2 = hull[seg + 1].first, y2 = hull[seg + 1].second;
            double u = std::exp((y1 - y2) / (k2 - k1));
            for (size_t j = static_cast<size_t>(k1); j < static_cast<size_t>(k2) && j < n; ++j)
                radius[j] = u;
        }
    }
    Rng rng(opts.seed);
    std::vector<Complex> z(n);
    const double tau = 6.283185307179586476925;
    double phase0 = 0.376 + 0.05 * rng.uniform();
    for (size_t i = 0; i < n; ++i) {
        double jitter = 0.02 * (rng.uniform() - 0.5);
        double theta = tau * (static_cast<double>(i) / static_cast<double>(n) + phase0) + jitter;
        double r = radius[i] * (1.0 + 0.05 * (rng.uniform() - 0.5));
        z[i] = Complex(r * std::cos(theta), r * std::sin(theta));
    }

    unsigned iteration_budget = opts.max_iterations + 8 * static_cast<unsigned>(n);
    for (unsigned it = 0; it < iteration_budget; ++it) {
        bool all_small = true;
        for (size_t i = 0; i < n; ++i) {
            Complex p = horner(c, z[i]);
            if (std::abs(p) == 0.0) continue;
            Complex dp = horner_deriv(c, z[i]);
            Complex newton = (std::abs(dp) > 0.0) ? p / dp : Complex(1e-8, 1e-8);
            Complex sum = 0.0;
            for (size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                Complex diff = z[i] - z[j];
                if (std::abs(diff) < 1e-300) diff = Complex(1e-300, 0.0);
                sum += 1.0 / diff;
            }
            Complex denom = 1.0 - newton * sum;
            Complex w = (std::abs(denom) > 1e-300) ? newton / denom : newton;
            z[i] -= w;
            if (std::abs(w) > 1e-14 * (1.0 + std::abs(z[i]))) all_small = false;
        }
        if (all_small) break;
    }

    // Newton polish in extended precision: simple roots of iterated maps are
    // well separated but badly conditioned in the monomial basis, and the
    // 64-bit mantissa recovers the forward accuracy the certificate cannot.
    {
        using CL = std::complex<long double>;
        std::vector<CL> cl(c.size());
        for (size_t i = 0; i < c.size(); ++i) cl[i] = CL(c[i].real(), c[i].imag());
        auto horner_l = [&](CL zz) {
            CL acc = 0.0L;
            for (size_t i = cl.size(); i-- > 0;) acc = acc * zz + cl[i];
            return acc;
        };
        auto horner_dl = [&](CL zz) {
            CL acc = 0.0L;
            for (size_t i = cl.size(); i-- > 1;) acc = acc * zz + static_cast<long double>(i) * cl[i];
            return acc;
        };
        for (size_t i = 0; i < n; ++i) {
            CL zz(z[i].real(), z[i].imag());
            for (int k = 0; k < 6; ++k) {
                CL p = horner_l(zz);
                CL dp = horner_dl(zz);
                if (std::abs(dp) == 0.0L) break;
                CL step = p / dp;
                if (std::abs(step) > 0.5L * (1.0L + std::abs(zz))) break;
                zz -= step;
            }
            z[i] = Complex(static_cast<double>(zz.real()), static_cast<double>(zz.imag()));
        }
    }
    for (size_t i = 0; i < n; ++i) {
        double resid = std::abs(horner(c, z[i]));
        if (!(resid <= opts.tol * std::max(eval_scale(c, z[i]), 1e-300)))
            throw NoConvergence("poly_roots_complex: residual above tolerance");
    }
    std::sort(z.begin(), z.end(), [](const Complex& a, const Complex& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    roots.insert(roots.end(), z.begin(), z.end());
    return roots;
}

} // namespace

namespace {

std::vector<ProjPointC> form_roots_impl(const std::vector<Complex>& coeffs,
                                        const RootSolveOptions& opts) {
    size_t top = coeffs.size();
    while (top > 0 && std::abs(coeffs[top - 1]) == 0.0) --top;
    size_t inf_mult = coeffs.size() - top;
    std::vector<ProjPointC> out;
    for (size_t k = 0; k < inf_mult; ++k) out.push_back(ProjPointC::infinity());
    if (top >= 2) {
        std::vector<Complex> c(coeffs.begin(), coeffs.begin() + static_cast<long>(top));
        for (Complex r : poly_roots_complex(c, opts)) out.emplace_back(r);
    }
    return out;
}

} // namespace

std::vector<ProjPointC> binary_form_roots(const BinaryForm& form, const RootSolveOptions& opts) {
    // Scale huge integer coefficients jointly; the root set is unchanged.
    signed long emax = -1000000;
    for (const auto& v : form.coeffs()) {
        if (v == 0) continue;
        signed long e;
        (void)mpz_get_d_2exp(&e, v.get_mpz_t());
        emax = std::max(emax, e);
    }
    std::vector<Complex> c(form.coeffs().size());
    for (size_t i = 0; i < c.size(); ++i) {
        const Int& v = form.coeffs()[i];
        if (v == 0) {
            c[i] = 0.0;
            continue;
        }
        signed long e;
        double m = mpz_get_d_2exp(&e, v.get_mpz_t());
        c[i] = std::ldexp(m, static_cast<int>(std::max(e - emax, -1060L)));
    }
    return form_roots_impl(c, opts);
}

std::vector<ProjPointC> binary_form_roots(const std::vector<Complex>& coeffs,
                                          const RootSolveOptions& opts) {
    return form_roots_impl(coeffs, opts);
}

namespace {

Int eval_at_rational(const std::vector<Int>& c, const Int& p, const Int& q) {
    // sum c_i p^i q^(d-i), Horner in p with incremental q powers
    Int acc = c.back();
    Int qp = 1;
    for (size_t i = c.size() - 1; i-- > 0;) {
        qp *= q;
        acc = acc * p + c[i] * qp;
        if (i == 0) break;
    }
    return acc;
}

/// Exact synthetic division by (q z - p); returns false if it does not divide.
bool deflate(std::vector<Int>& c, const Int& p, const Int& q) {
    size_t d = c.size() - 1;
    std::vector<Int> b(d);
    Int carry = c[d];
    for (size_t k = d; k-- > 0;) {
        if (!mpz_divisible_p(carry.get_mpz_t(), q.get_mpz_t())) return false;
        b[k] = carry / q;
        carry = c[k] + p * b[k];
        if (k == 0) break;
    }
    if (carry != 0) return false;
    c = std::move(b);
    return true;
}

void push_candidate(std::vector<std::pair<Int, Int>>& cands, const Int& p, const Int& q) {
    Int g = gcd(abs(p), abs(q));
    Int cp = p / g, cq = q / g;
    if (cq < 0) {
        cp = -cp;
        cq = -cq;
    }
    cands.emplace_back(cp, cq);
}

} // namespace

std::vector<Rat> rational_roots_int(const std::vector<Int>& coeffs) {
    std::vector<Int> c(coeffs);
    while (c.size() > 1 && c.back() == 0) c.pop_back();
    if (c.size() <= 1) return {};
    std::vector<Rat> out;

    // Roots at zero.
    size_t k0 = 0;
    while (k0 + 1 < c.size() && c[k0] == 0) ++k0;
    for (size_t k = 0; k < k0; ++k) out.emplace_back(0);
    if (k0 > 0) c.erase(c.begin(), c.begin() + static_cast<long>(k0));

    Int content = 0;
    for (const auto& v : c) content = gcd(content, abs(v));
    if (content > 1)
        for (auto& v : c) v /= content;

    while (c.size() > 1) {
        std::vector<std::pair<Int, Int>> cands;
        // Small exhaustive sweep; covers repeated small roots exactly.
        for (long p = -60; p <= 60; ++p)
            for (long q = 1; q <= 40; ++q) push_candidate(cands, Int(p), Int(q));
        // Rationalize the real-ish complex roots via continued fractions.
        try {
            BinaryForm f(static_cast<unsigned>(c.size() - 1), c);
            RootSolveOptions loose;
            loose.tol = 1e-6;
            for (const auto& pt : binary_form_roots(f, loose)) {
                if (pt.near_infinity(1e-9)) continue;
                Complex z = pt.affine();
                if (std::abs(z.imag()) > 1e-5 * (1.0 + std::abs(z.real()))) continue;
                double x = z.real();
                // Continued-fraction convergents of x up to denominator 10^6.
                double v = x;
                Int h0 = 1, h1 = 0, k0cf = 0, k1cf = 1;
                for (int step = 0; step < 40; ++step) {
                    double fl = std::floor(v);
                    if (std::abs(fl) > 1e15) break;
                    Int a(static_cast<long>(fl));
                    Int h = a * h0 + h1, kk = a * k0cf + k1cf;
                    if (kk > 1000000) break;
                    push_candidate(cands, h, kk);
                    h1 = h0;
                    h0 = h;
                    k1cf = k0cf;
                    k0cf = kk;
                    double frac = v - fl;
                    if (frac < 1e-12) break;
                    v = 1.0 / frac;
                }
            }
        } catch (const NoConvergence&) {
            // fall through to the sweep candidates
        }

        bool found = false;
        for (const auto& [p, q] : cands) {
            if (eval_at_rational(c, p, q) != 0) continue;
            std::vector<Int> reduced(c);
            if (!deflate(reduced, p, q)) continue;
            out.emplace_back(Rat(p, q));
            out.back().canonicalize();
            c = std::move(reduced);
            found = true;
            break;
        }
        if (!found) break;
    }
    std::sort(out.begin(), out.end(), [](const Rat& a, const Rat& b) { return a < b; });
    return out;
}

std::vector<Rat> rational_roots(const std::vector<Rat>& coeffs) {
    Int den = 1;
    for (const auto& q : coeffs) den = lcm(den, q.get_den());
    std::vector<Int> c(coeffs.size());
    for (size_t i = 0; i < coeffs.size(); ++i) c[i] = Int(coeffs[i] * Rat(den));
    return rational_roots_int(c);
}

} // namespace sd
