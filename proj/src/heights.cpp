#include "sd/heights.hpp"

#include <cmath>

#include "sd/errors.hpp"

namespace sd {

namespace {

const double kLn2 = 0.69314718055994530942;

Int abs_coeff_sum(const BinaryForm& f) {
    Int s = 0;
    for (const auto& c : f.coeffs()) s += abs(c);
    return s;
}

} // namespace

HeightContext::HeightContext(const RationalMap& f) : f_(&f) {
    Int plus_sum = abs_coeff_sum(f.num());
    Int qsum = abs_coeff_sum(f.den());
    if (qsum > plus_sum) plus_sum = qsum;

    auto cof = resultant_cofactors(f.num(), f.den());
    Int side_x = abs_coeff_sum(cof.ax) + abs_coeff_sum(cof.bx);
    Int side_y = abs_coeff_sum(cof.ay) + abs_coeff_sum(cof.by);
    Int cof_sum = side_x > side_y ? side_x : side_y;

    if (plus_sum == 1 && cof_sum == 1 && abs(f.res()) == 1) {
        // Monomial-type lift: the escape rate telescopes exactly.
        c_plus_ = 0.0;
        c_minus_ = 0.0;
        step_bound_ = 0.0;
    } else {
        c_plus_ = log_abs(plus_sum) + 1e-12;
        c_minus_ = log_abs(f.res()) - log_abs(cof_sum) - 1e-12;
        if (c_minus_ > 0.0) c_minus_ = 0.0; // ||u||=1 point with log||F(u)||<=c+ exists anyway
        step_bound_ = std::max(std::fabs(c_plus_), std::fabs(c_minus_));
    }

    for (const Int& p : prime_divisors(f.res()))
        bad_.emplace_back(p, valuation(f.res(), p));
}

HeightEstimate green_arch(const HeightContext& ctx, const ProjPointC& z, unsigned n_iters) {
    const RationalMap& f = ctx.map();
    const double d = f.degree();
    Complex x = z.x, y = z.y;
    long double acc = 0.0L;
    long double dpow = 1.0L; // d^(k+1)
    for (unsigned k = 0; k < n_iters; ++k) {
        Complex wx = f.num().eval(x, y);
        Complex wy = f.den().eval(x, y);
        double m = std::max(std::abs(wx), std::abs(wy));
        int e = 0;
        std::frexp(m, &e); // renormalize by 2^(1-e) into [1/2, 2]
        int shift = e - 1;
        double s = std::ldexp(1.0, -shift);
        x = wx * s;
        y = wy * s;
        dpow *= d;
        acc += static_cast<long double>(shift) * static_cast<long double>(kLn2) / dpow;
    }
    double tail = std::log(std::max(std::abs(x), std::abs(y)));
    acc += static_cast<long double>(tail) / dpow;

    HeightEstimate est;
    est.value = static_cast<double>(acc);
    est.error = ctx.step_bound() == 0.0
                    ? 0.0
                    : ctx.step_bound() / (static_cast<double>(dpow) * (d - 1.0));
    return est;
}

HeightEstimate green_arch(const RationalMap& f, const ProjPointC& z, unsigned n_iters) {
    return green_arch(HeightContext(f), z, n_iters);
}

HeightEstimate green_nonarch(const RationalMap& f, const ProjPointQ& z, const Int& p,
                             unsigned n_iters) {
    unsigned long v_res = mpz_divisible_p(f.res().get_mpz_t(), p.get_mpz_t())
                              ? valuation(f.res(), p)
                              : 0;
    HeightEstimate est;
    if (v_res == 0) return est; // good reduction: exactly 0

    const double d = f.degree();
    double logp = log_abs(p);
    // Work modulo p^M; per-step stripped valuations are bounded by v_p(Res),
    // so M = n * v + guard keeps every valuation readable.
    unsigned long guard = v_res + 8;
    unsigned long m_bits = static_cast<unsigned long>(n_iters) * v_res + guard;
    Int modulus = pow(p, m_bits);
    Int x = z.x % modulus, y = z.y % modulus;
    if (x < 0) x += modulus;
    if (y < 0) y += modulus;

    long double acc = 0.0L;
    long double dpow = 1.0L;
    unsigned long remaining = m_bits;
    for (unsigned k = 0; k < n_iters; ++k) {
        Int wx = f.num().eval(x, y) % modulus;
        Int wy = f.den().eval(x, y) % modulus;
        if (wx < 0) wx += modulus;
        if (wy < 0) wy += modulus;
        unsigned long ex = wx == 0 ? remaining : valuation(wx, p);
        unsigned long ey = wy == 0 ? remaining : valuation(wy, p);
        unsigned long e = std::min(ex, ey);
        if (e > v_res)
            throw NoConvergence("green_nonarch: p-adic precision exhausted");
        if (e > 0) {
            Int pe = pow(p, e);
            wx /= pe;
            wy /= pe;
            remaining -= e;
            modulus /= pe;
        }
        x = wx;
        y = wy;
        dpow *= d;
        acc -= static_cast<long double>(e) * static_cast<long double>(logp) / dpow;
    }
    est.value = static_cast<double>(acc);
    est.error = static_cast<double>(v_res) * logp / (static_cast<double>(dpow) * (d - 1.0));
    return est;
}

namespace {

unsigned iterations_for(double bound, double share, double d, unsigned cap = 64) {
    // smallest n with bound / (d^n (d-1)) <= share
    if (bound <= 0.0) return 1;
    double dpow = d - 1.0;
    for (unsigned n = 1; n <= cap; ++n) {
        dpow *= d;
        if (bound <= share * dpow) return n;
    }
    throw BudgetExceeded("canonical_height: iteration cap exceeded");
}

/// Complex unit-band representative of an integer lift plus the log of the
/// scaling undone, so G(lift) = G(representative) + logscale.
struct ScaledLift {
    ProjPointC pt;
    double logscale;
};

ScaledLift scale_integer_lift(const ProjPointQ& z) {
    signed long ex = 0, ey = 0;
    double mx = z.x == 0 ? 0.0 : mpz_get_d_2exp(&ex, z.x.get_mpz_t());
    double my = z.y == 0 ? 0.0 : mpz_get_d_2exp(&ey, z.y.get_mpz_t());
    signed long shift = std::max(z.x == 0 ? ey : ex, z.y == 0 ? ex : ey);
    if (z.x != 0 && z.y != 0) shift = std::max(ex, ey);
    ScaledLift out;
    double fx = z.x == 0 ? 0.0 : std::ldexp(mx, static_cast<int>(std::max(ex - shift, -1060L)));
    double fy = z.y == 0 ? 0.0 : std::ldexp(my, static_cast<int>(std::max(ey - shift, -1060L)));
    out.pt = ProjPointC(Complex(fx, 0.0), Complex(fy, 0.0));
    // ProjPointC may renormalize once more; account for it against the raw pair.
    double renorm = out.pt.x.real() != 0.0 ? fx / out.pt.x.real() : fy / out.pt.y.real();
    out.logscale = static_cast<double>(shift) * kLn2 + std::log(std::fabs(renorm));
    return out;
}

} // namespace

HeightEstimate canonical_height(const HeightContext& ctx, const ProjPointQ& z,
                                double target_error) {
    if (!(target_error > 0.0)) throw std::invalid_argument("canonical_height: target_error <= 0");
    const RationalMap& f = ctx.map();
    const double d = f.degree();
    const size_t places = 1 + ctx.bad_primes().size();
    const double share = target_error / static_cast<double>(places);

    HeightEstimate est;
    double total = 0.0;
    double err = 0.0;

    unsigned n_arch = iterations_for(ctx.step_bound(), share, d);
    ScaledLift lift = scale_integer_lift(z);
    HeightEstimate arch = green_arch(ctx, lift.pt, n_arch);
    double arch_val = arch.value + lift.logscale;
    est.place_breakdown.emplace_back(Place::arch(), arch_val);
    total += arch_val;
    err += arch.error;

    for (const auto& [p, v] : ctx.bad_primes()) {
        double bound = static_cast<double>(v) * log_abs(p);
        unsigned n_p = iterations_for(bound, share, d);
        HeightEstimate local = green_nonarch(f, z, p, n_p);
        est.place_breakdown.emplace_back(Place::at(p), local.value);
        total += local.value;
        err += local.error;
    }

    est.value = total;
    est.error = err;
    return est;
}

HeightEstimate canonical_height(const RationalMap& f, const ProjPointQ& z, double target_error) {
    return canonical_height(HeightContext(f), z, target_error);
}

HeightEstimate canonical_height_split(const std::vector<RationalMap>& maps,
                                      const std::vector<ProjPointQ>& z, double target_error) {
    if (maps.size() != z.size() || maps.empty())
        throw std::invalid_argument("canonical_height_split: length mismatch");
    HeightEstimate est;
    double total = 0.0;
    for (size_t i = 0; i < maps.size(); ++i) {
        HeightEstimate h =
            canonical_height(maps[i], z[i], target_error / static_cast<double>(maps.size()));
        total += h.value;
        est.error += h.error;
        for (auto& pb : h.place_breakdown) est.place_breakdown.push_back(pb);
    }
    est.value = total;
    return est;
}

double naive_height(const ProjPointQ& z) {
    Int ax = abs(z.x), ay = abs(z.y);
    return log_abs(ax > ay ? ax : ay);
}

double height_difference_bound(const HeightContext& ctx) {
    double sum = ctx.step_bound();
    for (const auto& [p, v] : ctx.bad_primes()) sum += static_cast<double>(v) * log_abs(p);
    return sum / (static_cast<double>(ctx.map().degree()) - 1.0);
}

double height_difference_bound(const RationalMap& f) {
    return height_difference_bound(HeightContext(f));
}

} // namespace sd
