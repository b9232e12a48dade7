#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

namespace sd {

using Int = mpz_class;
using Rat = mpq_class;

inline Int gcd(const Int& a, const Int& b) {
    Int g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

inline Int lcm(const Int& a, const Int& b) {
    Int l;
    mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return l;
}

inline Int abs(const Int& a) {
    Int r;
    mpz_abs(r.get_mpz_t(), a.get_mpz_t());
    return r;
}

inline Int pow(const Int& a, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), a.get_mpz_t(), e);
    return r;
}

/// p-adic valuation of a nonzero integer.
inline unsigned long valuation(const Int& a, const Int& p) {
    Int rem;
    return mpz_remove(rem.get_mpz_t(), a.get_mpz_t(), p.get_mpz_t());
}

/// Exact n-th root if a is a perfect n-th power, else no value.
bool perfect_root(const Int& a, unsigned long n, Int& root);

/// log|a| computed from the GMP mantissa/exponent split, accurate for
/// integers far beyond double range. Returns -inf for a = 0.
double log_abs(const Int& a);

double to_double(const Rat& q);

/// Bit size of the larger of |numerator| and |denominator|.
size_t bit_size(const Int& a);

/// Prime factorization by trial division plus Pollard rho; intended for
/// resultants of desk-scale maps, not cryptographic sizes.
/// Returns the distinct prime divisors of |a|, ascending. a must be nonzero.
std::vector<Int> prime_divisors(const Int& a);

/// Deterministic content hash of a string (FNV-1a 64); used to build
/// stable per-cell RNG seeds.
std::uint64_t fnv1a64(const std::string& s);

} // namespace sd
