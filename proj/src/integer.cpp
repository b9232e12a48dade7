#include "sd/integer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sd {

bool perfect_root(const Int& a, unsigned long n, Int& root) {
    if (n == 0) return false;
    Int r;
    int exact = mpz_root(r.get_mpz_t(), a.get_mpz_t(), n);
    if (exact) root = r;
    return exact != 0;
}

double log_abs(const Int& a) {
    if (a == 0) return -std::numeric_limits<double>::infinity();
    signed long exp2 = 0;
    double m = mpz_get_d_2exp(&exp2, a.get_mpz_t());
    return std::log(std::fabs(m)) + static_cast<double>(exp2) * std::log(2.0);
}

double to_double(const Rat& q) {
    return mpq_get_d(q.get_mpq_t());
}

size_t bit_size(const Int& a) {
    return mpz_sizeinbase(a.get_mpz_t(), 2);
}

namespace {

Int pollard_rho(const Int& n, unsigned long c0) {
    // Brent's variant; n must be odd composite, not a prime power of 2.
    Int x = 2, y = 2, d = 1, c = c0;
    Int diff, prod = 1;
    int iter = 0;
    while (d == 1) {
        x = (x * x + c) % n;
        y = (y * y + c) % n;
        y = (y * y + c) % n;
        diff = x > y ? x - y : y - x;
        if (diff == 0) return 0; // cycle without factor; caller retries
        prod = (prod * diff) % n;
        if (++iter % 64 == 0) {
            d = gcd(prod, n);
            if (d == n) return 0;
        }
    }
    return d;
}

void factor_into(const Int& n, std::vector<Int>& out) {
    if (n == 1) return;
    if (mpz_probab_prime_p(n.get_mpz_t(), 32)) {
        out.push_back(n);
        return;
    }
    Int root;
    for (unsigned long k = 2; k <= bit_size(n); ++k) {
        if (perfect_root(n, k, root) && root > 1) {
            factor_into(root, out);
            return;
        }
    }
    for (unsigned long c = 1;; ++c) {
        Int d = pollard_rho(n, c);
        if (d > 1 && d < n) {
            factor_into(d, out);
            factor_into(n / d, out);
            return;
        }
    }
}

} // namespace

std::vector<Int> prime_divisors(const Int& a) {
    Int n = abs(a);
    std::vector<Int> primes;
    if (n <= 1) return primes;
    // Trial division peels everything small; rho handles the rest.
    static const unsigned long small[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41,
                                          43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97};
    for (unsigned long p : small) {
        if (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
            primes.push_back(Int(p));
            Int rem;
            mpz_remove(rem.get_mpz_t(), n.get_mpz_t(), Int(p).get_mpz_t());
            n = rem;
        }
    }
    for (unsigned long p = 101; p < 100000 && n > 1; p += 2) {
        if (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
            primes.push_back(Int(p));
            Int rem;
            mpz_remove(rem.get_mpz_t(), n.get_mpz_t(), Int(p).get_mpz_t());
            n = rem;
        }
    }
    if (n > 1) {
        std::vector<Int> rest;
        factor_into(n, rest);
        std::sort(rest.begin(), rest.end());
        rest.erase(std::unique(rest.begin(), rest.end()), rest.end());
        primes.insert(primes.end(), rest.begin(), rest.end());
    }
    std::sort(primes.begin(), primes.end());
    return primes;
}

std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

} // namespace sd
