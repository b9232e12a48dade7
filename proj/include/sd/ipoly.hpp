#pragma once

// Exact dense univariate polynomials over Z (ascending coefficients), plus
// Lagrange interpolation at integer nodes. Shared by the curve elimination
// and the family machinery.

#include <optional>
#include <stdexcept>
#include <vector>

#include "sd/integer.hpp"

namespace sd::ipoly {

using Poly = std::vector<Int>;

inline void trim(Poly& p) {
    while (p.size() > 1 && p.back() == 0) p.pop_back();
}

inline bool is_zero(const Poly& p) {
    for (const auto& v : p)
        if (v != 0) return false;
    return true;
}

inline Poly mul(const Poly& a, const Poly& b) {
    Poly out(a.size() + b.size() - 1, Int(0));
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    }
    return out;
}

inline Poly sub(const Poly& a, const Poly& b) {
    Poly out(std::max(a.size(), b.size()), Int(0));
    for (size_t i = 0; i < a.size(); ++i) out[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) out[i] -= b[i];
    return out;
}

inline Int eval(const Poly& p, const Int& t) {
    Int acc = 0;
    for (size_t i = p.size(); i-- > 0;) acc = acc * t + p[i];
    return acc;
}

inline Rat eval(const Poly& p, const Rat& t) {
    Rat acc(0);
    for (size_t i = p.size(); i-- > 0;) acc = acc * t + Rat(p[i]);
    acc.canonicalize();
    return acc;
}

/// Exact division in Z[t]; nullopt when it does not divide.
inline std::optional<Poly> divexact(Poly num, Poly den) {
    trim(num);
    trim(den);
    if (is_zero(den)) return std::nullopt;
    if (is_zero(num)) return Poly{Int(0)};
    if (num.size() < den.size()) return std::nullopt;
    Poly q(num.size() - den.size() + 1, Int(0));
    for (size_t k = q.size(); k-- > 0;) {
        Int lead = num[k + den.size() - 1];
        if (lead == 0) {
            q[k] = 0;
            continue;
        }
        if (!mpz_divisible_p(lead.get_mpz_t(), den.back().get_mpz_t())) return std::nullopt;
        q[k] = lead / den.back();
        for (size_t i = 0; i < den.size(); ++i) num[k + i] -= q[k] * den[i];
    }
    if (!is_zero(num)) return std::nullopt;
    return q;
}

inline Poly pow(const Poly& p, unsigned e) {
    Poly acc{Int(1)};
    for (unsigned k = 0; k < e; ++k) acc = mul(acc, p);
    return acc;
}

/// g with g^m = p exactly; even m takes the positive-lead root.
inline std::optional<Poly> power_root(Poly p, unsigned m) {
    trim(p);
    if (m == 0 || is_zero(p)) return std::nullopt;
    if (m == 1) return p;
    size_t deg = p.size() - 1;
    if (deg % m != 0) return std::nullopt;
    size_t e = deg / m;
    Int lead = p.back(), lead_root;
    if (lead < 0 && m % 2 == 0) return std::nullopt;
    {
        Int a = abs(lead);
        if (!perfect_root(a, m, lead_root)) return std::nullopt;
        if (lead < 0) lead_root = -lead_root;
    }
    Poly g(e + 1, Int(0));
    g[e] = lead_root;
    Int denom = m;
    for (unsigned k = 1; k < m; ++k) denom *= lead_root;
    for (size_t j = e; j-- > 0;) {
        Poly pw = pow(g, m);
        size_t idx = deg - (e - j);
        Int have = idx < pw.size() ? pw[idx] : Int(0);
        Int diff = p[idx] - have;
        if (!mpz_divisible_p(diff.get_mpz_t(), denom.get_mpz_t())) return std::nullopt;
        g[j] = diff / denom;
        if (j == 0) break;
    }
    Poly check = pow(g, m);
    trim(check);
    if (check != p) return std::nullopt;
    return g;
}

/// Exact Lagrange interpolation at distinct integer nodes; callers only
/// interpolate integer-valued polynomials, enforced here.
inline Poly lagrange(const std::vector<long>& nodes, const std::vector<Int>& values) {
    size_t n = nodes.size();
    std::vector<Rat> acc(n, Rat(0));
    for (size_t c = 0; c < n; ++c) {
        if (values[c] == 0) continue;
        std::vector<Rat> numer{Rat(1)};
        Rat denom(1);
        for (size_t j = 0; j < n; ++j) {
            if (j == c) continue;
            std::vector<Rat> next(numer.size() + 1, Rat(0));
            for (size_t i = 0; i < numer.size(); ++i) {
                next[i + 1] += numer[i];
                next[i] -= Rat(nodes[j]) * numer[i];
            }
            numer = std::move(next);
            denom *= Rat(nodes[c]) - Rat(nodes[j]);
        }
        Rat w = Rat(values[c]) / denom;
        for (size_t i = 0; i < numer.size(); ++i) acc[i] += w * numer[i];
    }
    Poly out(n, Int(0));
    for (size_t i = 0; i < n; ++i) {
        Rat v = acc[i];
        v.canonicalize();
        if (v.get_den() != 1) throw std::logic_error("ipoly::lagrange: non-integral interpolant");
        out[i] = v.get_num();
    }
    trim(out);
    return out;
}

} // namespace sd::ipoly
