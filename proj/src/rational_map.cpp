#include "sd/rational_map.hpp"

#include <algorithm>
#include <sstream>

namespace sd {

namespace {

/// Joint content of the pair, then a deterministic sign.
void normalize_pair(BinaryForm& p, BinaryForm& q) {
    Int g = gcd(p.content(), q.content());
    if (g > 1) {
        std::vector<Int> pc(p.coeffs()), qc(q.coeffs());
        for (auto& c : pc) c /= g;
        for (auto& c : qc) c /= g;
        p = BinaryForm(p.degree(), std::move(pc));
        q = BinaryForm(q.degree(), std::move(qc));
    }
    int sign = 0;
    for (unsigned i = q.degree() + 1; i-- > 0 && sign == 0;) {
        if (q.coeff(i) != 0) sign = mpz_sgn(q.coeff(i).get_mpz_t());
        if (i == 0) break;
    }
    for (unsigned i = p.degree() + 1; i-- > 0 && sign == 0;) {
        if (p.coeff(i) != 0) sign = mpz_sgn(p.coeff(i).get_mpz_t());
        if (i == 0) break;
    }
    if (sign < 0) {
        p = p.scaled(Int(-1));
        q = q.scaled(Int(-1));
    }
}

} // namespace

RationalMap::RationalMap(BinaryForm p, BinaryForm q) : p_(std::move(p)), q_(std::move(q)) {
    if (p_.degree() != q_.degree())
        throw DegenerateMap("RationalMap: numerator and denominator degrees differ");
    if (p_.degree() < 2) throw DegenerateMap("RationalMap: degree must be at least 2");
    normalize_pair(p_, q_);
    res_ = resultant(p_, q_);
    if (res_ == 0) throw DegenerateMap("RationalMap: zero resultant, not a morphism");
}

ProjPointQ RationalMap::eval(const ProjPointQ& z) const {
    return ProjPointQ(p_.eval(z.x, z.y), q_.eval(z.x, z.y));
}

ProjPointC RationalMap::eval(const ProjPointC& z) const {
    ProjPointC w(p_.eval(z.x, z.y), q_.eval(z.x, z.y));
    w.renormalize();
    return w;
}

std::string RationalMap::str() const {
    std::ostringstream os;
    os << "(" << p_.str() << ") / (" << q_.str() << ")";
    return os.str();
}

RationalMap normalize_lift(const BinaryForm& p, const BinaryForm& q) {
    return RationalMap(p, q);
}

RationalMap compose(const RationalMap& f, const RationalMap& g, size_t bit_cap) {
    BinaryForm p = f.num().substitute(g.num(), g.den());
    BinaryForm q = f.den().substitute(g.num(), g.den());
    for (const auto& c : p.coeffs())
        if (bit_size(c) > bit_cap) throw BudgetExceeded("compose: coefficient bit-size cap");
    for (const auto& c : q.coeffs())
        if (bit_size(c) > bit_cap) throw BudgetExceeded("compose: coefficient bit-size cap");
    return RationalMap(std::move(p), std::move(q));
}

RationalMap iterate(const RationalMap& f, unsigned n, size_t bit_cap) {
    if (n < 1) throw std::invalid_argument("iterate: n must be >= 1");
    RationalMap acc = f;
    for (unsigned k = 1; k < n; ++k) acc = compose(f, acc, bit_cap);
    return acc;
}

RationalMap map_from_poly(const std::vector<Int>& num, const std::vector<Int>& den) {
    if (num.empty() || den.empty()) throw DegenerateMap("map literal: empty coefficients");
    unsigned d = static_cast<unsigned>(std::max(num.size(), den.size())) - 1;
    std::vector<Int> p(d + 1, Int(0)), q(d + 1, Int(0));
    std::copy(num.begin(), num.end(), p.begin());
    std::copy(den.begin(), den.end(), q.begin());
    return RationalMap(BinaryForm(d, std::move(p)), BinaryForm(d, std::move(q)));
}

} // namespace sd
