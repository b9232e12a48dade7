#include "sd/points.hpp"

#include <cmath>
#include <stdexcept>

namespace sd {

ProjPointQ::ProjPointQ(Int px, Int py) : x(std::move(px)), y(std::move(py)) {
    if (x == 0 && y == 0) throw std::invalid_argument("ProjPointQ: (0,0) is not a point");
    Int g = gcd(abs(x), abs(y));
    if (g > 1) {
        x /= g;
        y /= g;
    }
    if (y < 0) {
        x = -x;
        y = -y;
    } else if (y == 0 && x < 0) {
        x = -x;
    }
}

ProjPointQ::ProjPointQ(const Rat& z) : ProjPointQ(z.get_num(), z.get_den()) {}

Rat ProjPointQ::to_rational() const {
    if (y == 0) throw std::domain_error("ProjPointQ: point at infinity has no affine value");
    return Rat(x, y);
}

std::string ProjPointQ::str() const {
    return x.get_str() + "/" + y.get_str();
}

size_t ProjPointQHash::operator()(const ProjPointQ& p) const {
    // Hash the low limbs; equality still compares full values.
    std::uint64_t hx = mpz_get_ui(p.x.get_mpz_t());
    std::uint64_t hy = mpz_get_ui(p.y.get_mpz_t());
    std::uint64_t h = hx * 0x9e3779b97f4a7c15ULL + hy + (mpz_sgn(p.x.get_mpz_t()) < 0 ? 0x5851f42d4c957f2dULL : 0);
    h ^= h >> 29;
    h *= 0xbf58476d1ce4e5b9ULL;
    h ^= h >> 32;
    return static_cast<size_t>(h);
}

ProjPointC::ProjPointC(const ProjPointQ& p) {
    // Scale huge integer coordinates down before converting; the projective
    // class is unchanged and the doubles stay finite.
    signed long ex = 0, ey = 0;
    double mx = p.x == 0 ? 0.0 : mpz_get_d_2exp(&ex, p.x.get_mpz_t());
    double my = p.y == 0 ? 0.0 : mpz_get_d_2exp(&ey, p.y.get_mpz_t());
    signed long shift = std::max(ex, ey);
    x = Complex(std::ldexp(mx, static_cast<int>(std::max(ex - shift, -1074L))), 0.0);
    y = Complex(std::ldexp(my, static_cast<int>(std::max(ey - shift, -1074L))), 0.0);
    renormalize();
}

void ProjPointC::renormalize() {
    double m = std::max(std::abs(x), std::abs(y));
    if (m == 0.0 || std::isnan(m)) throw std::domain_error("ProjPointC: (0,0) is not a point");
    if (m >= 0.5 && m <= 2.0) return;
    int e = 0;
    std::frexp(m, &e); // m = f * 2^e with f in [1/2, 1)
    double s = std::ldexp(1.0, -e + 1);
    x *= s;
    y *= s;
}

bool ProjPointC::near_infinity(double tol) const {
    return std::abs(y) <= tol * std::max(std::abs(x), std::abs(y));
}

Complex ProjPointC::affine() const {
    return x / y;
}

std::string ProjPointC::str() const {
    Complex z = near_infinity() ? Complex(0, 0) : affine();
    if (near_infinity()) return "inf";
    return "(" + std::to_string(z.real()) + (z.imag() < 0 ? "-" : "+") +
           std::to_string(std::fabs(z.imag())) + "i)";
}

double chordal(const ProjPointC& a, const ProjPointC& b) {
    double cross = std::abs(a.x * b.y - b.x * a.y);
    double na = std::sqrt(std::norm(a.x) + std::norm(a.y));
    double nb = std::sqrt(std::norm(b.x) + std::norm(b.y));
    return cross / (na * nb);
}

} // namespace sd
