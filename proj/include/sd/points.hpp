#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <string>

#include "sd/integer.hpp"

namespace sd {

using Complex = std::complex<double>;

/// Point of P^1(Q) as a gcd-1 integer pair, sign-normalized so that
/// y > 0, or y = 0 and x = 1. Equality of orbits reduces to memberwise
/// equality of normalized points.
struct ProjPointQ {
    Int x{0};
    Int y{1};

    ProjPointQ() = default;
    ProjPointQ(Int px, Int py);
    explicit ProjPointQ(const Rat& z); // affine rational point [z : 1]

    static ProjPointQ infinity() { return ProjPointQ(1, 0); }
    bool is_infinity() const { return y == 0; }

    Rat to_rational() const; // requires y != 0

    bool operator==(const ProjPointQ& o) const { return x == o.x && y == o.y; }
    bool operator!=(const ProjPointQ& o) const { return !(*this == o); }

    std::string str() const;
};

struct ProjPointQHash {
    size_t operator()(const ProjPointQ& p) const;
};

/// Point of P^1(C); renormalized on demand so max(|x|,|y|) stays in [1/2, 2].
/// Construction preserves the caller's lift exactly: the escape-rate code
/// reads the stored pair, and a silent rescale would shift its value by the
/// log of the scale. Iteration outputs are renormalized instead.
struct ProjPointC {
    Complex x{0.0, 0.0};
    Complex y{1.0, 0.0};

    ProjPointC() = default;
    ProjPointC(Complex px, Complex py) : x(px), y(py) {}
    explicit ProjPointC(Complex affine) : x(affine), y(1.0) {}
    explicit ProjPointC(const ProjPointQ& p);

    static ProjPointC infinity() { return ProjPointC(Complex(1.0), Complex(0.0)); }

    void renormalize(); // scale by a power of 2 into the [1/2, 2] band
    bool near_infinity(double tol = 1e-12) const;
    Complex affine() const; // x / y, may overflow to inf near infinity

    std::string str() const;
};

/// Chordal (spherical) distance on P^1(C), |x1 y2 - x2 y1| / (|p1| |p2|)
/// with the Euclidean norms of the lifts; values lie in [0, 1].
double chordal(const ProjPointC& a, const ProjPointC& b);

} // namespace sd
