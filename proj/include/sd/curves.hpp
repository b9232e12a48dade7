#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sd/dynamics.hpp"
#include "sd/rational_map.hpp"

namespace sd {

/// Bihomogeneous integral form cutting a curve in P^1 x P^1.
/// coeffs()[i][j] multiplies x^i y^(d1-i) u^j v^(d2-j) where (x:y) is the
/// first factor and (u:v) the second. Content 1 after normalization; the
/// projection degrees are deg(pi_1) = d2 and deg(pi_2) = d1.
class CurveP1xP1 {
  public:
    CurveP1xP1(unsigned d1, unsigned d2, std::vector<std::vector<Int>> coeffs);

    static CurveP1xP1 diagonal(); // x v - u y
    /// Graph { (z, h(z)) } of a rational function given by ascending
    /// numerator/denominator coefficients: v * N(x,y) - u * D(x,y).
    static CurveP1xP1 graph(const std::vector<Int>& num, const std::vector<Int>& den);
    static CurveP1xP1 vertical(const ProjPointQ& a);   // fiber {a} x P^1
    static CurveP1xP1 horizontal(const ProjPointQ& b); // fiber P^1 x {b}

    unsigned d1() const { return d1_; }
    unsigned d2() const { return d2_; }
    const std::vector<std::vector<Int>>& coeffs() const { return c_; }

    bool is_zero() const;
    /// Content stripped and sign fixed; exact repetition detection compares
    /// these normal forms.
    CurveP1xP1 normalized() const;

    Int eval(const Int& x, const Int& y, const Int& u, const Int& v) const;
    Complex eval(const Complex& x, const Complex& y, const Complex& u, const Complex& v) const;

    /// C(x0, y0, ., .) as a binary form in (u, v) of formal degree d2.
    BinaryForm fiber_over_first(const ProjPointQ& a) const;
    std::vector<Complex> fiber_over_first(const ProjPointC& a) const;
    /// C(., ., u0, v0) as a binary form in (x, y) of formal degree d1.
    BinaryForm fiber_over_second(const ProjPointQ& b) const;
    std::vector<Complex> fiber_over_second(const ProjPointC& b) const;

    bool operator==(const CurveP1xP1& o) const {
        return d1_ == o.d1_ && d2_ == o.d2_ && c_ == o.c_;
    }

    std::string str() const;

  private:
    unsigned d1_, d2_;
    std::vector<std::vector<Int>> c_; // (d1+1) rows x (d2+1) cols
};

/// Reduced form cutting (f,g)(C), by resultant elimination of the graph
/// system; content-normalized and multiplicity-stripped.
CurveP1xP1 curve_image(const CurveP1xP1& c, const RationalMap& f, const RationalMap& g,
                       unsigned bidegree_cap = 64);

struct CurvePrepVerdict {
    bool preperiodic{false};
    unsigned tail{0};  // m
    unsigned cycle{0}; // n
    std::string note;
};

/// Iterates curve_image and looks for exact repetition of normalized forms.
/// Returns NoRepetition (preperiodic = false) when max_iters or the bidegree
/// cap runs out first; the note says which.
CurvePrepVerdict curve_preperiodic_test(const CurveP1xP1& c, const RationalMap& f,
                                        const RationalMap& g, unsigned max_iters,
                                        unsigned bidegree_cap = 64);

enum class MeasureDecision { Equal, NotEqual, Inconclusive };

/// Hook for the measure-equality rejector; the screen stays below the
/// measures module and receives the test injected.
using MeasureTest = std::function<std::pair<MeasureDecision, double>(
    const CurveP1xP1&, const RationalMap&, const RationalMap&)>;

enum class SpecialVerdict { Special, NotSpecialEvidence, Unknown };

struct ScreenResult {
    SpecialVerdict verdict{SpecialVerdict::Unknown};
    std::string evidence;
    double statistic{0.0}; // energy statistic when the measure test decided
};

/// Weakly special screen: non-dominant projection, curve preperiodicity,
/// or a monomial curve through the conjugacies of a power-conjugate pair.
/// A supplied measure test can downgrade Unknown to NotSpecialEvidence.
ScreenResult weakly_special_screen(const CurveP1xP1& c, const RationalMap& f,
                                   const RationalMap& g, unsigned budget_iters = 6,
                                   const MeasureTest& measure_test = nullptr);

} // namespace sd
