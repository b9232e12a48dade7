#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sd/curves.hpp"
#include "sd/ipoly.hpp"
#include "sd/rational_map.hpp"

namespace sd {

/// One-parameter family of degree-d maps: lift coefficients are integer
/// polynomials in t (ascending t inside, ascending z outside). An optional
/// second component makes it a split pair family.
class ParamFamily {
  public:
    struct MapPolys {
        std::vector<ipoly::Poly> num; // num[i] = t-polynomial for the z^i coefficient
        std::vector<ipoly::Poly> den;
    };

    ParamFamily(unsigned degree, MapPolys first, std::optional<MapPolys> second = std::nullopt);

    /// z^2 + t and friends: unicritical family with rational offset.
    static ParamFamily unicritical(unsigned degree);

    unsigned degree() const { return degree_; }
    bool is_pair() const { return second_.has_value(); }
    const MapPolys& first() const { return first_; }
    const MapPolys& second() const { return *second_; }
    /// Res(t) of the first component, cached at construction.
    const ipoly::Poly& resultant_poly() const { return res_poly_; }

    std::string str() const;

  private:
    unsigned degree_;
    MapPolys first_;
    std::optional<MapPolys> second_;
    ipoly::Poly res_poly_;
};

/// Fiber map(s) at t; DegenerateFiber when the resultant vanishes or the
/// degree drops there.
RationalMap specialize(const ParamFamily& f, const Rat& t);
std::pair<RationalMap, RationalMap> specialize_pair(const ParamFamily& f, const Rat& t);

struct BadParameters {
    std::vector<Rat> rational;
    std::vector<Complex> complex_roots;
};

/// Exact rational roots of Res(t) plus its numeric complex roots; the
/// degree-drop loci are the resultant zeros with both top coefficients gone.
BadParameters bad_parameters(const ParamFamily& f);

enum class Isotriviality { Isotrivial, NonIsotrivial, Unknown };

/// Degree 2 is decided exactly through the fixed-point multiplier moduli
/// (sigma1, sigma2) evaluated at enough parameters to pin rational functions
/// of their degree; higher degrees are screened numerically.
Isotriviality isotrivial_check(const ParamFamily& f, unsigned samples = 0);

/// Exact fixed-point multiplier symmetric functions of a single quadratic
/// map (the Milnor moduli coordinates), exposed for the family check.
std::pair<Rat, Rat> multiplier_moduli(const RationalMap& f);

struct SmallPointBudget {
    unsigned m = 3;
    unsigned n = 4;
    unsigned degree_cap = 2100;
};

struct SmallPointReport {
    unsigned count{0};
    std::vector<std::pair<ProjPointC, ProjPointC>> points; // the below-eps candidates
    double empirical_min{0.0};
    unsigned candidates{0};
};

/// Candidates are bounded-preperiodicity solutions of either coordinate
/// paired through the fiber equations of C; certified heights on Q-points,
/// flagged Green surrogates elsewhere. Refuses Special curves.
SmallPointReport fiber_small_points(const RationalMap& f, const RationalMap& g,
                                    const CurveP1xP1& c, double eps,
                                    const SmallPointBudget& budget = {});

/// Same with the pair family specialized at t first.
SmallPointReport fiber_small_points(const ParamFamily& fam, const CurveP1xP1& c, const Rat& t,
                                    double eps, const SmallPointBudget& budget = {});

struct DkyCell {
    Rat t1, t2;
    unsigned count{0};
    bool skipped{false}; // t1 == t2 is rejected by the guard
};

struct DkyTable {
    std::vector<DkyCell> cells;
    unsigned max_count{0};
};

/// Unicritical pair scan (z^2 + t1, z^2 + t2) on the diagonal.
DkyTable dky_scan(const std::vector<Rat>& t1_list, const std::vector<Rat>& t2_list, double eps,
                  const SmallPointBudget& budget = {SmallPointBudget{2, 3, 2100}});

/// Section of the family: a rational-coefficient polynomial in t.
using Section = std::vector<Rat>;

struct HeightFit {
    double c1{0.0};
    double c2{0.0};
    double slope_estimate{0.0};
    std::vector<std::pair<double, double>> support; // (h(t), h_hat)
    unsigned violations{0};
    bool isotrivial_flag{false};
    std::vector<Rat> skipped; // degenerate parameters
};

/// Support pairs (h(t), h_hat(f_t, section(t))) over the grid; the reported
/// line is the steepest edge of the lower convex hull extended leftward
/// (maximal c1, then minimal c2), plus an asymptotic slope estimate from the
/// top half of the grid.
HeightFit fit_height_inequality(const ParamFamily& f, const Section& section,
                                const std::vector<Rat>& t_grid, double target_error);

} // namespace sd
