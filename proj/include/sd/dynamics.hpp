#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sd/heights.hpp"
#include "sd/rational_map.hpp"
#include "sd/roots.hpp"

namespace sd {

struct OrbitRecord {
    enum class Verdict { Preperiodic, Escaping, Budget };

    std::vector<ProjPointQ> points; // visited points; on a cycle, includes the repeat
    unsigned tail{0};               // m
    std::optional<unsigned> cycle;  // n; points[m + n] == points[m] exactly
    Verdict verdict{Verdict::Budget};
};

/// Exact forward orbit with cycle detection by normalized-point equality.
/// Declares Escaping as soon as the naive height exceeds height_cutoff.
OrbitRecord orbit(const RationalMap& f, const ProjPointQ& z, unsigned max_steps,
                  double height_cutoff);

/// Total decision procedure over Q: preperiodic Q-points satisfy
/// h <= height_difference_bound(f), so escape past that cutoff is sound and
/// bounded height forces a cycle.
bool is_preperiodic_exact(const RationalMap& f, const ProjPointQ& z);
bool is_preperiodic_exact(const HeightContext& ctx, const ProjPointQ& z);

/// All d^n + 1 solutions of f^n(z) = z in P^1(C) with multiplicity, as roots
/// of the homogeneous fixed-point form of the n-th iterate.
std::vector<ProjPointC> periodic_points(const RationalMap& f, unsigned n, double tol = 1e-10,
                                        unsigned degree_cap = 2100);

/// Roots of f^(m+n) - f^m as a homogeneous form, deduplicated within tol in
/// the chordal metric. m = 0 reproduces periodic_points.
std::vector<ProjPointC> preperiodic_points(const RationalMap& f, unsigned m, unsigned n,
                                           double tol = 1e-8, unsigned degree_cap = 2100);

/// The homogeneous form P_(m+n) Q_m - P_m Q_(m+n) cutting f^(m+n)(z) = f^m(z);
/// its rational roots are exactly the Q-rational bounded-preperiodicity
/// candidates the family scans consume.
BinaryForm preperiodicity_form(const RationalMap& f, unsigned m, unsigned n);

/// The 2d-2 roots (with multiplicity) of the Wronskian P_x Q_y - P_y Q_x.
std::vector<ProjPointC> critical_points(const RationalMap& f, double tol = 1e-10);

enum class Tristate { True, False, Unknown };

struct ClassifyBudget {
    unsigned orbit_steps = 96;
    double tol = 1e-8;
    unsigned degree_cap = 4096;
};

/// Postcritical finiteness: exact decisions on rational critical orbits,
/// tolerance screening on the numeric ones. False carries a certified
/// escaping rational critical orbit; True may rest on numeric revisits.
Tristate is_pcf(const RationalMap& f, const ClassifyBudget& budget = {});

struct ExceptionalClass {
    enum class Tag { PowerConjugate, ChebyshevConjugate, LattesLike, Ordinary, Unknown };
    Tag tag{Tag::Unknown};
    std::string evidence;
};

/// Power-map conjugates are detected exactly (a totally invariant pair read
/// off the Wronskian); Chebyshev and Lattes labels come from the postcritical
/// portrait; Ordinary needs a certified non-PCF witness.
ExceptionalClass classify_exceptional(const RationalMap& f, const ClassifyBudget& budget = {});

/// Exact exceptional-pair detector used by both classify_exceptional and the
/// backward-sampling guard: the set {roots of q} with q o F = c q^d.
std::optional<BinaryForm> exceptional_pair_form(const RationalMap& f);

/// True when the total preimage of the single point z is {z}, checked
/// exactly on the preimage form.
bool is_exceptional_point(const RationalMap& f, const ProjPointQ& z);

} // namespace sd
