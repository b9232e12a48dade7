#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "sd/rational_map.hpp"

namespace sd {

/// Place of Q: the archimedean one or a finite prime.
struct Place {
    bool archimedean{true};
    Int prime{0};

    static Place arch() { return Place{true, Int(0)}; }
    static Place at(Int p) { return Place{false, std::move(p)}; }

    bool operator==(const Place& o) const {
        return archimedean == o.archimedean && prime == o.prime;
    }
};

/// Real value with a certified error radius: the true value lies in
/// [value - error, value + error]. Exact cases carry error 0.
struct HeightEstimate {
    double value{0.0};
    double error{0.0};
    std::vector<std::pair<Place, double>> place_breakdown;
};

/// Per-map data backing the certificates: unit-sphere bounds
/// c_minus <= log||F(u)|| - d log||u|| <= c_plus at the archimedean place,
/// and the valuations of the resultant at the bad primes.
struct HeightContext {
    explicit HeightContext(const RationalMap& f);

    const RationalMap& map() const { return *f_; }
    double c_plus() const { return c_plus_; }
    double c_minus() const { return c_minus_; }
    /// max(|c+|, |c-|); 0 exactly for monomial-type lifts.
    double step_bound() const { return step_bound_; }
    const std::vector<std::pair<Int, unsigned long>>& bad_primes() const { return bad_; }

  private:
    const RationalMap* f_;
    double c_plus_, c_minus_, step_bound_;
    std::vector<std::pair<Int, unsigned long>> bad_; // (p, v_p(Res))
};

/// Archimedean escape rate d^-n log||F^n(x,y)|| of the stored lift (no
/// renormalization of the input pair), with certified error
/// step_bound / (d^n (d-1)).
HeightEstimate green_arch(const RationalMap& f, const ProjPointC& z, unsigned n_iters);
HeightEstimate green_arch(const HeightContext& ctx, const ProjPointC& z, unsigned n_iters);

/// p-adic escape rate of the gcd-1 integer lift; exact 0 with error 0 when
/// p does not divide the resultant (good reduction).
HeightEstimate green_nonarch(const RationalMap& f, const ProjPointQ& z, const Int& p,
                             unsigned n_iters);

/// Call-Silverman canonical height over Q: sum of local Green values of the
/// gcd-1 lift over the archimedean place and the bad primes, adaptive
/// iteration depth per place, total certified error <= target_error.
HeightEstimate canonical_height(const RationalMap& f, const ProjPointQ& z, double target_error);
HeightEstimate canonical_height(const HeightContext& ctx, const ProjPointQ& z,
                                double target_error);

/// Fiber-wise height of a split map: coordinate heights summed, errors added.
HeightEstimate canonical_height_split(const std::vector<RationalMap>& maps,
                                      const std::vector<ProjPointQ>& z, double target_error);

/// Weil height log max(|x|, |y|) of a normalized point.
double naive_height(const ProjPointQ& z);

/// Explicit C with |h_f - h| <= C on P^1(Q), assembled from the archimedean
/// sphere bounds and v_p(Res) log p at the bad primes.
double height_difference_bound(const RationalMap& f);
double height_difference_bound(const HeightContext& ctx);

} // namespace sd
