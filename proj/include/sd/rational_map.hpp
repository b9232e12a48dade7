#pragma once

#include <cstddef>
#include <string>

#include "sd/binary_form.hpp"
#include "sd/errors.hpp"
#include "sd/points.hpp"

namespace sd {

/// Default cap on coefficient bit-size when composing/iterating lifts.
inline constexpr size_t kDefaultCoeffBitCap = 1u << 20; // 10^6 bits

/// Degree-d endomorphism of P^1 as a normalized integral homogeneous lift
/// (P, Q) with joint content 1 and cached nonzero resultant. The sign is
/// normalized so the first nonzero coefficient of Q (falling back to P),
/// scanned from the top, is positive; composition outputs are then unique.
class RationalMap {
  public:
    RationalMap(BinaryForm p, BinaryForm q);

    unsigned degree() const { return p_.degree(); }
    const BinaryForm& num() const { return p_; }
    const BinaryForm& den() const { return q_; }
    const Int& res() const { return res_; }

    ProjPointQ eval(const ProjPointQ& z) const;
    ProjPointC eval(const ProjPointC& z) const;

    bool operator==(const RationalMap& o) const { return p_ == o.p_ && q_ == o.q_; }

    std::string str() const;

  private:
    BinaryForm p_, q_;
    Int res_;
};

/// Joint-content-1 integral lift with cached nonzero resultant.
/// Throws DegenerateMap if Res(P,Q) = 0 or d < 2.
RationalMap normalize_lift(const BinaryForm& p, const BinaryForm& q);

/// Lift of f after g, degree deg(f)*deg(g). Throws BudgetExceeded when the
/// coefficient bit-size of the composition passes the cap.
RationalMap compose(const RationalMap& f, const RationalMap& g,
                    size_t bit_cap = kDefaultCoeffBitCap);

/// Lift of the n-th iterate; heights never materialize this (they iterate
/// points), so the cap only guards explicit requests.
RationalMap iterate(const RationalMap& f, unsigned n, size_t bit_cap = kDefaultCoeffBitCap);

/// Dehomogenized map from ascending numerator/denominator coefficients.
RationalMap map_from_poly(const std::vector<Int>& num, const std::vector<Int>& den);

} // namespace sd
