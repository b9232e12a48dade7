#pragma once

#include <string>
#include <vector>

#include "sd/integer.hpp"
#include "sd/points.hpp"

namespace sd {

/// Integral binary form of fixed degree d. coefficients[i] multiplies
/// x^i y^(d-i), so the coefficient vector doubles as the dehomogenized
/// polynomial in z = x/y in ascending powers. This index convention is
/// part of the file format.
class BinaryForm {
  public:
    BinaryForm() = default;
    BinaryForm(unsigned degree, std::vector<Int> coefficients);

    static BinaryForm monomial_x(unsigned degree); // x^d
    static BinaryForm monomial_y(unsigned degree); // y^d

    unsigned degree() const { return degree_; }
    const std::vector<Int>& coeffs() const { return coeffs_; }
    const Int& coeff(unsigned i) const { return coeffs_[i]; }

    bool is_zero() const;
    Int content() const;
    /// Divide out the content; the zero form is left unchanged.
    BinaryForm primitive() const;
    /// Flip the sign so the highest-index nonzero coefficient is positive.
    BinaryForm sign_normalized() const;

    Int eval(const Int& x, const Int& y) const;
    Complex eval(const Complex& x, const Complex& y) const;

    BinaryForm dx() const; // partial derivative in x, degree d-1
    BinaryForm dy() const; // partial derivative in y, degree d-1

    BinaryForm operator*(const BinaryForm& o) const;
    BinaryForm operator+(const BinaryForm& o) const; // requires equal degree
    BinaryForm operator-(const BinaryForm& o) const; // requires equal degree
    BinaryForm scaled(const Int& c) const;
    BinaryForm pow(unsigned e) const;

    /// Substitute two degree-e forms for (x, y); result has degree d*e.
    BinaryForm substitute(const BinaryForm& fx, const BinaryForm& fy) const;

    /// Multiplicity of the root [0:1], i.e. the largest k with x^k | F.
    unsigned mult_at_zero() const;
    /// Multiplicity of the root [1:0], i.e. the largest k with y^k | F.
    unsigned mult_at_infinity() const;

    bool operator==(const BinaryForm& o) const {
        return degree_ == o.degree_ && coeffs_ == o.coeffs_;
    }

    std::string str() const;

  private:
    unsigned degree_{0};
    std::vector<Int> coeffs_{Int(0)}; // length degree_+1
};

/// Sylvester resultant of two degree-d coefficient vectors (ascending),
/// P-rows first, computed fraction-free. The exact sign is part of the
/// contract so cross-module caching stays bit-stable.
Int resultant(const BinaryForm& p, const BinaryForm& q);

/// Resultant of two ascending coefficient vectors padded to the stated
/// degrees; shared by the curve-elimination code.
Int sylvester_resultant(const std::vector<Int>& p, unsigned dp, const std::vector<Int>& q,
                        unsigned dq);

/// Try to write `form` as c * root^m for a rational constant c; returns the
/// primitive sign-normalized root on success.
bool form_power_root(const BinaryForm& form, unsigned m, BinaryForm& root);

/// Cofactor identity A*P + B*Q = Res(P,Q) * y^(2d-1) with integral forms
/// A, B of degree d-1 (and the mirrored identity for x^(2d-1)). Used for
/// the lower escape-rate bounds.
struct ResultantCofactors {
    Int res;
    BinaryForm ax, bx; // ax*P + bx*Q = res * x^(2d-1)
    BinaryForm ay, by; // ay*P + by*Q = res * y^(2d-1)
};
ResultantCofactors resultant_cofactors(const BinaryForm& p, const BinaryForm& q);

} // namespace sd
