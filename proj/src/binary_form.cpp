#include "sd/binary_form.hpp"

#include <cassert>
#include <sstream>
#include <stdexcept>

namespace sd {

BinaryForm::BinaryForm(unsigned degree, std::vector<Int> coefficients)
    : degree_(degree), coeffs_(std::move(coefficients)) {
    if (coeffs_.size() != degree_ + 1)
        throw std::invalid_argument("BinaryForm: coefficient list length must be degree+1");
}

BinaryForm BinaryForm::monomial_x(unsigned degree) {
    std::vector<Int> c(degree + 1, Int(0));
    c[degree] = 1;
    return BinaryForm(degree, std::move(c));
}

BinaryForm BinaryForm::monomial_y(unsigned degree) {
    std::vector<Int> c(degree + 1, Int(0));
    c[0] = 1;
    return BinaryForm(degree, std::move(c));
}

bool BinaryForm::is_zero() const {
    for (const auto& c : coeffs_)
        if (c != 0) return false;
    return true;
}

Int BinaryForm::content() const {
    Int g = 0;
    for (const auto& c : coeffs_) {
        g = gcd(g, abs(c));
        if (g == 1) break;
    }
    return g;
}

BinaryForm BinaryForm::primitive() const {
    Int g = content();
    if (g <= 1) return *this;
    std::vector<Int> c(coeffs_);
    for (auto& v : c) v /= g;
    return BinaryForm(degree_, std::move(c));
}

BinaryForm BinaryForm::sign_normalized() const {
    for (unsigned i = degree_ + 1; i-- > 0;) {
        if (coeffs_[i] == 0) continue;
        if (coeffs_[i] > 0) return *this;
        std::vector<Int> c(coeffs_);
        for (auto& v : c) v = -v;
        return BinaryForm(degree_, std::move(c));
    }
    return *this;
}

Int BinaryForm::eval(const Int& x, const Int& y) const {
    // Horner in x with an incrementally maintained power of y.
    Int acc = coeffs_[degree_];
    Int yp = 1;
    for (unsigned i = degree_; i-- > 0;) {
        yp *= y;
        acc = acc * x + coeffs_[i] * yp;
        if (i == 0) break;
    }
    return acc;
}

Complex BinaryForm::eval(const Complex& x, const Complex& y) const {
    Complex acc = 0.0;
    Complex yp = 1.0;
    std::vector<Complex> ypow(degree_ + 1);
    for (unsigned k = 0; k <= degree_; ++k) {
        ypow[k] = yp;
        yp *= y;
    }
    for (unsigned i = degree_ + 1; i-- > 0;) {
        acc = acc * x + mpz_get_d(coeffs_[i].get_mpz_t()) * ypow[degree_ - i];
        if (i == 0) break;
    }
    return acc;
}

BinaryForm BinaryForm::dx() const {
    if (degree_ == 0) return BinaryForm(0, {Int(0)});
    std::vector<Int> c(degree_);
    for (unsigned i = 1; i <= degree_; ++i) c[i - 1] = Int(i) * coeffs_[i];
    return BinaryForm(degree_ - 1, std::move(c));
}

BinaryForm BinaryForm::dy() const {
    if (degree_ == 0) return BinaryForm(0, {Int(0)});
    std::vector<Int> c(degree_);
    for (unsigned i = 0; i < degree_; ++i) c[i] = Int(degree_ - i) * coeffs_[i];
    return BinaryForm(degree_ - 1, std::move(c));
}

BinaryForm BinaryForm::operator*(const BinaryForm& o) const {
    std::vector<Int> c(degree_ + o.degree_ + 1, Int(0));
    for (unsigned i = 0; i <= degree_; ++i) {
        if (coeffs_[i] == 0) continue;
        for (unsigned j = 0; j <= o.degree_; ++j) c[i + j] += coeffs_[i] * o.coeffs_[j];
    }
    return BinaryForm(degree_ + o.degree_, std::move(c));
}

BinaryForm BinaryForm::operator-(const BinaryForm& o) const {
    assert(degree_ == o.degree_);
    std::vector<Int> c(coeffs_);
    for (unsigned i = 0; i <= degree_; ++i) c[i] -= o.coeffs_[i];
    return BinaryForm(degree_, std::move(c));
}

BinaryForm BinaryForm::scaled(const Int& k) const {
    std::vector<Int> c(coeffs_);
    for (auto& v : c) v *= k;
    return BinaryForm(degree_, std::move(c));
}

BinaryForm BinaryForm::pow(unsigned e) const {
    BinaryForm acc(0, {Int(1)});
    for (unsigned k = 0; k < e; ++k) acc = acc * (*this);
    return acc;
}

BinaryForm BinaryForm::operator+(const BinaryForm& o) const {
    assert(degree_ == o.degree_);
    std::vector<Int> c(coeffs_);
    for (unsigned i = 0; i <= degree_; ++i) c[i] += o.coeffs_[i];
    return BinaryForm(degree_, std::move(c));
}

BinaryForm BinaryForm::substitute(const BinaryForm& fx, const BinaryForm& fy) const {
    assert(fx.degree() == fy.degree());
    // Horner in fx with a running power of fy.
    BinaryForm acc(0, {coeffs_[degree_]});
    std::vector<BinaryForm> fy_pow(degree_ + 1);
    fy_pow[0] = BinaryForm(0, {Int(1)});
    for (unsigned k = 1; k <= degree_; ++k) fy_pow[k] = fy_pow[k - 1] * fy;
    for (unsigned i = degree_; i-- > 0;) {
        acc = acc * fx;
        if (coeffs_[i] != 0) acc = acc + fy_pow[degree_ - i].scaled(coeffs_[i]);
        if (i == 0) break;
    }
    return acc;
}

std::string BinaryForm::str() const {
    std::ostringstream os;
    bool first = true;
    for (unsigned i = degree_ + 1; i-- > 0;) {
        if (coeffs_[i] != 0) {
            if (!first) os << " + ";
            os << coeffs_[i].get_str() << "*x^" << i << "*y^" << (degree_ - i);
            first = false;
        }
        if (i == 0) break;
    }
    if (first) os << "0";
    return os.str();
}

unsigned BinaryForm::mult_at_zero() const {
    unsigned k = 0;
    while (k <= degree_ && coeffs_[k] == 0) ++k;
    return k > degree_ ? degree_ : k;
}

unsigned BinaryForm::mult_at_infinity() const {
    unsigned k = 0;
    while (k <= degree_ && coeffs_[degree_ - k] == 0) ++k;
    return k > degree_ ? degree_ : k;
}

namespace {

/// Fraction-free determinant (Bareiss) with row pivoting.
Int bareiss_det(std::vector<std::vector<Int>> m) {
    size_t n = m.size();
    if (n == 0) return Int(1);
    int sign = 1;
    Int prev = 1;
    for (size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            size_t r = k + 1;
            while (r < n && m[r][k] == 0) ++r;
            if (r == n) return Int(0);
            std::swap(m[k], m[r]);
            sign = -sign;
        }
        for (size_t i = k + 1; i < n; ++i) {
            for (size_t j = k + 1; j < n; ++j) {
                Int t = m[i][j] * m[k][k] - m[i][k] * m[k][j];
                mpz_divexact(m[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    return sign > 0 ? m[n - 1][n - 1] : Int(-m[n - 1][n - 1]);
}

std::vector<std::vector<Int>> sylvester_matrix(const std::vector<Int>& p, unsigned dp,
                                               const std::vector<Int>& q, unsigned dq) {
    size_t n = dp + dq;
    std::vector<std::vector<Int>> m(n, std::vector<Int>(n, Int(0)));
    // P-rows first: dq shifted copies of p (descending), then dp copies of q.
    for (unsigned r = 0; r < dq; ++r)
        for (unsigned k = 0; k <= dp; ++k) m[r][r + k] = p[dp - k];
    for (unsigned r = 0; r < dp; ++r)
        for (unsigned k = 0; k <= dq; ++k) m[dq + r][r + k] = q[dq - k];
    return m;
}

} // namespace

Int sylvester_resultant(const std::vector<Int>& p, unsigned dp, const std::vector<Int>& q,
                        unsigned dq) {
    if (dp == 0 && dq == 0) return Int(1);
    if (dp == 0) return pow(p[0], dq);
    if (dq == 0) return pow(q[0], dp);
    return bareiss_det(sylvester_matrix(p, dp, q, dq));
}

Int resultant(const BinaryForm& p, const BinaryForm& q) {
    if (p.degree() != q.degree())
        throw std::invalid_argument("resultant: forms must have equal degree");
    return sylvester_resultant(p.coeffs(), p.degree(), q.coeffs(), q.degree());
}

bool form_power_root(const BinaryForm& form, unsigned m, BinaryForm& root) {
    if (m == 0 || form.is_zero()) return false;
    BinaryForm f = form.primitive().sign_normalized();
    if (m == 1) {
        root = f;
        return true;
    }
    if (f.degree() % m != 0) return false;
    unsigned a = f.mult_at_zero(), b = f.mult_at_infinity();
    if (a % m != 0 || b % m != 0) return false;
    unsigned shift_zero = a / m, shift_inf = b / m;
    unsigned mid_deg = f.degree() - a - b;
    unsigned e = mid_deg / m;

    // Power-series m-th root of the middle part normalized to u(0) = 1.
    std::vector<Rat> u(mid_deg + 1);
    for (unsigned i = 0; i <= mid_deg; ++i) {
        u[i] = Rat(f.coeff(a + i), f.coeff(a));
        u[i].canonicalize();
    }
    std::vector<Rat> h(e + 1, Rat(0));
    h[0] = 1;
    for (unsigned k = 0; k + 1 <= e; ++k) {
        // m*(k+1)*h_{k+1} = sum_j (j+1) u_{j+1} h_{k-j} - m * sum_{i<k} (i+1) h_{i+1} u_{k-i}
        Rat rhs(0);
        for (unsigned j = 0; j <= k; ++j)
            if (j + 1 <= mid_deg) rhs += Rat(j + 1) * u[j + 1] * h[k - j];
        for (unsigned i = 0; i < k; ++i)
            if (k - i <= mid_deg) rhs -= Rat(m) * Rat(i + 1) * h[i + 1] * u[k - i];
        h[k + 1] = rhs / (Rat(m) * Rat(k + 1));
        h[k + 1].canonicalize();
    }

    // Clear denominators, strip content, place into the binary form.
    Int den = 1;
    for (const auto& c : h) den = lcm(den, c.get_den());
    std::vector<Int> g(e + 1);
    for (unsigned i = 0; i <= e; ++i) g[i] = Int(h[i] * Rat(den));
    Int cont = 0;
    for (const auto& c : g) cont = gcd(cont, abs(c));
    if (cont > 1)
        for (auto& c : g) c /= cont;

    unsigned root_deg = shift_zero + e + shift_inf;
    std::vector<Int> rc(root_deg + 1, Int(0));
    for (unsigned i = 0; i <= e; ++i) rc[shift_zero + i] = g[i];
    BinaryForm cand = BinaryForm(root_deg, std::move(rc)).sign_normalized();

    BinaryForm check = cand.pow(m).primitive().sign_normalized();
    if (check == f) {
        root = cand;
        return true;
    }
    return false;
}

namespace {

/// det of the Sylvester transpose with column `col` replaced by e_slot.
Int cramer_unit_solution(const std::vector<std::vector<Int>>& s, size_t col, size_t slot) {
    size_t n = s.size();
    std::vector<std::vector<Int>> m(n, std::vector<Int>(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) m[i][j] = (j == col) ? Int(i == slot ? 1 : 0) : s[j][i];
    return bareiss_det(std::move(m));
}

} // namespace

ResultantCofactors resultant_cofactors(const BinaryForm& p, const BinaryForm& q) {
    unsigned d = p.degree();
    if (q.degree() != d || d == 0)
        throw std::invalid_argument("resultant_cofactors: equal positive degrees required");
    auto s = sylvester_matrix(p.coeffs(), d, q.coeffs(), d);
    size_t n = 2 * static_cast<size_t>(d);
    ResultantCofactors rc;
    rc.res = bareiss_det(s);
    if (rc.res == 0) throw std::invalid_argument("resultant_cofactors: zero resultant");

    // Row vector u with u * S = res * e_slot encodes forms a, b of degree d-1
    // (descending order within each block) with a*P + b*Q = res * x^... / y^...
    auto solve = [&](size_t slot, BinaryForm& aout, BinaryForm& bout) {
        std::vector<Int> u(n);
        for (size_t i = 0; i < n; ++i) u[i] = cramer_unit_solution(s, i, slot);
        std::vector<Int> ac(d), bc(d);
        for (unsigned i = 0; i < d; ++i) {
            ac[d - 1 - i] = u[i];     // coefficient of z^(d-1-i)
            bc[d - 1 - i] = u[d + i];
        }
        aout = BinaryForm(d - 1, std::move(ac));
        bout = BinaryForm(d - 1, std::move(bc));
    };
    solve(0, rc.ax, rc.bx);         // top slot: res * x^(2d-1)
    solve(n - 1, rc.ay, rc.by);     // constant slot: res * y^(2d-1)
    return rc;
}

} // namespace sd
