#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "sigmod/padic.hpp"

namespace sigmod {

/// Polynomial with exact integer coefficients, stored lowest degree first.
class IntPolynomial {
public:
    IntPolynomial() = default;
    explicit IntPolynomial(std::vector<mpz_class> coeffs);
    IntPolynomial(std::initializer_list<long> coeffs);

    static IntPolynomial one() { return IntPolynomial({1}); }

    bool is_zero() const { return c_.empty(); }
    /// Degree of the zero polynomial is reported as -1.
    int degree() const { return int(c_.size()) - 1; }
    const std::vector<mpz_class>& coeffs() const { return c_; }
    mpz_class coeff(int i) const { return (i >= 0 && i < int(c_.size())) ? c_[size_t(i)] : mpz_class(0); }

    friend IntPolynomial operator+(const IntPolynomial& a, const IntPolynomial& b);
    friend IntPolynomial operator-(const IntPolynomial& a, const IntPolynomial& b);
    friend IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b);
    friend bool operator==(const IntPolynomial& a, const IntPolynomial& b) { return a.c_ == b.c_; }

    /// Substitutes t -> t^k.
    IntPolynomial compose_power(int k) const;
    std::string to_string() const;

private:
    void trim();
    std::vector<mpz_class> c_;
};

struct Slope {
    mpq_class value;
    int64_t multiplicity = 0;
    friend bool operator==(const Slope& a, const Slope& b) { return a.value == b.value && a.multiplicity == b.multiplicity; }
};

/// Lower convex hull of (i, v_p(a_i)). Slopes are reported as valuations of
/// the roots, ascending; zero_roots counts the vanishing low-order terms.
struct NewtonPolygon {
    std::vector<Slope> slopes;
    int64_t zero_roots = 0;

    std::vector<mpq_class> expanded() const;
};

/// Coefficients lowest degree first. Throws AmbiguousValuation when a
/// coefficient that is zero only at working precision could move the hull.
NewtonPolygon newton_polygon(const std::vector<PadicNumber>& coeffs);

/// Magnitudes of the reciprocal roots of P (the alpha in P = a_0 * prod(1 - alpha t)),
/// ascending. Roots at t = 0 are ignored. Repeated factors are split off
/// exactly before the numerical stage, so multiplicity does not cost accuracy.
std::vector<double> complex_root_magnitudes(const IntPolynomial& poly);

}  // namespace sigmod
