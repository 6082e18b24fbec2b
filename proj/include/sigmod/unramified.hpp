#pragma once

#include <memory>
#include <vector>

#include "sigmod/matrix.hpp"
#include "sigmod/padic.hpp"

namespace sigmod {

/*
 * Q_q = Q_p[x]/(P) for a monic integer lift P of an irreducible polynomial
 * of degree f over F_p. The basis 1, x, ..., x^{f-1} is integral, so the
 * valuation of an element is the minimum over its coordinates.
 *
 * The absolute Frobenius sends x to the root of P congruent to x^p, found
 * by Newton iteration; frobenius_matrix() holds the images of the basis
 * vectors as columns.
 */
class UnramifiedField {
public:
    static std::shared_ptr<const UnramifiedField> create(int64_t p, int f, int rel);

    int64_t p() const { return p_; }
    int f() const { return f_; }
    int rel() const { return rel_; }
    /// Coefficients c_0..c_{f-1} of P = x^f + sum c_i x^i.
    const std::vector<int64_t>& modulus() const { return modulus_; }
    const Matrix<PadicNumber>& frobenius_matrix() const { return frob_; }

private:
    int64_t p_ = 0;
    int f_ = 1;
    int rel_ = 0;
    std::vector<int64_t> modulus_;
    Matrix<PadicNumber> frob_;
};

using FieldPtr = std::shared_ptr<const UnramifiedField>;

class UnramifiedScalar {
public:
    UnramifiedScalar() = default;
    UnramifiedScalar(FieldPtr field, std::vector<PadicNumber> coords);

    static UnramifiedScalar zero(const FieldPtr& field);
    static UnramifiedScalar one(const FieldPtr& field);
    static UnramifiedScalar from_padic(const FieldPtr& field, const PadicNumber& c);
    /// The class of x, the polynomial generator.
    static UnramifiedScalar generator(const FieldPtr& field);

    const FieldPtr& field() const { return field_; }
    const std::vector<PadicNumber>& coords() const { return c_; }

    bool is_zero() const;
    int64_t val_lower() const;

    friend UnramifiedScalar operator+(const UnramifiedScalar& a, const UnramifiedScalar& b);
    friend UnramifiedScalar operator-(const UnramifiedScalar& a, const UnramifiedScalar& b);
    friend UnramifiedScalar operator*(const UnramifiedScalar& a, const UnramifiedScalar& b);
    friend UnramifiedScalar operator/(const UnramifiedScalar& a, const UnramifiedScalar& b) { return a * b.inverse(); }
    UnramifiedScalar operator-() const;
    UnramifiedScalar inverse() const;
    UnramifiedScalar scale(const PadicNumber& c) const;

    /// sigma_0^k for any integer k (taken mod f).
    UnramifiedScalar frobenius(int64_t k = 1) const;

    bool agrees(const UnramifiedScalar& o) const;

private:
    FieldPtr field_;
    std::vector<PadicNumber> c_;
};

}  // namespace sigmod
