#pragma once

#include <cstdint>
#include <limits>
#include <string>

#include <gmpxx.h>

#include "sigmod/error.hpp"

namespace sigmod {

enum class Cmp3 { Equal, Unequal, Indistinguishable };
enum class ArithOp { Add, Sub, Mul, Div };

/*
 * An element of Q_p known to finite relative precision.
 *
 * Three states:
 *   exact zero        valuation() == kInf
 *   inexact zero      O(p^a): rel() == 0, valuation() == a
 *   nonzero value     p^v * m with m a unit known mod p^rel
 *
 * The mantissa is kept in a machine word, so p^rel must stay below 2^62
 * (see max_rel). Products go through 128-bit intermediates.
 */
class PadicNumber {
public:
    static constexpr int64_t kInf = std::numeric_limits<int64_t>::max() / 4;

    PadicNumber() = default;

    static PadicNumber exact_zero(int64_t p);
    static PadicNumber zero_at(int64_t p, int64_t abs_prec);
    static PadicNumber from_int(int64_t p, int64_t value, int rel);
    static PadicNumber from_mpz(int64_t p, const mpz_class& value, int rel);
    static PadicNumber from_mpq(int64_t p, const mpq_class& value, int rel);
    static PadicNumber from_rational(int64_t p, int64_t num, int64_t den, int rel);
    /// Builds p^val * mantissa known to relative precision rel. The mantissa
    /// may carry factors of p; they are moved into the valuation.
    static PadicNumber from_parts(int64_t p, int64_t val, uint64_t mantissa, int rel);

    /// Largest relative precision representable for this prime.
    static int max_rel(int64_t p);

    int64_t p() const { return p_; }
    int64_t valuation() const { return v_; }
    uint64_t mantissa() const { return m_; }
    uint64_t modulus() const { return mod_; }
    int rel() const { return rel_; }
    int64_t abs_prec() const { return is_exact_zero() ? kInf : v_ + rel_; }
    /// Lower bound for the valuation of the true value.
    int64_t val_lower() const { return v_; }

    bool is_exact_zero() const { return v_ >= kInf; }
    bool is_inexact_zero() const { return !is_exact_zero() && rel_ == 0; }
    bool is_zero() const { return rel_ == 0; }
    bool is_nonzero() const { return rel_ > 0; }
    bool is_unit() const { return is_nonzero() && v_ == 0; }

    PadicNumber operator-() const;
    friend PadicNumber operator+(const PadicNumber& a, const PadicNumber& b);
    friend PadicNumber operator-(const PadicNumber& a, const PadicNumber& b);
    friend PadicNumber operator*(const PadicNumber& a, const PadicNumber& b);
    /// Throws DivisionByZero when b is zero at precision.
    friend PadicNumber operator/(const PadicNumber& a, const PadicNumber& b);
    PadicNumber& operator+=(const PadicNumber& o) { return *this = *this + o; }
    PadicNumber& operator-=(const PadicNumber& o) { return *this = *this - o; }
    PadicNumber& operator*=(const PadicNumber& o) { return *this = *this * o; }

    /// Multiplication and division by exact integers: no precision is lost,
    /// only the valuation moves by v_p(k).
    PadicNumber mul_int(int64_t k) const;
    PadicNumber div_int(int64_t k) const;
    /// Multiplies by p^k exactly.
    PadicNumber shift(int64_t k) const;
    PadicNumber inverse() const;

    PadicNumber with_rel(int rel) const;
    PadicNumber with_abs(int64_t abs) const;

    /// Exact rational p^v * m with 0 <= m < p^rel (inexact zero maps to 0).
    mpq_class to_mpq() const;
    /// Same value with the mantissa taken in the balanced range (-p^rel/2, p^rel/2].
    mpq_class to_mpq_balanced() const;

    std::string to_string() const;
    /// Accepts "0", "0 mod p^a", "p^v * m", "p^v * m mod p^N", "m mod p^N",
    /// decimal integers and fractions "a/b". Missing precision uses default_rel.
    static PadicNumber parse(const std::string& text, int64_t p, int default_rel);

    /// Structural identity (same state, digits and precision).
    bool identical(const PadicNumber& o) const {
        return p_ == o.p_ && v_ == o.v_ && m_ == o.m_ && rel_ == o.rel_;
    }

private:
    int64_t p_ = 0;
    int64_t v_ = kInf;
    uint64_t m_ = 0;
    uint64_t mod_ = 1;
    int rel_ = 0;
};

Cmp3 compare(const PadicNumber& a, const PadicNumber& b);
/// True unless a and b provably differ.
inline bool agrees(const PadicNumber& a, const PadicNumber& b) { return compare(a, b) != Cmp3::Unequal; }

/// Checked arithmetic: like the operators, but a result without a single
/// provable digit raises PrecisionExhausted.
PadicNumber padic_arith(const PadicNumber& a, const PadicNumber& b, ArithOp op);

namespace detail {
uint64_t pow_u64(int64_t p, int64_t k);
uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m);
uint64_t invmod(uint64_t a, uint64_t m);
int64_t sat_add(int64_t a, int64_t b);
int64_t vp_i64(int64_t x, int64_t p);
bool is_prime(int64_t p);
}  // namespace detail

}  // namespace sigmod
