#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "sigmod/matrix.hpp"
#include "sigmod/padic.hpp"

namespace sigmod {

/*
 * Truncated bidirectional series sum x_i u^i over Q_p.
 *
 * Coefficients are stored densely on a window [lo, hi]. Outside the window
 * the series is described by two tail bounds: every coefficient below lo
 * has valuation >= below_bound(), every coefficient above hi has valuation
 * >= above_bound(). A bound of PadicNumber::kInf means the tail is exactly
 * zero, which is the case for all finitely supported inputs.
 *
 * The exact zero series has an empty window and exact tails; every other
 * series keeps at least one stored coefficient.
 */
class LaurentSeries {
public:
    static constexpr int64_t kDefaultMaxWidth = 256;

    LaurentSeries() = default;

    static LaurentSeries zero(int64_t p, int64_t max_width = kDefaultMaxWidth);
    static LaurentSeries constant(const PadicNumber& c, int64_t max_width = kDefaultMaxWidth);
    static LaurentSeries monomial(const PadicNumber& c, int64_t exponent, int64_t max_width = kDefaultMaxWidth);
    /// coeffs[k] is the coefficient of u^{lo+k}.
    static LaurentSeries from_coeffs(int64_t p, int64_t lo, std::vector<PadicNumber> coeffs, int64_t below = PadicNumber::kInf,
                                     int64_t above = PadicNumber::kInf, int64_t max_width = kDefaultMaxWidth);

    int64_t p() const { return p_; }
    int64_t max_width() const { return max_width_; }
    LaurentSeries with_max_width(int64_t w) const;

    bool window_empty() const { return c_.empty(); }
    int64_t lo() const { return lo_; }
    int64_t hi() const { return lo_ + int64_t(c_.size()) - 1; }
    int64_t width() const { return int64_t(c_.size()); }
    const std::vector<PadicNumber>& coeffs() const { return c_; }
    int64_t below_bound() const { return below_; }
    int64_t above_bound() const { return above_; }
    bool tails_exact() const { return below_ >= PadicNumber::kInf && above_ >= PadicNumber::kInf; }

    /// Coefficient of u^e; outside the window this is the tail bound as O(p^b).
    PadicNumber coeff(int64_t e) const;

    bool is_exact_zero() const { return c_.empty() && tails_exact(); }
    /// Every coefficient is zero at working precision.
    bool is_zero() const;
    /// Smallest absolute precision over stored coefficients (kInf when all are exact).
    int64_t precision_floor() const;
    /// Lower bound for min_i v_p(x_i), tails included.
    int64_t val_lower() const;
    /// (value, determined): determined means some nonzero coefficient attains the minimum.
    std::pair<int64_t, bool> valuation_info() const;
    /// Lowest exponent carrying a provably nonzero coefficient, if any.
    std::optional<int64_t> lowest_nonzero() const;

    LaurentSeries operator-() const;
    friend LaurentSeries operator+(const LaurentSeries& a, const LaurentSeries& b);
    friend LaurentSeries operator-(const LaurentSeries& a, const LaurentSeries& b);
    friend LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b);

    LaurentSeries scale(const PadicNumber& c) const;
    LaurentSeries mul_int(int64_t k) const;
    /// Multiplies by u^k.
    LaurentSeries shift_exponent(int64_t k) const;
    /// Product with an explicit width cap (the default cap is max_width()).
    static LaurentSeries multiply(const LaurentSeries& a, const LaurentSeries& b, int64_t width_cap);

    /// u -> u^{q^power}; coefficients are fixed because they lie in Q_p.
    LaurentSeries sigma(int64_t q, int power = 1) const;
    /// Coefficient of du in d(self).
    LaurentSeries derivative() const;
    /// Keeps [lo, hi]; dropped coefficients are folded into the tail bounds.
    LaurentSeries truncate(int64_t lo, int64_t hi) const;
    /// Re-expresses each stored coefficient at the largest representable
    /// relative precision, treating the stored digits as an exact value.
    LaurentSeries promoted() const;
    /// Caps every coefficient and both tail bounds at absolute precision abs.
    LaurentSeries with_abs(int64_t abs) const;

    /// True unless the difference is provably nonzero somewhere.
    bool agrees(const LaurentSeries& o) const;
    /// Coefficientwise identity of the stored data.
    bool identical(const LaurentSeries& o) const;

    std::string to_string() const;

private:
    void normalize();
    void check_width(int64_t lo, int64_t hi, int64_t cap, const char* what) const;

    int64_t p_ = 0;
    int64_t lo_ = 0;
    std::vector<PadicNumber> c_;
    int64_t below_ = PadicNumber::kInf;
    int64_t above_ = PadicNumber::kInf;
    int64_t max_width_ = kDefaultMaxWidth;
};

/// g du.
struct OneForm {
    LaurentSeries coefficient;
};

OneForm derivation_d(const LaurentSeries& a);
/// g du -> sigma(g) * q * u^{q-1} du.
OneForm d_sigma(const OneForm& w, int64_t q);

enum class RingKind { GammaPlus, Gamma, GammaDagger, EPlus, E, EDagger, RPlus, R };

/// A ring name plus the overconvergence certificate used by the dagger and
/// Robba labels: v_p(x_i) >= lambda * (-i) - c for i < 0.
struct RingLabel {
    RingKind kind = RingKind::E;
    mpq_class lambda = mpq_class(1, 2);
    mpq_class c = 0;

    static RingLabel of(RingKind k) { return RingLabel{k, mpq_class(1, 2), 0}; }
    bool has_certificate() const { return kind == RingKind::GammaDagger || kind == RingKind::EDagger || kind == RingKind::R; }
    std::string name() const;
    static RingLabel parse(const std::string& name);
};

/// True when every element of `lower` lies in `upper` (reflexive).
bool ring_contained(RingKind lower, RingKind upper);

struct Membership {
    bool consistent = true;
    int64_t witness = 0;  // offending exponent when !consistent
};

/// Refutation-only check on the visible coefficients.
Membership membership(const LaurentSeries& a, const RingLabel& label);

/// Inverse on a target window. Without a window one is chosen from the
/// precision of `a`; see the implementation note.
LaurentSeries series_invert(const LaurentSeries& a, std::optional<std::pair<int64_t, int64_t>> target = std::nullopt);

using SeriesMatrix = Matrix<LaurentSeries>;

SeriesMatrix series_identity(size_t n, int64_t p, int64_t max_width = LaurentSeries::kDefaultMaxWidth);
SeriesMatrix series_zero_matrix(size_t rows, size_t cols, int64_t p, int64_t max_width = LaurentSeries::kDefaultMaxWidth);
SeriesMatrix constant_matrix(const Matrix<PadicNumber>& m, int64_t max_width = LaurentSeries::kDefaultMaxWidth);

SeriesMatrix sigma(const SeriesMatrix& m, int64_t q, int power = 1);
SeriesMatrix derivative(const SeriesMatrix& m);
SeriesMatrix scale(const SeriesMatrix& m, const LaurentSeries& s);
SeriesMatrix truncate(const SeriesMatrix& m, int64_t lo, int64_t hi);
SeriesMatrix with_max_width(const SeriesMatrix& m, int64_t w);

LaurentSeries determinant(const SeriesMatrix& m);
SeriesMatrix adjugate(const SeriesMatrix& m);
/// adj(m) * det(m)^{-1}; SingularInput when det is zero at precision.
SeriesMatrix inverse(const SeriesMatrix& m, std::optional<std::pair<int64_t, int64_t>> target = std::nullopt);

bool matrix_is_zero(const SeriesMatrix& m);
int64_t matrix_precision_floor(const SeriesMatrix& m);
bool matrices_agree(const SeriesMatrix& a, const SeriesMatrix& b);
/// First entry (row-major) that refutes the label, with its witness exponent.
std::optional<std::pair<std::pair<size_t, size_t>, int64_t>> matrix_membership(const SeriesMatrix& m, const RingLabel& label);

}  // namespace sigmod
