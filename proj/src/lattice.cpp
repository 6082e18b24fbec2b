#include <algorithm>
#include <string>

#include "sigmod/sigma_nabla.hpp"

namespace sigmod {

namespace {

constexpr int64_t kInf = PadicNumber::kInf;

int64_t matrix_prime(const SeriesMatrix& m) {
    for (const auto& x : m.data())
        if (x.p() != 0) return x.p();
    fail(ErrorCode::InvalidArgument, "matrix carries no prime");
}

int64_t matrix_width(const SeriesMatrix& m) {
    int64_t w = LaurentSeries::kDefaultMaxWidth;
    for (const auto& x : m.data()) w = std::max(w, x.max_width());
    return w;
}

PadicNumber exact_power(int64_t p, int64_t e) { return PadicNumber::from_parts(p, e, 1, PadicNumber::max_rel(p)); }

}  // namespace

/*
 * Elimination without division: a pivot p^d * eps (eps a Gamma-unit) clears
 * another entry a by  row <- eps * row - (a / p^d) * pivot_row.  Multiplying
 * a row by a unit is invertible over Gamma, so E and F stay unimodular and
 * finitely supported inputs never leave the polynomials.
 */
SmithResult lattice_smith(const SeriesMatrix& A, bool with_inverses) {
    const size_t n = A.rows(), m = A.cols();
    if (n == 0 || m == 0) fail(ErrorCode::InvalidArgument, "empty matrix");
    if (auto bad = matrix_membership(A, RingLabel::of(RingKind::Gamma)))
        fail(ErrorCode::MembershipViolated, "entry (" + std::to_string(bad->first.first + 1) + "," + std::to_string(bad->first.second + 1) +
                                                ") is not in Gamma");
    const int64_t p = matrix_prime(A);
    const int64_t w = std::max<int64_t>(matrix_width(A), 1024);

    SeriesMatrix S = with_max_width(A, w);
    SmithResult out;
    out.E = series_identity(n, p, w);
    out.F = series_identity(m, p, w);
    const LaurentSeries zero = LaurentSeries::zero(p, w);

    const size_t steps = std::min(n, m);
    for (size_t t = 0; t < steps; ++t) {
        size_t br = 0, bc = 0;
        int64_t best = kInf, hidden = kInf;
        bool any_nonzero = false;
        for (size_t i = t; i < n; ++i)
            for (size_t j = t; j < m; ++j) {
                const LaurentSeries& x = S(i, j);
                if (x.is_exact_zero()) continue;
                const auto [v, determined] = x.valuation_info();
                if (!x.is_zero()) any_nonzero = true;
                if (!determined) {
                    hidden = std::min(hidden, x.val_lower());
                } else if (v < best) {
                    best = v;
                    br = i;
                    bc = j;
                }
            }
        if (!any_nonzero) break;
        if (best >= kInf || hidden < best) fail(ErrorCode::PrecisionExhausted, "pivot valuation is ambiguous at step " + std::to_string(t + 1));

        S.swap_rows(t, br);
        out.E.swap_rows(t, br);
        S.swap_cols(t, bc);
        out.F.swap_cols(t, bc);
        const PadicNumber inv_pd = exact_power(p, -best);
        const LaurentSeries eps = S(t, t).scale(inv_pd);

        for (size_t i = t + 1; i < n; ++i) {
            if (S(i, t).is_exact_zero()) continue;
            const LaurentSeries f = S(i, t).scale(inv_pd);
            for (size_t j = t + 1; j < m; ++j) S(i, j) = eps * S(i, j) - f * S(t, j);
            for (size_t j = 0; j < n; ++j) out.E(i, j) = eps * out.E(i, j) - f * out.E(t, j);
            S(i, t) = zero;
        }
        for (size_t j = t + 1; j < m; ++j) {
            if (S(t, j).is_exact_zero()) continue;
            const LaurentSeries f = S(t, j).scale(inv_pd);
            for (size_t i = t + 1; i < n; ++i) S(i, j) = eps * S(i, j);
            for (size_t i = 0; i < m; ++i) out.F(i, j) = eps * out.F(i, j) - f * out.F(i, t);
            S(t, j) = zero;
        }
        out.units.push_back(eps);
        out.d.push_back(best);
        ++out.rank;
    }

    out.D = series_zero_matrix(n, m, p, w);
    for (size_t k = 0; k < out.rank; ++k) out.D(k, k) = LaurentSeries::constant(exact_power(p, out.d[k]), w);
    if (with_inverses) {
        SeriesMatrix units = series_identity(n, p, w);
        for (size_t k = 0; k < out.rank; ++k) units(k, k) = out.units[k];
        out.U = inverse(out.E) * units;
        out.W = inverse(out.F);
    }
    return out;
}

SeriesMatrix lattice_intersect(const SeriesMatrix& L1, const SeriesMatrix& L2) {
    if (L1.rows() != L2.rows()) fail(ErrorCode::InvalidArgument, "lattices live in different ambient spaces");
    const size_t n = L1.rows(), l1 = L1.cols(), l2 = L2.cols();
    SeriesMatrix R;
    R.reset(n, l1 + l2);
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < l1; ++j) R(i, j) = L1(i, j);
        for (size_t j = 0; j < l2; ++j) R(i, l1 + j) = -L2(i, j);
    }
    // the kernel of [L1 | -L2] is spanned by the trailing columns of F
    const SmithResult s = lattice_smith(R, false);
    const size_t k = l1 + l2 - s.rank;
    SeriesMatrix out;
    if (k == 0) {
        out.reset(n, 0);
        return out;
    }
    SeriesMatrix top;
    top.reset(l1, k);
    for (size_t i = 0; i < l1; ++i)
        for (size_t j = 0; j < k; ++j) top(i, j) = s.F(i, s.rank + j);
    return with_max_width(L1, s.F(0, 0).max_width()) * top;
}

bool lattice_contains(const SeriesMatrix& L, const SeriesMatrix& v) {
    if (v.rows() != L.rows() || v.cols() != 1) fail(ErrorCode::InvalidArgument, "v must be a column of the ambient dimension");
    const SmithResult s = lattice_smith(L, false);
    const SeriesMatrix y = s.E * with_max_width(v, s.E(0, 0).max_width());
    for (size_t k = 0; k < y.rows(); ++k) {
        const LaurentSeries& x = y(k, 0);
        if (k >= s.rank) {
            if (!x.is_zero()) return false;
            continue;
        }
        const bool determined = x.valuation_info().second;
        if (x.val_lower() >= s.d[k]) continue;
        if (determined) return false;
        fail(ErrorCode::PrecisionExhausted, "membership undecided at working precision");
    }
    return true;
}

}  // namespace sigmod
