#include <algorithm>
#include <string>

#include "sigmod/linalg.hpp"
#include "sigmod/sigma_nabla.hpp"

namespace sigmod {

namespace {

constexpr int64_t kInf = PadicNumber::kInf;

PadicNumber exact_int(int64_t p, int64_t k) { return PadicNumber::from_int(p, k, PadicNumber::max_rel(p)); }
PadicNumber exact_power(int64_t p, int64_t e) { return PadicNumber::from_parts(p, e, 1, PadicNumber::max_rel(p)); }

int64_t vlow(const PadicNumber& x) { return x.is_exact_zero() ? kInf : x.valuation(); }

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

std::string entry_name(size_t i, size_t j) { return "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")"; }

void require_membership(const SeriesMatrix& m, const RingLabel& label, const std::string& what) {
    if (auto bad = matrix_membership(m, label)) {
        fail(ErrorCode::MembershipViolated, what + entry_name(bad->first.first, bad->first.second) + " is not in " + label.name() +
                                                " (witness exponent " + std::to_string(bad->second) + ")");
    }
}

void require_module_membership(const SigmaNablaModule& m, const RingLabel& label, const std::string& prefix) {
    require_membership(m.Phi, label, prefix + "Phi");
    require_membership(m.N, label, prefix + "N");
    if (m.B) require_membership(*m.B, label, prefix + "B");
}

// Pivot search shared by the two eliminations below: smallest provable
// valuation, first in row-major order; an inexact zero whose precision does
// not reach that valuation makes the choice ambiguous.
struct Pivot {
    size_t row = 0, col = 0;
    int64_t val = kInf;
};

template <class Accept>
Pivot find_pivot(const Matrix<PadicNumber>& C, size_t row0, size_t col0, size_t col1, Accept&& accept_col, const char* what) {
    Pivot best;
    int64_t hidden = kInf;
    for (size_t i = row0; i < C.rows(); ++i)
        for (size_t c = col0; c < col1; ++c) {
            if (!accept_col(c)) continue;
            const PadicNumber& x = C(i, c);
            if (x.is_nonzero()) {
                if (x.valuation() < best.val) best = Pivot{i, c, x.valuation()};
            } else if (!x.is_exact_zero()) {
                hidden = std::min(hidden, x.abs_prec());
            }
        }
    if (best.val >= kInf) fail(ErrorCode::PrecisionExhausted, std::string(what) + ": no nonzero pivot at working precision");
    if (hidden < best.val) fail(ErrorCode::PrecisionExhausted, std::string(what) + ": pivot valuation is ambiguous at working precision");
    return best;
}

// Row operations over Z_p bringing C to a form whose rows are p^{e_t} times
// independent primitive vectors. Returns the exponents and the row transform.
struct RowSmith {
    Matrix<PadicNumber> P;
    std::vector<int64_t> e;
};

RowSmith smith_rows(Matrix<PadicNumber> C, int64_t p) {
    const size_t n = C.rows();
    RowSmith out;
    out.P = Matrix<PadicNumber>::identity(n, PadicNumber::exact_zero(p), exact_int(p, 1));
    std::vector<bool> used(C.cols(), false);
    for (size_t t = 0; t < n; ++t) {
        Pivot pv = find_pivot(C, t, 0, C.cols(), [&](size_t c) { return !used[c]; }, "adjugate coefficients");
        C.swap_rows(t, pv.row);
        out.P.swap_rows(t, pv.row);
        const PadicNumber piv = C(t, pv.col);
        for (size_t i = t + 1; i < n; ++i) {
            if (C(i, pv.col).is_exact_zero()) continue;
            const PadicNumber f = C(i, pv.col) / piv;
            for (size_t c = 0; c < C.cols(); ++c)
                if (!C(t, c).is_exact_zero()) C(i, c) = C(i, c) - f * C(t, c);
            for (size_t c = 0; c < n; ++c) out.P(i, c) = out.P(i, c) - f * out.P(t, c);
            C(i, pv.col) = PadicNumber::exact_zero(p);
        }
        // the column operations clearing row t leave every other row alone
        for (size_t c = 0; c < C.cols(); ++c)
            if (c != pv.col) C(t, c) = PadicNumber::exact_zero(p);
        used[pv.col] = true;
        out.e.push_back(pv.val);
    }
    return out;
}

// Row Hermite form over Z_p of an invertible constant matrix.
void hermite_rows(Matrix<PadicNumber>& Z, int64_t p) {
    const size_t n = Z.rows();
    for (size_t j = 0; j < n; ++j) {
        Pivot pv = find_pivot(Z, j, j, j + 1, [](size_t) { return true; }, "constant factor");
        Z.swap_rows(j, pv.row);
        const PadicNumber uinv = Z(j, j).shift(-pv.val).inverse();
        for (size_t c = j; c < n; ++c) Z(j, c) = Z(j, c) * uinv;
        Z(j, j) = exact_power(p, pv.val);
        for (size_t i = j + 1; i < n; ++i) {
            if (Z(i, j).is_exact_zero()) continue;
            const PadicNumber f = Z(i, j).shift(-pv.val);
            for (size_t c = j; c < n; ++c) Z(i, c) = Z(i, c) - f * Z(j, c);
            Z(i, j) = PadicNumber::exact_zero(p);
        }
    }
    for (size_t j = 1; j < n; ++j) {
        const int64_t a = Z(j, j).valuation();
        for (size_t i = 0; i < j; ++i) {
            const PadicNumber x = Z(i, j);
            if (x.is_zero()) continue;
            const int64_t v = x.valuation();
            if (v < a && v + x.rel() < a) continue;  // digits below p^a are not all known
            PadicNumber rep = PadicNumber::exact_zero(p);
            if (v < a) {
                const uint64_t m = x.mantissa() % detail::pow_u64(p, a - v);
                if (m != 0) rep = PadicNumber::from_parts(p, v, m, PadicNumber::max_rel(p));
            }
            const PadicNumber t = (x - rep).shift(-a);
            for (size_t c = j; c < n; ++c) Z(i, c) = Z(i, c) - t * Z(j, c);
        }
    }
}

LaurentSeries minus_part(const LaurentSeries& s) {
    if (s.is_exact_zero()) return s;
    const int64_t lo = std::min<int64_t>(s.lo(), -1);
    std::vector<PadicNumber> c;
    for (int64_t e = lo; e <= -1; ++e) c.push_back(s.coeff(e));
    return LaurentSeries::from_coeffs(s.p(), lo, std::move(c), s.below_bound(), kInf, s.max_width());
}

LaurentSeries plus_part(const LaurentSeries& s) {
    if (s.is_exact_zero()) return s;
    const int64_t hi = std::max<int64_t>(s.hi(), 0);
    std::vector<PadicNumber> c;
    for (int64_t e = 0; e <= hi; ++e) c.push_back(s.coeff(e));
    return LaurentSeries::from_coeffs(s.p(), 0, std::move(c), kInf, s.above_bound(), s.max_width());
}

int64_t minus_valuation(const SeriesMatrix& m) {
    int64_t v = kInf;
    for (const auto& x : m.data())
        if (!x.is_exact_zero() && x.lo() < 0) v = std::min(v, minus_part(x).val_lower());
    return v;
}

}  // namespace

// ---------------------------------------------------------------- over Gamma

GammaFactorization matfact_gamma(const SeriesMatrix& X) {
    if (!X.square() || X.rows() == 0) fail(ErrorCode::InvalidArgument, "X must be a nonempty square matrix");
    const size_t n = X.rows();
    const int64_t p = matrix_prime(X);
    const int64_t w = matrix_width(X);

    const LaurentSeries det = determinant(X);
    if (det.is_zero()) fail(ErrorCode::SingularInput, "det(X) is zero at working precision");
    const auto [m, determined] = det.valuation_info();
    if (!determined) fail(ErrorCode::PrecisionExhausted, "valuation of det(X) is not determined at working precision");

    // Y^{-1} = Z adj(X) / det(X) is integral iff every row z of Z has z adj(X) in p^m Gamma^n,
    // a condition on the coefficient matrix of adj(X) over Z_p
    const SeriesMatrix A = adjugate(X);
    int64_t lo = kInf, hi = -kInf;
    for (const auto& x : A.data())
        if (!x.window_empty()) {
            lo = std::min(lo, x.lo());
            hi = std::max(hi, x.hi());
        }
    const size_t W = size_t(hi - lo + 1);
    Matrix<PadicNumber> C(n, n * W, PadicNumber::exact_zero(p));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            for (size_t k = 0; k < W; ++k) C(i, j * W + k) = A(i, j).coeff(lo + int64_t(k));

    RowSmith rs = smith_rows(std::move(C), p);
    int64_t sum_e = 0;
    for (int64_t e : rs.e) sum_e += e;
    if (sum_e != int64_t(n - 1) * m)
        fail(ErrorCode::NotFactorable, "no factor over Gamma has a unit determinant (exponent sum " + std::to_string(sum_e) + ", needed " +
                                           std::to_string(int64_t(n - 1) * m) + ")");

    Matrix<PadicNumber> Z = rs.P;
    for (size_t i = 0; i < n; ++i)
        for (size_t k = 0; k < n; ++k) Z(i, k) = Z(i, k).shift(m - rs.e[i]);
    hermite_rows(Z, p);

    int64_t vz = kInf, tail = kInf;
    for (const auto& x : Z.data()) vz = std::min(vz, vlow(x));
    for (const auto& x : A.data()) tail = std::min({tail, x.below_bound(), x.above_bound()});
    if (tail < kInf && vz + tail < m) fail(ErrorCode::PrecisionExhausted, "tails of adj(X) are too imprecise to certify the factor");

    const Matrix<PadicNumber> Zinv = inverse(Z, exact_int(p, 1));
    GammaFactorization out;
    out.Y = X * constant_matrix(Zinv, w);
    out.Z = Z;
    out.det_valuation = m;
    out.exponents = rs.e;

    const auto [vy, ok] = determinant(out.Y).valuation_info();
    if (!ok || vy != 0) fail(ErrorCode::PrecisionExhausted, "det(Y) is not a certified unit at working precision");
    if (matrix_membership(out.Y, RingLabel::of(RingKind::Gamma)))
        fail(ErrorCode::PrecisionExhausted, "Y is not integral at working precision");
    const SeriesMatrix diff = out.Y * constant_matrix(Z, w) - X;
    if (!matrix_is_zero(diff)) fail(ErrorCode::PrecisionExhausted, "Y Z does not reproduce X at working precision");
    out.floor = std::min(matrix_precision_floor(out.Y), matrix_precision_floor(diff));
    return out;
}

// ---------------------------------------------------------------- over the Robba ring

RobbaFactorization matfact_robba(const SeriesMatrix& X, int64_t half_width) {
    if (!X.square() || X.rows() == 0) fail(ErrorCode::InvalidArgument, "X must be a nonempty square matrix");
    const size_t n = X.rows();
    const int64_t p = matrix_prime(X);
    const int64_t w = matrix_width(X);

    int64_t span = 1;
    for (const auto& x : X.data())
        if (!x.window_empty()) span = std::max({span, std::abs(x.lo()), std::abs(x.hi())});
    int64_t H = half_width > 0 ? half_width : std::max<int64_t>(16, 4 * span);
    H = std::min(H, (w - 1) / 4);
    if (H < 1) fail(ErrorCode::InvalidArgument, "width cap too small for the factorization");
    auto trunc = [&](const SeriesMatrix& m) { return truncate(m, -H, H); };

    // diagonal monomials from the leading term of each diagonal entry
    SeriesMatrix D = series_zero_matrix(n, n, p, w), Dinv = series_zero_matrix(n, n, p, w);
    for (size_t i = 0; i < n; ++i) {
        const LaurentSeries& d = X(i, i);
        const auto [v, ok] = d.valuation_info();
        if (!ok) fail(ErrorCode::NotConverged, "0 iterations: diagonal entry " + entry_name(i, i) + " has no certified leading term");
        int64_t a = d.lo();
        while (!(d.coeff(a).is_nonzero() && d.coeff(a).valuation() == v)) ++a;
        D(i, i) = LaurentSeries::monomial(d.coeff(a), a, w);
        Dinv(i, i) = LaurentSeries::monomial(d.coeff(a).inverse(), -a, w);
    }
    const SeriesMatrix I = series_identity(n, p, w);
    SeriesMatrix E = Dinv * X - I;

    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            const LaurentSeries& s = E(i, j);
            if (s.is_exact_zero()) continue;
            std::string why;
            if (minus_part(s).val_lower() < 1) why = "negative part is not divisible by p";
            else if (vlow(s.coeff(0)) < 1) why = "constant part is not divisible by p";
            else if (plus_part(s).val_lower() < 0) why = "positive part is not integral";
            if (!why.empty()) fail(ErrorCode::NotConverged, "0 iterations: outside the contraction regime at " + entry_name(i, j) + ": " + why);
        }

    RobbaFactorization out;
    SeriesMatrix Y = D, Yinv = Dinv, Z = I;
    int64_t best = minus_valuation(E);
    int stall = 0;
    bool done = false;
    for (int it = 1; it <= 64 && !done; ++it) {
        SeriesMatrix Em = E.map(minus_part), Ep = E.map(plus_part);
        if (matrix_is_zero(Em)) {
            Z = trunc((I + E) * Z);
            out.iterations = it - 1;
            done = true;
            break;
        }
        const SeriesMatrix Am = trunc(inverse(I + Em, std::make_pair(-H, int64_t(0))));
        const SeriesMatrix Bp = trunc(inverse(I + Ep, std::make_pair(int64_t(0), H)));
        SeriesMatrix next = trunc(trunc(trunc(Am * Em) * Ep) * Bp);
        E = next.map([](const LaurentSeries& s) { return -s; });
        Y = trunc(Y * (I + Em));
        Yinv = trunc(Am * Yinv);
        Z = trunc((I + Ep) * Z);
        const int64_t v = minus_valuation(E);
        if (v > best) {
            best = v;
            stall = 0;
        } else if (++stall >= 3) {
            fail(ErrorCode::NotConverged, std::to_string(it) + " iterations: negative part stopped contracting");
        }
    }
    if (!done) fail(ErrorCode::NotConverged, "64 iterations: negative part did not vanish");

    const SeriesMatrix diff = Y * Z - X;
    if (!matrix_is_zero(diff)) fail(ErrorCode::PrecisionExhausted, "Y Z does not reproduce X at working precision");
    out.Y = std::move(Y);
    out.Y_inv = std::move(Yinv);
    out.Z = std::move(Z);
    out.floor = matrix_precision_floor(diff);
    return out;
}

// ---------------------------------------------------------------- descent and gluing

DescentResult descend_to_eplus(const SigmaNablaModule& m, const SeriesMatrix& X) {
    m.validate();
    if (X.rows() != m.rank() || !X.square()) fail(ErrorCode::InvalidArgument, "X must match the module rank");

    const SeriesMatrix Xinv = inverse(X);
    const SigmaNablaModule moved = transform(m, X, Xinv);
    require_membership(moved.Phi, RingLabel::of(RingKind::RPlus), "X^-1 Phi X^sigma");
    require_membership(moved.N, RingLabel::of(RingKind::RPlus), "X^-1 N X + X^-1 dX");

    DescentResult out;
    out.factors = matfact_robba(X);
    out.module = transform(m, out.factors.Y, out.factors.Y_inv);
    out.module.ring = RingLabel::of(RingKind::EPlus);
    require_module_membership(out.module, out.module.ring, "descended ");
    out.compat = check_compat(out.module);
    return out;
}

GlueResult glue_dieudonne(const SigmaNablaModule& m1, const SigmaNablaModule& m2, const SeriesMatrix& X) {
    m1.validate();
    m2.validate();
    if (!m1.B || !m2.B) fail(ErrorCode::PreconditionFailed, "both modules need a Verschiebung matrix");
    if (m1.rank() != m2.rank() || m1.q != m2.q) fail(ErrorCode::InvalidArgument, "modules differ in rank or q");
    if (X.rows() != m1.rank() || !X.square()) fail(ErrorCode::InvalidArgument, "X must match the module rank");

    require_module_membership(m1, RingLabel::of(RingKind::Gamma), "first module ");
    require_module_membership(m2, RingLabel::of(RingKind::EPlus), "second module ");
    if (!check_compat(m1).holds || !check_compat(m2).holds) fail(ErrorCode::PreconditionFailed, "an input fails the compatibility identity");
    if (!check_fv(m1).holds || !check_fv(m2).holds) fail(ErrorCode::PreconditionFailed, "an input fails FV = p");

    const SeriesMatrix Xinv = inverse(X);
    const SigmaNablaModule moved = transform(m1, X, Xinv);
    require_module_membership(moved, RingLabel::of(RingKind::EPlus), "conjugated ");
    if (!matrices_agree(moved.Phi, m2.Phi) || !matrices_agree(moved.N, m2.N) || !matrices_agree(*moved.B, *m2.B))
        fail(ErrorCode::PreconditionFailed, "X does not carry the first module onto the second");

    GlueResult out;
    out.factors = matfact_gamma(X);
    const SeriesMatrix Yinv = constant_matrix(out.factors.Z, matrix_width(X)) * Xinv;
    out.module = transform(m1, out.factors.Y, Yinv);
    out.module.ring = RingLabel::of(RingKind::GammaPlus);
    require_module_membership(out.module, out.module.ring, "glued ");
    out.compat = check_compat(out.module);
    out.compat_v = check_compat_v(out.module);
    out.fv = check_fv(out.module);
    return out;
}

}  // namespace sigmod
