#include "sigmod/sigma_nabla.hpp"

#include <algorithm>
#include <sstream>

namespace sigmod {

namespace {

constexpr int64_t kInf = PadicNumber::kInf;

PadicNumber exact_int(int64_t p, int64_t k) { return PadicNumber::from_int(p, k, PadicNumber::max_rel(p)); }

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

SeriesMatrix side_by_side(const SeriesMatrix& a, const SeriesMatrix& b) {
    SeriesMatrix out;
    out.reset(a.rows(), a.cols() + b.cols());
    for (size_t i = 0; i < a.rows(); ++i) {
        for (size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j);
        for (size_t j = 0; j < b.cols(); ++j) out(i, a.cols() + j) = b(i, j);
    }
    return out;
}

std::string entry_name(size_t i, size_t j) { return "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")"; }

void require_membership(const SeriesMatrix& m, const RingLabel& label, const char* what) {
    if (auto bad = matrix_membership(m, label)) {
        fail(ErrorCode::MembershipViolated, std::string(what) + entry_name(bad->first.first, bad->first.second) + " is not in " + label.name() +
                                                " (witness exponent " + std::to_string(bad->second) + ")");
    }
}

}  // namespace

int64_t SigmaNablaModule::p() const { return matrix_prime(Phi); }

void SigmaNablaModule::validate() const {
    const size_t n = Phi.rows();
    if (n == 0 || !Phi.square()) fail(ErrorCode::InvalidArgument, "Phi must be a nonempty square matrix");
    if (N.rows() != n || N.cols() != n) fail(ErrorCode::InvalidArgument, "N must have the shape of Phi");
    if (B && (B->rows() != n || B->cols() != n)) fail(ErrorCode::InvalidArgument, "B must have the shape of Phi");
    const int64_t pr = p();
    int64_t t = q;
    if (t < pr) fail(ErrorCode::InvalidArgument, "q must be a positive power of p");
    while (t % pr == 0) t /= pr;
    if (t != 1) fail(ErrorCode::InvalidArgument, "q must be a positive power of p");
}

// ---------------------------------------------------------------- identities

ZeroCheck check_zero(const SeriesMatrix& residual) {
    ZeroCheck out;
    out.residual = residual;
    out.floor = matrix_precision_floor(residual);
    for (size_t i = 0; i < residual.rows() && out.holds; ++i)
        for (size_t j = 0; j < residual.cols(); ++j) {
            if (residual(i, j).is_zero()) continue;
            out.holds = false;
            out.position = std::make_pair(i, j);
            out.residual_valuation = residual(i, j).valuation_info().first;
            break;
        }
    return out;
}

SeriesMatrix compat_residual(const SigmaNablaModule& m) {
    m.validate();
    const int64_t p = m.p();
    const LaurentSeries twist = LaurentSeries::monomial(exact_int(p, m.q), m.q - 1, matrix_width(m.Phi));
    SeriesMatrix rhs = scale(m.Phi * sigma(m.N, m.q), twist);
    return m.N * m.Phi + derivative(m.Phi) - rhs;
}

ZeroCheck check_compat(const SigmaNablaModule& m) { return check_zero(compat_residual(m)); }

ZeroCheck check_compat_v(const SigmaNablaModule& m) {
    m.validate();
    if (!m.B) fail(ErrorCode::PreconditionFailed, "module carries no Verschiebung matrix");
    const int64_t p = m.p();
    const SeriesMatrix& B = *m.B;
    const LaurentSeries twist = LaurentSeries::monomial(exact_int(p, m.q), m.q - 1, matrix_width(B));
    return check_zero(derivative(B) + scale(sigma(m.N, m.q) * B, twist) - B * m.N);
}

ZeroCheck check_fv(const SigmaNablaModule& m) {
    m.validate();
    if (!m.B) fail(ErrorCode::PreconditionFailed, "module carries no Verschiebung matrix");
    const int64_t p = m.p();
    const size_t n = m.rank();
    SeriesMatrix pI = series_zero_matrix(n, n, p, matrix_width(m.Phi));
    for (size_t i = 0; i < n; ++i) pI(i, i) = LaurentSeries::constant(exact_int(p, p));
    return check_zero(side_by_side(m.Phi * *m.B - pI, *m.B * m.Phi - pI));
}

SigmaNablaModule transform(const SigmaNablaModule& m, const SeriesMatrix& Y, const SeriesMatrix& Y_inv) {
    m.validate();
    SigmaNablaModule out = m;
    out.Phi = Y_inv * m.Phi * sigma(Y, m.q);
    out.N = Y_inv * m.N * Y + Y_inv * derivative(Y);
    if (m.B) out.B = sigma(Y_inv, m.q) * *m.B * Y;
    return out;
}

SigmaNablaModule base_change(const SigmaNablaModule& m, const RingLabel& target) {
    m.validate();
    if (!ring_contained(m.ring.kind, target.kind))
        fail(ErrorCode::PreconditionFailed, m.ring.name() + " is not contained in " + target.name());
    require_membership(m.Phi, target, "Phi");
    require_membership(m.N, target, "N");
    if (m.B) require_membership(*m.B, target, "B");
    SigmaNablaModule out = m;
    out.ring = target;
    return out;
}

SigmaNablaModule recover_V(const SigmaNablaModule& m) {
    m.validate();
    const int64_t p = m.p();
    SeriesMatrix inv;
    try {
        inv = inverse(m.Phi);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::SingularInput || e.code() == ErrorCode::NotAUnit || e.code() == ErrorCode::PrecisionExhausted)
            fail(ErrorCode::SingularFrobenius, "Phi is not invertible at working precision: " + e.detail());
        throw;
    }
    SigmaNablaModule out = m;
    const PadicNumber pp = exact_int(p, p);
    out.B = inv.map([&](const LaurentSeries& s) { return s.scale(pp); });
    return out;
}

// ---------------------------------------------------------------- quasi-nilpotence

const char* probe_verdict_name(ProbeVerdict v) {
    switch (v) {
        case ProbeVerdict::Plausible: return "Plausible";
        case ProbeVerdict::Refuted: return "Refuted";
        case ProbeVerdict::Inconclusive: return "Inconclusive";
    }
    return "?";
}

ProbeReport quasi_nilpotence_probe(const SigmaNablaModule& m, int n_max, int64_t v_target) {
    m.validate();
    if (m.ring.kind == RingKind::RPlus || m.ring.kind == RingKind::R)
        fail(ErrorCode::PreconditionFailed, "the probe needs a ring where the valuation is the minimum coefficient valuation");
    if (n_max < 1) fail(ErrorCode::InvalidArgument, "n_max must be positive");
    const int64_t p = m.p();
    const size_t n = m.rank();
    const int64_t w = matrix_width(m.N);

    // all basis vectors at once: column j of F is D^k(e_j)
    SeriesMatrix F = series_identity(n, p, w);
    ProbeReport out;
    out.profile.push_back(0);
    for (int step = 1; step <= n_max; ++step) {
        F = derivative(F) + m.N * F;
        int64_t v = kInf;
        for (const auto& x : F.data()) v = std::min(v, x.val_lower());
        out.profile.push_back(v);
        if (v >= v_target) {
            out.verdict = ProbeVerdict::Plausible;
            out.step = step;
            return out;
        }
        if (step >= p && v < 0 && v <= out.profile[size_t(step - p)]) {
            out.verdict = ProbeVerdict::Refuted;
            out.step = step;
            return out;
        }
    }
    out.verdict = ProbeVerdict::Inconclusive;
    out.step = n_max;
    return out;
}

// ---------------------------------------------------------------- horizontal sections

HorizontalResult horizontal_basis(const SeriesMatrix& N, int k_max) {
    if (!N.square() || N.rows() == 0) fail(ErrorCode::InvalidArgument, "N must be a nonempty square matrix");
    if (k_max < 0) fail(ErrorCode::InvalidArgument, "k_max must be nonnegative");
    const int64_t p = matrix_prime(N);
    const size_t n = N.rows();
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            auto low = N(i, j).lowest_nonzero();
            if (low && *low < 0) fail(ErrorCode::PreconditionFailed, "N" + entry_name(i, j) + " has a negative exponent");
        }

    const PadicNumber zero = PadicNumber::exact_zero(p);
    std::vector<Matrix<PadicNumber>> Nk;
    for (int k = 0; k <= k_max; ++k) Nk.push_back(N.map([&](const LaurentSeries& s) { return s.coeff(k); }));

    HorizontalResult out;
    out.coeffs.push_back(Matrix<PadicNumber>::identity(n, zero, exact_int(p, 1)));
    for (int k = 0; k < k_max; ++k) {
        Matrix<PadicNumber> acc(n, n, zero);
        for (int i = 0; i <= k; ++i) acc = acc + Nk[size_t(i)] * out.coeffs[size_t(k - i)];
        Matrix<PadicNumber> next = acc.map([&](const PadicNumber& x) { return -x.div_int(k + 1); });
        bool lost = false;
        for (const auto& x : next.data())
            if (x.is_zero() && x.abs_prec() < 1) lost = true;
        if (lost) {
            out.exhausted = true;
            break;
        }
        // residual of degree k: (k+1) H_{k+1} + (N H)_k
        const Matrix<PadicNumber> residual = next.map([&](const PadicNumber& y) { return y.mul_int(k + 1); }) + acc;
        for (const auto& x : residual.data())
            out.residual_valuation = std::min(out.residual_valuation, x.val_lower());
        out.coeffs.push_back(std::move(next));
    }
    out.achieved_degree = int(out.coeffs.size()) - 1;
    for (const auto& c : out.coeffs)
        for (const auto& x : c.data()) out.floor = std::min(out.floor, x.abs_prec());
    return out;
}

HorizontalResult horizontal_basis(const SigmaNablaModule& m, int k_max) {
    ZeroCheck c = check_compat(m);
    if (!c.holds) fail(ErrorCode::PreconditionFailed, "module fails the compatibility identity");
    return horizontal_basis(m.N, k_max);
}

SubBasisResult horizontal_sub_basis(const SeriesMatrix& inclusion, const Matrix<PadicNumber>& phi0, int64_t q) {
    const size_t n = inclusion.rows();
    const size_t l = inclusion.cols();
    if (n == 0 || l == 0 || l > n) fail(ErrorCode::InvalidArgument, "inclusion must be n x l with 0 < l <= n");
    if (phi0.rows() != n || phi0.cols() != n) fail(ErrorCode::InvalidArgument, "Phi0 must be n x n");
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            if (i != j && !phi0(i, j).is_zero()) fail(ErrorCode::PreconditionFailed, "Phi0 must be diagonal");

    SeriesMatrix S = inclusion;
    std::vector<bool> used(n, false);
    SubBasisResult out;
    for (size_t j = 0; j < l; ++j) {
        size_t r = n, c = l;
        for (size_t i = 0; i < n && r == n; ++i) {
            if (used[i]) continue;
            for (size_t k = j; k < l; ++k)
                if (!S(i, k).is_zero()) {
                    r = i;
                    c = k;
                    break;
                }
        }
        if (r == n) fail(ErrorCode::NonUnitPivot, "inclusion has rank below " + std::to_string(l) + " at working precision");
        S.swap_cols(j, c);
        LaurentSeries inv;
        try {
            inv = series_invert(S(r, j));
        } catch (const Error& e) {
            if (e.code() != ErrorCode::NotAUnit && e.code() != ErrorCode::PrecisionExhausted) throw;
            fail(ErrorCode::NonUnitPivot, "pivot " + entry_name(r, j) + " is not a unit: " + e.detail());
        }
        for (size_t i = 0; i < n; ++i) S(i, j) = S(i, j) * inv;
        for (size_t k = 0; k < l; ++k) {
            if (k == j || S(r, k).is_exact_zero()) continue;
            const LaurentSeries f = S(r, k);
            for (size_t i = 0; i < n; ++i) S(i, k) = S(i, k) - f * S(i, j);
        }
        used[r] = true;
        out.pivot_rows.push_back(r);
    }

    for (size_t j = 0; j < l; ++j)
        for (size_t i = 0; i < n; ++i) {
            LaurentSeries d = S(i, j).derivative();
            if (d.is_zero()) continue;
            std::ostringstream msg;
            msg << "column " << j + 1 << " is not horizontal; d(f) = (";
            for (size_t t = 0; t < n; ++t) msg << (t ? ", " : "") << S(t, j).derivative().to_string();
            msg << ") du";
            fail(ErrorCode::NotHorizontal, msg.str());
        }

    // F-stability: Phi0 sigma(v_j) must be the combination of the v_k read off the pivot rows
    out.frobenius_stable = true;
    const SeriesMatrix img = constant_matrix(phi0, matrix_width(S)) * sigma(S, q);
    for (size_t j = 0; j < l && out.frobenius_stable; ++j)
        for (size_t i = 0; i < n; ++i) {
            LaurentSeries rest = img(i, j);
            for (size_t k = 0; k < l; ++k) rest = rest - img(out.pivot_rows[k], j) * S(i, k);
            if (!rest.is_zero()) {
                out.frobenius_stable = false;
                break;
            }
        }
    out.basis = std::move(S);
    return out;
}

}  // namespace sigmod
