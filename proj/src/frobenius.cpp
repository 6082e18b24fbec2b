#include "sigmod/frobenius.hpp"

#include <algorithm>
#include <cmath>

#include "sigmod/linalg.hpp"

namespace sigmod {

namespace {

const FieldPtr& field_of(const PointMatrix& m) {
    if (m.data().empty()) fail(ErrorCode::InvalidArgument, "empty matrix");
    return m(0, 0).field();
}

PointMatrix scaled_by(const PointMatrix& m, const PadicNumber& c) {
    return m.map([&](const UnramifiedScalar& x) { return x.scale(c); });
}

bool is_zero_matrix(const PointMatrix& m) {
    for (const auto& x : m.data())
        if (!x.is_zero()) return false;
    return true;
}

void require_square(const PointMatrix& m, const char* what) {
    if (!m.square() || m.rows() == 0) fail(ErrorCode::InvalidArgument, std::string(what) + " must be a nonempty square matrix");
}

}  // namespace

PointMatrix point_matrix(const FieldPtr& field, const Matrix<PadicNumber>& m) {
    return m.map([&](const PadicNumber& x) { return UnramifiedScalar::from_padic(field, x); });
}

PointMatrix point_identity(const FieldPtr& field, size_t n) {
    return PointMatrix::identity(n, UnramifiedScalar::zero(field), UnramifiedScalar::one(field));
}

PointMatrix twist(const PointMatrix& m, int64_t k) {
    if (m.data().empty() || field_of(m)->f() == 1) return m;
    return m.map([&](const UnramifiedScalar& x) { return x.frobenius(k); });
}

PointMatrix point_inverse(const PointMatrix& m) { return inverse(m, UnramifiedScalar::one(field_of(m))); }

bool point_matrices_agree(const PointMatrix& a, const PointMatrix& b) { return matrices_agree(a, b); }

Matrix<PadicNumber> base_coordinates(const PointMatrix& m) {
    return m.map([](const UnramifiedScalar& x) {
        for (size_t i = 1; i < x.coords().size(); ++i)
            if (!x.coords()[i].is_zero()) fail(ErrorCode::InvalidArgument, "entry does not lie in Q_p");
        return x.coords()[0];
    });
}

PointMatrix frob_iterate(const PointMatrix& F, int64_t n) {
    require_square(F, "F");
    if (n < 0) {
        try {
            return point_inverse(twist(frob_iterate(F, -n), n));
        } catch (const Error& e) {
            if (e.code() == ErrorCode::SingularInput || e.code() == ErrorCode::DivisionByZero)
                fail(ErrorCode::SingularFrobenius, "negative iterate of a singular Frobenius: " + e.detail());
            throw;
        }
    }
    PointMatrix acc = point_identity(field_of(F), F.rows());
    for (int64_t i = 0; i < n; ++i) acc = acc * twist(F, i);
    return acc;
}

// ---------------------------------------------------------------- projectors

ProjectorResult average_projector(const PointMatrix& pi, const PointMatrix& F, int64_t n) {
    require_square(pi, "pi");
    require_square(F, "F");
    if (pi.rows() != F.rows()) fail(ErrorCode::InvalidArgument, "pi and F differ in size");
    if (n < 1) fail(ErrorCode::InvalidArgument, "n must be positive");
    const FieldPtr& field = field_of(F);
    const size_t r = F.rows();
    const PointMatrix I = point_identity(field, r);

    if (!point_matrices_agree(pi * pi, pi)) fail(ErrorCode::PreconditionFailed, "pi is not idempotent");
    const PointMatrix Fn = frob_iterate(F, n);
    if (!point_matrices_agree(Fn * twist(pi, n), pi * Fn)) fail(ErrorCode::PreconditionFailed, "pi does not commute with the n-th iterate of F");
    std::vector<PointMatrix> iter = {I};
    for (int64_t i = 1; i < n; ++i) iter.push_back(iter.back() * twist(F, i - 1));
    for (int64_t i = 1; i < n; ++i)
        if (!is_zero_matrix((I - pi) * iter[size_t(i)] * twist(pi, i)))
            fail(ErrorCode::PreconditionFailed, "image of pi is not F-stable (iterate " + std::to_string(i) + ")");

    PointMatrix sum = pi;
    for (int64_t i = 1; i < n; ++i) sum = sum + iter[size_t(i)] * twist(pi, i) * point_inverse(iter[size_t(i)]);
    ProjectorResult out;
    out.projector = scaled_by(sum, PadicNumber::from_rational(field->p(), 1, n, field->rel()));
    const PointMatrix& q = out.projector;
    out.idempotent = point_matrices_agree(q * q, q);
    out.equivariant = point_matrices_agree(F * twist(q, 1), q * F);
    out.same_image = point_matrices_agree(q * pi, pi) && point_matrices_agree(pi * q, q);
    return out;
}

ProjectorResult average_projector_group(const PointMatrix& pi, const std::vector<PointMatrix>& iota,
                                        const std::vector<std::vector<size_t>>& table) {
    require_square(pi, "pi");
    const size_t g = iota.size();
    if (g == 0) fail(ErrorCode::InvalidArgument, "the group needs at least one element");
    if (table.size() != g) fail(ErrorCode::InvalidArgument, "group table has the wrong size");
    for (const auto& row : table) {
        if (row.size() != g) fail(ErrorCode::InvalidArgument, "group table has the wrong size");
        for (size_t k : row)
            if (k >= g) fail(ErrorCode::InvalidArgument, "group table entry out of range");
    }
    for (const auto& m : iota)
        if (m.rows() != pi.rows() || m.cols() != pi.cols()) fail(ErrorCode::InvalidArgument, "cocycle matrix differs in size from pi");

    for (size_t a = 0; a < g; ++a)
        for (size_t b = 0; b < g; ++b)
            if (!point_matrices_agree(iota[b] * iota[a], iota[table[b][a]]))
                fail(ErrorCode::CocycleViolated, "iota_h iota_g != iota_hg for g=" + std::to_string(a) + ", h=" + std::to_string(b));

    const FieldPtr& field = field_of(pi);
    const PointMatrix I = point_identity(field, pi.rows());
    if (!point_matrices_agree(pi * pi, pi)) fail(ErrorCode::PreconditionFailed, "pi is not idempotent");
    for (size_t a = 0; a < g; ++a)
        if (!is_zero_matrix((I - pi) * iota[a] * pi))
            fail(ErrorCode::PreconditionFailed, "image of pi is not stable under iota_" + std::to_string(a));

    std::vector<PointMatrix> inv;
    for (const auto& m : iota) inv.push_back(point_inverse(m));
    PointMatrix sum = iota[0] * pi * inv[0];
    for (size_t a = 1; a < g; ++a) sum = sum + iota[a] * pi * inv[a];
    ProjectorResult out;
    out.projector = scaled_by(sum, PadicNumber::from_rational(field->p(), 1, int64_t(g), field->rel()));
    const PointMatrix& q = out.projector;
    out.idempotent = point_matrices_agree(q * q, q);
    out.equivariant = true;
    for (size_t a = 0; a < g; ++a) out.equivariant = out.equivariant && point_matrices_agree(iota[a] * q, q * iota[a]);
    out.same_image = point_matrices_agree(q * pi, pi) && point_matrices_agree(pi * q, q);
    return out;
}

// ---------------------------------------------------------------- block companion

PointMatrix block_companion(const PointMatrix& FG, int64_t n) {
    require_square(FG, "F_G");
    if (n < 1) fail(ErrorCode::InvalidArgument, "n must be positive");
    const FieldPtr& field = field_of(FG);
    const size_t r = FG.rows();
    const size_t total = r * size_t(n);
    PointMatrix C(total, total, UnramifiedScalar::zero(field));
    const UnramifiedScalar one = UnramifiedScalar::one(field);
    for (size_t b = 0; b + 1 < size_t(n); ++b)
        for (size_t i = 0; i < r; ++i) C(b * r + i, (b + 1) * r + i) = one;
    for (size_t i = 0; i < r; ++i)
        for (size_t j = 0; j < r; ++j) C((size_t(n) - 1) * r + i, j) = FG(i, j);
    return C;
}

std::vector<PointMatrix> companion_diagonal(const PointMatrix& FG, int64_t n) {
    std::vector<PointMatrix> out;
    for (int64_t b = 0; b < n; ++b) out.push_back(twist(FG, n - 1 - b));
    return out;
}

// ---------------------------------------------------------------- slopes and purity

std::vector<PadicNumber> char_coeffs(const Matrix<PadicNumber>& F) {
    if (F.data().empty()) fail(ErrorCode::InvalidArgument, "empty matrix");
    const int64_t p = F(0, 0).p();
    return char_coeffs(F, PadicNumber::exact_zero(p), PadicNumber::from_int(p, 1, PadicNumber::max_rel(p)));
}

FrobSlopes newton_slopes_frob(const Matrix<PadicNumber>& F) {
    std::vector<PadicNumber> c = char_coeffs(F);
    std::reverse(c.begin(), c.end());
    FrobSlopes out;
    out.polygon = newton_polygon(c);
    out.unit_root = out.polygon.zero_roots == 0;
    for (const auto& s : out.polygon.slopes)
        if (s.value != 0) out.unit_root = false;
    return out;
}

bool is_unit_root(const Matrix<PadicNumber>& F) { return newton_slopes_frob(F).unit_root; }

PurityReport purity_check(const IntPolynomial& local_poly, int64_t q, int64_t deg, int64_t w, double tol) {
    if (local_poly.coeff(0) != 1) fail(ErrorCode::InvalidArgument, "local polynomial must have constant term 1");
    if (q < 2 || deg < 1) fail(ErrorCode::InvalidArgument, "q must be at least 2 and deg positive");
    IntPolynomial s_poly = local_poly;
    if (deg > 1) {
        bool in_power = true;
        for (int i = 0; i <= local_poly.degree(); ++i)
            if (i % deg != 0 && local_poly.coeff(i) != 0) in_power = false;
        if (in_power) {
            std::vector<mpz_class> c;
            for (int i = 0; i <= local_poly.degree(); i += int(deg)) c.push_back(local_poly.coeff(i));
            s_poly = IntPolynomial(std::move(c));
        }
    }
    PurityReport out;
    out.target = std::pow(double(q), double(w) * double(deg) / 2.0);
    out.magnitudes = complex_root_magnitudes(s_poly);
    for (double m : out.magnitudes) {
        if (!std::isfinite(m)) fail(ErrorCode::NumericalFailure, "root magnitude is not finite");
        if (std::abs(m - out.target) > tol * out.target) {
            out.pure = false;
            if (!out.witness || std::abs(m - out.target) > std::abs(*out.witness - out.target)) out.witness = m;
        }
    }
    return out;
}

}  // namespace sigmod
