#include <doctest.h>

#include <cmath>

#include "generators.hpp"
#include "oracle.hpp"
#include "sigmod/frobenius.hpp"

using namespace sigmod;

namespace {

constexpr int kRel = 12;

PadicNumber num(int64_t p, long a, long b = 1) { return PadicNumber::from_mpq(p, mpq_class(a, b), kRel); }

PointMatrix point(const FieldPtr& K, const gen::QMatrix& m) { return point_matrix(K, gen::to_padic(m, K->p(), kRel)); }

bool agrees_with(const PointMatrix& a, const gen::QMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j) {
            const auto& c = a(i, j).coords();
            if (!oracle::matches(c[0], b(i, j))) return false;
            for (size_t k = 1; k < c.size(); ++k)
                if (!c[k].is_zero()) return false;
        }
    return true;
}

gen::QMatrix qm(std::initializer_list<std::initializer_list<long>> rows) {
    gen::QMatrix m(rows.size(), rows.begin()->size(), mpq_class(0));
    size_t i = 0;
    for (const auto& r : rows) {
        size_t j = 0;
        for (long x : r) m(i, j++) = x;
        ++i;
    }
    return m;
}

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::InvalidArgument;  // sentinel, checked against other codes only
}

std::string detail_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.detail();
    }
    return {};
}

// Exact determinant by Gaussian elimination over Q.
mpq_class q_det(gen::QMatrix m) {
    const size_t n = m.rows();
    mpq_class d = 1;
    for (size_t c = 0; c < n; ++c) {
        size_t r = c;
        while (r < n && m(r, c) == 0) ++r;
        if (r == n) return 0;
        if (r != c) {
            for (size_t j = 0; j < n; ++j) std::swap(m(r, j), m(c, j));
            d = -d;
        }
        d *= m(c, c);
        for (size_t i = c + 1; i < n; ++i) {
            const mpq_class k = m(i, c) / m(c, c);
            for (size_t j = c; j < n; ++j) m(i, j) -= k * m(c, j);
        }
    }
    return d;
}

PointMatrix random_point_matrix(oracle::Rng& rng, const FieldPtr& K, size_t n) {
    PointMatrix m = point_identity(K, n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            std::vector<PadicNumber> c;
            for (int k = 0; k < K->f(); ++k) c.push_back(PadicNumber::from_mpq(K->p(), rng.padic_rational(K->p(), 0, 2), kRel));
            m(i, j) = UnramifiedScalar(K, c);
        }
    return m;
}

PointMatrix entry_twist(const PointMatrix& m, int64_t k) {
    return m.map([&](const UnramifiedScalar& x) { return x.frobenius(k); });
}

}  // namespace

TEST_CASE("averaging the swap example gives half of the all-ones matrix") {
    const auto K = UnramifiedField::create(3, 1, kRel);
    const ProjectorResult r = average_projector(point(K, qm({{0, 1}, {0, 1}})), point(K, qm({{0, 1}, {1, 0}})), 2);
    gen::QMatrix half(2, 2, mpq_class(1, 2));
    CHECK(agrees_with(r.projector, half));
    CHECK(r.projector(0, 0).coords()[0].mantissa() == 265721);
    CHECK(r.idempotent);
    CHECK(r.equivariant);
    CHECK(r.same_image);
}

TEST_CASE("projector preconditions are checked in order") {
    const auto K = UnramifiedField::create(3, 1, kRel);
    const PointMatrix swap = point(K, qm({{0, 1}, {1, 0}}));
    auto run = [&](const gen::QMatrix& pi, int64_t n) { return [&, pi, n] { average_projector(point(K, pi), swap, n); }; };
    // 2I is not idempotent
    CHECK(code_of(run(qm({{2, 0}, {0, 2}}), 2)) == ErrorCode::PreconditionFailed);
    CHECK(detail_of(run(qm({{2, 0}, {0, 2}}), 2)).find("idempotent") != std::string::npos);
    // e1 e1^T against the swap itself (n = 1) does not commute
    CHECK(detail_of(run(qm({{1, 0}, {0, 0}}), 1)).find("commute") != std::string::npos);
    // with n = 2 the square of the swap is 1, but the line of e1 is not swap-stable
    CHECK(detail_of(run(qm({{1, 0}, {0, 0}}), 2)).find("F-stable") != std::string::npos);
    CHECK(code_of([&] { average_projector(point(K, qm({{1, 0}, {0, 0}})), swap, 0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("random averaged projectors") {
    oracle::Rng rng(51);
    for (int trial = 0; trial < 40; ++trial) {
        const int64_t p = trial % 2 ? 3 : 5;
        const auto K = UnramifiedField::create(p, 1, kRel);
        const gen::ProjectorInstance inst = gen::random_projector_instance(rng, p);
        const ProjectorResult r = average_projector(point(K, inst.pi), point(K, inst.F), inst.n);
        CHECK(agrees_with(r.projector, inst.expected));
        CHECK(r.idempotent);
        CHECK(r.equivariant);
        CHECK(r.same_image);
    }
}

TEST_CASE("group average") {
    const auto K = UnramifiedField::create(5, 1, kRel);
    const std::vector<PointMatrix> iota = {point_identity(K, 2), point(K, qm({{0, 1}, {1, 0}}))};
    const std::vector<std::vector<size_t>> z2 = {{0, 1}, {1, 0}};
    const ProjectorResult r = average_projector_group(point(K, qm({{0, 1}, {0, 1}})), iota, z2);
    CHECK(agrees_with(r.projector, gen::QMatrix(2, 2, mpq_class(1, 2))));
    CHECK(r.idempotent);
    CHECK(r.same_image);

    const std::vector<PointMatrix> bad = {point_identity(K, 2), point(K, qm({{1, 0}, {0, 2}}))};
    CHECK(code_of([&] { average_projector_group(point(K, qm({{0, 1}, {0, 1}})), bad, z2); }) == ErrorCode::CocycleViolated);
    CHECK(code_of([&] { average_projector_group(point(K, qm({{1, 0}, {0, 0}})), iota, z2); }) == ErrorCode::PreconditionFailed);
}

TEST_CASE("iterates of Frobenius") {
    oracle::Rng rng(9);
    const auto K = UnramifiedField::create(3, 2, kRel);
    const PointMatrix F = random_point_matrix(rng, K, 2);
    CHECK(point_matrices_agree(frob_iterate(F, 0), point_identity(K, 2)));
    CHECK(point_matrices_agree(frob_iterate(F, 1), F));
    CHECK(point_matrices_agree(frob_iterate(F, 2), F * entry_twist(F, 1)));
    for (int64_t m = -2; m <= 2; ++m)
        for (int64_t n = -2; n <= 2; ++n) {
            CAPTURE(m);
            CAPTURE(n);
            CHECK(point_matrices_agree(frob_iterate(F, m + n), frob_iterate(F, m) * twist(frob_iterate(F, n), m)));
        }
}

TEST_CASE("Frobenius of the unramified extension") {
    const auto K = UnramifiedField::create(5, 3, kRel);
    const UnramifiedScalar x = UnramifiedScalar::generator(K);
    UnramifiedScalar xp = UnramifiedScalar::one(K);
    for (int i = 0; i < 5; ++i) xp = xp * x;
    CHECK((x.frobenius(1) - xp).val_lower() >= 1);
    CHECK(x.frobenius(3).agrees(x));
    CHECK(x.frobenius(-1).frobenius(1).agrees(x));
    CHECK((x * x).frobenius(1).agrees(x.frobenius(1) * x.frobenius(1)));
}

TEST_CASE("companion iterates are block diagonal") {
    oracle::Rng rng(17);
    for (int trial = 0; trial < 12; ++trial) {
        const int64_t p = trial % 2 ? 3 : 5;
        const auto K = UnramifiedField::create(p, 1 + trial % 3, kRel);
        const size_t r = size_t(rng.range(1, 3));
        const int64_t n = rng.range(1, 6);
        const PointMatrix FG = random_point_matrix(rng, K, r);
        const PointMatrix C = block_companion(FG, n);
        REQUIRE(C.rows() == r * size_t(n));
        PointMatrix prod = point_identity(K, C.rows());
        for (int64_t i = 0; i < n; ++i) prod = prod * entry_twist(C, i);
        std::vector<PointMatrix> blocks;
        for (int64_t k = 0; k < n; ++k) blocks.push_back(entry_twist(FG, n - 1 - k));
        const PointMatrix expected = block_diagonal(blocks, UnramifiedScalar::zero(K));
        CHECK(point_matrices_agree(prod, expected));
        CHECK(point_matrices_agree(frob_iterate(C, n), expected));
        const auto diag = companion_diagonal(FG, n);
        REQUIRE(diag.size() == size_t(n));
        for (int64_t k = 0; k < n; ++k) CHECK(point_matrices_agree(diag[size_t(k)], blocks[size_t(k)]));
    }
}

TEST_CASE("characteristic polynomial over Q") {
    const gen::QMatrix F = qm({{2, 1, 0}, {0, 3, 4}, {5, 0, 1}});
    const auto c = char_coeffs(F, mpq_class(0), mpq_class(1));
    REQUIRE(c.size() == 4);
    CHECK(c[0] == 1);
    CHECK(c[1] == -6);
    CHECK(c[3] == -q_det(F));

    oracle::Rng rng(4);
    for (int trial = 0; trial < 30; ++trial) {
        const size_t n = size_t(rng.range(1, 5));
        const gen::QMatrix A = gen::random_int_matrix(rng, n, n, 3, -1, 2);
        const gen::Unimodular u = gen::random_unimodular_int(rng, n, 5);
        const auto base = char_coeffs(A, mpq_class(0), mpq_class(1));
        CHECK(char_coeffs(gen::q_mul(gen::q_mul(u.P, A), u.P_inv), mpq_class(0), mpq_class(1)) == base);
        // det(tI - A) at a few integers
        for (long t = -2; t <= 2; ++t) {
            gen::QMatrix M = A;
            for (size_t i = 0; i < n; ++i)
                for (size_t j = 0; j < n; ++j) M(i, j) = (i == j ? mpq_class(t) : mpq_class(0)) - A(i, j);
            mpq_class value = 0;
            for (const auto& x : base) value = value * t + x;
            CHECK(value == q_det(M));
        }
    }
}

TEST_CASE("Frobenius slopes") {
    const int64_t p = 3;
    Matrix<PadicNumber> F(2, 2, PadicNumber::exact_zero(p));
    F(0, 1) = num(p, 3);
    F(1, 0) = num(p, 1);
    FrobSlopes s = newton_slopes_frob(F);
    REQUIRE(s.polygon.slopes.size() == 1);
    CHECK(s.polygon.slopes[0] == Slope{mpq_class(1, 2), 2});
    CHECK(!s.unit_root);

    F(0, 1) = num(p, 1);
    F(1, 0) = num(p, 0);
    F(0, 0) = num(p, 1);
    F(1, 1) = num(p, 2);
    s = newton_slopes_frob(F);
    CHECK(s.polygon.expanded() == std::vector<mpq_class>{0, 0});
    CHECK(s.unit_root);
    CHECK(is_unit_root(F));

    F(1, 1) = num(p, 9);
    CHECK(newton_slopes_frob(F).polygon.expanded() == std::vector<mpq_class>{0, 2});
    CHECK(!is_unit_root(F));
}

TEST_CASE("purity of local factors") {
    PurityReport r = purity_check(IntPolynomial({1, -3, 4}), 4, 1, 1);
    CHECK(r.pure);
    REQUIRE(r.magnitudes.size() == 2);
    CHECK(std::abs(r.magnitudes[0] - 2) < 1e-9);
    CHECK(std::abs(r.magnitudes[1] - 2) < 1e-9);
    CHECK(!r.witness);

    r = purity_check(IntPolynomial({1, -5, 4}), 4, 1, 1);
    CHECK(!r.pure);
    REQUIRE(r.witness);
    CHECK(std::abs(*r.witness - 4) < 1e-9);

    // a degree-2 point: the factor is a polynomial in t^2
    r = purity_check(IntPolynomial({1, -3, 4}).compose_power(2), 2, 2, 1);
    CHECK(r.pure);
    CHECK(std::abs(r.target - 2) < 1e-12);

    // weight 0 unit roots
    CHECK(purity_check(IntPolynomial({1, -1}), 7, 1, 0).pure);
    CHECK(!purity_check(IntPolynomial({1, -7}), 7, 1, 0).pure);
    CHECK_THROWS_AS(purity_check(IntPolynomial({2, -1}), 7, 1, 0), Error);
}
