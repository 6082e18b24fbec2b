// Acceptance run: one PASS/FAIL line per criterion.
//
//   acceptance [--only K]... [--expect-fail K]... [--seed S]
//
// The exit status is 0 when the failing criteria are exactly the ones named
// with --expect-fail, so a criterion that starts to pass is reported too.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "generators.hpp"
#include "lefschetz.hpp"
#include "oracle.hpp"
#include "sigmod/frobenius.hpp"
#include "sigmod/lfunction.hpp"
#include "sigmod/linalg.hpp"
#include "sigmod/sigma_nabla.hpp"

using namespace sigmod;

namespace {

constexpr int kRel = 12;

PadicNumber num(int64_t p, const mpq_class& x, int rel = kRel) { return PadicNumber::from_mpq(p, x, rel); }
LaurentSeries mono(int64_t p, const mpq_class& c, int64_t e) { return LaurentSeries::monomial(num(p, c), e); }

struct Outcome {
    bool pass = true;
    std::string detail;
};

// Counts checks and keeps the first few failure descriptions.
class Tally {
public:
    void check(bool ok, const std::string& what) {
        ++total_;
        if (ok) return;
        ++failed_;
        if (notes_.size() < 3) notes_.push_back(what);
    }
    int failed() const { return failed_; }
    int total() const { return total_; }
    Outcome outcome(const std::string& summary) const {
        std::ostringstream os;
        os << summary;
        if (failed_) {
            os << "; " << failed_ << " of " << total_ << " checks failed";
            for (const auto& n : notes_) os << " [" << n << "]";
        }
        return {failed_ == 0, os.str()};
    }

private:
    int total_ = 0, failed_ = 0;
    std::vector<std::string> notes_;
};

std::string error_text(const Error& e) { return e.what(); }

// Elementary matrix I + s E_ij and its exact inverse.
struct Elementary {
    SeriesMatrix M, M_inv;
};

Elementary elementary(size_t n, int64_t p, size_t i, size_t j, const LaurentSeries& s) {
    Elementary e{series_identity(n, p), series_identity(n, p)};
    e.M(i, j) = s;
    e.M_inv(i, j) = LaurentSeries::zero(p) - s;
    return e;
}

// Product of elementary matrices with entries supported on [lo, hi] and
// coefficient valuations in [vlo, vhi], with its exact inverse.
Elementary random_unimodular(oracle::Rng& rng, size_t n, int64_t p, int64_t lo, int64_t hi, int64_t vlo, int64_t vhi, int steps) {
    Elementary acc{series_identity(n, p), series_identity(n, p)};
    if (n < 2) return acc;
    for (int s = 0; s < steps; ++s) {
        const size_t i = size_t(rng.range(0, int64_t(n) - 1));
        size_t j = size_t(rng.range(0, int64_t(n) - 1));
        if (i == j) j = (j + 1) % n;
        const Elementary e = elementary(n, p, i, j, oracle::to_series(rng.laurent(p, lo, hi, vlo, vhi, 0.5), p, kRel));
        acc.M = acc.M * e.M;
        acc.M_inv = e.M_inv * acc.M_inv;
    }
    return acc;
}

SeriesMatrix q_series(const gen::QMatrix& m, int64_t p) { return constant_matrix(gen::to_padic(m, p, kRel)); }

SigmaNablaModule direct_sum_fixture(int64_t p, size_t r) {
    SigmaNablaModule m{RingLabel::of(RingKind::E), p, series_zero_matrix(r, r, p), series_zero_matrix(r, r, p), std::nullopt};
    for (size_t i = 0; i < r; ++i) {
        m.Phi(i, i) = mono(p, 1, 1);
        m.N(i, i) = mono(p, mpq_class(1, p - 1), -1);
    }
    return m;
}

// ---------------------------------------------------------------- 1

Outcome factorization_roundtrip(uint64_t seed) {
    oracle::Rng rng(seed);
    Tally t;
    int factored = 0, refused = 0;
    std::string first_refusal;
    const auto start = std::chrono::steady_clock::now();
    for (int trial = 0; trial < 200; ++trial) {
        const int64_t p = trial % 2 ? 3 : 5;
        const size_t n = size_t(rng.range(1, 4));
        SeriesMatrix X;
        do {
            X = series_zero_matrix(n, n, p, 64);
            for (size_t i = 0; i < n; ++i)
                for (size_t j = 0; j < n; ++j) {
                    const int64_t lo = rng.range(-32, 27);
                    X(i, j) = oracle::to_series(rng.laurent(p, lo, std::min<int64_t>(lo + rng.range(0, 8), 31), -1, 2, 0.5), p, kRel, 64);
                }
        } while (determinant(X).is_zero());
        try {
            const GammaFactorization g = matfact_gamma(X);
            ++factored;
            t.check(matrices_agree(g.Y * constant_matrix(g.Z), X), "Y Z != X at trial " + std::to_string(trial));
            t.check(determinant(g.Y).valuation_info().first == 0, "v(det Y) != 0 at trial " + std::to_string(trial));
            t.check(!matrix_membership(g.Y, RingLabel::of(RingKind::Gamma)), "Y not over Gamma at trial " + std::to_string(trial));
        } catch (const Error& e) {
            ++refused;
            if (first_refusal.empty()) first_refusal = "trial " + std::to_string(trial) + ": " + error_text(e);
            t.check(false, "no factorization at trial " + std::to_string(trial));
        }
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    t.check(secs <= 60, "runtime above 60 s");
    std::ostringstream os;
    os << factored << "/200 factored and verified, " << refused << " refused";
    if (!first_refusal.empty()) os << " (first: " << first_refusal << ")";
    os << ", " << std::fixed << std::setprecision(2) << secs << " s";
    return t.outcome(os.str());
}

// ---------------------------------------------------------------- 2

Outcome compatibility_law(uint64_t seed) {
    oracle::Rng rng(seed);
    Tally t;
    int64_t worst = PadicNumber::kInf;
    for (int64_t p : {3, 5}) {
        const ZeroCheck z = check_compat(direct_sum_fixture(p, 1));
        t.check(z.holds && z.floor >= kRel - 3, "fixture at p=" + std::to_string(p));
        worst = std::min(worst, z.floor);
    }
    for (int trial = 0; trial < 100; ++trial) {
        const int64_t p = trial % 2 ? 3 : 5;
        const size_t r = size_t(rng.range(1, 3));
        Elementary Y = random_unimodular(rng, r, p, -2, 2, 0, 1, 3);
        // a diagonal of unit monomials keeps rank one changes nontrivial
        for (size_t i = 0; i < r; ++i) {
            const mpq_class c(rng.range(1, p - 1));
            const int64_t e = rng.range(-2, 2);
            SeriesMatrix D = series_identity(r, p), D_inv = series_identity(r, p);
            D(i, i) = mono(p, c, e);
            D_inv(i, i) = mono(p, 1 / c, -e);
            Y.M = Y.M * D;
            Y.M_inv = D_inv * Y.M_inv;
        }
        const ZeroCheck z = check_compat(transform(direct_sum_fixture(p, r), Y.M, Y.M_inv));
        t.check(z.holds, "compat fails at trial " + std::to_string(trial));
        t.check(z.floor >= kRel - 3, "floor " + std::to_string(z.floor) + " at trial " + std::to_string(trial));
        worst = std::min(worst, z.floor);
    }
    return t.outcome("fixture at p=3,5 and 100 basis changes, lowest floor " + std::to_string(worst) + " (need >= " + std::to_string(kRel - 3) + ")");
}

// ---------------------------------------------------------------- 3

// Constant invertible integral matrix with p-power elementary divisors in {0, 1}.
struct ConstantFrobenius {
    gen::QMatrix Phi, B;  // Phi B = B Phi = p
};

ConstantFrobenius random_constant_frobenius(oracle::Rng& rng, size_t n, int64_t p) {
    const gen::Unimodular u = gen::random_unimodular_int(rng, n, 3);
    gen::QMatrix D(n, n, mpq_class(0)), E(n, n, mpq_class(0));
    for (size_t i = 0; i < n; ++i) {
        const bool slope = rng.coin();
        D(i, i) = slope ? p : 1;
        E(i, i) = slope ? 1 : p;
    }
    return {gen::q_mul(gen::q_mul(u.P, D), u.P_inv), gen::q_mul(gen::q_mul(u.P, E), u.P_inv)};
}

Outcome descent_and_glue(uint64_t seed) {
    oracle::Rng rng(seed);
    Tally t;
    int descended = 0, glued = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const int64_t p = trial % 2 ? 3 : 5;
        const size_t n = size_t(rng.range(1, 3));
        const std::string tag = " at descent trial " + std::to_string(trial);
        // a known E+ module: a constant Frobenius moved by a polynomial basis change
        const ConstantFrobenius cf = random_constant_frobenius(rng, n, p);
        const SigmaNablaModule flat{RingLabel::of(RingKind::EPlus), p, q_series(cf.Phi, p), series_zero_matrix(n, n, p), std::nullopt};
        const Elementary H = random_unimodular(rng, n, p, 0, 2, 0, 1, 2);
        SigmaNablaModule base = transform(flat, H.M, H.M_inv);
        // outward by X = L R: L over E-dagger with p-divisible negative part, R over R+
        Elementary X{series_identity(n, p), series_identity(n, p)};
        if (n == 1) {
            X.M(0, 0) = LaurentSeries::constant(num(p, 1)) + mono(p, p * rng.range(1, 2), -rng.range(1, 2));
            X.M_inv = inverse(X.M);
        } else {
            const Elementary L = random_unimodular(rng, n, p, -2, -1, 1, 2, 2);
            const Elementary R = random_unimodular(rng, n, p, 1, 2, 0, 1, 2);
            X = {L.M * R.M, R.M_inv * L.M_inv};
        }
        SigmaNablaModule outer = transform(base, X.M_inv, X.M);
        outer.ring = RingLabel::of(RingKind::EDagger);
        try {
            const DescentResult d = descend_to_eplus(outer, X.M);
            ++descended;
            t.check(d.compat.holds, "compat" + tag);
            t.check(!matrix_membership(d.module.Phi, RingLabel::of(RingKind::EPlus)), "Phi not over E+" + tag);
            t.check(!matrix_membership(d.module.N, RingLabel::of(RingKind::EPlus)), "N not over E+" + tag);
        } catch (const Error& e) {
            t.check(false, error_text(e) + tag);
        }
    }
    for (int trial = 0; trial < 50; ++trial) {
        const int64_t p = trial % 2 ? 3 : 5;
        const size_t n = size_t(rng.range(1, 3));
        const std::string tag = " at glue trial " + std::to_string(trial);
        // a known Gamma+ Dieudonne module
        const ConstantFrobenius cf = random_constant_frobenius(rng, n, p);
        const SigmaNablaModule flat{RingLabel::of(RingKind::GammaPlus), p, q_series(cf.Phi, p), series_zero_matrix(n, n, p), q_series(cf.B, p)};
        const Elementary H = random_unimodular(rng, n, p, 0, 2, 0, 1, 2);
        SigmaNablaModule m2 = transform(flat, H.M, H.M_inv);
        m2.ring = RingLabel::of(RingKind::EPlus);
        // the same module seen over Gamma in a Laurent basis Y0, related to m2 by X = Y0^{-1} Z0
        const Elementary Y0 = random_unimodular(rng, n, p, -2, 2, 0, 1, 3);
        SigmaNablaModule m1 = transform(m2, Y0.M, Y0.M_inv);
        m1.ring = RingLabel::of(RingKind::Gamma);
        gen::QMatrix Z0 = gen::random_unimodular_int(rng, n, 2).P;
        for (size_t j = 0; j < n; ++j)
            for (size_t i = 0; i < n; ++i) Z0(i, j) *= j == 0 ? mpq_class(1, p) : mpq_class(1);
        const SeriesMatrix X = Y0.M_inv * q_series(Z0, p);
        try {
            const SigmaNablaModule target = transform(m2, q_series(Z0, p), inverse(q_series(Z0, p)));
            const GlueResult g = glue_dieudonne(m1, target, X);
            ++glued;
            t.check(g.compat.holds && g.compat_v.holds && g.fv.holds, "Dieudonne identities" + tag);
            t.check(!matrix_membership(g.module.Phi, RingLabel::of(RingKind::GammaPlus)), "Phi not over Gamma+" + tag);
            t.check(!matrix_membership(g.module.N, RingLabel::of(RingKind::GammaPlus)), "N not over Gamma+" + tag);
            t.check(g.module.B && !matrix_membership(*g.module.B, RingLabel::of(RingKind::GammaPlus)), "B not over Gamma+" + tag);
        } catch (const Error& e) {
            t.check(false, error_text(e) + tag);
        }
    }
    return t.outcome(std::to_string(descended) + "/50 descended, " + std::to_string(glued) + "/50 glued");
}

// ---------------------------------------------------------------- 4

Outcome horizontal_sections(uint64_t seed) {
    oracle::Rng rng(seed);
    Tally t;
    mpz_class fact;
    mpz_fac_ui(fact.get_mpz_t(), 32);
    int64_t worst_margin = PadicNumber::kInf;
    for (int trial = 0; trial < 100; ++trial) {
        const int64_t p = trial % 2 ? 3 : 5;
        // degree 32 needs more digits than v_p(32!) = 14 (p = 3) or 7 (p = 5)
        const int rel = p == 3 ? 24 : 16;
        const int64_t bound = rel - oracle::vp(fact, p);
        const size_t n = size_t(rng.range(1, 4));
        Matrix<PadicNumber> A(n, n, PadicNumber::exact_zero(p));
        SeriesMatrix H0 = series_identity(n, p);
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) {
                A(i, j) = num(p, rng.padic_rational(p, 0, 2), rel);
                H0(i, j) = H0(i, j) + LaurentSeries::monomial(A(i, j), 1);
            }
        const SeriesMatrix N = series_zero_matrix(n, n, p) - derivative(H0) * inverse(H0, std::make_pair<int64_t, int64_t>(0, 40));
        const std::string tag = " at trial " + std::to_string(trial);
        try {
            const HorizontalResult h = horizontal_basis(N, 32);
            t.check(!h.exhausted && h.achieved_degree == 32, "stopped at degree " + std::to_string(h.achieved_degree) + tag);
            if (h.achieved_degree < 32) continue;
            // H(0) = I fixes the column scaling, so the solution is H0 itself
            bool same = matrices_agree(h.coeffs[0], Matrix<PadicNumber>::identity(n, PadicNumber::exact_zero(p), num(p, 1, rel))) &&
                        matrices_agree(h.coeffs[1], A);
            for (int k = 2; k <= 32; ++k)
                for (const auto& x : h.coeffs[size_t(k)].data()) same = same && x.is_zero();
            t.check(same, "H0 not recovered" + tag);
            t.check(h.residual_valuation >= bound, "residual valuation " + std::to_string(h.residual_valuation) + tag);
            worst_margin = std::min(worst_margin, h.residual_valuation - bound);
        } catch (const Error& e) {
            t.check(false, error_text(e) + tag);
        }
    }
    return t.outcome("100 instances to degree 32 at prec 24 (p=3) / 16 (p=5), smallest residual margin " +
                     (worst_margin >= PadicNumber::kInf ? std::string("inf") : std::to_string(worst_margin)));
}

// ---------------------------------------------------------------- 5

bool point_agrees(const PointMatrix& a, const gen::QMatrix& b) {
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j)
            if (!oracle::matches(a(i, j).coords()[0], b(i, j))) return false;
    return true;
}

std::string projector_failure(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        if (e.code() == ErrorCode::PreconditionFailed) return e.detail();
        return "wrong error " + error_text(e);
    }
    return "not detected";
}

Outcome projector_averaging(uint64_t seed) {
    oracle::Rng rng(seed);
    Tally t;
    {
        const auto K = UnramifiedField::create(3, 1, kRel);
        gen::QMatrix F(2, 2, mpq_class(0)), pi(2, 2, mpq_class(0));
        F(0, 1) = F(1, 0) = 1;
        pi(0, 1) = pi(1, 1) = 1;
        const ProjectorResult r = average_projector(point_matrix(K, gen::to_padic(pi, 3, kRel)), point_matrix(K, gen::to_padic(F, 3, kRel)), 2);
        t.check(point_agrees(r.projector, gen::QMatrix(2, 2, mpq_class(1, 2))), "swap example is not J/2");
    }
    int detected = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const int64_t p = trial % 2 ? 3 : 5;
        const auto K = UnramifiedField::create(p, 1, kRel);
        const gen::ProjectorInstance inst = gen::random_projector_instance(rng, p);
        auto pm = [&](const gen::QMatrix& m) { return point_matrix(K, gen::to_padic(m, p, kRel)); };
        const std::string tag = " at trial " + std::to_string(trial);
        try {
            const ProjectorResult r = average_projector(pm(inst.pi), pm(inst.F), inst.n);
            t.check(r.idempotent && r.equivariant && r.same_image, "output properties" + tag);
            t.check(point_agrees(r.projector, inst.expected), "average differs from the oracle" + tag);
        } catch (const Error& e) {
            t.check(false, error_text(e) + tag);
        }
        // corrupted inputs, one per precondition
        gen::QMatrix doubled = inst.pi;
        for (size_t i = 0; i < doubled.rows(); ++i)
            for (size_t j = 0; j < doubled.cols(); ++j) doubled(i, j) *= 2;
        const std::string a = projector_failure([&] { average_projector(pm(doubled), pm(inst.F), inst.n); });
        const std::string b = projector_failure([&] { average_projector(pm(inst.pi), pm(inst.F), 1); });
        const std::string c = projector_failure([&] { average_projector(pm(inst.unstable_pi), pm(inst.F), inst.n); });
        const bool ok_a = a.find("idempotent") != std::string::npos, ok_b = b.find("commute") != std::string::npos,
                   ok_c = c.find("F-stable") != std::string::npos;
        t.check(ok_a, "idempotence: " + a + tag);
        t.check(ok_b, "commuting: " + b + tag);
        t.check(ok_c, "stability: " + c + tag);
        detected += ok_a + ok_b + ok_c;
    }
    return t.outcome("swap example, 100 random instances, " + std::to_string(detected) + "/300 corruptions detected");
}

// ---------------------------------------------------------------- 6

PointMatrix entry_twist(const PointMatrix& m, int64_t k) {
    return m.map([&](const UnramifiedScalar& x) { return x.frobenius(k); });
}

Outcome block_companion_iterates(uint64_t seed) {
    oracle::Rng rng(seed);
    Tally t;
    int cases = 0;
    for (int64_t p : {3, 5})
        for (int f : {1, 2})
            for (size_t r = 1; r <= 3; ++r)
                for (int64_t n = 1; n <= 6; ++n) {
                    const auto K = UnramifiedField::create(p, f, kRel);
                    PointMatrix FG = point_identity(K, r);
                    for (size_t i = 0; i < r; ++i)
                        for (size_t j = 0; j < r; ++j) {
                            std::vector<PadicNumber> c;
                            for (int k = 0; k < f; ++k) c.push_back(num(p, rng.padic_rational(p, 0, 2)));
                            FG(i, j) = UnramifiedScalar(K, c);
                        }
                    const PointMatrix C = block_companion(FG, n);
                    std::vector<PointMatrix> blocks;
                    for (int64_t k = 0; k < n; ++k) blocks.push_back(entry_twist(FG, n - 1 - k));
                    const PointMatrix expected = block_diagonal(blocks, UnramifiedScalar::zero(K));
                    const PointMatrix iterate = frob_iterate(C, n);
                    const auto asserted = companion_diagonal(FG, n);
                    bool ok = point_matrices_agree(iterate, expected) && asserted.size() == size_t(n);
                    for (size_t k = 0; ok && k < asserted.size(); ++k) ok = point_matrices_agree(asserted[k], blocks[k]);
                    t.check(ok, "p=" + std::to_string(p) + " f=" + std::to_string(f) + " rank " + std::to_string(r) + " n=" + std::to_string(n));
                    ++cases;
                }
    return t.outcome(std::to_string(cases) + " cases (n = 1..6, rank 1..3, f = 1, 2, p = 3, 5)");
}

// ---------------------------------------------------------------- 7

Outcome lfunctions(uint64_t seed) {
    oracle::Rng rng(seed);
    Tally t;
    for (int64_t q : {2, 3}) {
        const auto counts = lefschetz::count_irreducibles(q, 8);
        CharPolyTable tab;
        tab.q = q;
        tab.places = {"l"};
        for (int d = 1; d <= 8; ++d)
            for (int64_t k = 0; k < counts[size_t(d)]; ++k) {
                const std::string id = std::to_string(d) + "." + std::to_string(k);
                tab.points.push_back({id, d});
                tab.polys[{"l", id}] = IntPolynomial({1, -1}).compose_power(d);
            }
        const TruncatedSeries L = lfunction_truncated(tab, "l", 8);
        mpq_class expected = 1;
        bool ok = L.size() == 9;
        for (size_t k = 0; ok && k < L.size(); ++k, expected *= q) ok = L[k] == expected;
        t.check(ok, "affine line at q=" + std::to_string(q));
    }
    for (int trial = 0; trial < 50; ++trial) {
        const lefschetz::Instance inst = lefschetz::generate(rng, 12);
        const TraceCheck r = trace_formula_check(inst.table, "l", inst.P0, inst.P1, inst.P2, 12);
        t.check(r.consistent && r.degree == 12, "Lefschetz instance " + std::to_string(trial) + " inconsistent at degree " + std::to_string(r.degree));
    }
    for (int trial = 0; trial < 100; ++trial) {
        const int64_t q = rng.range(2, 9);
        const int64_t d = rng.range(0, 3);
        mpz_class root;
        mpz_ui_pow_ui(root.get_mpz_t(), static_cast<unsigned long>(q), static_cast<unsigned long>(d));
        const int k = int(rng.range(0, 4));
        IntPolynomial P = IntPolynomial::one();
        for (int i = 0; i < k; ++i) P = P * IntPolynomial(std::vector<mpz_class>{1, -root});
        for (int i = 0, extra = int(rng.range(0, 3)); i < extra; ++i) {
            const mpz_class a = rng.range(-6, 6);
            mpz_class b = rng.range(-6, 6);
            if (b == 0 || root * root + a * root + b == 0) b += 7;
            P = P * IntPolynomial(std::vector<mpz_class>{1, a, b});
        }
        t.check(pole_order_at(P, q, d) == k, "pole order of " + P.to_string());
    }
    return t.outcome("affine line q=2,3 to degree 8, 50 Lefschetz instances to degree 12, 100 pole orders");
}

// ---------------------------------------------------------------- 8

Outcome purity(uint64_t seed) {
    oracle::Rng rng(seed);
    Tally t;
    const PurityReport pure = purity_check(IntPolynomial({1, -3, 4}), 4, 1, 1, 1e-6);
    const PurityReport impure = purity_check(IntPolynomial({1, -5, 4}), 4, 1, 1, 1e-6);
    t.check(pure.pure, "1 - 3t + 4t^2 reported impure");
    t.check(!impure.pure, "1 - 5t + 4t^2 reported pure");
    int conjugations = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const size_t n = size_t(rng.range(1, 6));
        const gen::QMatrix A = gen::random_int_matrix(rng, n, n, rng.coin() ? 3 : 5, -2, 2);
        const gen::Unimodular u = gen::random_unimodular_int(rng, n, 6);
        // conjugation by a non-integral invertible matrix as well
        gen::QMatrix D = gen::q_identity(n), D_inv = gen::q_identity(n);
        D(0, 0) = mpq_class(rng.range(1, 9), rng.range(1, 9));
        D(0, 0).canonicalize();
        D_inv(0, 0) = 1 / D(0, 0);
        const gen::QMatrix P = gen::q_mul(u.P, D), P_inv = gen::q_mul(D_inv, u.P_inv);
        const auto before = char_coeffs(A, mpq_class(0), mpq_class(1));
        const auto after = char_coeffs(gen::q_mul(gen::q_mul(P, A), P_inv), mpq_class(0), mpq_class(1));
        t.check(before == after, "char_coeffs changed under conjugation at trial " + std::to_string(trial));
        ++conjugations;
    }
    std::ostringstream os;
    os << "magnitudes " << pure.magnitudes[0] << ", " << pure.magnitudes[1] << " vs target " << pure.target << "; impure witness "
       << (impure.witness ? *impure.witness : 0.0) << "; " << conjugations << " exact conjugations";
    return t.outcome(os.str());
}

struct Criterion {
    int id;
    const char* name;
    Outcome (*run)(uint64_t);
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria"};
    std::vector<int> only, expect_fail;
    uint64_t seed = 20240611;
    app.add_option("--only", only, "run only these criteria");
    app.add_option("--expect-fail", expect_fail, "criteria known to fail");
    app.add_option("--seed", seed, "base random seed");
    CLI11_PARSE(app, argc, argv);

    const std::vector<Criterion> criteria = {
        {1, "factorization roundtrip over Gamma", factorization_roundtrip},
        {2, "compatibility law under basis change", compatibility_law},
        {3, "descent to E+ and gluing to Gamma+", descent_and_glue},
        {4, "horizontal sections to degree 32", horizontal_sections},
        {5, "projector averaging", projector_averaging},
        {6, "block companion iterates", block_companion_iterates},
        {7, "L-functions and the trace formula", lfunctions},
        {8, "purity and conjugation invariance", purity},
    };
    const std::set<int> wanted(only.begin(), only.end()), expected(expect_fail.begin(), expect_fail.end());
    std::set<int> failed;
    const auto start = std::chrono::steady_clock::now();
    for (const auto& c : criteria) {
        if (!wanted.empty() && !wanted.count(c.id)) continue;
        Outcome o;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            o = c.run(seed + uint64_t(c.id));
        } catch (const std::exception& e) {
            o = {false, std::string("uncaught: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (!o.pass) failed.insert(c.id);
        std::printf("%s %d %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
        std::fflush(stdout);
    }
    const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("total %.2f s\n", total);

    std::set<int> relevant;
    for (int id : expected)
        if (wanted.empty() || wanted.count(id)) relevant.insert(id);
    if (failed == relevant) return 0;
    for (int id : failed)
        if (!relevant.count(id)) std::printf("unexpected failure: %d\n", id);
    for (int id : relevant)
        if (!failed.count(id)) std::printf("expected failure did not occur: %d\n", id);
    return 1;
}
