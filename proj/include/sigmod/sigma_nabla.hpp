#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sigmod/matrix.hpp"
#include "sigmod/padic.hpp"
#include "sigmod/series.hpp"

namespace sigmod {

/// Frobenius F e_j = sum Phi_ij e_i, connection nabla e_j = sum N_ij e_i du,
/// optional Verschiebung V e_j = sum B_ij e_i.
struct SigmaNablaModule {
    RingLabel ring;
    int64_t q = 0;
    SeriesMatrix Phi;
    SeriesMatrix N;
    std::optional<SeriesMatrix> B;

    size_t rank() const { return Phi.rows(); }
    int64_t p() const;
    /// Shapes agree and q is a power of p.
    void validate() const;
};

/// Outcome of an "is this matrix zero at working precision" check.
struct ZeroCheck {
    bool holds = true;
    /// Smallest absolute precision among the residual coefficients.
    int64_t floor = PadicNumber::kInf;
    /// First entry (row-major) with a provably nonzero residual.
    std::optional<std::pair<size_t, size_t>> position;
    /// Valuation of that entry's residual (a lower bound when not determined).
    int64_t residual_valuation = PadicNumber::kInf;
    SeriesMatrix residual;
};

ZeroCheck check_zero(const SeriesMatrix& residual);

/// N Phi + d(Phi) - q u^{q-1} Phi sigma(N).
SeriesMatrix compat_residual(const SigmaNablaModule& m);
ZeroCheck check_compat(const SigmaNablaModule& m);
/// d(B) + q u^{q-1} sigma(N) B - B N; requires B.
ZeroCheck check_compat_v(const SigmaNablaModule& m);
/// [Phi B - p I | B Phi - p I] stacked side by side; requires B.
ZeroCheck check_fv(const SigmaNablaModule& m);

/// Matrices in the basis v_j = sum Y_ij e_i.
SigmaNablaModule transform(const SigmaNablaModule& m, const SeriesMatrix& Y, const SeriesMatrix& Y_inv);

/// Relabels the ring; every entry must stay consistent with the target.
SigmaNablaModule base_change(const SigmaNablaModule& m, const RingLabel& target);

/// B = p Phi^{-1}.
SigmaNablaModule recover_V(const SigmaNablaModule& m);

enum class ProbeVerdict { Plausible, Refuted, Inconclusive };
const char* probe_verdict_name(ProbeVerdict v);

struct ProbeReport {
    ProbeVerdict verdict = ProbeVerdict::Inconclusive;
    int64_t step = 0;
    /// profile[n] = min valuation of D^n(e_j) over all j; kInf for zero.
    std::vector<int64_t> profile;
};

/// Iterates D(f) = f' + N f on the standard basis vectors.
ProbeReport quasi_nilpotence_probe(const SigmaNablaModule& m, int n_max = 30, int64_t v_target = 2);

// ---------------------------------------------------------------- factorizations

struct GammaFactorization {
    SeriesMatrix Y;
    Matrix<PadicNumber> Z;
    int64_t det_valuation = 0;
    /// Smith exponents of the coefficient matrix of adj(X).
    std::vector<int64_t> exponents;
    int64_t floor = PadicNumber::kInf;
};

/// X = Y Z with Y invertible over Gamma and Z constant. Z is returned in
/// row Hermite form over Z_p (upper triangular, p-power diagonal, entries
/// above the diagonal reduced modulo the diagonal entry of their column).
GammaFactorization matfact_gamma(const SeriesMatrix& X);

struct RobbaFactorization {
    SeriesMatrix Y;
    SeriesMatrix Y_inv;
    SeriesMatrix Z;
    int iterations = 0;
    int64_t floor = PadicNumber::kInf;
};

/// X = Y Z with Y over E-dagger and Z over R-plus, for X = D (I + M) with D
/// diagonal monomials, M's negative part divisible by p, its positive part
/// integral and its constant part divisible by p. half_width bounds the
/// exponents kept during the iteration (0 picks one from X).
RobbaFactorization matfact_robba(const SeriesMatrix& X, int64_t half_width = 0);

struct DescentResult {
    SigmaNablaModule module;
    RobbaFactorization factors;
    ZeroCheck compat;
};

DescentResult descend_to_eplus(const SigmaNablaModule& m, const SeriesMatrix& X);

struct GlueResult {
    SigmaNablaModule module;
    GammaFactorization factors;
    ZeroCheck compat;
    ZeroCheck compat_v;
    ZeroCheck fv;
};

GlueResult glue_dieudonne(const SigmaNablaModule& m1, const SigmaNablaModule& m2, const SeriesMatrix& X);

// ---------------------------------------------------------------- horizontal sections

struct HorizontalResult {
    /// coeffs[k] is the coefficient matrix of u^k, for k <= achieved_degree.
    std::vector<Matrix<PadicNumber>> coeffs;
    int achieved_degree = 0;
    /// True when precision ran out before the requested degree.
    bool exhausted = false;
    /// Smallest absolute precision over the reported coefficients.
    int64_t floor = PadicNumber::kInf;
    /// Smallest valuation bound over the residual (k+1) H_{k+1} + sum N_i H_{k-i}.
    int64_t residual_valuation = PadicNumber::kInf;
};

/// Solves H' + N H = 0, H(0) = I, degree by degree up to k_max.
HorizontalResult horizontal_basis(const SeriesMatrix& N, int k_max);
/// Same, after checking compatibility and that N has no negative exponents.
HorizontalResult horizontal_basis(const SigmaNablaModule& m, int k_max);

struct SubBasisResult {
    SeriesMatrix basis;
    std::vector<size_t> pivot_rows;
    /// Whether Phi0 sigma(basis) stays inside the span (informational).
    bool frobenius_stable = false;
};

/// Column echelon form of an inclusion into a module with N = 0 and constant
/// Frobenius phi0; each resulting column must be constant.
SubBasisResult horizontal_sub_basis(const SeriesMatrix& inclusion, const Matrix<PadicNumber>& phi0, int64_t q);

// ---------------------------------------------------------------- lattices over Gamma

struct SmithResult {
    /// E A F = diag(p^{d_k} units_k), with E, F invertible over Gamma.
    SeriesMatrix E, F;
    std::vector<LaurentSeries> units;
    std::vector<int64_t> d;
    size_t rank = 0;
    /// A = U D W with U = E^{-1} diag(units), W = F^{-1}.
    SeriesMatrix U, D, W;
};

/// Unit factors U, W are only computed when with_inverses is set.
SmithResult lattice_smith(const SeriesMatrix& A, bool with_inverses = true);
/// Columns form a basis of the intersection of the two column spans.
SeriesMatrix lattice_intersect(const SeriesMatrix& L1, const SeriesMatrix& L2);
/// Whether the column vector v lies in the Gamma-span of L's columns.
bool lattice_contains(const SeriesMatrix& L, const SeriesMatrix& v);

}  // namespace sigmod
