#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "sigmod/matrix.hpp"
#include "sigmod/padic.hpp"
#include "sigmod/polynomial.hpp"
#include "sigmod/unramified.hpp"

namespace sigmod {

/// Matrices over Q_q; for f = 1 every twist is trivial.
using PointMatrix = Matrix<UnramifiedScalar>;

PointMatrix point_matrix(const FieldPtr& field, const Matrix<PadicNumber>& m);
PointMatrix point_identity(const FieldPtr& field, size_t n);
/// Applies sigma^k to every entry.
PointMatrix twist(const PointMatrix& m, int64_t k);
PointMatrix point_inverse(const PointMatrix& m);
bool point_matrices_agree(const PointMatrix& a, const PointMatrix& b);
/// The Q_p matrix behind an f = 1 point matrix.
Matrix<PadicNumber> base_coordinates(const PointMatrix& m);

/// F sigma(F) ... sigma^{n-1}(F) for n > 0, the identity for n = 0, and
/// sigma^{n}(F^{[-n]})^{-1} for n < 0 so that F^{[m+n]} = F^{[m]} sigma^m(F^{[n]}).
PointMatrix frob_iterate(const PointMatrix& F, int64_t n);

struct ProjectorResult {
    PointMatrix projector;
    bool idempotent = false;
    bool equivariant = false;
    bool same_image = false;
};

/// (1/n) sum_{i<n} F^{[i]} sigma^i(pi) (F^{[i]})^{-1}. Preconditions are
/// checked in order: idempotence, commuting with F^{[n]}, F-stable image.
ProjectorResult average_projector(const PointMatrix& pi, const PointMatrix& F, int64_t n);

/// (1/|G|) sum_g iota_g pi iota_g^{-1}; table[g][h] is the index of gh.
/// The group acts trivially on the constant matrices involved.
ProjectorResult average_projector_group(const PointMatrix& pi, const std::vector<PointMatrix>& iota,
                                        const std::vector<std::vector<size_t>>& table);

/// Identity blocks on the superdiagonal, F_G in the lower-left corner. Its
/// n-th iterate is blockdiag(sigma^{n-1}(F_G), ..., sigma(F_G), F_G).
PointMatrix block_companion(const PointMatrix& FG, int64_t n);
/// The diagonal blocks the n-th iterate of block_companion(FG, n) carries, top to bottom.
std::vector<PointMatrix> companion_diagonal(const PointMatrix& FG, int64_t n);

/// Coefficients of det(T I - F), leading coefficient first (Berkowitz, no division).
template <class T>
std::vector<T> char_coeffs(const Matrix<T>& F, const T& zero, const T& one) {
    if (!F.square()) fail(ErrorCode::InvalidArgument, "characteristic polynomial of a non-square matrix");
    const size_t n = F.rows();
    std::vector<T> poly = {one};
    if (n == 0) return poly;
    poly.push_back(zero - F(0, 0));
    for (size_t r = 1; r < n; ++r) {
        // Toeplitz column: 1, -a, -R C, -R S C, ..., -R S^{r-1} C
        std::vector<T> t = {one, zero - F(r, r)};
        std::vector<T> v(r);
        for (size_t i = 0; i < r; ++i) v[i] = F(i, r);
        for (size_t k = 0; k < r; ++k) {
            T acc = zero;
            for (size_t j = 0; j < r; ++j) acc = acc + F(r, j) * v[j];
            t.push_back(zero - acc);
            std::vector<T> next(r, zero);
            for (size_t i = 0; i < r; ++i)
                for (size_t j = 0; j < r; ++j) next[i] = next[i] + F(i, j) * v[j];
            v = std::move(next);
        }
        std::vector<T> out(r + 2, zero);
        for (size_t i = 0; i < r + 2; ++i)
            for (size_t j = 0; j <= std::min(i, r); ++j) out[i] = out[i] + t[i - j] * poly[j];
        poly = std::move(out);
    }
    return poly;
}

std::vector<PadicNumber> char_coeffs(const Matrix<PadicNumber>& F);

struct FrobSlopes {
    NewtonPolygon polygon;
    bool unit_root = false;
};

FrobSlopes newton_slopes_frob(const Matrix<PadicNumber>& F);
bool is_unit_root(const Matrix<PadicNumber>& F);

struct PurityReport {
    bool pure = true;
    double target = 0;
    std::vector<double> magnitudes;
    /// Magnitude farthest from the target, when impure.
    std::optional<double> witness;
};

/// local_poly = det(1 - t^deg Frob). When it is a polynomial in t^deg the
/// magnitudes are those of the reciprocal roots in s = t^deg; otherwise the
/// polynomial is read in s directly. Pure iff every magnitude is within a
/// relative tolerance tol of q^{w deg / 2}.
PurityReport purity_check(const IntPolynomial& local_poly, int64_t q, int64_t deg, int64_t w, double tol = 1e-6);

}  // namespace sigmod
