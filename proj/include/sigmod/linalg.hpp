#pragma once

#include <string>

#include <gmpxx.h>

#include "sigmod/matrix.hpp"
#include "sigmod/padic.hpp"
#include "sigmod/unramified.hpp"

namespace sigmod {

// Scalar behaviour needed by the dense field algorithms below.
template <class T>
struct FieldTraits;

template <>
struct FieldTraits<PadicNumber> {
    static bool is_zero(const PadicNumber& x) { return x.is_zero(); }
    static int64_t pivot_rank(const PadicNumber& x) { return x.valuation(); }
    static PadicNumber inverse(const PadicNumber& x) { return x.inverse(); }
    static bool agrees(const PadicNumber& a, const PadicNumber& b) { return sigmod::agrees(a, b); }
    static PadicNumber zero_like(const PadicNumber& x) { return PadicNumber::exact_zero(x.p()); }
    static PadicNumber from_int(const PadicNumber& like, int64_t k, int rel) { return PadicNumber::from_int(like.p(), k, rel); }
};

template <>
struct FieldTraits<mpq_class> {
    static bool is_zero(const mpq_class& x) { return x == 0; }
    static int64_t pivot_rank(const mpq_class&) { return 0; }
    static mpq_class inverse(const mpq_class& x) { return 1 / x; }
    static bool agrees(const mpq_class& a, const mpq_class& b) { return a == b; }
    static mpq_class zero_like(const mpq_class&) { return 0; }
    static mpq_class from_int(const mpq_class&, int64_t k, int) { return mpq_class(static_cast<long>(k)); }
};

template <>
struct FieldTraits<UnramifiedScalar> {
    static bool is_zero(const UnramifiedScalar& x) { return x.is_zero(); }
    static int64_t pivot_rank(const UnramifiedScalar& x) { return x.val_lower(); }
    static UnramifiedScalar inverse(const UnramifiedScalar& x) { return x.inverse(); }
    static bool agrees(const UnramifiedScalar& a, const UnramifiedScalar& b) { return a.agrees(b); }
    static UnramifiedScalar zero_like(const UnramifiedScalar& x) { return UnramifiedScalar::zero(x.field()); }
    static UnramifiedScalar from_int(const UnramifiedScalar& like, int64_t k, int) {
        return UnramifiedScalar::from_padic(like.field(), PadicNumber::from_int(like.field()->p(), k, like.field()->rel()));
    }
};

template <class T>
bool matrices_agree(const Matrix<T>& a, const Matrix<T>& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j)
            if (!FieldTraits<T>::agrees(a(i, j), b(i, j))) return false;
    return true;
}

template <class T>
Matrix<T> scaled(const Matrix<T>& a, const T& s) {
    Matrix<T> r = a;
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j) * s;
    return r;
}

namespace detail {

// Row index of the best pivot in column k at or below row k, or -1.
template <class T>
long choose_pivot(const Matrix<T>& a, size_t k) {
    long best = -1;
    for (size_t i = k; i < a.rows(); ++i) {
        if (FieldTraits<T>::is_zero(a(i, k))) continue;
        if (best < 0 || FieldTraits<T>::pivot_rank(a(i, k)) < FieldTraits<T>::pivot_rank(a(size_t(best), k))) best = long(i);
    }
    return best;
}

}  // namespace detail

/// Gauss-Jordan inverse; pivots by smallest valuation, lowest row on ties.
template <class T>
Matrix<T> inverse(const Matrix<T>& m, const T& one) {
    if (!m.square()) fail(ErrorCode::InvalidArgument, "inverse of a non-square matrix");
    const size_t n = m.rows();
    Matrix<T> a = m;
    Matrix<T> inv = Matrix<T>::identity(n, FieldTraits<T>::zero_like(one), one);
    for (size_t k = 0; k < n; ++k) {
        long piv = detail::choose_pivot(a, k);
        if (piv < 0) fail(ErrorCode::SingularInput, "matrix is singular at working precision (column " + std::to_string(k) + ")");
        a.swap_rows(k, size_t(piv));
        inv.swap_rows(k, size_t(piv));
        T pinv = FieldTraits<T>::inverse(a(k, k));
        for (size_t j = 0; j < n; ++j) {
            a(k, j) = a(k, j) * pinv;
            inv(k, j) = inv(k, j) * pinv;
        }
        for (size_t i = 0; i < n; ++i) {
            if (i == k || FieldTraits<T>::is_zero(a(i, k))) continue;
            T factor = a(i, k);
            for (size_t j = 0; j < n; ++j) {
                a(i, j) = a(i, j) - factor * a(k, j);
                inv(i, j) = inv(i, j) - factor * inv(k, j);
            }
        }
    }
    return inv;
}

template <class T>
T determinant(const Matrix<T>& m, const T& one) {
    if (!m.square()) fail(ErrorCode::InvalidArgument, "determinant of a non-square matrix");
    Matrix<T> a = m;
    T det = one;
    for (size_t k = 0; k < a.rows(); ++k) {
        long piv = detail::choose_pivot(a, k);
        if (piv < 0) return det * a(k, k);
        if (size_t(piv) != k) {
            a.swap_rows(k, size_t(piv));
            det = FieldTraits<T>::zero_like(one) - det;
        }
        det = det * a(k, k);
        T pinv = FieldTraits<T>::inverse(a(k, k));
        for (size_t i = k + 1; i < a.rows(); ++i) {
            if (FieldTraits<T>::is_zero(a(i, k))) continue;
            T factor = a(i, k) * pinv;
            for (size_t j = k; j < a.cols(); ++j) a(i, j) = a(i, j) - factor * a(k, j);
        }
    }
    return det;
}

/// m^n for n >= 0 by repeated squaring; negative n inverts first.
template <class T>
Matrix<T> power(const Matrix<T>& m, long n, const T& one) {
    Matrix<T> base = n < 0 ? inverse(m, one) : m;
    unsigned long e = n < 0 ? static_cast<unsigned long>(-n) : static_cast<unsigned long>(n);
    Matrix<T> acc = Matrix<T>::identity(m.rows(), FieldTraits<T>::zero_like(one), one);
    while (e) {
        if (e & 1) acc = acc * base;
        e >>= 1;
        if (e) base = base * base;
    }
    return acc;
}

}  // namespace sigmod
