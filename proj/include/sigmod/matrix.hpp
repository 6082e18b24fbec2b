#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "sigmod/error.hpp"

namespace sigmod {

/// Dense row-major matrix over any ring-like element type. Ring constants
/// (zero, one) are passed in explicitly because the element types carry
/// their prime and precision with them.
template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(size_t rows, size_t cols, const T& fill) : r_(rows), c_(cols), d_(rows * cols, fill) {}

    static Matrix identity(size_t n, const T& zero, const T& one) {
        Matrix m(n, n, zero);
        for (size_t i = 0; i < n; ++i) m(i, i) = one;
        return m;
    }

    size_t rows() const { return r_; }
    size_t cols() const { return c_; }
    bool square() const { return r_ == c_; }

    T& operator()(size_t i, size_t j) { return d_[i * c_ + j]; }
    const T& operator()(size_t i, size_t j) const { return d_[i * c_ + j]; }

    const std::vector<T>& data() const { return d_; }

    template <class F>
    auto map(F&& f) const -> Matrix<decltype(f(std::declval<const T&>()))> {
        using U = decltype(f(std::declval<const T&>()));
        Matrix<U> out;
        out.reset(r_, c_);
        for (size_t i = 0; i < r_; ++i)
            for (size_t j = 0; j < c_; ++j) out(i, j) = f((*this)(i, j));
        return out;
    }

    void reset(size_t rows, size_t cols) {
        r_ = rows;
        c_ = cols;
        d_.assign(rows * cols, T{});
    }

    Matrix block(size_t r0, size_t c0, size_t nr, size_t nc) const {
        Matrix out;
        out.reset(nr, nc);
        for (size_t i = 0; i < nr; ++i)
            for (size_t j = 0; j < nc; ++j) out(i, j) = (*this)(r0 + i, c0 + j);
        return out;
    }

    Matrix transpose() const {
        Matrix out;
        out.reset(c_, r_);
        for (size_t i = 0; i < r_; ++i)
            for (size_t j = 0; j < c_; ++j) out(j, i) = (*this)(i, j);
        return out;
    }

    void swap_rows(size_t a, size_t b) {
        for (size_t j = 0; j < c_; ++j) std::swap((*this)(a, j), (*this)(b, j));
    }
    void swap_cols(size_t a, size_t b) {
        for (size_t i = 0; i < r_; ++i) std::swap((*this)(i, a), (*this)(i, b));
    }

private:
    size_t r_ = 0, c_ = 0;
    std::vector<T> d_;
};

template <class T>
Matrix<T> operator+(const Matrix<T>& a, const Matrix<T>& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) fail(ErrorCode::InvalidArgument, "matrix shape mismatch in sum");
    Matrix<T> r = a;
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j) + b(i, j);
    return r;
}

template <class T>
Matrix<T> operator-(const Matrix<T>& a, const Matrix<T>& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) fail(ErrorCode::InvalidArgument, "matrix shape mismatch in difference");
    Matrix<T> r = a;
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j) - b(i, j);
    return r;
}

template <class T>
Matrix<T> operator*(const Matrix<T>& a, const Matrix<T>& b) {
    if (a.cols() != b.rows() || a.cols() == 0) fail(ErrorCode::InvalidArgument, "matrix shape mismatch in product");
    Matrix<T> r;
    r.reset(a.rows(), b.cols());
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < b.cols(); ++j) {
            T acc = a(i, 0) * b(0, j);
            for (size_t k = 1; k < a.cols(); ++k) acc = acc + a(i, k) * b(k, j);
            r(i, j) = acc;
        }
    return r;
}

/// Block diagonal assembly; every block must be square.
template <class T>
Matrix<T> block_diagonal(const std::vector<Matrix<T>>& blocks, const T& zero) {
    size_t n = 0;
    for (const auto& b : blocks) n += b.rows();
    Matrix<T> out(n, n, zero);
    size_t off = 0;
    for (const auto& b : blocks) {
        for (size_t i = 0; i < b.rows(); ++i)
            for (size_t j = 0; j < b.cols(); ++j) out(off + i, off + j) = b(i, j);
        off += b.rows();
    }
    return out;
}

}  // namespace sigmod
