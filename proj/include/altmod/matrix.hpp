#pragma once

#include "altmod/integers.hpp"

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace altmod {

/// Dense row-major matrix. T is Int for lattice work and QZ for Gram data.
template <typename T>
class Mat {
  public:
    Mat() : rows_(0), cols_(0) {}
    Mat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

    static Mat identity(std::size_t n) {
        Mat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    T& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    friend bool operator==(const Mat& x, const Mat& y) {
        return x.rows_ == y.rows_ && x.cols_ == y.cols_ && x.a_ == y.a_;
    }
    friend bool operator!=(const Mat& x, const Mat& y) { return !(x == y); }

    Mat transposed() const {
        Mat t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    std::vector<T> row(std::size_t i) const {
        return std::vector<T>(a_.begin() + i * cols_, a_.begin() + (i + 1) * cols_);
    }
    std::vector<T> col(std::size_t j) const {
        std::vector<T> c(rows_);
        for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
        return c;
    }

  private:
    std::size_t rows_, cols_;
    std::vector<T> a_;
};

using IntMat = Mat<Int>;
using IntVec = std::vector<Int>;

inline IntMat operator*(const IntMat& x, const IntMat& y) {
    if (x.cols() != y.rows()) throw std::invalid_argument("Mat: dimension mismatch");
    IntMat z(x.rows(), y.cols());
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t k = 0; k < x.cols(); ++k) {
            const Int& v = x(i, k);
            if (v == 0) continue;
            for (std::size_t j = 0; j < y.cols(); ++j) z(i, j) += v * y(k, j);
        }
    return z;
}

inline IntVec operator*(const IntMat& m, const IntVec& v) {
    if (m.cols() != v.size()) throw std::invalid_argument("Mat: dimension mismatch");
    IntVec w(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) w[i] += m(i, j) * v[j];
    return w;
}

/// Fraction-free (Bareiss) determinant; exact for integer entries.
inline Int determinant(IntMat m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("determinant: square matrix required");
    std::size_t n = m.rows();
    if (n == 0) return 1;
    Int sign = 1, prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m(k, k) == 0) {
            std::size_t s = k + 1;
            while (s < n && m(s, k) == 0) ++s;
            if (s == n) return 0;
            for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(s, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
        prev = m(k, k);
    }
    return sign * m(n - 1, n - 1);
}

}  // namespace altmod
