#pragma once

#include "altmod/integers.hpp"
#include "altmod/matrix.hpp"

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

namespace altmod {

/// Factorization U * M * V = D with U, V unimodular and D in Smith form:
/// diagonal, non-negative, each entry dividing the next.
struct SNFResult {
    IntMat u;  // rows x rows
    IntMat d;  // rows x cols
    IntMat v;  // cols x cols
};

namespace detail {

inline void swap_rows(IntMat& m, std::size_t a, std::size_t b) {
    for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(a, j), m(b, j));
}
inline void swap_cols(IntMat& m, std::size_t a, std::size_t b) {
    for (std::size_t i = 0; i < m.rows(); ++i) std::swap(m(i, a), m(i, b));
}
// row[a] += c * row[b]
inline void add_row(IntMat& m, std::size_t a, std::size_t b, const Int& c) {
    for (std::size_t j = 0; j < m.cols(); ++j) m(a, j) += c * m(b, j);
}
inline void add_col(IntMat& m, std::size_t a, std::size_t b, const Int& c) {
    for (std::size_t i = 0; i < m.rows(); ++i) m(i, a) += c * m(i, b);
}
inline void negate_row(IntMat& m, std::size_t a) {
    for (std::size_t j = 0; j < m.cols(); ++j) m(a, j) = -m(a, j);
}

}  // namespace detail

/// Smith normal form of an arbitrary integer matrix. Deterministic: the pivot
/// is always the entry of smallest nonzero absolute value in the remaining
/// submatrix, ties broken by lowest (row, col).
inline SNFResult smith_normal_form(const IntMat& m) {
    using namespace detail;
    const std::size_t rows = m.rows(), cols = m.cols();
    SNFResult r{IntMat::identity(rows), m, IntMat::identity(cols)};
    IntMat& d = r.d;

    std::size_t t = 0;
    while (t < rows && t < cols) {
        // select pivot
        std::size_t pi = 0, pj = 0;
        bool found = false;
        for (std::size_t i = t; i < rows; ++i)
            for (std::size_t j = t; j < cols; ++j)
                if (d(i, j) != 0 &&
                    (!found || abs(d(i, j)) < abs(d(pi, pj)))) {
                    pi = i; pj = j; found = true;
                }
        if (!found) break;
        if (pi != t) { swap_rows(d, t, pi); swap_rows(r.u, t, pi); }
        if (pj != t) { swap_cols(d, t, pj); swap_cols(r.v, t, pj); }

        for (;;) {
            bool clean = true;
            for (std::size_t i = t + 1; i < rows; ++i)
                if (d(i, t) != 0) {
                    Int q = d(i, t) / d(t, t);
                    add_row(d, i, t, -q);
                    add_row(r.u, i, t, -q);
                    if (d(i, t) != 0) clean = false;
                }
            for (std::size_t j = t + 1; j < cols; ++j)
                if (d(t, j) != 0) {
                    Int q = d(t, j) / d(t, t);
                    add_col(d, j, t, -q);
                    add_col(r.v, j, t, -q);
                    if (d(t, j) != 0) clean = false;
                }
            if (!clean) {
                // a remainder became the new smallest entry; re-pivot on it
                std::size_t qi = t, qj = t;
                for (std::size_t i = t; i < rows; ++i)
                    for (std::size_t j = t; j < cols; ++j)
                        if (d(i, j) != 0 && abs(d(i, j)) < abs(d(qi, qj))) { qi = i; qj = j; }
                if (qi != t) { swap_rows(d, t, qi); swap_rows(r.u, t, qi); }
                if (qj != t) { swap_cols(d, t, qj); swap_cols(r.v, t, qj); }
                continue;
            }
            // enforce divisibility of the trailing block by the pivot
            bool divides = true;
            for (std::size_t i = t + 1; i < rows && divides; ++i)
                for (std::size_t j = t + 1; j < cols && divides; ++j)
                    if (d(i, j) % d(t, t) != 0) {
                        add_row(d, t, i, 1);
                        add_row(r.u, t, i, 1);
                        divides = false;
                    }
            if (divides) break;
        }
        if (d(t, t) < 0) { negate_row(d, t); negate_row(r.u, t); }
        ++t;
    }
    return r;
}

/// Unique row-style Hermite basis of the full-rank lattice spanned by the
/// given rows (each of length n; the span must have rank n). The result is
/// upper triangular with positive pivots and entries above each pivot
/// reduced into [0, pivot).
inline IntMat hermite_basis(std::vector<IntVec> rows, std::size_t n) {
    for (const auto& r : rows)
        if (r.size() != n) throw std::invalid_argument("hermite_basis: row length mismatch");
    const std::size_t m = rows.size();
    std::size_t h = 0;
    for (std::size_t col = 0; col < n; ++col) {
        for (;;) {
            std::size_t best = m;
            for (std::size_t i = h; i < m; ++i)
                if (rows[i][col] != 0 &&
                    (best == m || abs(rows[i][col]) < abs(rows[best][col])))
                    best = i;
            if (best == m) throw std::logic_error("hermite_basis: rank deficient input");
            std::swap(rows[h], rows[best]);
            bool clean = true;
            for (std::size_t i = h + 1; i < m; ++i)
                if (rows[i][col] != 0) {
                    Int q = rows[i][col] / rows[h][col];
                    for (std::size_t j = 0; j < n; ++j) rows[i][j] -= q * rows[h][j];
                    if (rows[i][col] != 0) clean = false;
                }
            if (clean) break;
        }
        if (rows[h][col] < 0)
            for (std::size_t j = 0; j < n; ++j) rows[h][j] = -rows[h][j];
        for (std::size_t k = 0; k < h; ++k) {
            Int q = floor_div(rows[k][col], rows[h][col]);
            if (q != 0)
                for (std::size_t j = 0; j < n; ++j) rows[k][j] -= q * rows[h][j];
        }
        ++h;
    }
    IntMat out(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out(i, j) = rows[i][j];
    return out;
}

/// Solves y * H = v for integer y given an upper-triangular basis H with
/// nonzero pivots. Returns nullopt when v is not in the row lattice.
inline std::optional<IntVec> solve_upper_triangular_left(const IntMat& h, const IntVec& v) {
    const std::size_t n = h.rows();
    if (v.size() != n) throw std::invalid_argument("solve: length mismatch");
    IntVec y(n);
    for (std::size_t j = 0; j < n; ++j) {
        Int acc = v[j];
        for (std::size_t i = 0; i < j; ++i) acc -= y[i] * h(i, j);
        if (h(j, j) == 0 || acc % h(j, j) != 0) return std::nullopt;
        y[j] = acc / h(j, j);
    }
    return y;
}

/// Inverse of a unimodular integer matrix, computed from its Smith form
/// (which is the identity): U W V = I gives W^{-1} = V U.
inline IntMat unimodular_inverse(const IntMat& w) {
    SNFResult s = smith_normal_form(w);
    if (s.d != IntMat::identity(w.rows()))
        throw std::invalid_argument("unimodular_inverse: matrix is not unimodular");
    return s.v * s.u;
}

/// Integer kernel of M as a map Z^cols -> Z^rows: a list of generators of
/// {x : M x = 0}, read off the column transform of the Smith form.
inline std::vector<IntVec> integer_kernel(const IntMat& m) {
    SNFResult s = smith_normal_form(m);
    std::vector<IntVec> gens;
    for (std::size_t k = 0; k < m.cols(); ++k) {
        bool zero = k >= m.rows() || s.d(k, k) == 0;
        if (zero) gens.push_back(s.v.col(k));
    }
    return gens;
}

/// One integer solution of M x = v (exact), or nullopt when none exists.
inline std::optional<IntVec> integer_solve(const IntMat& m, const IntVec& v) {
    if (v.size() != m.rows()) throw std::invalid_argument("integer_solve: length mismatch");
    SNFResult s = smith_normal_form(m);
    IntVec rhs = s.u * v;
    IntVec z(m.cols());
    for (std::size_t k = 0; k < m.rows(); ++k) {
        Int dk = (k < m.cols()) ? s.d(k, k) : Int(0);
        if (dk == 0) {
            if (rhs[k] != 0) return std::nullopt;
        } else {
            if (rhs[k] % dk != 0) return std::nullopt;
            z[k] = rhs[k] / dk;
        }
    }
    return s.v * z;
}

}  // namespace altmod
