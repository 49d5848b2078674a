#pragma once

#include <algorithm>
#include <vector>

#include "frechet/errors.hpp"
#include "frechet/fields.hpp"

namespace frechet {

template <class S>
using Vector = std::vector<S>;

/// Dense row-major matrix over a field scalar.
template <class S>
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<S> a;

    Matrix() = default;
    template <NormedField F>
    Matrix(const F& K, int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, K.zero()) {}

    S& at(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
    const S& at(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }
};

template <NormedField F>
Vector<ScalarOf<F>> vec_of_zeros(const F& K, int n) {
    return Vector<ScalarOf<F>>(static_cast<std::size_t>(n), K.zero());
}

template <NormedField F>
Vector<ScalarOf<F>> basis_vector(const F& K, int dim, int i) {
    auto v = vec_of_zeros(K, dim);
    v[static_cast<std::size_t>(i)] = K.one();
    return v;
}

template <class S>
Vector<S> vec_add(const Vector<S>& a, const Vector<S>& b) {
    if (a.size() != b.size())
        throw UsageError("vector dimension mismatch");
    Vector<S> r = a;
    for (std::size_t i = 0; i < r.size(); ++i)
        r[i] = r[i] + b[i];
    return r;
}

template <class S>
Vector<S> vec_sub(const Vector<S>& a, const Vector<S>& b) {
    if (a.size() != b.size())
        throw UsageError("vector dimension mismatch");
    Vector<S> r = a;
    for (std::size_t i = 0; i < r.size(); ++i)
        r[i] = r[i] - b[i];
    return r;
}

template <class S>
Vector<S> vec_scale(const S& c, const Vector<S>& v) {
    Vector<S> r = v;
    for (auto& x : r)
        x = c * x;
    return r;
}

/// Sup norm on k^d (the vector-norm convention used throughout).
template <NormedField F>
double sup_norm(const F& K, const Vector<ScalarOf<F>>& v) {
    double m = 0.0;
    for (const auto& x : v)
        m = std::max(m, K.norm(x));
    return m;
}

template <NormedField F>
bool vec_eq(const F& K, const Vector<ScalarOf<F>>& a, const Vector<ScalarOf<F>>& b) {
    if (a.size() != b.size())
        return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!K.eq(a[i], b[i]))
            return false;
    return true;
}

template <class S>
Vector<S> mat_vec(const Matrix<S>& M, const Vector<S>& v) {
    if (static_cast<std::size_t>(M.cols) != v.size())
        throw UsageError("matrix/vector dimension mismatch");
    Vector<S> r;
    r.reserve(static_cast<std::size_t>(M.rows));
    for (int i = 0; i < M.rows; ++i) {
        S acc = M.at(i, 0) * v[0];
        for (int j = 1; j < M.cols; ++j)
            acc = acc + M.at(i, j) * v[static_cast<std::size_t>(j)];
        r.push_back(acc);
    }
    return r;
}

template <class S>
Matrix<S> mat_mul(const Matrix<S>& A, const Matrix<S>& B) {
    if (A.cols != B.rows)
        throw UsageError("matrix dimension mismatch");
    Matrix<S> R;
    R.rows = A.rows;
    R.cols = B.cols;
    R.a.reserve(static_cast<std::size_t>(A.rows) * B.cols);
    for (int i = 0; i < A.rows; ++i)
        for (int j = 0; j < B.cols; ++j) {
            S acc = A.at(i, 0) * B.at(0, j);
            for (int k = 1; k < A.cols; ++k)
                acc = acc + A.at(i, k) * B.at(k, j);
            R.a.push_back(acc);
        }
    return R;
}

template <NormedField F>
Matrix<ScalarOf<F>> mat_identity(const F& K, int n) {
    Matrix<ScalarOf<F>> I(K, n, n);
    for (int i = 0; i < n; ++i)
        I.at(i, i) = K.one();
    return I;
}

/// Max row-sum norm (operator sup norm for the sup vector norm).
template <NormedField F>
double mat_norm_inf(const F& K, const Matrix<ScalarOf<F>>& M) {
    double m = 0.0;
    for (int i = 0; i < M.rows; ++i) {
        double row = 0.0;
        for (int j = 0; j < M.cols; ++j)
            row += K.norm(M.at(i, j));
        m = std::max(m, row);
    }
    return m;
}

/// Gauss-Jordan inverse with pivoting by largest norm. Works over any of the
/// provided fields; a pivot column with no nonzero entry means singular.
template <NormedField F>
Matrix<ScalarOf<F>> mat_inverse(const F& K, Matrix<ScalarOf<F>> M) {
    if (M.rows != M.cols)
        throw UsageError("inverse of a non-square matrix");
    const int n = M.rows;
    auto R = mat_identity(K, n);
    for (int col = 0; col < n; ++col) {
        int pivot = -1;
        double best = 0.0;
        for (int i = col; i < n; ++i) {
            double w = K.norm(M.at(i, col));
            if (w > best) {
                best = w;
                pivot = i;
            }
        }
        if (pivot < 0)
            throw SingularMapError("singular matrix");
        if (pivot != col)
            for (int j = 0; j < n; ++j) {
                std::swap(M.at(pivot, j), M.at(col, j));
                std::swap(R.at(pivot, j), R.at(col, j));
            }
        ScalarOf<F> inv_p = K.div(K.one(), M.at(col, col));
        for (int j = 0; j < n; ++j) {
            M.at(col, j) = inv_p * M.at(col, j);
            R.at(col, j) = inv_p * R.at(col, j);
        }
        for (int i = 0; i < n; ++i) {
            if (i == col || K.norm(M.at(i, col)) == 0.0)
                continue;
            ScalarOf<F> f = M.at(i, col);
            for (int j = 0; j < n; ++j) {
                M.at(i, j) = M.at(i, j) - f * M.at(col, j);
                R.at(i, j) = R.at(i, j) - f * R.at(col, j);
            }
        }
    }
    return R;
}

} // namespace frechet
