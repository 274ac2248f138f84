#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "tilings/errors.hpp"

namespace tilings {

using cplx = std::complex<double>;

inline std::int64_t add_checked(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw OverflowGuard("64-bit add");
    return r;
}

inline std::int64_t mul_checked(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw OverflowGuard("64-bit mul");
    return r;
}

// Small dense row-major matrix. The sizes in this library are tiny (m,s <= ~10),
// so no effort is spent on blocking or expression templates.
template <class T>
struct Mat {
    int rows = 0;
    int cols = 0;
    std::vector<T> a;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, T{}) {}
    Mat(int r, int c, std::initializer_list<T> init) : rows(r), cols(c), a(init) {}

    static Mat identity(int n) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = T{1};
        return m;
    }

    T& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    const T& operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

    bool operator==(const Mat& o) const { return rows == o.rows && cols == o.cols && a == o.a; }

    Mat transpose() const {
        Mat t(cols, rows);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) t(j, i) = (*this)(i, j);
        return t;
    }
};

using MatI = Mat<std::int64_t>;
using MatD = Mat<double>;
using MatC = Mat<cplx>;

template <class T>
Mat<T> operator*(const Mat<T>& x, const Mat<T>& y) {
    Mat<T> r(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int k = 0; k < x.cols; ++k) {
            const T v = x(i, k);
            if (v == T{}) continue;
            for (int j = 0; j < y.cols; ++j) r(i, j) += v * y(k, j);
        }
    return r;
}

// Integer matrix product with overflow detection.
inline MatI mul_checked(const MatI& x, const MatI& y) {
    MatI r(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int k = 0; k < x.cols; ++k) {
            const std::int64_t v = x(i, k);
            if (v == 0) continue;
            for (int j = 0; j < y.cols; ++j)
                r(i, j) = add_checked(r(i, j), mul_checked(v, y(k, j)));
        }
    return r;
}

inline MatI pow_checked(const MatI& m, int n) {
    MatI r = MatI::identity(m.rows);
    for (int i = 0; i < n; ++i) r = mul_checked(r, m);
    return r;
}

template <class T>
std::vector<T> operator*(const Mat<T>& m, const std::vector<T>& v) {
    std::vector<T> r(static_cast<size_t>(m.rows), T{});
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) r[i] += m(i, j) * v[j];
    return r;
}

inline std::vector<std::int64_t> mul_checked(const MatI& m, const std::vector<std::int64_t>& v) {
    std::vector<std::int64_t> r(static_cast<size_t>(m.rows), 0);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j)
            r[i] = add_checked(r[i], mul_checked(m(i, j), v[j]));
    return r;
}

inline double frobenius(const MatC& m) {
    double s = 0;
    for (const auto& z : m.a) s += std::norm(z);
    return std::sqrt(s);
}

inline double frobenius(const MatI& m) {
    double s = 0;
    for (auto v : m.a) s += static_cast<double>(v) * static_cast<double>(v);
    return std::sqrt(s);
}

inline MatD to_double(const MatI& m) {
    MatD r(m.rows, m.cols);
    for (size_t i = 0; i < m.a.size(); ++i) r.a[i] = static_cast<double>(m.a[i]);
    return r;
}

inline MatC to_complex(const MatI& m) {
    MatC r(m.rows, m.cols);
    for (size_t i = 0; i < m.a.size(); ++i) r.a[i] = cplx(static_cast<double>(m.a[i]), 0.0);
    return r;
}

// max absolute row sum
inline double inf_norm(const MatI& m) {
    double best = 0;
    for (int i = 0; i < m.rows; ++i) {
        double s = 0;
        for (int j = 0; j < m.cols; ++j) s += std::abs(static_cast<double>(m(i, j)));
        best = std::max(best, s);
    }
    return best;
}

inline std::vector<cplx> eigenvalues(const MatD& m) {
    Eigen::MatrixXd e(m.rows, m.cols);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) e(i, j) = m(i, j);
    Eigen::EigenSolver<Eigen::MatrixXd> solver(e, /*computeEigenvectors=*/false);
    std::vector<cplx> out(static_cast<size_t>(m.rows));
    for (int i = 0; i < m.rows; ++i) out[static_cast<size_t>(i)] = solver.eigenvalues()(i);
    return out;
}

// Right eigenvector (real) for a real eigenvalue of a real matrix.
inline std::vector<double> right_eigenvector(const MatD& m, double eigenvalue) {
    Eigen::MatrixXd e(m.rows, m.cols);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) e(i, j) = m(i, j);
    Eigen::EigenSolver<Eigen::MatrixXd> solver(e, /*computeEigenvectors=*/true);
    int best = 0;
    double bestDist = std::abs(solver.eigenvalues()(0) - cplx(eigenvalue, 0));
    for (int i = 1; i < m.rows; ++i) {
        const double d = std::abs(solver.eigenvalues()(i) - cplx(eigenvalue, 0));
        if (d < bestDist) { bestDist = d; best = i; }
    }
    std::vector<double> v(static_cast<size_t>(m.rows));
    for (int i = 0; i < m.rows; ++i) v[static_cast<size_t>(i)] = solver.eigenvectors()(i, best).real();
    return v;
}

} // namespace tilings
