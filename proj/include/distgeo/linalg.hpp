#pragma once

#include <cmath>
#include <vector>

#include "distgeo/errors.hpp"
#include "distgeo/jet.hpp"

namespace distgeo {

template <class S>
using Vec = std::vector<S>;

// Dense row-major matrix over a generic scalar. Sizes here are tiny
// (chart dimension), so no blocking or pivoting beyond what Cholesky needs.
template <class S>
struct Mat {
    int rows = 0, cols = 0;
    std::vector<S> a;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c) {}

    S& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
    const S& operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }

    static Mat identity(int n) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = S(1.0);
        return m;
    }
};

template <class S>
Vec<S> operator+(const Vec<S>& x, const Vec<S>& y) {
    Vec<S> r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i] + y[i];
    return r;
}

template <class S>
Vec<S> operator-(const Vec<S>& x, const Vec<S>& y) {
    Vec<S> r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i] - y[i];
    return r;
}

template <class S>
Vec<S> operator-(const Vec<S>& x) {
    Vec<S> r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = -x[i];
    return r;
}

template <class S, class C>
Vec<S> scaled(const C& c, const Vec<S>& x) {
    Vec<S> r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = c * x[i];
    return r;
}

template <class S>
void axpy(const S& c, const Vec<S>& x, Vec<S>& y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += c * x[i];
}

template <class S>
Vec<S> matvec(const Mat<S>& m, const Vec<S>& x) {
    Vec<S> r(static_cast<std::size_t>(m.rows));
    for (int i = 0; i < m.rows; ++i) {
        S acc(0.0);
        for (int j = 0; j < m.cols; ++j) acc += m(i, j) * x[j];
        r[i] = acc;
    }
    return r;
}

// Metric pairing x^T G y.
template <class S>
S ginner(const Mat<S>& g, const Vec<S>& x, const Vec<S>& y) {
    S acc(0.0);
    for (int i = 0; i < g.rows; ++i)
        for (int j = 0; j < g.cols; ++j) acc += x[i] * g(i, j) * y[j];
    return acc;
}

template <class S>
S gnorm(const Mat<S>& g, const Vec<S>& x) {
    using std::sqrt;
    return sqrt(ginner(g, x, x));
}

// Cholesky factorization G = L L^T. Returns false when a pivot is not
// positive (relative to the largest diagonal entry), i.e. G is not SPD.
template <class S>
bool try_cholesky(const Mat<S>& g, Mat<S>& lower) {
    using std::sqrt;
    const int n = g.rows;
    lower = Mat<S>(n, n);
    double scale = 0.0;
    for (int i = 0; i < n; ++i) scale = std::max(scale, std::abs(val(g(i, i))));
    if (scale == 0.0) scale = 1.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            S sum = g(i, j);
            for (int k = 0; k < j; ++k) sum -= lower(i, k) * lower(j, k);
            if (i == j) {
                if (!(val(sum) > scale * 1e-14)) return false;
                lower(i, i) = sqrt(sum);
            } else {
                lower(i, j) = sum / lower(j, j);
            }
        }
    }
    return true;
}

template <class S>
Mat<S> cholesky(const Mat<S>& g, const char* what, const std::vector<double>& at = {}) {
    Mat<S> l;
    if (!try_cholesky(g, l)) throw ModelError(std::string(what) + ": matrix is not positive definite", at);
    return l;
}

// Solve (L L^T) x = b given the Cholesky factor L.
template <class S>
Vec<S> cholesky_solve(const Mat<S>& l, const Vec<S>& b) {
    const int n = l.rows;
    Vec<S> y(b);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < i; ++k) y[i] -= l(i, k) * y[k];
        y[i] /= l(i, i);
    }
    for (int i = n - 1; i >= 0; --i) {
        for (int k = i + 1; k < n; ++k) y[i] -= l(k, i) * y[k];
        y[i] /= l(i, i);
    }
    return y;
}

template <class S>
Vec<S> solve_spd(const Mat<S>& g, const Vec<S>& b, const char* what, const std::vector<double>& at = {}) {
    return cholesky_solve(cholesky(g, what, at), b);
}

// Cyclic Jacobi eigen-decomposition for small symmetric matrices.
// Eigenvalues ascending; eigenvector signs fixed (first significant entry
// positive) and equal eigenvalues ordered by lexicographic eigenvector
// comparison so the output is deterministic.
struct EigenSym {
    std::vector<double> values;
    std::vector<std::vector<double>> vectors;  // vectors[i] pairs with values[i]
};

EigenSym jacobi_eigen_sym(Mat<double> a);

}  // namespace distgeo
