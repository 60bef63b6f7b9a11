#pragma once

#include <string>
#include <vector>

#include "distgeo/expr.hpp"
#include "distgeo/field.hpp"
#include "distgeo/linalg.hpp"

namespace distgeo {

// Single-chart Riemannian manifold: coordinate names plus the metric entry
// expressions. The declared grid must be symmetric (equal trees); positive
// definiteness is checked pointwise via Cholesky wherever the metric is used.
struct ManifoldModel {
    std::vector<std::string> chart;
    std::vector<Expr> metric;  // row-major m*m

    int dim() const { return static_cast<int>(chart.size()); }
    const Expr& g(int i, int j) const { return metric[i * chart.size() + j]; }

    // Parses and validates an entry grid given as strings.
    static ManifoldModel make(std::vector<std::string> chart_names,
                              const std::vector<std::vector<std::string>>& entries);
};

inline std::vector<double> value_point(const Vec<double>& p) { return p; }
template <class T>
std::vector<double> value_point(const Vec<Jet<T>>& p) {
    std::vector<double> q(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) q[i] = val(p[i]);
    return q;
}

// G(p), no definiteness check (generic pipelines check at the double level).
template <class S>
Mat<S> metric_at(const ManifoldModel& mod, const Vec<S>& p) {
    const int m = mod.dim();
    Mat<S> g(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) g(i, j) = mod.g(i, j).eval(p);
    return g;
}

// G(p) with the SPD check; this is the public metric evaluation.
Mat<double> metric_at_spd(const ManifoldModel& mod, const Vec<double>& p);

// Christoffel symbols of the second kind, flattened as gamma[(k*m + i)*m + j].
// The metric derivatives come from one jet-seeded evaluation per coordinate
// direction and the index raise goes through a Cholesky solve so derivatives
// propagate when S is itself a jet.
template <class S>
std::vector<S> christoffel_at(const ManifoldModel& mod, const Vec<S>& p) {
    const int m = mod.dim();

    // dg[(l*m + i)*m + j] = d g_ij / d x_l
    std::vector<S> dg(static_cast<std::size_t>(m) * m * m);
    Mat<S> g(m, m);
    for (int l = 0; l < m; ++l) {
        Vec<Jet<S>> q(p.size());
        for (int i = 0; i < m; ++i) q[i] = Jet<S>(p[i], S(i == l ? 1.0 : 0.0));
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                Jet<S> e = mod.g(i, j).eval(q);
                if (l == 0) g(i, j) = e.v;
                dg[(l * m + i) * m + j] = e.d;
            }
    }

    Mat<S> lower = cholesky(g, "metric", value_point(p));
    auto d = [&](int l, int i, int j) -> const S& { return dg[(l * m + i) * m + j]; };

    std::vector<S> gamma(static_cast<std::size_t>(m) * m * m);
    Vec<S> rhs(p.size());
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) {
            for (int l = 0; l < m; ++l) rhs[l] = 0.5 * (d(i, j, l) + d(j, i, l) - d(l, i, j));
            Vec<S> gk = cholesky_solve(lower, rhs);
            for (int k = 0; k < m; ++k) {
                gamma[(k * m + i) * m + j] = gk[k];
                gamma[(k * m + j) * m + i] = gk[k];
            }
        }
    return gamma;
}

// Gamma(x, y)^k = Gamma^k_ij x^i y^j.
template <class S>
Vec<S> christoffel_apply(const std::vector<S>& gamma, int m, const Vec<S>& x, const Vec<S>& y) {
    Vec<S> out(x.size(), S(0.0));
    for (int k = 0; k < m; ++k) {
        S acc(0.0);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) acc += gamma[(k * m + i) * m + j] * x[i] * y[j];
        out[k] = acc;
    }
    return out;
}

// (nabla_u Y)(p) for a tangent vector u at p; tensorial in the direction.
template <class S>
Vec<S> cov_deriv_dir(const ManifoldModel& mod, const Vec<S>& u, const VectorField& Y,
                     const Vec<S>& p) {
    auto dy = dir_deriv(Y, p, u);
    std::vector<S> gamma = christoffel_at(mod, p);
    Vec<S> corr = christoffel_apply(gamma, mod.dim(), u, dy.value);
    return dy.deriv + corr;
}

// (nabla_X Y)(p).
template <class S>
Vec<S> cov_deriv(const ManifoldModel& mod, const VectorField& X, const VectorField& Y,
                 const Vec<S>& p) {
    return cov_deriv_dir(mod, X(p), Y, p);
}

// [X, Y](p).
template <class S>
Vec<S> lie_bracket(const VectorField& X, const VectorField& Y, const Vec<S>& p) {
    Vec<S> xv = X(p);
    Vec<S> yv = Y(p);
    auto dy = dir_deriv(Y, p, xv);
    auto dx = dir_deriv(X, p, yv);
    return dy.deriv - dx.deriv;
}

// R(X1, X2)X3 evaluated through the covariant-derivative pipeline with
// order-2 jets; the assembled dGamma coordinate formula exists only as a
// test oracle.
template <class S>
Vec<S> riemann_endo(const ManifoldModel& mod, const VectorField& X1, const VectorField& X2,
                    const VectorField& X3, const Vec<S>& p) {
    const int m = mod.dim();
    auto nabla23 = derived_field(m, [&](const auto& u) { return cov_deriv(mod, X2, X3, u); });
    auto nabla13 = derived_field(m, [&](const auto& u) { return cov_deriv(mod, X1, X3, u); });
    Vec<S> t1 = cov_deriv(mod, X1, nabla23, p);
    Vec<S> t2 = cov_deriv(mod, X2, nabla13, p);
    Vec<S> t3 = cov_deriv_dir(mod, lie_bracket(X1, X2, p), X3, p);
    return t1 - t2 - t3;
}

// K(X1, X2, X3, X4) = g(R(X1, X2)X3, X4).
template <class S>
S curvature_K(const ManifoldModel& mod, const VectorField& X1, const VectorField& X2,
              const VectorField& X3, const VectorField& X4, const Vec<S>& p) {
    Mat<S> g = metric_at(mod, p);
    return ginner(g, riemann_endo(mod, X1, X2, X3, p), X4(p));
}

// Musical isomorphisms.
template <class S>
Vec<S> flat_map(const ManifoldModel& mod, const Vec<S>& p, const Vec<S>& v) {
    return matvec(metric_at(mod, p), v);
}

template <class S>
Vec<S> sharp_map(const ManifoldModel& mod, const Vec<S>& p, const Vec<S>& alpha) {
    return solve_spd(metric_at(mod, p), alpha, "metric", value_point(p));
}

}  // namespace distgeo
