#pragma once

#include <vector>

#include "distgeo/riemann.hpp"

namespace distgeo {

// Regular distribution D, spanned by n < m generator fields over a base
// manifold. Generators must be linearly independent wherever evaluated.
struct DistributionModel {
    ManifoldModel base;
    std::vector<VectorFieldModel> generators;

    int dim() const { return base.dim(); }
    int rank() const { return static_cast<int>(generators.size()); }
    int corank() const { return dim() - rank(); }

    static DistributionModel make(ManifoldModel base,
                                  const std::vector<std::vector<std::string>>& generators);
};

// g-orthonormal bases of D_p (E) and of its orthogonal complement (Z),
// with the change of basis from the declared generators to E.
template <class S>
struct Frame {
    std::vector<Vec<S>> E;
    std::vector<Vec<S>> Z;
    Mat<S> gen_to_E;  // E_a = sum_i gen_to_E(a, i) * X_i
};

using FramePoint = Frame<double>;

inline constexpr double kFramePivotTol = 1e-10;

// Pointwise frame construction. E comes from metric Gram-Schmidt over the
// generators in declared order with one re-orthogonalization pass; Z from the
// coordinate-basis residuals after projecting out D_p, pivoting on the
// largest residual norm. Deterministic, so the induced local frame fields are
// differentiable through jet-valued points away from pivot switches.
template <class S>
Frame<S> frame_at(const DistributionModel& dist, const Vec<S>& p,
                  double pivot_tol = kFramePivotTol) {
    const int m = dist.dim();
    const int n = dist.rank();
    Mat<S> g = metric_at(dist.base, p);

    Frame<S> fr;
    fr.gen_to_E = Mat<S>(n, n);
    fr.E.reserve(n);

    for (int a = 0; a < n; ++a) {
        Vec<S> v = ModelField(dist.generators[a])(p);
        Vec<S> coeff(n, S(0.0));
        coeff[a] = S(1.0);
        for (int pass = 0; pass < 2; ++pass) {
            for (int b = 0; b < a; ++b) {
                S c = ginner(g, v, fr.E[b]);
                for (int k = 0; k < m; ++k) v[k] -= c * fr.E[b][k];
                for (int i = 0; i < n; ++i) coeff[i] -= c * fr.gen_to_E(b, i);
            }
        }
        S norm2 = ginner(g, v, v);
        if (!(val(norm2) > pivot_tol * pivot_tol))
            throw ModelError("distribution generators are rank deficient", value_point(p));
        using std::sqrt;
        S inv = 1.0 / sqrt(norm2);
        for (int k = 0; k < m; ++k) v[k] = inv * v[k];
        for (int i = 0; i < n; ++i) fr.gen_to_E(a, i) = inv * coeff[i];
        fr.E.push_back(std::move(v));
    }

    // residuals of the coordinate basis after removing the D_p component
    std::vector<Vec<S>> res;
    res.reserve(m);
    for (int k = 0; k < m; ++k) {
        Vec<S> v(p.size(), S(0.0));
        v[k] = S(1.0);
        for (int a = 0; a < n; ++a) {
            S c = ginner(g, v, fr.E[a]);
            for (int i = 0; i < m; ++i) v[i] -= c * fr.E[a][i];
        }
        res.push_back(std::move(v));
    }

    fr.Z.reserve(m - n);
    std::vector<bool> used(m, false);
    for (int j = 0; j < m - n; ++j) {
        int pivot = -1;
        double best = 0.0;
        for (int k = 0; k < m; ++k) {
            if (used[k]) continue;
            double nk = val(ginner(g, res[k], res[k]));
            if (nk > best) { best = nk; pivot = k; }
        }
        if (pivot < 0 || !(best > pivot_tol * pivot_tol))
            throw ModelError("could not complete orthogonal frame", value_point(p));
        used[pivot] = true;
        Vec<S> v = res[pivot];
        for (int pass = 0; pass < 2; ++pass)
            for (const Vec<S>& z : fr.Z) {
                S c = ginner(g, v, z);
                for (int i = 0; i < m; ++i) v[i] -= c * z[i];
            }
        using std::sqrt;
        S inv = 1.0 / sqrt(ginner(g, v, v));
        for (int i = 0; i < m; ++i) v[i] = inv * v[i];
        // keep the remaining residuals orthogonal to the new frame vector
        for (int k = 0; k < m; ++k) {
            if (used[k]) continue;
            S c = ginner(g, res[k], v);
            for (int i = 0; i < m; ++i) res[k][i] -= c * v[i];
        }
        fr.Z.push_back(std::move(v));
    }
    return fr;
}

// pi_D(v) = sum_a g(v, E_a) E_a  and its complement.
template <class S>
Vec<S> project_D(const Mat<S>& g, const Frame<S>& fr, const Vec<S>& v) {
    Vec<S> out(v.size(), S(0.0));
    for (const Vec<S>& e : fr.E) {
        S c = ginner(g, v, e);
        for (std::size_t k = 0; k < v.size(); ++k) out[k] += c * e[k];
    }
    return out;
}

template <class S>
Vec<S> project_perp(const Mat<S>& g, const Frame<S>& fr, const Vec<S>& v) {
    return v - project_D(g, fr, v);
}

// Point-only conveniences (recompute metric and frame).
Vec<double> project_D(const DistributionModel& dist, const Vec<double>& p, const Vec<double>& v);
Vec<double> project_perp(const DistributionModel& dist, const Vec<double>& p, const Vec<double>& v);

// Frame element as a local vector field, differentiable through the
// Gram-Schmidt pipeline at any jet depth.
class FrameField final : public VectorField {
public:
    enum class Span { D, Perp };

    FrameField(const DistributionModel& dist, Span span, int index)
        : dist_(&dist), span_(span), index_(index) {}

    int dim() const override { return dist_->dim(); }
    Vec<double> operator()(const Vec<double>& p) const override { return evalT(p); }
    Vec<Jet1> operator()(const Vec<Jet1>& p) const override { return evalT(p); }
    Vec<Jet2> operator()(const Vec<Jet2>& p) const override { return evalT(p); }
    Vec<Jet3> operator()(const Vec<Jet3>& p) const override { return evalT(p); }

private:
    template <class S>
    Vec<S> evalT(const Vec<S>& p) const {
        Frame<S> fr = frame_at(*dist_, p);
        return span_ == Span::D ? fr.E[index_] : fr.Z[index_];
    }

    const DistributionModel* dist_;
    Span span_;
    int index_;
};

inline constexpr double kSectionTol = 1e-8;

// g-norm of the component of X(p) outside D_p.
double section_residual(const DistributionModel& dist, const VectorField& X,
                        const Vec<double>& p);
// g-norm of the component of Z(p) inside D_p.
double normal_section_residual(const DistributionModel& dist, const VectorField& Z,
                               const Vec<double>& p);
// First-order membership: the pointwise residual plus the directional
// derivatives of g(E_a, Z) along the coordinate directions. Identities that
// differentiate Z (the alternative shape-operator routes, L_Z g, d i_Z g)
// need Z to annihilate D as a field, not just at p.
double normal_section_field_residual(const DistributionModel& dist, const VectorField& Z,
                                     const Vec<double>& p);

void require_section(const DistributionModel& dist, const VectorField& X, const Vec<double>& p,
                     const char* role, double tol = kSectionTol);
void require_normal_section(const DistributionModel& dist, const VectorField& Z,
                            const Vec<double>& p, const char* role, double tol = kSectionTol);
void require_normal_section_field(const DistributionModel& dist, const VectorField& Z,
                                  const Vec<double>& p, const char* role,
                                  double tol = kSectionTol);

// Intrinsic connection: pi_D(nabla_X Y). Callers are responsible for the
// section precondition at the double level (the public overload checks it).
template <class S>
Vec<S> intrinsic_cov_deriv_unchecked(const DistributionModel& dist, const VectorField& X,
                                     const VectorField& Y, const Vec<S>& p) {
    Vec<S> cd = cov_deriv(dist.base, X, Y, p);
    Mat<S> g = metric_at(dist.base, p);
    Frame<S> fr = frame_at(dist, p);
    return project_D(g, fr, cd);
}

Vec<double> intrinsic_cov_deriv(const DistributionModel& dist, const VectorField& X,
                                const VectorField& Y, const Vec<double>& p);

// Projected bracket [X, Y]^D = pi_D([X, Y]).
Vec<double> bracket_D(const DistributionModel& dist, const VectorField& X, const VectorField& Y,
                      const Vec<double>& p);

// Levi-Civita connection of the skew-symmetric Riemannian algebroid
// (D, g restricted, projected bracket) through the Koszul formula; must agree
// with the projection route everywhere.
Vec<double> koszul_cov_deriv(const DistributionModel& dist, const VectorField& X,
                             const VectorField& Y, const Vec<double>& p);

// Torsion of the intrinsic connection with respect to the ambient bracket:
// nabla^D_X Y - nabla^D_Y X - [X, Y]; equals minus the perp part of [X, Y].
Vec<double> torsion_D(const DistributionModel& dist, const VectorField& X, const VectorField& Y,
                      const Vec<double>& p);

// Annihilator bases realized as musical images of the frames: covectors
// vanishing on D (flat of Z) and on D-perp (flat of E).
std::vector<Vec<double>> omega_basis(const DistributionModel& dist, const Vec<double>& p);
std::vector<Vec<double>> omega_perp_basis(const DistributionModel& dist, const Vec<double>& p);

}  // namespace distgeo
