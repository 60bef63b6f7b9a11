#pragma once

#include "distgeo/dist.hpp"
#include "distgeo/sff.hpp"

#include "json.hpp"

namespace distgeo {

// Intrinsic curvature endomorphism
//   R^D(X1,X2)X3 = nabla^D_X1 nabla^D_X2 X3 - nabla^D_X2 nabla^D_X1 X3
//                  - nabla^D_{[X1,X2]^D} X3,
// evaluated directly from the definition: the outer intrinsic derivative
// differentiates the inner projected field through order-2 jets.
template <class S>
Vec<S> intrinsic_endo_unchecked(const DistributionModel& dist, const VectorField& X1,
                                const VectorField& X2, const VectorField& X3, const Vec<S>& p) {
    const int m = dist.dim();
    auto inner23 = derived_field(
        m, [&](const auto& u) { return intrinsic_cov_deriv_unchecked(dist, X2, X3, u); });
    auto inner13 = derived_field(
        m, [&](const auto& u) { return intrinsic_cov_deriv_unchecked(dist, X1, X3, u); });

    Mat<S> g = metric_at(dist.base, p);
    Frame<S> fr = frame_at(dist, p);

    Vec<S> t1 = project_D(g, fr, cov_deriv(dist.base, X1, inner23, p));
    Vec<S> t2 = project_D(g, fr, cov_deriv(dist.base, X2, inner13, p));
    Vec<S> brD = project_D(g, fr, lie_bracket(X1, X2, p));
    Vec<S> t3 = project_D(g, fr, cov_deriv_dir(dist.base, brD, X3, p));
    return t1 - t2 - t3;
}

Vec<double> intrinsic_endo(const DistributionModel& dist, const VectorField& X1,
                           const VectorField& X2, const VectorField& X3, const Vec<double>& p);

// Right-hand side of the decomposition of R^D through the ambient curvature:
//   pi_D(R(X1,X2)X3)
//   - sum_j B_{Z_j}(X2,X3) pi_D(nabla_X1 Z_j)
//   + sum_j B_{Z_j}(X1,X3) pi_D(nabla_X2 Z_j)
//   + pi_D(nabla_{pi_perp([X1,X2])} X3).
// Must equal intrinsic_endo; this is the module's central dual-path identity.
Vec<double> endo_decomposition(const DistributionModel& dist, const VectorField& X1,
                               const VectorField& X2, const VectorField& X3,
                               const Vec<double>& p);

// K^D(X1,X2,X3,X4) = g(R^D(X1,X2)X3, X4).
double intrinsic_K(const DistributionModel& dist, const VectorField& X1, const VectorField& X2,
                   const VectorField& X3, const VectorField& X4, const Vec<double>& p);

// Itemized terms of the generalized Gauss identity
//   K^D = K - g(B(X1,X3), B(X2,X4)) + g(B(X2,X3), B(X1,X4)) + correction,
// with correction = g(pi_D(nabla_{pi_perp([X1,X2])} X3), X4), which vanishes
// exactly when the distribution is involutive.
struct GaussReport {
    Vec<double> p;
    std::vector<int> frame_indices;  // when built from frame fields
    double K = 0.0;
    double KD = 0.0;
    double B13_24 = 0.0;      // g(B(X1,X3), B(X2,X4))
    double B23_14 = 0.0;      // g(B(X2,X3), B(X1,X4))
    double correction = 0.0;
    double residual = 0.0;    // |KD - (K - B13_24 + B23_14 + correction)|

    nlohmann::json to_json() const;
};

GaussReport gauss_identity(const DistributionModel& dist, const VectorField& X1,
                           const VectorField& X2, const VectorField& X3, const VectorField& X4,
                           const Vec<double>& p);

inline constexpr double kPlaneTol = 1e-12;

// Sectional curvature of span{X(p), Y(p)}: the curvature tensor paired as
// K(X,Y,Y,X) over the Gram determinant, so flat space gives 0 and the round
// sphere of radius r gives +1/r^2.
double sectional_ambient(const ManifoldModel& mod, const VectorField& X, const VectorField& Y,
                         const Vec<double>& p);
double sectional_intrinsic(const DistributionModel& dist, const VectorField& X,
                           const VectorField& Y, const Vec<double>& p);

}  // namespace distgeo
