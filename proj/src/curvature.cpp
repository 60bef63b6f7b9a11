#include "distgeo/curvature.hpp"

#include <cmath>

namespace distgeo {

Vec<double> intrinsic_endo(const DistributionModel& dist, const VectorField& X1,
                           const VectorField& X2, const VectorField& X3, const Vec<double>& p) {
    require_section(dist, X1, p, "X1");
    require_section(dist, X2, p, "X2");
    require_section(dist, X3, p, "X3");
    return intrinsic_endo_unchecked(dist, X1, X2, X3, p);
}

Vec<double> endo_decomposition(const DistributionModel& dist, const VectorField& X1,
                               const VectorField& X2, const VectorField& X3,
                               const Vec<double>& p) {
    require_section(dist, X1, p, "X1");
    require_section(dist, X2, p, "X2");
    require_section(dist, X3, p, "X3");

    Mat<double> g = metric_at(dist.base, p);
    Frame<double> fr = frame_at(dist, p);

    Vec<double> out = project_D(g, fr, riemann_endo(dist.base, X1, X2, X3, p));

    const int corank = dist.corank();
    for (int j = 0; j < corank; ++j) {
        FrameField Zj(dist, FrameField::Span::Perp, j);
        double b13 = ginner(g, cov_deriv(dist.base, X1, X3, p), fr.Z[j]);
        double b23 = ginner(g, cov_deriv(dist.base, X2, X3, p), fr.Z[j]);
        Vec<double> n1z = project_D(g, fr, cov_deriv(dist.base, X1, Zj, p));
        Vec<double> n2z = project_D(g, fr, cov_deriv(dist.base, X2, Zj, p));
        axpy(-b23, n1z, out);
        axpy(b13, n2z, out);
    }

    Vec<double> w = project_perp(g, fr, lie_bracket(X1, X2, p));
    Vec<double> corr = project_D(g, fr, cov_deriv_dir(dist.base, w, X3, p));
    return out + corr;
}

double intrinsic_K(const DistributionModel& dist, const VectorField& X1, const VectorField& X2,
                   const VectorField& X3, const VectorField& X4, const Vec<double>& p) {
    require_section(dist, X4, p, "X4");
    Mat<double> g = metric_at(dist.base, p);
    return ginner(g, intrinsic_endo(dist, X1, X2, X3, p), X4(p));
}

nlohmann::json GaussReport::to_json() const {
    nlohmann::json j;
    j["point"] = p;
    if (!frame_indices.empty()) j["frame_indices"] = frame_indices;
    j["K"] = K;
    j["KD"] = KD;
    j["B13_24"] = B13_24;
    j["B23_14"] = B23_14;
    j["correction"] = correction;
    j["residual"] = residual;
    return j;
}

GaussReport gauss_identity(const DistributionModel& dist, const VectorField& X1,
                           const VectorField& X2, const VectorField& X3, const VectorField& X4,
                           const Vec<double>& p) {
    GaussReport rep;
    rep.p = p;
    rep.K = curvature_K(dist.base, X1, X2, X3, X4, p);
    rep.KD = intrinsic_K(dist, X1, X2, X3, X4, p);

    Mat<double> g = metric_at(dist.base, p);
    Frame<double> fr = frame_at(dist, p);
    Vec<double> b13 = project_perp(g, fr, cov_deriv(dist.base, X1, X3, p));
    Vec<double> b23 = project_perp(g, fr, cov_deriv(dist.base, X2, X3, p));
    Vec<double> b14 = project_perp(g, fr, cov_deriv(dist.base, X1, X4, p));
    Vec<double> b24 = project_perp(g, fr, cov_deriv(dist.base, X2, X4, p));
    rep.B13_24 = ginner(g, b13, b24);
    rep.B23_14 = ginner(g, b23, b14);

    Vec<double> w = project_perp(g, fr, lie_bracket(X1, X2, p));
    Vec<double> corr = project_D(g, fr, cov_deriv_dir(dist.base, w, X3, p));
    rep.correction = ginner(g, corr, X4(p));

    rep.residual = std::abs(rep.KD - (rep.K - rep.B13_24 + rep.B23_14 + rep.correction));
    return rep;
}

namespace {

double plane_gram(const Mat<double>& g, const Vec<double>& x, const Vec<double>& y,
                  const Vec<double>& p) {
    double gxx = ginner(g, x, x);
    double gyy = ginner(g, y, y);
    double gxy = ginner(g, x, y);
    double denom = gxx * gyy - gxy * gxy;
    if (!(denom > kPlaneTol))
        throw ModelError("plane is degenerate (Gram determinant " + std::to_string(denom) + ")",
                         p);
    return denom;
}

}  // namespace

double sectional_ambient(const ManifoldModel& mod, const VectorField& X, const VectorField& Y,
                         const Vec<double>& p) {
    Mat<double> g = metric_at(mod, p);
    double denom = plane_gram(g, X(p), Y(p), p);
    return curvature_K(mod, X, Y, Y, X, p) / denom;
}

double sectional_intrinsic(const DistributionModel& dist, const VectorField& X,
                           const VectorField& Y, const Vec<double>& p) {
    Mat<double> g = metric_at(dist.base, p);
    double denom = plane_gram(g, X(p), Y(p), p);
    return intrinsic_K(dist, X, Y, Y, X, p) / denom;
}

}  // namespace distgeo
