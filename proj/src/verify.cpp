#include "distgeo/verify.hpp"

#include <cmath>
#include <random>

#include "distgeo/curvature.hpp"
#include "distgeo/dynamics.hpp"
#include "distgeo/sff.hpp"

namespace distgeo {

namespace {

// Random polynomial vector fields (degree <= 2, tame coefficients) used as
// the generic test sections for ambient identities.
VectorFieldModel random_poly_field(int m, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> coeff(-0.8, 0.8);
    std::uniform_int_distribution<int> pick(0, m - 1);
    VectorFieldModel f;
    for (int k = 0; k < m; ++k) {
        Expr e = Expr::constant(coeff(rng));
        e = Expr::binary(BinaryOp::Add, std::move(e),
                         Expr::binary(BinaryOp::Mul, Expr::constant(coeff(rng)),
                                      Expr::coord(pick(rng))));
        e = Expr::binary(
            BinaryOp::Add, std::move(e),
            Expr::binary(BinaryOp::Mul, Expr::constant(coeff(rng)),
                         Expr::binary(BinaryOp::Mul, Expr::coord(pick(rng)),
                                      Expr::coord(pick(rng)))));
        f.components.push_back(std::move(e));
    }
    return f;
}

double rel(double x, double ref) { return std::abs(x - ref) / std::max(1.0, std::abs(ref)); }

struct Battery {
    const ScenarioModel& scn;
    SampleSpec spec;
    std::vector<Vec<double>> points;
    std::mt19937_64 rng;
    std::vector<InvariantResult> results;

    void add(const std::string& name, double residual, double tol) {
        results.push_back({name, residual, tol, residual < tol});
    }
};

void ambient_checks(Battery& bat) {
    const ManifoldModel& mod = bat.scn.manifold;
    const int m = mod.dim();

    ModelField X(random_poly_field(m, bat.rng));
    ModelField Y(random_poly_field(m, bat.rng));
    ModelField Z(random_poly_field(m, bat.rng));

    double r_sym = 0.0, r_compat = 0.0, r_torsion = 0.0, r_bianchi = 0.0, r_antisym = 0.0;
    double r_musical = 0.0, r_fd = 0.0;

    for (const auto& p : bat.points) {
        metric_at_spd(mod, p);  // throws (exit 3) on a non-SPD point
        Mat<double> g = metric_at(mod, p);
        std::vector<double> gamma = christoffel_at(mod, p);
        for (int k = 0; k < m; ++k)
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j)
                    r_sym = std::max(r_sym, std::abs(gamma[(k * m + i) * m + j] -
                                                     gamma[(k * m + j) * m + i]));

        // metric compatibility: L_X g(Y,Z) = g(nabla_X Y, Z) + g(Y, nabla_X Z)
        auto pairYZ = [&](const auto& u) {
            auto gu = metric_at(mod, u);
            return ginner(gu, Y(u), Z(u));
        };
        double lhs = dir_scalar(pairYZ, p, X(p)).second;
        double rhs = ginner(g, cov_deriv(mod, X, Y, p), Z(p)) +
                     ginner(g, Y(p), cov_deriv(mod, X, Z, p));
        r_compat = std::max(r_compat, std::abs(lhs - rhs));

        // torsion-freeness of the ambient connection
        Vec<double> tor = cov_deriv(mod, X, Y, p) - cov_deriv(mod, Y, X, p) -
                          lie_bracket(X, Y, p);
        r_torsion = std::max(r_torsion, gnorm(g, tor));

        // first Bianchi identity
        Vec<double> b = riemann_endo(mod, X, Y, Z, p) + riemann_endo(mod, Y, Z, X, p) +
                        riemann_endo(mod, Z, X, Y, p);
        r_bianchi = std::max(r_bianchi, gnorm(g, b));

        // antisymmetry of K in the first pair
        double k12 = curvature_K(mod, X, Y, X, Z, p);
        double k21 = curvature_K(mod, Y, X, X, Z, p);
        r_antisym = std::max(r_antisym, std::abs(k12 + k21));

        // sharp(flat(v)) = v
        Vec<double> v = X(p);
        Vec<double> round_trip = sharp_map(mod, p, flat_map(mod, p, v));
        r_musical = std::max(r_musical, gnorm(g, round_trip - v));

        // first derivatives of the metric entries against central differences
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                Vec<Jet1> q(p.size());
                for (int k = 0; k < m; ++k) q[k] = Jet1(p[k], k == 0 ? 1.0 : 0.0);
                double ad = mod.g(i, j).eval(q).d;
                const double h = 1e-5;
                Vec<double> pp = p, pm = p;
                pp[0] += h;
                pm[0] -= h;
                double fd = (mod.g(i, j).eval(pp) - mod.g(i, j).eval(pm)) / (2 * h);
                r_fd = std::max(r_fd, rel(ad, fd));
            }
    }

    const double tol = bat.scn.tol.identity;
    bat.add("christoffel_lower_symmetry", r_sym, 1e-12);
    bat.add("metric_compatibility", r_compat, tol);
    bat.add("connection_torsion_free", r_torsion, 1e-9);
    bat.add("bianchi_first", r_bianchi, tol);
    bat.add("curvature_antisymmetry_12", r_antisym, 1e-9);
    bat.add("musical_round_trip", r_musical, 1e-12);
    bat.add("metric_ad_vs_fd", r_fd, 1e-6);
}

void distribution_checks(Battery& bat) {
    const DistributionModel& dist = *bat.scn.distribution;
    const ManifoldModel& mod = dist.base;
    const int n = dist.rank();

    double r_frame = 0.0, r_proj = 0.0, r_compat = 0.0, r_koszul = 0.0, r_torsion = 0.0;
    double r_gauss_formula = 0.0, r_shape = 0.0, r_symskew = 0.0;
    double r_endo = 0.0, r_gauss = 0.0, r_sectional = 0.0;

    FrameField E0(dist, FrameField::Span::D, 0);
    FrameField E1(dist, FrameField::Span::D, n > 1 ? 1 : 0);
    FrameField Z0(dist, FrameField::Span::Perp, 0);

    std::uniform_real_distribution<double> unit(-1.0, 1.0);

    for (const auto& p : bat.points) {
        Mat<double> g = metric_at(mod, p);
        Frame<double> fr = frame_at(dist, p);

        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                r_frame = std::max(
                    r_frame, std::abs(ginner(g, fr.E[a], fr.E[b]) - (a == b ? 1.0 : 0.0)));
        for (std::size_t i = 0; i < fr.Z.size(); ++i)
            for (std::size_t j = 0; j < fr.Z.size(); ++j)
                r_frame = std::max(
                    r_frame, std::abs(ginner(g, fr.Z[i], fr.Z[j]) - (i == j ? 1.0 : 0.0)));
        for (int a = 0; a < n; ++a)
            for (const auto& z : fr.Z)
                r_frame = std::max(r_frame, std::abs(ginner(g, fr.E[a], z)));

        Vec<double> v(p.size());
        for (auto& c : v) c = unit(bat.rng);
        Vec<double> vd = project_D(g, fr, v);
        Vec<double> vp = project_perp(g, fr, v);
        r_proj = std::max(r_proj, std::abs(ginner(g, vd, vp)));
        r_proj = std::max(r_proj, gnorm(g, project_D(g, fr, vd) - vd));

        // intrinsic metric compatibility on sections of D
        auto pair01 = [&](const auto& u) {
            auto gu = metric_at(mod, u);
            return ginner(gu, E0(u), E1(u));
        };
        double lhs = dir_scalar(pair01, p, E0(p)).second;
        double rhs = ginner(g, intrinsic_cov_deriv_unchecked(dist, E0, E0, p), E1(p)) +
                     ginner(g, E0(p), intrinsic_cov_deriv_unchecked(dist, E0, E1, p));
        r_compat = std::max(r_compat, std::abs(lhs - rhs));

        // the two connection constructions agree
        Vec<double> a1 = intrinsic_cov_deriv(dist, E0, E1, p);
        Vec<double> a2 = koszul_cov_deriv(dist, E0, E1, p);
        r_koszul = std::max(r_koszul, gnorm(g, a1 - a2));

        // torsion identity
        Vec<double> tor = torsion_D(dist, E0, E1, p) +
                          project_perp(g, fr, lie_bracket(E0, E1, p));
        r_torsion = std::max(r_torsion, gnorm(g, tor));

        // Gauss formula: nabla = nabla^D + B
        SffValue b01 = sff(dist, E0, E1, p);
        Vec<double> gauss = cov_deriv(mod, E0, E1, p) -
                            intrinsic_cov_deriv_unchecked(dist, E0, E1, p) - b01.value;
        r_gauss_formula = std::max(r_gauss_formula, gnorm(g, gauss));

        // shape operator routes
        ShapeRoutes sr = shape_operator_routes(dist, E0, E1, Z0, p);
        r_shape = std::max(r_shape, std::abs(sr.via_nabla_xy - sr.via_nabla_xz));
        r_shape = std::max(r_shape, std::abs(sr.via_nabla_xy - sr.via_lie));

        // symmetric/skew parts against the Lie and exterior derivative routes
        BzDecomposition bz = bz_decomposition(dist, Z0, E0, E1, p);
        r_symskew = std::max(r_symskew, std::abs(bz.sym_value - bz.lie_check));
        r_symskew = std::max(r_symskew, std::abs(bz.skew_value - bz.ext_check));

        // curvature dual path and Gauss identity
        if (n > 1) {
            Vec<double> direct = intrinsic_endo(dist, E0, E1, E1, p);
            Vec<double> decomp = endo_decomposition(dist, E0, E1, E1, p);
            r_endo = std::max(r_endo, gnorm(g, direct - decomp));

            GaussReport rep = gauss_identity(dist, E0, E1, E1, E0, p);
            r_gauss = std::max(r_gauss, rep.residual);

            // sectional invariance under a frame recombination
            double c = 0.35, d = 1.2;  // coefficients of a fixed GL(2) change
            std::vector<std::pair<double, const VectorField*>> t1{{1.0, &E0}, {c, &E1}};
            std::vector<std::pair<double, const VectorField*>> t2{{0.0, &E0}, {d, &E1}};
            LinCombField W1(dist.dim(), t1);
            LinCombField W2(dist.dim(), t2);
            double s0 = sectional_intrinsic(dist, E0, E1, p);
            double s1 = sectional_intrinsic(dist, W1, W2, p);
            r_sectional = std::max(r_sectional, std::abs(s0 - s1));
        }
    }

    const double tol = bat.scn.tol.identity;
    bat.add("frame_orthonormality", r_frame, bat.scn.tol.frame);
    bat.add("projection_orthogonality", r_proj, bat.scn.tol.frame);
    bat.add("intrinsic_metric_compatibility", r_compat, tol);
    bat.add("koszul_equals_projected_connection", r_koszul, tol);
    bat.add("intrinsic_torsion_identity", r_torsion, tol);
    bat.add("gauss_formula", r_gauss_formula, 1e-10);
    bat.add("shape_operator_routes", r_shape, 1e-9);
    bat.add("bz_sym_skew_vs_lie_exterior", r_symskew, tol);
    if (n > 1) {
        bat.add("curvature_endo_dual_path", r_endo, 1e-7);
        bat.add("gauss_identity", r_gauss, 1e-7);
        bat.add("sectional_frame_invariance", r_sectional, tol);
    }

    // classifier route agreement: verdicts must not be inconclusive
    ClassificationReport inv = is_involutive(dist, bat.spec, tol);
    ClassificationReport tg = is_totally_geodesic(dist, bat.spec, tol);
    bat.add("involutive_routes_agree", inv.verdict == "inconclusive" ? 1.0 : 0.0, 0.5);
    bat.add("totally_geodesic_routes_agree", tg.verdict == "inconclusive" ? 1.0 : 0.0, 0.5);
}

}  // namespace

std::vector<InvariantResult> run_verify(const ScenarioModel& scenario, int samples,
                                        std::uint64_t seed) {
    SampleSpec spec;
    if (scenario.box) {
        spec = scenario.sample_spec(samples);
    } else {
        // no declared box: probe a unit box around the origin
        spec.box.assign(scenario.manifold.dim(), {-1.0, 1.0});
        spec.count = samples;
    }
    spec.seed = seed;
    Battery bat{scenario, spec, sample_box(spec),
                std::mt19937_64(seed * 0x9e3779b97f4a7c15ULL + 1), {}};

    ambient_checks(bat);
    if (scenario.distribution) distribution_checks(bat);
    return bat.results;
}

}  // namespace distgeo
