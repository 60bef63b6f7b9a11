#include "distgeo/sff.hpp"

#include <cassert>
#include <cmath>
#include <mutex>

namespace distgeo {

SffValue sff(const DistributionModel& dist, const VectorField& X, const VectorField& Y,
             const Vec<double>& p) {
    require_section(dist, X, p, "X");
    require_section(dist, Y, p, "Y");
    Mat<double> g = metric_at(dist.base, p);
    Frame<double> fr = frame_at(dist, p);
    Vec<double> bxy = project_perp(g, fr, cov_deriv(dist.base, X, Y, p));
    Vec<double> byx = project_perp(g, fr, cov_deriv(dist.base, Y, X, p));
    SffValue out;
    out.p = p;
    out.value = bxy;
    out.sym = scaled(0.5, bxy + byx);
    out.skew = scaled(0.5, bxy - byx);
    return out;
}

ShapeRoutes shape_operator_routes(const DistributionModel& dist, const VectorField& X,
                                  const VectorField& Y, const VectorField& Z,
                                  const Vec<double>& p) {
    require_section(dist, X, p, "X");
    require_section(dist, Y, p, "Y");
    // routes 2 and 3 differentiate Z, so pointwise normality is not enough
    require_normal_section_field(dist, Z, p, "Z");
    Mat<double> g = metric_at(dist.base, p);
    Vec<double> yv = Y(p);
    Vec<double> zv = Z(p);

    ShapeRoutes r{};
    r.via_nabla_xy = ginner(g, cov_deriv(dist.base, X, Y, p), zv);
    r.via_nabla_xz = -ginner(g, cov_deriv(dist.base, X, Z, p), yv);
    Vec<double> lz = lie_bracket(Z, X, p) - cov_deriv(dist.base, Z, X, p);
    r.via_lie = ginner(g, lz, yv);
    return r;
}

double shape_operator(const DistributionModel& dist, const VectorField& X, const VectorField& Y,
                      const VectorField& Z, const Vec<double>& p, bool check_routes) {
    if (check_routes) {
        ShapeRoutes r = shape_operator_routes(dist, X, Y, Z, p);
        double spread = std::max(std::abs(r.via_nabla_xy - r.via_nabla_xz),
                                 std::abs(r.via_nabla_xy - r.via_lie));
        if (!(spread < 1e-9 * std::max(1.0, std::abs(r.via_nabla_xy))))
            throw ModelError("shape operator routes disagree (spread " + std::to_string(spread) +
                                 ")",
                             p);
        return r.via_nabla_xy;
    }
    require_section(dist, X, p, "X");
    require_section(dist, Y, p, "Y");
    require_normal_section(dist, Z, p, "Z");
    Mat<double> g = metric_at(dist.base, p);
    return ginner(g, cov_deriv(dist.base, X, Y, p), Z(p));
}

BzDecomposition bz_decomposition(const DistributionModel& dist, const VectorField& Z,
                                 const VectorField& X, const VectorField& Y,
                                 const Vec<double>& p) {
    // the Lie and exterior derivative routes differentiate Z
    require_normal_section_field(dist, Z, p, "Z");
    double sxy = shape_operator(dist, X, Y, Z, p);
    double syx = shape_operator(dist, Y, X, Z, p);

    const ManifoldModel& base = dist.base;
    auto pair_fields = [&base](const VectorField& a, const VectorField& b) {
        const VectorField* fa = &a;
        const VectorField* fb = &b;
        return [&base, fa, fb](const auto& u) {
            auto gu = metric_at(base, u);
            return ginner(gu, (*fa)(u), (*fb)(u));
        };
    };

    Mat<double> g = metric_at(base, p);
    Vec<double> zv = Z(p);

    // (L_Z g)(X,Y) = L_Z(g(X,Y)) - g([Z,X],Y) - g(X,[Z,Y])
    double lz_gxy = dir_scalar(pair_fields(X, Y), p, zv).second;
    double lie = lz_gxy - ginner(g, lie_bracket(Z, X, p), Y(p)) -
                 ginner(g, X(p), lie_bracket(Z, Y, p));

    // (d i_Z g)(X,Y) = L_X(g(Z,Y)) - L_Y(g(Z,X)) - g(Z,[X,Y])
    double dx = dir_scalar(pair_fields(Z, Y), p, X(p)).second;
    double dy = dir_scalar(pair_fields(Z, X), p, Y(p)).second;
    double ext = dx - dy - ginner(g, zv, lie_bracket(X, Y, p));

    BzDecomposition out{};
    out.sym_value = 0.5 * (sxy + syx);
    out.skew_value = 0.5 * (sxy - syx);
    out.lie_check = -0.5 * lie;
    out.ext_check = -0.5 * ext;
    return out;
}

double dual_shape(const DistributionModel& dist, const VectorField& X, const VectorField& Y,
                  const VectorField& alpha, const Vec<double>& p) {
    require_section(dist, X, p, "X");
    require_section(dist, Y, p, "Y");

    Vec<double> av = alpha(p);
    Mat<double> g = metric_at(dist.base, p);
    Frame<double> fr = frame_at(dist, p);
    // alpha must annihilate D at p
    double ann = 0.0;
    for (const auto& e : fr.E) {
        double c = 0.0;
        for (std::size_t k = 0; k < av.size(); ++k) c += av[k] * e[k];
        ann = std::max(ann, std::abs(c));
    }
    if (!(ann < kSectionTol))
        throw SectionError("covector does not annihilate the distribution (residual " +
                               std::to_string(ann) + ")",
                           p);

    Vec<double> nxy = cov_deriv(dist.base, X, Y, p);
    double primary = 0.0;
    for (std::size_t k = 0; k < av.size(); ++k) primary += av[k] * nxy[k];

#ifndef NDEBUG
    // duality: alpha(nabla_X Y) = S(X, Y, sharp(alpha))
    Vec<double> sharp = sharp_map(dist.base, p, av);
    double via_sharp = ginner(g, nxy, sharp);
    assert(std::abs(primary - via_sharp) < 1e-9 * std::max(1.0, std::abs(primary)));
#else
    (void)g;
#endif
    return primary;
}

Vec<double> weingarten(const DistributionModel& dist, const VectorField& Z, const VectorField& X,
                       const Vec<double>& p) {
    require_section(dist, X, p, "X");
    require_normal_section(dist, Z, p, "Z");
    return -cov_deriv(dist.base, X, Z, p);
}

Vec<double> symmetric_product(const ManifoldModel& mod, const VectorField& X,
                              const VectorField& Y, const Vec<double>& p) {
    return cov_deriv(mod, X, Y, p) + cov_deriv(mod, Y, X, p);
}

nlohmann::json ClassificationReport::to_json() const {
    nlohmann::json j;
    j["property"] = property;
    j["verdict"] = verdict;
    j["max_residual"] = max_residual;
    if (witness) {
        j["witness"] = {{"point", witness->point},
                        {"frame_indices", witness->frame_indices},
                        {"residual", witness->residual}};
    } else {
        j["witness"] = nullptr;
    }
    j["samples"] = samples;
    j["tol"] = tol;
    return j;
}

namespace {

struct PairResidual {
    double primary = -1.0;   // classification route
    double secondary = -1.0; // independent cross-check route
    double tertiary = -1.0;  // optional third route
    Witness witness_primary;
    bool valid = false;
};

// Runs `body` over sampled points in parallel, merging per-point residual
// maxima. Points where the model fails to evaluate are skipped.
template <class Body>
std::pair<std::vector<PairResidual>, int> classify_samples(const SampleSpec& spec,
                                                           const Body& body) {
    auto points = sample_box(spec);
    std::vector<PairResidual> results(points.size());
    parallel_for(static_cast<int>(points.size()), [&](int i) {
        try {
            results[i] = body(points[i]);
            results[i].valid = true;
        } catch (const Error&) {
            results[i].valid = false;
        }
    });
    int valid = 0;
    for (const auto& r : results) valid += r.valid ? 1 : 0;
    if (valid == 0) throw ModelError("classification sampler produced no valid points");
    return {std::move(results), valid};
}

ClassificationReport merge_report(const char* property, double tol,
                                  const std::vector<PairResidual>& results, int valid) {
    double max_primary = 0.0, max_secondary = 0.0, max_tertiary = 0.0;
    const Witness* witness = nullptr;
    bool has_tertiary = false;
    for (const auto& r : results) {
        if (!r.valid) continue;
        if (r.primary >= max_primary) {
            max_primary = r.primary;
            witness = &r.witness_primary;
        }
        max_secondary = std::max(max_secondary, r.secondary);
        if (r.tertiary >= 0.0) {
            has_tertiary = true;
            max_tertiary = std::max(max_tertiary, r.tertiary);
        }
    }

    bool verdict_primary = max_primary < tol;
    bool verdict_secondary = max_secondary < tol;

    ClassificationReport rep;
    rep.property = property;
    rep.max_residual = max_primary;
    rep.samples = valid;
    rep.tol = tol;
    bool agree = (verdict_primary == verdict_secondary) &&
                 (!has_tertiary || verdict_primary == (max_tertiary < tol));
    if (!agree) {
        rep.verdict = "inconclusive";
    } else if (verdict_primary) {
        rep.verdict = "holds";
    } else {
        rep.verdict = "fails";
        if (witness) rep.witness = *witness;
    }
    return rep;
}

}  // namespace

ClassificationReport is_involutive(const DistributionModel& dist, const SampleSpec& spec,
                                   double tol) {
    const int n = dist.rank();
    auto [results, valid] = classify_samples(spec, [&](const Vec<double>& p) {
        Mat<double> g = metric_at(dist.base, p);
        Frame<double> fr = frame_at(dist, p);
        PairResidual out;
        out.primary = 0.0;
        out.secondary = 0.0;
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b) {
                FrameField Ea(dist, FrameField::Span::D, a);
                FrameField Eb(dist, FrameField::Span::D, b);
                // route 1: skew part of the second fundamental form
                Vec<double> bab = project_perp(g, fr, cov_deriv(dist.base, Ea, Eb, p));
                Vec<double> bba = project_perp(g, fr, cov_deriv(dist.base, Eb, Ea, p));
                double skew = 0.5 * gnorm(g, bab - bba);
                if (skew >= out.primary) {
                    out.primary = skew;
                    out.witness_primary = Witness{p, {a, b}, skew};
                }
                // route 2: bracket-based Frobenius test
                Vec<double> br = lie_bracket(Ea, Eb, p);
                for (const auto& z : fr.Z)
                    out.secondary = std::max(out.secondary, std::abs(ginner(g, br, z)));
            }
        return out;
    });
    return merge_report("involutive", tol, results, valid);
}

ClassificationReport is_totally_geodesic(const DistributionModel& dist, const SampleSpec& spec,
                                         double tol) {
    const int n = dist.rank();
    auto [results, valid] = classify_samples(spec, [&](const Vec<double>& p) {
        Mat<double> g = metric_at(dist.base, p);
        Frame<double> fr = frame_at(dist, p);
        PairResidual out;
        out.primary = 0.0;
        out.secondary = 0.0;
        out.tertiary = 0.0;
        for (int a = 0; a < n; ++a)
            for (int b = a; b < n; ++b) {
                FrameField Ea(dist, FrameField::Span::D, a);
                FrameField Eb(dist, FrameField::Span::D, b);
                // route 1: symmetric part of B
                Vec<double> bab = project_perp(g, fr, cov_deriv(dist.base, Ea, Eb, p));
                Vec<double> bba = project_perp(g, fr, cov_deriv(dist.base, Eb, Ea, p));
                double sym = 0.5 * gnorm(g, bab + bba);
                if (sym >= out.primary) {
                    out.primary = sym;
                    out.witness_primary = Witness{p, {a, b}, sym};
                }
                // route 2: closure under the symmetric product
                Vec<double> sp = symmetric_product(dist.base, Ea, Eb, p);
                out.secondary = std::max(out.secondary, gnorm(g, project_perp(g, fr, sp)));
                // route 3: nabla_X X stays in the distribution, over the frame
                // elements and their pairwise sums (the diagonal alone does not
                // see mixed symmetric terms)
                if (a == b) {
                    Vec<double> nxx = cov_deriv(dist.base, Ea, Ea, p);
                    out.tertiary = std::max(out.tertiary, gnorm(g, project_perp(g, fr, nxx)));
                } else {
                    LinCombField sum(dist.dim(), {{1.0, &Ea}, {1.0, &Eb}});
                    Vec<double> nss = cov_deriv(dist.base, sum, sum, p);
                    out.tertiary = std::max(out.tertiary, gnorm(g, project_perp(g, fr, nss)));
                }
            }
        return out;
    });
    return merge_report("totally_geodesic", tol, results, valid);
}

HypersurfaceForm hypersurface_form(const DistributionModel& dist, const Vec<double>& p) {
    if (dist.corank() != 1)
        throw InputError("hypersurface form requires a corank-1 distribution");

    const int n = dist.rank();
    Mat<double> g = metric_at(dist.base, p);
    Frame<double> fr = frame_at(dist, p);

    Vec<double> normal = fr.Z[0];
    for (double c : normal) {
        if (std::abs(c) > 1e-9) {
            if (c < 0) normal = -normal;
            break;
        }
    }

    HypersurfaceForm out;
    out.normal = normal;
    out.b = Mat<double>(n, n);
    out.b_sym = Mat<double>(n, n);
    out.b_skew = Mat<double>(n, n);

    for (int a = 0; a < n; ++a) {
        FrameField Ea(dist, FrameField::Span::D, a);
        for (int b = 0; b < n; ++b) {
            FrameField Eb(dist, FrameField::Span::D, b);
            out.b(a, b) = ginner(g, cov_deriv(dist.base, Ea, Eb, p), normal);
        }
    }
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            out.b_sym(a, b) = 0.5 * (out.b(a, b) + out.b(b, a));
            out.b_skew(a, b) = 0.5 * (out.b(a, b) - out.b(b, a));
        }

    EigenSym eig = jacobi_eigen_sym(out.b_sym);
    out.principal_curvatures = eig.values;
    for (const auto& w : eig.vectors) {
        Vec<double> dir(p.size(), 0.0);
        for (int a = 0; a < n; ++a) axpy(w[a], fr.E[a], dir);
        out.principal_directions.push_back(std::move(dir));
    }
    return out;
}

}  // namespace distgeo
