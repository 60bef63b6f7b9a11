#include "distgeo/dist.hpp"

namespace distgeo {

DistributionModel DistributionModel::make(ManifoldModel base,
                                          const std::vector<std::vector<std::string>>& generators) {
    const int m = base.dim();
    if (generators.empty()) throw InputError("distribution needs at least one generator");
    if (static_cast<int>(generators.size()) >= m)
        throw InputError("distribution rank must be smaller than the manifold dimension");
    DistributionModel dist;
    dist.base = std::move(base);
    for (const auto& comps : generators)
        dist.generators.push_back(VectorFieldModel::parse(comps, dist.base.chart));
    return dist;
}

Vec<double> project_D(const DistributionModel& dist, const Vec<double>& p, const Vec<double>& v) {
    Mat<double> g = metric_at(dist.base, p);
    Frame<double> fr = frame_at(dist, p);
    return project_D(g, fr, v);
}

Vec<double> project_perp(const DistributionModel& dist, const Vec<double>& p,
                         const Vec<double>& v) {
    return v - project_D(dist, p, v);
}

double section_residual(const DistributionModel& dist, const VectorField& X,
                        const Vec<double>& p) {
    Mat<double> g = metric_at(dist.base, p);
    Frame<double> fr = frame_at(dist, p);
    return gnorm(g, project_perp(g, fr, X(p)));
}

double normal_section_residual(const DistributionModel& dist, const VectorField& Z,
                               const Vec<double>& p) {
    Mat<double> g = metric_at(dist.base, p);
    Frame<double> fr = frame_at(dist, p);
    return gnorm(g, project_D(g, fr, Z(p)));
}

void require_section(const DistributionModel& dist, const VectorField& X, const Vec<double>& p,
                     const char* role, double tol) {
    double r = section_residual(dist, X, p);
    if (!(r < tol))
        throw SectionError(std::string(role) + " is not a section of the distribution (residual " +
                               std::to_string(r) + ")",
                           p);
}

void require_normal_section(const DistributionModel& dist, const VectorField& Z,
                            const Vec<double>& p, const char* role, double tol) {
    double r = normal_section_residual(dist, Z, p);
    if (!(r < tol))
        throw SectionError(std::string(role) +
                               " is not a section of the orthogonal distribution (residual " +
                               std::to_string(r) + ")",
                           p);
}

double normal_section_field_residual(const DistributionModel& dist, const VectorField& Z,
                                     const Vec<double>& p) {
    double r = normal_section_residual(dist, Z, p);
    const int m = dist.dim();
    for (int a = 0; a < dist.rank(); ++a) {
        FrameField Ea(dist, FrameField::Span::D, a);
        auto pairing = [&](const auto& u) {
            auto gu = metric_at(dist.base, u);
            return ginner(gu, Ea(u), Z(u));
        };
        for (int k = 0; k < m; ++k) {
            Vec<double> dir(p.size(), 0.0);
            dir[k] = 1.0;
            r = std::max(r, std::abs(dir_scalar(pairing, p, dir).second));
        }
    }
    return r;
}

void require_normal_section_field(const DistributionModel& dist, const VectorField& Z,
                                  const Vec<double>& p, const char* role, double tol) {
    double r = normal_section_field_residual(dist, Z, p);
    if (!(r < tol))
        throw SectionError(
            std::string(role) +
                " must annihilate the distribution to first order here (residual " +
                std::to_string(r) + ")",
            p);
}

Vec<double> intrinsic_cov_deriv(const DistributionModel& dist, const VectorField& X,
                                const VectorField& Y, const Vec<double>& p) {
    require_section(dist, X, p, "X");
    require_section(dist, Y, p, "Y");
    return intrinsic_cov_deriv_unchecked(dist, X, Y, p);
}

Vec<double> bracket_D(const DistributionModel& dist, const VectorField& X, const VectorField& Y,
                      const Vec<double>& p) {
    return project_D(dist, p, lie_bracket(X, Y, p));
}

Vec<double> koszul_cov_deriv(const DistributionModel& dist, const VectorField& X,
                             const VectorField& Y, const Vec<double>& p) {
    require_section(dist, X, p, "X");
    require_section(dist, Y, p, "Y");

    const int m = dist.dim();
    const int n = dist.rank();
    Mat<double> g = metric_at(dist.base, p);
    Frame<double> fr = frame_at(dist, p);

    Vec<double> xv = X(p);
    Vec<double> yv = Y(p);

    // scalar pairing of two fields as a function of position
    const ManifoldModel& base = dist.base;
    auto pairing = [&base](const VectorField& a, const VectorField& b) {
        const VectorField* fa = &a;
        const VectorField* fb = &b;
        return [&base, fa, fb](const auto& u) {
            auto gu = metric_at(base, u);
            return ginner(gu, (*fa)(u), (*fb)(u));
        };
    };

    Vec<double> out(m, 0.0);
    for (int a = 0; a < n; ++a) {
        FrameField Ea(dist, FrameField::Span::D, a);
        Vec<double> ev = fr.E[a];

        double lx = dir_scalar(pairing(Y, Ea), p, xv).second;
        double ly = dir_scalar(pairing(X, Ea), p, yv).second;
        double le = dir_scalar(pairing(X, Y), p, ev).second;

        Vec<double> br_ea_y = project_D(g, fr, lie_bracket(Ea, Y, p));
        Vec<double> br_ea_x = project_D(g, fr, lie_bracket(Ea, X, p));
        Vec<double> br_y_x = project_D(g, fr, lie_bracket(Y, X, p));

        double rhs = lx + ly - le + ginner(g, xv, br_ea_y) + ginner(g, yv, br_ea_x) -
                     ginner(g, ev, br_y_x);
        axpy(0.5 * rhs, fr.E[a], out);
    }
    return out;
}

Vec<double> torsion_D(const DistributionModel& dist, const VectorField& X, const VectorField& Y,
                      const Vec<double>& p) {
    Vec<double> a = intrinsic_cov_deriv(dist, X, Y, p);
    Vec<double> b = intrinsic_cov_deriv(dist, Y, X, p);
    return a - b - lie_bracket(X, Y, p);
}

std::vector<Vec<double>> omega_basis(const DistributionModel& dist, const Vec<double>& p) {
    Frame<double> fr = frame_at(dist, p);
    std::vector<Vec<double>> out;
    for (const auto& z : fr.Z) out.push_back(flat_map(dist.base, p, z));
    return out;
}

std::vector<Vec<double>> omega_perp_basis(const DistributionModel& dist, const Vec<double>& p) {
    Frame<double> fr = frame_at(dist, p);
    std::vector<Vec<double>> out;
    for (const auto& e : fr.E) out.push_back(flat_map(dist.base, p, e));
    return out;
}

}  // namespace distgeo
