#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "distgeo/dist.hpp"
#include "distgeo/sampling.hpp"
#include "distgeo/scenario.hpp"
#include "oracles.hpp"

using namespace distgeo;

namespace {

double max_abs(const Vec<double>& v) {
    double m = 0.0;
    for (double c : v) m = std::max(m, std::abs(c));
    return m;
}

DistributionModel fixture_dist(const std::string& name) {
    return *builtin_fixture(name).distribution;
}

std::vector<Vec<double>> fixture_points(const std::string& name, int count, std::uint64_t seed) {
    ScenarioModel s = builtin_fixture(name);
    SampleSpec spec = s.sample_spec(count);
    spec.seed = seed;
    return sample_box(spec);
}

}  // namespace

TEST_CASE("coordinate-plane frame is already orthonormal") {
    DistributionModel d = fixture_dist("FLAT2");
    Frame<double> fr = frame_at(d, Vec<double>{0.3, -0.5, 0.9});
    CHECK(fr.E[0] == Vec<double>{1, 0, 0});
    CHECK(fr.E[1] == Vec<double>{0, 1, 0});
    REQUIRE(fr.Z.size() == 1);
    CHECK(fr.Z[0] == Vec<double>{0, 0, 1});
}

TEST_CASE("contact distribution frame at the origin") {
    DistributionModel d = fixture_dist("HEIS");
    Frame<double> fr = frame_at(d, Vec<double>{0, 0, 0});
    CHECK(max_abs(fr.E[0] - Vec<double>{1, 0, 0}) == 0.0);
    CHECK(max_abs(fr.E[1] - Vec<double>{0, 1, 0}) == 0.0);
    CHECK(max_abs(fr.Z[0] - Vec<double>{0, 0, 1}) == 0.0);
}

TEST_CASE("dependent generators are rejected") {
    ManifoldModel mod = ManifoldModel::make(
        {"x", "y", "z"}, {{"1", "0", "0"}, {"0", "1", "0"}, {"0", "0", "1"}});
    DistributionModel d =
        DistributionModel::make(mod, {{"1", "0", "x"}, {"2", "0", "2*x"}});
    CHECK_THROWS_AS(frame_at(d, Vec<double>{0.2, 0.1, 0.4}), ModelError);
}

TEST_CASE("frames stay orthonormal over every fixture box") {
    for (const auto& name : fixture_names()) {
        DistributionModel d = fixture_dist(name);
        for (const auto& p : fixture_points(name, 64, 3)) {
            Mat<double> g = metric_at(d.base, p);
            Frame<double> fr = frame_at(d, p);
            const int n = d.rank();
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b)
                    CHECK(std::abs(ginner(g, fr.E[a], fr.E[b]) - (a == b ? 1 : 0)) < 1e-10);
            for (std::size_t i = 0; i < fr.Z.size(); ++i) {
                for (std::size_t j = 0; j < fr.Z.size(); ++j)
                    CHECK(std::abs(ginner(g, fr.Z[i], fr.Z[j]) - (i == j ? 1 : 0)) < 1e-10);
                for (int a = 0; a < n; ++a)
                    CHECK(std::abs(ginner(g, fr.E[a], fr.Z[i])) < 1e-10);
            }
            // change-of-basis data reproduces E from the generators
            for (int a = 0; a < n; ++a) {
                Vec<double> rebuilt(3, 0.0);
                for (int i = 0; i < n; ++i) {
                    Vec<double> gi = ModelField(d.generators[i])(p);
                    axpy(fr.gen_to_E(a, i), gi, rebuilt);
                }
                CHECK(max_abs(rebuilt - fr.E[a]) < 1e-10);
            }
        }
    }
}

TEST_CASE("projections split vectors orthogonally") {
    DistributionModel d = fixture_dist("FLAT2");
    Vec<double> p = {0, 0, 0};
    Vec<double> v = {1, 2, 3};
    CHECK(project_D(d, p, v) == Vec<double>{1, 2, 0});
    CHECK(project_perp(d, p, v) == Vec<double>{0, 0, 3});

    DistributionModel h = fixture_dist("HEIS");
    for (const auto& q : fixture_points("HEIS", 24, 9)) {
        Mat<double> g = metric_at(h.base, q);
        Frame<double> fr = frame_at(h, q);
        Vec<double> w = {q[1] - 0.3, q[2] + 1.1, q[0] * q[1]};
        Vec<double> wd = project_D(g, fr, w);
        Vec<double> wp = project_perp(g, fr, w);
        CHECK(std::abs(ginner(g, wd, wp)) < 1e-10);
        CHECK(max_abs(project_D(g, fr, wd) - wd) < 1e-12);  // idempotent
        CHECK(wp == w - wd);                                // complement by construction
        // a section of D projects to itself
        Vec<double> e = fr.E[0];
        CHECK(max_abs(project_perp(g, fr, e)) < 1e-12);
    }
}

TEST_CASE("intrinsic connection on simple sections") {
    DistributionModel flat = fixture_dist("FLAT2");
    ModelField dx(VectorFieldModel::parse({"1", "0", "0"}, flat.base.chart));
    ModelField dy(VectorFieldModel::parse({"0", "1", "0"}, flat.base.chart));
    CHECK(max_abs(intrinsic_cov_deriv(flat, dx, dy, Vec<double>{0.1, 0.2, 0.3})) == 0.0);

    DistributionModel h = fixture_dist("HEIS");
    ModelField X1(VectorFieldModel::parse({"1", "0", "-y/2"}, h.base.chart));
    ModelField X2(VectorFieldModel::parse({"0", "1", "x/2"}, h.base.chart));
    CHECK(max_abs(intrinsic_cov_deriv(h, X1, X2, Vec<double>{0, 0, 0})) < 1e-15);
}

TEST_CASE("non-sections are rejected") {
    DistributionModel h = fixture_dist("HEIS");
    ModelField dz(VectorFieldModel::parse({"0", "0", "1"}, h.base.chart));
    ModelField X1(VectorFieldModel::parse({"1", "0", "-y/2"}, h.base.chart));
    CHECK_THROWS_AS(intrinsic_cov_deriv(h, X1, dz, Vec<double>{0, 0, 0}), SectionError);
    CHECK_THROWS_AS(intrinsic_cov_deriv(h, dz, X1, Vec<double>{0, 0, 0}), SectionError);
}

TEST_CASE("intrinsic connection satisfies the Leibniz rule") {
    DistributionModel h = fixture_dist("HEIS");
    ModelField X1(VectorFieldModel::parse({"1", "0", "-y/2"}, h.base.chart));
    ModelField X2(VectorFieldModel::parse({"0", "1", "x/2"}, h.base.chart));
    Expr f = Expr::parse("1 + sin(x)*y/3 + z^2/5", h.base.chart);
    auto fX2 = analytic_field(3, [&](const auto& u) {
        auto v = X2(u);
        auto c = f.eval(u);
        for (auto& x : v) x = c * x;
        return v;
    });
    for (const auto& p : fixture_points("HEIS", 16, 21)) {
        Vec<double> lhs = intrinsic_cov_deriv(h, X1, fX2, p);
        auto fscalar = [&](const auto& u) { return f.eval(u); };
        double lxf = dir_scalar(fscalar, p, X1(p)).second;
        Vec<double> rhs = scaled(lxf, X2(p)) + scaled(f.eval(p), intrinsic_cov_deriv(h, X1, X2, p));
        CHECK(max_abs(lhs - rhs) < 1e-8);
    }
}

TEST_CASE("projected bracket values") {
    DistributionModel h = fixture_dist("HEIS");
    ModelField X1(VectorFieldModel::parse({"1", "0", "-y/2"}, h.base.chart));
    ModelField X2(VectorFieldModel::parse({"0", "1", "x/2"}, h.base.chart));
    CHECK(max_abs(bracket_D(h, X1, X2, Vec<double>{0, 0, 0})) < 1e-15);
    CHECK(max_abs(bracket_D(h, X1, X1, Vec<double>{0.4, 0.2, -0.7})) == 0.0);

    DistributionModel flat = fixture_dist("FLAT2");
    ModelField dx(VectorFieldModel::parse({"1", "0", "0"}, flat.base.chart));
    ModelField dy(VectorFieldModel::parse({"0", "1", "0"}, flat.base.chart));
    CHECK(max_abs(bracket_D(flat, dx, dy, Vec<double>{1, 1, 1})) == 0.0);
}

TEST_CASE("Koszul construction equals the projected connection") {
    SUBCASE("contact fixture, frame fields, 100 points") {
        DistributionModel h = fixture_dist("HEIS");
        FrameField E0(h, FrameField::Span::D, 0);
        FrameField E1(h, FrameField::Span::D, 1);
        for (const auto& p : fixture_points("HEIS", 100, 31)) {
            Vec<double> a = intrinsic_cov_deriv(h, E0, E1, p);
            Vec<double> b = koszul_cov_deriv(h, E0, E1, p);
            CHECK(max_abs(a - b) < 1e-8);
            Vec<double> c = intrinsic_cov_deriv(h, E1, E1, p);
            Vec<double> d = koszul_cov_deriv(h, E1, E1, p);
            CHECK(max_abs(c - d) < 1e-8);
        }
    }
    SUBCASE("flat fixture gives zero") {
        DistributionModel flat = fixture_dist("FLAT2");
        ModelField dx(VectorFieldModel::parse({"1", "0", "0"}, flat.base.chart));
        ModelField dy(VectorFieldModel::parse({"0", "1", "0"}, flat.base.chart));
        CHECK(max_abs(koszul_cov_deriv(flat, dx, dy, Vec<double>{0.5, 0.5, 0.5})) < 1e-12);
    }
    SUBCASE("sphere tangent generators near (1,0,0)") {
        DistributionModel s = fixture_dist("SPHERE");
        FrameField E0(s, FrameField::Span::D, 0);
        FrameField E1(s, FrameField::Span::D, 1);
        for (const auto& p :
             {Vec<double>{1, 0, 0}, Vec<double>{1.1, 0.2, -0.1}, Vec<double>{0.9, -0.3, 0.2}}) {
            Vec<double> a = intrinsic_cov_deriv(s, E0, E1, p);
            Vec<double> b = koszul_cov_deriv(s, E0, E1, p);
            CHECK(max_abs(a - b) < 1e-8);
        }
    }
}

TEST_CASE("torsion of the intrinsic connection") {
    DistributionModel h = fixture_dist("HEIS");
    ModelField X1(VectorFieldModel::parse({"1", "0", "-y/2"}, h.base.chart));
    ModelField X2(VectorFieldModel::parse({"0", "1", "x/2"}, h.base.chart));

    Vec<double> t = torsion_D(h, X1, X2, Vec<double>{0, 0, 0});
    CHECK(t[0] == doctest::Approx(0.0));
    CHECK(t[1] == doctest::Approx(0.0));
    CHECK(t[2] == doctest::Approx(-1.0));

    CHECK(max_abs(torsion_D(h, X1, X1, Vec<double>{0.3, -0.2, 0.1})) < 1e-15);

    DistributionModel flat = fixture_dist("FLAT2");
    ModelField dx(VectorFieldModel::parse({"1", "0", "0"}, flat.base.chart));
    ModelField dy(VectorFieldModel::parse({"0", "1", "0"}, flat.base.chart));
    CHECK(max_abs(torsion_D(flat, dx, dy, Vec<double>{0, 0, 0})) == 0.0);

    // torsion + perp part of the bracket vanishes identically
    FrameField E0(h, FrameField::Span::D, 0);
    FrameField E1(h, FrameField::Span::D, 1);
    for (const auto& p : fixture_points("HEIS", 32, 77)) {
        Mat<double> g = metric_at(h.base, p);
        Frame<double> fr = frame_at(h, p);
        Vec<double> res =
            torsion_D(h, E0, E1, p) + project_perp(g, fr, lie_bracket(E0, E1, p));
        CHECK(max_abs(res) < 1e-8);
    }
}

TEST_CASE("metric compatibility of the intrinsic connection") {
    for (const auto& name : {"HEIS", "SPHERE", "KNIFE"}) {
        DistributionModel d = fixture_dist(name);
        FrameField E0(d, FrameField::Span::D, 0);
        FrameField E1(d, FrameField::Span::D, 1);
        for (const auto& p : fixture_points(name, 20, 13)) {
            Mat<double> g = metric_at(d.base, p);
            auto pair01 = [&](const auto& u) {
                auto gu = metric_at(d.base, u);
                return ginner(gu, E0(u), E1(u));
            };
            double lhs = dir_scalar(pair01, p, E0(p)).second;
            double rhs = ginner(g, intrinsic_cov_deriv(d, E0, E0, p), E1(p)) +
                         ginner(g, E0(p), intrinsic_cov_deriv(d, E0, E1, p));
            CHECK(std::abs(lhs - rhs) < 1e-8);
        }
    }
}

TEST_CASE("annihilator bases pair to zero with the opposite frame") {
    DistributionModel h = fixture_dist("HEIS");
    for (const auto& p : fixture_points("HEIS", 8, 2)) {
        Frame<double> fr = frame_at(h, p);
        for (const auto& alpha : omega_basis(h, p))
            for (const auto& e : fr.E) {
                double pairing = 0.0;
                for (int k = 0; k < 3; ++k) pairing += alpha[k] * e[k];
                CHECK(std::abs(pairing) < 1e-12);
            }
        for (const auto& beta : omega_perp_basis(h, p))
            for (const auto& z : fr.Z) {
                double pairing = 0.0;
                for (int k = 0; k < 3; ++k) pairing += beta[k] * z[k];
                CHECK(std::abs(pairing) < 1e-12);
            }
    }
}
