#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "distgeo/dynamics.hpp"
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

double kinetic_energy(const ManifoldModel& mod, const TrajectorySample& s) {
    return 0.5 * ginner(metric_at(mod, s.q), s.v, s.v);
}

}  // namespace

TEST_CASE("flat geodesics are straight lines") {
    ManifoldModel e3 = builtin_fixture("FLAT2").manifold;
    Trajectory t = geodesic_ambient(e3, {0, 0, 0}, {1, 2, 3}, 1.0, 1e-3);
    REQUIRE(!t.error);
    CHECK(max_abs(t.back().q - Vec<double>{1, 2, 3}) < 1e-10);
    CHECK(t.back().t == doctest::Approx(1.0));
}

TEST_CASE("the equator of the round-sphere chart is a geodesic") {
    ManifoldModel sphere = ManifoldModel::make({"theta", "phi"},
                                               {{"1", "0"}, {"0", "sin(theta)^2"}});
    const double half_pi = std::acos(0.0);
    Trajectory t = geodesic_ambient(sphere, {half_pi, 0.0}, {0.0, 1.0}, 1.0, 1e-3);
    REQUIRE(!t.error);
    for (const auto& s : t.samples) CHECK(std::abs(s.q[0] - half_pi) < 1e-9);
}

TEST_CASE("kinetic energy is conserved along geodesics of a curved metric") {
    ManifoldModel mod = ManifoldModel::make(
        {"x", "y", "z"},
        {{"1 + y^2/5", "0", "0"}, {"0", "1 + z^2/7", "0"}, {"0", "0", "1 + x^2/9"}});
    Trajectory t = geodesic_ambient(mod, {0.1, -0.2, 0.3}, {0.7, 0.4, -0.5}, 2.0, 1e-3);
    REQUIRE(!t.error);
    double e0 = kinetic_energy(mod, t.samples.front());
    for (const auto& s : t.samples)
        CHECK(std::abs(kinetic_energy(mod, s) - e0) < 1e-8 * std::abs(e0));
}

TEST_CASE("intrinsic geodesics of the contact fixture are straight lines") {
    DistributionModel h = fixture_dist("HEIS");
    Trajectory t = geodesic_intrinsic(h, {0, 0, 0}, {1, 0, 0}, 1.0, 1e-3);
    REQUIRE(!t.error);
    for (const auto& s : t.samples) {
        CHECK(std::abs(s.q[0] - s.t) < 1e-10);
        CHECK(std::abs(s.q[1]) < 1e-12);
        CHECK(std::abs(s.q[2]) < 1e-12);
        CHECK(*s.constraint_residual < 1e-10);
    }
}

TEST_CASE("flat fixture intrinsic geodesics stay planar") {
    DistributionModel flat = fixture_dist("FLAT2");
    Trajectory t = geodesic_intrinsic(flat, {0, 0, 0.5}, {0.6, -0.8, 0}, 1.0, 1e-3);
    REQUIRE(!t.error);
    CHECK(std::abs(t.back().q[0] - 0.6) < 1e-12);
    CHECK(std::abs(t.back().q[1] + 0.8) < 1e-12);
    CHECK(std::abs(t.back().q[2] - 0.5) < 1e-12);
}

TEST_CASE("sphere intrinsic geodesics are great circles") {
    DistributionModel s = fixture_dist("SPHERE");
    Vec<double> q0 = {1, 0, 0};
    Vec<double> v0 = {0, 0.6, 0.8};  // unit tangent
    Trajectory t = geodesic_intrinsic(s, q0, v0, 1.0, 1e-3);
    REQUIRE(!t.error);
    for (const auto& smp : t.samples) {
        double r = std::sqrt(smp.q[0] * smp.q[0] + smp.q[1] * smp.q[1] + smp.q[2] * smp.q[2]);
        CHECK(std::abs(r - 1.0) < 1e-8);
    }
    annotate_curvatures(s, t);
    for (const auto& smp : t.samples) {
        CHECK(*smp.kD < 1e-6);                          // geodesic in the leaf
        CHECK(*smp.kperp == doctest::Approx(1.0).epsilon(1e-6));  // normal curvature 1/r
        CHECK(*smp.k == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("curve curvature split on hand-built trajectories") {
    SUBCASE("unit circle in the flat foliation") {
        DistributionModel flat = fixture_dist("FLAT2");
        Trajectory t;
        t.m = 3;
        t.dt = 1e-2;
        for (int i = 0; i <= 100; ++i) {
            double tt = i * 1e-2;
            TrajectorySample s;
            s.t = tt;
            s.q = {std::cos(tt), std::sin(tt), 0.2};
            s.v = {-std::sin(tt), std::cos(tt), 0};
            s.a = {-std::cos(tt), -std::sin(tt), 0};
            t.samples.push_back(std::move(s));
        }
        annotate_curvatures(flat, t);
        for (const auto& s : t.samples) {
            CHECK(*s.k == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(*s.kD == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(*s.kperp < 1e-10);
            double pyth = *s.k * *s.k - (*s.kD * *s.kD + *s.kperp * *s.kperp);
            CHECK(std::abs(pyth) < 1e-7);
        }
    }
    SUBCASE("arc-parametrized great circle on the radius-2 sphere") {
        DistributionModel sph = fixture_dist("SPHERE");
        Trajectory t;
        t.m = 3;
        t.dt = 1e-2;
        for (int i = -40; i <= 40; ++i) {
            double tt = i * 1e-2;
            TrajectorySample s;
            s.t = (i + 40) * 1e-2;
            // unit-speed circle of radius 2 in the plane spanned by e_x and
            // (0, 0.6, 0.8)
            s.q = {2 * std::cos(tt / 2), 1.2 * std::sin(tt / 2), 1.6 * std::sin(tt / 2)};
            s.v = {-std::sin(tt / 2), 0.6 * std::cos(tt / 2), 0.8 * std::cos(tt / 2)};
            s.a = {-std::cos(tt / 2) / 2, -0.3 * std::sin(tt / 2), -0.4 * std::sin(tt / 2)};
            t.samples.push_back(std::move(s));
        }
        annotate_curvatures(sph, t);
        for (const auto& s : t.samples) {
            CHECK(*s.k == doctest::Approx(0.5).epsilon(1e-9));
            CHECK(*s.kD < 1e-9);
            CHECK(*s.kperp == doctest::Approx(0.5).epsilon(1e-7));
            double pyth = *s.k * *s.k - (*s.kD * *s.kD + *s.kperp * *s.kperp);
            CHECK(std::abs(pyth) < 1e-7);
        }
    }
    SUBCASE("straight lines have no curvature") {
        DistributionModel flat = fixture_dist("FLAT2");
        Trajectory t;
        t.m = 3;
        t.dt = 1e-2;
        for (int i = 0; i <= 10; ++i) {
            TrajectorySample s;
            s.t = i * 1e-2;
            s.q = {0.3 * s.t, -0.4 * s.t, 0};
            s.v = {0.3, -0.4, 0};
            s.a = {0, 0, 0};
            t.samples.push_back(std::move(s));
        }
        annotate_curvatures(flat, t);
        for (const auto& s : t.samples) {
            CHECK(*s.k == 0.0);
            CHECK(*s.kD == 0.0);
            CHECK(*s.kperp < 1e-12);
        }
    }
}

TEST_CASE("velocities outside the distribution are rejected by the annotator") {
    DistributionModel h = fixture_dist("HEIS");
    Trajectory t;
    t.m = 3;
    t.dt = 1.0;
    TrajectorySample s;
    s.t = 0;
    s.q = {0, 0, 0};
    s.v = {0, 0, 1};  // normal direction
    s.a = {0, 0, 0};
    t.samples.push_back(s);
    CHECK_THROWS_AS(annotate_curvatures(h, t), SectionError);
}

TEST_CASE("uniform gravity parabola") {
    ManifoldModel e3 = builtin_fixture("FLAT2").manifold;
    ModelField F(VectorFieldModel::parse({"0", "0", "-1"}, e3.chart));
    Trajectory t = newton(e3, &F, {0, 0, 0}, {0, 0, 0}, 1.0, 1e-3);
    REQUIRE(!t.error);
    for (const auto& s : t.samples) CHECK(std::abs(s.q[2] + 0.5 * s.t * s.t) < 1e-10);
}

TEST_CASE("zero force reduces to the geodesic flow bit for bit") {
    ManifoldModel mod = ManifoldModel::make(
        {"x", "y"}, {{"1 + y^2/3", "0"}, {"0", "1 + x^2/2"}});
    ModelField zero(VectorFieldModel::parse({"0", "0"}, mod.chart));
    Trajectory a = newton(mod, &zero, {0.2, 0.1}, {0.5, -0.3}, 0.5, 1e-3);
    Trajectory b = geodesic_ambient(mod, {0.2, 0.1}, {0.5, -0.3}, 0.5, 1e-3);
    REQUIRE(a.samples.size() == b.samples.size());
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        CHECK(a.samples[i].q == b.samples[i].q);
        CHECK(a.samples[i].v == b.samples[i].v);
    }
}

TEST_CASE("work-energy balance for forced motion") {
    ManifoldModel mod = ManifoldModel::make(
        {"x", "y"}, {{"1 + y^2/4", "0"}, {"0", "2"}});
    ModelField F(VectorFieldModel::parse({"-y/2", "x/3"}, mod.chart));
    Trajectory t = newton(mod, &F, {0.3, -0.1}, {0.4, 0.2}, 2.0, 1e-3);
    REQUIRE(!t.error);
    // Simpson integration of the power g(F, v) along the run
    double work = 0.0;
    auto power = [&](const TrajectorySample& s) {
        return ginner(metric_at(mod, s.q), F(s.q), s.v);
    };
    const double dt = t.dt;
    for (std::size_t i = 0; i + 2 < t.samples.size(); i += 2)
        work += dt / 3.0 *
                (power(t.samples[i]) + 4.0 * power(t.samples[i + 1]) + power(t.samples[i + 2]));
    double de = kinetic_energy(mod, t.samples.back()) - kinetic_energy(mod, t.samples.front());
    CHECK(std::abs(de - work) < 1e-7);
}

TEST_CASE("knife edge follows the closed-form forward speed") {
    DistributionModel knife = fixture_dist("KNIFE");
    ModelField F(VectorFieldModel::parse({"1", "0", "0"}, knife.base.chart));
    const double period = 8.0 * std::atan(1.0);  // 2 pi, omega = 1
    Trajectory t = nonholonomic(knife, &F, {0, 0, 0}, {0, 0, 1}, period, 1e-3);
    REQUIRE(!t.error);
    for (const auto& s : t.samples) {
        double u = s.v[0] * std::cos(s.q[2]) + s.v[1] * std::sin(s.q[2]);
        CHECK(std::abs(u - std::sin(s.t)) < 1e-6);
        CHECK(*s.constraint_residual < 1e-9);
    }
}

TEST_CASE("reference multiplier integrator agrees with the engine on the knife edge") {
    DistributionModel knife = fixture_dist("KNIFE");
    ModelField F(VectorFieldModel::parse({"1", "0", "0"}, knife.base.chart));
    Trajectory t = nonholonomic(knife, &F, {0.1, -0.2, 0.3}, {0, 0, 0.7}, 2.0, 1e-3);
    auto ref = oracles::knife_reference({0.1, -0.2, 0.3, 0, 0, 0.7}, 1.0, 2.0, 1e-4);
    REQUIRE(!t.error);
    const auto& last = t.back();
    const auto& rlast = ref.back();
    CHECK(std::abs(last.q[0] - rlast.x) < 1e-9);
    CHECK(std::abs(last.q[1] - rlast.y) < 1e-9);
    CHECK(std::abs(last.q[2] - rlast.theta) < 1e-9);
}

TEST_CASE("free motion compatible with the constraint needs no reaction") {
    DistributionModel flat = fixture_dist("FLAT2");
    Trajectory t = nonholonomic(flat, nullptr, {0, 0, 0.2}, {0.3, 0.4, 0}, 1.0, 1e-3);
    REQUIRE(!t.error);
    for (const auto& s : t.samples) {
        CHECK(max_abs(*s.reaction) < 1e-12);
        CHECK(std::abs(s.q[0] - 0.3 * s.t) < 1e-12);
    }
}

TEST_CASE("totally geodesic fixture yields straight nonholonomic motion with zero reaction") {
    DistributionModel h = fixture_dist("HEIS");
    Vec<double> q0 = {0.2, -0.1, 0.3};
    Mat<double> g = metric_at(h.base, q0);
    Frame<double> fr = frame_at(h, q0);
    Vec<double> v0 = fr.E[0] + scaled(0.5, fr.E[1]);
    Trajectory t = nonholonomic(h, nullptr, q0, v0, 1.0, 1e-3);
    REQUIRE(!t.error);
    for (const auto& s : t.samples) {
        CHECK(max_abs(*s.reaction) < 1e-12);  // B(v, v) = 0 on this fixture
        CHECK(max_abs(s.q - (q0 + scaled(s.t, v0))) < 1e-9);
    }
}

TEST_CASE("geodesic comparison proposition along integrated trajectories") {
    // a curve in D is ambient-geodesic iff it is intrinsically geodesic with
    // vanishing normal term: both hold on the contact fixture, both fail on
    // the sphere foliation
    DistributionModel h = fixture_dist("HEIS");
    // v0 = 0.8 X1 + 0.6 X2 at q0
    Trajectory th = geodesic_intrinsic(h, {0.1, 0.2, 0.0}, {0.8, 0.6, -0.05}, 1.0, 1e-3);
    REQUIRE(!th.error);
    annotate_curvatures(h, th);
    for (const auto& s : th.samples) {
        CHECK(*s.k < 1e-6);
        CHECK(*s.kperp < 1e-6);
    }

    DistributionModel sph = fixture_dist("SPHERE");
    Trajectory ts = geodesic_intrinsic(sph, {1, 0, 0}, {0, 0.6, 0.8}, 1.0, 1e-3);
    REQUIRE(!ts.error);
    annotate_curvatures(sph, ts);
    bool k_large = true, kperp_large = true;
    for (const auto& s : ts.samples) {
        k_large = k_large && *s.k > 1e-6;
        kperp_large = kperp_large && *s.kperp > 1e-6;
    }
    CHECK(k_large);
    CHECK(kperp_large);
}

TEST_CASE("constraint drift stays below 1e-9 on long runs") {
    for (const auto& name : fixture_names()) {
        DistributionModel d = fixture_dist(name);
        Vec<double> q0 = name == std::string("SPHERE") ? Vec<double>{1, 0, 0}
                                                       : Vec<double>{0, 0, 0};
        Frame<double> fr = frame_at(d, q0);
        Vec<double> v0 = fr.E[0] + scaled(0.3, fr.E[1]);
        const VectorFieldModel* fm = builtin_fixture(name).force ? nullptr : nullptr;
        (void)fm;
        Trajectory t = nonholonomic(d, nullptr, q0, v0, 10.0, 1e-3);
        REQUIRE(!t.error);
        double drift = 0.0;
        for (const auto& s : t.samples) drift = std::max(drift, *s.constraint_residual);
        CHECK(drift < 1e-9);
    }
}

TEST_CASE("reaction force does no work") {
    DistributionModel knife = fixture_dist("KNIFE");
    ModelField F(VectorFieldModel::parse({"1", "0", "0"}, knife.base.chart));
    Trajectory t = nonholonomic(knife, &F, {0, 0, 0}, {0, 0, 1}, 3.0, 1e-3);
    REQUIRE(!t.error);
    double max_power = 0.0, de_vs_work = 0.0;
    Mat<double> g;
    for (const auto& s : t.samples) {
        g = metric_at(knife.base, s.q);
        max_power = std::max(max_power, std::abs(ginner(g, *s.reaction, s.v)));
    }
    CHECK(max_power < 1e-9);
    // energy law with Simpson integration of g(F, v)
    double work = 0.0;
    auto power = [&](const TrajectorySample& s) {
        return ginner(metric_at(knife.base, s.q), F(s.q), s.v);
    };
    for (std::size_t i = 0; i + 2 < t.samples.size(); i += 2)
        work += t.dt / 3.0 *
                (power(t.samples[i]) + 4.0 * power(t.samples[i + 1]) + power(t.samples[i + 2]));
    de_vs_work = std::abs(kinetic_energy(knife.base, t.samples.back()) -
                          kinetic_energy(knife.base, t.samples.front()) - work);
    CHECK(de_vs_work < 1e-6);
}

TEST_CASE("halving the step reduces the error by at least eight") {
    DistributionModel knife = fixture_dist("KNIFE");
    ModelField F(VectorFieldModel::parse({"1", "0", "0"}, knife.base.chart));
    Vec<double> q0 = {0, 0, 0}, v0 = {0, 0, 1};
    const double T = 2.0, dt = 0.05;

    Trajectory coarse = nonholonomic(knife, &F, q0, v0, T, dt);
    Trajectory half = nonholonomic(knife, &F, q0, v0, T, dt / 2);
    auto ref = oracles::knife_reference({0, 0, 0, 0, 0, 1}, 1.0, T, dt / 20);

    auto sup_err = [&](const Trajectory& t, int stride) {
        double e = 0.0;
        for (std::size_t i = 0; i < t.samples.size(); ++i) {
            const auto& r = ref[i * stride];
            e = std::max(e, std::abs(t.samples[i].q[0] - r.x));
            e = std::max(e, std::abs(t.samples[i].q[1] - r.y));
            e = std::max(e, std::abs(t.samples[i].q[2] - r.theta));
        }
        return e;
    };
    double e_coarse = sup_err(coarse, 20);
    double e_half = sup_err(half, 10);
    CHECK(e_coarse / e_half >= 8.0);
}

TEST_CASE("rank deficiency along the path aborts with a partial trajectory") {
    // second generator dies on the x = 0 plane, and the straight-line motion
    // lands on it exactly at t = 0.5
    ManifoldModel e3 = builtin_fixture("FLAT2").manifold;
    DistributionModel d = DistributionModel::make(e3, {{"1", "0", "0"}, {"0", "x", "0"}});
    Trajectory t = geodesic_intrinsic(d, {-0.5, 0, 0}, {1, 0, 0}, 1.0, 1e-3);
    REQUIRE(t.error.has_value());
    CHECK(t.samples.back().t > 0.4);
    CHECK(t.samples.back().t < 0.6);
    CHECK(t.error->find("rank deficient") != std::string::npos);
}

TEST_CASE("crossing a generator-degenerate plane between samples is harmless") {
    // the sphere fixture generators degenerate on x = 0, but the distribution
    // itself (tangent planes of the spheres) is regular there; a great circle
    // crosses between grid points and the constraint stays enforced
    DistributionModel s = fixture_dist("SPHERE");
    Trajectory t = geodesic_intrinsic(s, {1, 0, 0}, {0, 0.6, 0.8}, 2.5, 1e-3);
    REQUIRE(!t.error);
    for (const auto& smp : t.samples) {
        double r = std::sqrt(smp.q[0] * smp.q[0] + smp.q[1] * smp.q[1] + smp.q[2] * smp.q[2]);
        CHECK(std::abs(r - 1.0) < 1e-7);
        CHECK(*smp.constraint_residual < 1e-8);
    }
}

TEST_CASE("evaluation failures abort with a partial trajectory") {
    // straight x-motion runs into the domain boundary of the metric entry
    ManifoldModel mod = ManifoldModel::make(
        {"x", "y"}, {{"1", "0"}, {"0", "2 + log(2 - x)"}});
    Trajectory t = geodesic_ambient(mod, {0, 0}, {1, 0}, 10.0, 1e-2);
    REQUIRE(t.error.has_value());
    CHECK(!t.samples.empty());
    CHECK(t.samples.back().t < 10.0);
    CHECK(t.samples.back().t > 1.0);
}
