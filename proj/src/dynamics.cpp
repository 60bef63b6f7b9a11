#include "distgeo/dynamics.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>

namespace distgeo {

namespace {

struct State {
    Vec<double> q, v;
};

State axpy_state(const State& s, double c, const State& d) {
    State out = s;
    for (std::size_t i = 0; i < out.q.size(); ++i) {
        out.q[i] += c * d.q[i];
        out.v[i] += c * d.v[i];
    }
    return out;
}

using Rhs = std::function<State(const State&)>;
using PostStep = std::function<void(State&)>;
using Record = std::function<void(const State&, TrajectorySample&)>;

// Fixed-step RK4 on (q, v). Evaluation failures abort with the partial
// trajectory plus an error record.
Trajectory integrate(int m, const Vec<double>& q0, const Vec<double>& v0, double T, double dt,
                     const Rhs& rhs, const PostStep& post_step, const Record& record) {
    if (!(dt > 0.0)) throw InputError("dt must be positive");
    if (!(T >= dt)) throw InputError("T must be at least dt");
    if (static_cast<int>(q0.size()) != m || static_cast<int>(v0.size()) != m)
        throw InputError("initial state has wrong dimension");

    Trajectory traj;
    traj.m = m;
    traj.dt = dt;
    const long long steps = std::llround(T / dt);

    State s{q0, v0};
    auto push_sample = [&](const State& st, double time) {
        TrajectorySample smp;
        smp.t = time;
        smp.q = st.q;
        smp.v = st.v;
        record(st, smp);
        traj.samples.push_back(std::move(smp));
    };

    try {
        push_sample(s, 0.0);
        for (long long i = 0; i < steps; ++i) {
            State k1 = rhs(s);
            State k2 = rhs(axpy_state(s, 0.5 * dt, k1));
            State k3 = rhs(axpy_state(s, 0.5 * dt, k2));
            State k4 = rhs(axpy_state(s, dt, k3));
            for (std::size_t k = 0; k < s.q.size(); ++k) {
                s.q[k] += dt / 6.0 * (k1.q[k] + 2.0 * (k2.q[k] + k3.q[k]) + k4.q[k]);
                s.v[k] += dt / 6.0 * (k1.v[k] + 2.0 * (k2.v[k] + k3.v[k]) + k4.v[k]);
            }
            if (post_step) post_step(s);
            push_sample(s, static_cast<double>(i + 1) * dt);
        }
    } catch (const Error& e) {
        traj.error = e.what();
    }
    return traj;
}

}  // namespace

Trajectory newton(const ManifoldModel& mod, const VectorField* force, const Vec<double>& q0,
                  const Vec<double>& v0, double T, double dt) {
    const int m = mod.dim();
    auto rhs = [&](const State& s) {
        std::vector<double> gamma = christoffel_at(mod, s.q);
        Vec<double> a = -christoffel_apply(gamma, m, s.v, s.v);
        if (force) a = a + (*force)(s.q);
        return State{s.v, std::move(a)};
    };
    auto record = [&](const State& s, TrajectorySample& smp) {
        // nabla_v v = v' + Gamma(v, v) evaluated on the continuous equation
        smp.a = force ? (*force)(s.q) : Vec<double>(s.q.size(), 0.0);
    };
    return integrate(m, q0, v0, T, dt, rhs, nullptr, record);
}

Trajectory geodesic_ambient(const ManifoldModel& mod, const Vec<double>& q0,
                            const Vec<double>& v0, double T, double dt) {
    return newton(mod, nullptr, q0, v0, T, dt);
}

namespace {

// Multipliers keep d/dt g(v, Z_j) = 0: lambda_j = -g(A, Z_j) - D_v z_j with
// z_j(u) = g_u(v, Z_j(u)) and A the unconstrained acceleration. Returns the
// reaction sum lambda_j Z_j and fills the constrained acceleration.
Vec<double> constrained_reaction(const DistributionModel& dist, const VectorField* force,
                                 const State& s, Vec<double>& accel_out) {
    const int m = dist.dim();
    Mat<double> g = metric_at(dist.base, s.q);
    Frame<double> fr = frame_at(dist, s.q);

    std::vector<double> gamma = christoffel_at(dist.base, s.q);
    Vec<double> a = -christoffel_apply(gamma, m, s.v, s.v);
    if (force) a = a + (*force)(s.q);

    Vec<double> reaction(s.q.size(), 0.0);
    for (int j = 0; j < dist.corank(); ++j) {
        FrameField Zj(dist, FrameField::Span::Perp, j);
        auto zpair = [&](const auto& u) {
            using S = std::decay_t<decltype(u[0])>;
            auto gu = metric_at(dist.base, u);
            Vec<S> vlift(u.size());
            for (std::size_t k = 0; k < u.size(); ++k) vlift[k] = S(s.v[k]);
            return ginner(gu, vlift, Zj(u));
        };
        double drift = dir_scalar(zpair, s.q, s.v).second;
        double lambda = -ginner(g, a, fr.Z[j]) - drift;
        axpy(lambda, fr.Z[j], reaction);
    }
    accel_out = a + reaction;
    return reaction;
}

}  // namespace

Trajectory nonholonomic(const DistributionModel& dist, const VectorField* force,
                        const Vec<double>& q0, const Vec<double>& v0, double T, double dt) {
    const int m = dist.dim();
    if (static_cast<int>(q0.size()) == m && static_cast<int>(v0.size()) == m) {
        Mat<double> g = metric_at(dist.base, q0);
        Frame<double> fr = frame_at(dist, q0);
        double r = gnorm(g, project_perp(g, fr, v0));
        if (!(r < kSectionTol))
            throw SectionError("initial velocity is not in the distribution (residual " +
                                   std::to_string(r) + ")",
                               q0);
    }

    auto rhs = [&](const State& s) {
        Vec<double> accel;
        constrained_reaction(dist, force, s, accel);
        return State{s.v, std::move(accel)};
    };
    auto post_step = [&](State& s) {
        Mat<double> g = metric_at(dist.base, s.q);
        Frame<double> fr = frame_at(dist, s.q);
        s.v = project_D(g, fr, s.v);
    };
    auto record = [&](const State& s, TrajectorySample& smp) {
        Mat<double> g = metric_at(dist.base, s.q);
        Frame<double> fr = frame_at(dist, s.q);
        Vec<double> accel;
        Vec<double> reaction = constrained_reaction(dist, force, s, accel);
        // nabla_v v = v' + Gamma(v,v) = F + reaction on the continuous equation
        smp.a = force ? (*force)(s.q) + reaction : reaction;
        smp.reaction = std::move(reaction);
        double drift = 0.0;
        for (const auto& z : fr.Z) drift = std::max(drift, std::abs(ginner(g, s.v, z)));
        smp.constraint_residual = drift;
    };
    return integrate(m, q0, v0, T, dt, rhs, post_step, record);
}

Trajectory geodesic_intrinsic(const DistributionModel& dist, const Vec<double>& q0,
                              const Vec<double>& v0, double T, double dt) {
    return nonholonomic(dist, nullptr, q0, v0, T, dt);
}

void annotate_curvatures(const ManifoldModel& mod, Trajectory& traj) {
    for (auto& smp : traj.samples) {
        Mat<double> g = metric_at(mod, smp.q);
        smp.k = gnorm(g, smp.a);
    }
}

void annotate_curvatures(const DistributionModel& dist, Trajectory& traj, double section_tol) {
    const int n = dist.rank();
    for (auto& smp : traj.samples) {
        Mat<double> g = metric_at(dist.base, smp.q);
        Frame<double> fr = frame_at(dist, smp.q);

        double residual = gnorm(g, project_perp(g, fr, smp.v));
        if (!(residual < section_tol))
            throw SectionError("trajectory velocity is not in the distribution (residual " +
                                   std::to_string(residual) + ")",
                               smp.q);

        smp.k = gnorm(g, smp.a);
        smp.kD = gnorm(g, project_D(g, fr, smp.a));

        // normal curvature through B(v, v) with v extended as a section of D
        // (constant coefficients on the orthonormal frame), independent of
        // the recorded acceleration
        std::vector<std::unique_ptr<FrameField>> fields;
        std::vector<std::pair<double, const VectorField*>> terms;
        for (int a = 0; a < n; ++a) {
            fields.push_back(std::make_unique<FrameField>(dist, FrameField::Span::D, a));
            terms.emplace_back(ginner(g, smp.v, fr.E[a]), fields.back().get());
        }
        LinCombField vfield(dist.dim(), std::move(terms));
        Vec<double> bvv = project_perp(g, fr, cov_deriv(dist.base, vfield, vfield, smp.q));
        smp.kperp = gnorm(g, bvv);
    }
}

void write_csv(const Trajectory& traj, std::ostream& os) {
    const int m = traj.m;
    os << "t";
    for (int i = 0; i < m; ++i) os << ",q" << i;
    for (int i = 0; i < m; ++i) os << ",v" << i;
    os << ",k,kD,kperp";
    for (int i = 0; i < m; ++i) os << ",R" << i;
    os << ",constraint_residual\n";

    char buf[40];
    auto num = [&](double x) {
        std::snprintf(buf, sizeof buf, "%.17g", x);
        os << buf;
    };
    for (const auto& smp : traj.samples) {
        num(smp.t);
        for (int i = 0; i < m; ++i) { os << ','; num(smp.q[i]); }
        for (int i = 0; i < m; ++i) { os << ','; num(smp.v[i]); }
        os << ',';
        if (smp.k) num(*smp.k);
        os << ',';
        if (smp.kD) num(*smp.kD);
        os << ',';
        if (smp.kperp) num(*smp.kperp);
        for (int i = 0; i < m; ++i) {
            os << ',';
            if (smp.reaction) num((*smp.reaction)[i]);
        }
        os << ',';
        if (smp.constraint_residual) num(*smp.constraint_residual);
        os << '\n';
    }
}

}  // namespace distgeo
