#pragma once

#include <optional>
#include <ostream>
#include <string>

#include "distgeo/dist.hpp"

namespace distgeo {

struct TrajectorySample {
    double t = 0.0;
    Vec<double> q;
    Vec<double> v;
    Vec<double> a;  // covariant acceleration nabla_v v along the trajectory
    std::optional<double> k, kD, kperp;
    std::optional<Vec<double>> reaction;
    std::optional<double> constraint_residual;  // max_j |g(v, Z_j)|
};

struct Trajectory {
    int m = 0;
    double dt = 0.0;
    std::vector<TrajectorySample> samples;
    std::optional<std::string> error;  // set when integration aborted early

    const TrajectorySample& back() const { return samples.back(); }
};

// RK4 on (q' = v, v' = -Gamma(v,v) + F). F may be null (geodesic flow).
Trajectory newton(const ManifoldModel& mod, const VectorField* force, const Vec<double>& q0,
                  const Vec<double>& v0, double T, double dt);

Trajectory geodesic_ambient(const ManifoldModel& mod, const Vec<double>& q0,
                            const Vec<double>& v0, double T, double dt);

// Constrained flow: v' = -Gamma(v,v) + F + sum_j lambda_j Z_j with the
// multipliers chosen at every stage so g(v, Z_j) stays zero to first order;
// after each full step the velocity is re-projected onto D_q. Reaction force
// and constraint residual are recorded per sample.
Trajectory nonholonomic(const DistributionModel& dist, const VectorField* force,
                        const Vec<double>& q0, const Vec<double>& v0, double T, double dt);

Trajectory geodesic_intrinsic(const DistributionModel& dist, const Vec<double>& q0,
                              const Vec<double>& v0, double T, double dt);

// Curvature scalars along a trajectory. The ambient overload fills k only;
// the distribution overload also fills the geodesic and normal curvatures
// (velocities must lie in D sample by sample) and checks the Pythagorean
// split against an independently computed B(v, v).
void annotate_curvatures(const ManifoldModel& mod, Trajectory& traj);
void annotate_curvatures(const DistributionModel& dist, Trajectory& traj,
                         double section_tol = kSectionTol);

// CSV schema: t,q0..q{m-1},v0..v{m-1},k,kD,kperp,R0..R{m-1},constraint_residual
// with absent columns left empty.
void write_csv(const Trajectory& traj, std::ostream& os);

}  // namespace distgeo
