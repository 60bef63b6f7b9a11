#pragma once

#include <optional>
#include <string>

#include "distgeo/dist.hpp"
#include "distgeo/sampling.hpp"

#include "json.hpp"

namespace distgeo {

// B(X, Y) = pi_perp(nabla_X Y) with its symmetric/skew split. The skew part
// measures non-involutivity, the symmetric part total geodesy; they are
// independent, which is what the classifiers below exercise.
struct SffValue {
    Vec<double> p;
    Vec<double> value;
    Vec<double> sym;   // (B(X,Y) + B(Y,X)) / 2
    Vec<double> skew;  // (B(X,Y) - B(Y,X)) / 2
};

SffValue sff(const DistributionModel& dist, const VectorField& X, const VectorField& Y,
             const Vec<double>& p);

// Shape operator S(X, Y, Z) = g(B(X,Y), Z). Three algebraically equal routes:
//   g(nabla_X Y, Z),  -g(nabla_X Z, Y),  g([Z,X] - nabla_Z X, Y).
// The value is tensorial, so the plain operator accepts any Z normal at p;
// the alternative routes differentiate Z and therefore demand a field that
// annihilates D to first order.
struct ShapeRoutes {
    double via_nabla_xy;
    double via_nabla_xz;
    double via_lie;
};

ShapeRoutes shape_operator_routes(const DistributionModel& dist, const VectorField& X,
                                  const VectorField& Y, const VectorField& Z,
                                  const Vec<double>& p);

// Primary route; with `check_routes` the other two are evaluated and must
// agree within 1e-9.
double shape_operator(const DistributionModel& dist, const VectorField& X, const VectorField& Y,
                      const VectorField& Z, const Vec<double>& p, bool check_routes = false);

// Symmetric/skew values of B_Z alongside their independent AD counterparts
//   sym  = (S(X,Y,Z) + S(Y,X,Z))/2   vs  lie_check = -(L_Z g)(X,Y)/2
//   skew = (S(X,Y,Z) - S(Y,X,Z))/2   vs  ext_check = -(d i_Z g)(X,Y)/2
struct BzDecomposition {
    double sym_value;
    double skew_value;
    double lie_check;
    double ext_check;
};

BzDecomposition bz_decomposition(const DistributionModel& dist, const VectorField& Z,
                                 const VectorField& X, const VectorField& Y,
                                 const Vec<double>& p);

// Dual shape operator on the annihilator: S*(X, Y, alpha) = alpha(nabla_X Y),
// equal to S(X, Y, sharp(alpha)). `alpha` supplies covector components.
double dual_shape(const DistributionModel& dist, const VectorField& X, const VectorField& Y,
                  const VectorField& alpha, const Vec<double>& p);

// Weingarten map W_Z(X) = -nabla_X Z.
Vec<double> weingarten(const DistributionModel& dist, const VectorField& Z, const VectorField& X,
                       const Vec<double>& p);

// Symmetric product nabla_X Y + nabla_Y X (ambient operation).
Vec<double> symmetric_product(const ManifoldModel& mod, const VectorField& X,
                              const VectorField& Y, const Vec<double>& p);

// Numerical classification verdict with a reproducible witness for failures.
struct Witness {
    Vec<double> point;
    std::vector<int> frame_indices;
    double residual = 0.0;
};

struct ClassificationReport {
    std::string property;
    std::string verdict;  // "holds" | "fails" | "inconclusive"
    double max_residual = 0.0;
    std::optional<Witness> witness;
    int samples = 0;
    double tol = 0.0;

    nlohmann::json to_json() const;
};

// Samples frame pairs over the box; the skew-part criterion is cross-checked
// against the bracket-based Frobenius test and both routes must agree.
ClassificationReport is_involutive(const DistributionModel& dist, const SampleSpec& spec,
                                   double tol);

// Criterion max |B^s| cross-checked against closure of the symmetric product
// and of nabla_X X; all three routes must agree.
ClassificationReport is_totally_geodesic(const DistributionModel& dist, const SampleSpec& spec,
                                         double tol);

// Corank-1 scalar fundamental form b(X,Y) = S(X,Y,N) on the orthonormal
// frame, with the unit normal sign-gauged so its first significant component
// is positive. Principal curvatures are the eigenvalues of the symmetric
// part (the frame is orthonormal, so no further metric contraction).
struct HypersurfaceForm {
    Vec<double> normal;
    Mat<double> b;
    Mat<double> b_sym;
    Mat<double> b_skew;
    std::vector<double> principal_curvatures;        // ascending
    std::vector<Vec<double>> principal_directions;   // tangent vectors, matching order
};

HypersurfaceForm hypersurface_form(const DistributionModel& dist, const Vec<double>& p);

}  // namespace distgeo
