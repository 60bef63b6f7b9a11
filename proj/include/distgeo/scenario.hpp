#pragma once

#include <array>
#include <optional>
#include <string>

#include "distgeo/dist.hpp"
#include "distgeo/sampling.hpp"

namespace distgeo {

// Named tolerance overrides; defaults match the engine-wide conventions.
struct Tolerances {
    double identity = 1e-8;   // residual bound for numeric identity checks
    double section = 1e-8;    // section-membership bound
    double frame = 1e-10;     // frame orthonormality bound
    double plane = 1e-12;     // degenerate-plane Gram bound
};

// Fully validated problem description: manifold, optional distribution and
// force, sampling box and seed, tolerance overrides.
struct ScenarioModel {
    ManifoldModel manifold;
    std::optional<DistributionModel> distribution;
    std::optional<VectorFieldModel> force;
    std::optional<std::vector<std::array<double, 2>>> box;
    std::uint64_t seed = 0;
    Tolerances tol;

    SampleSpec sample_spec(int count) const;
};

ScenarioModel load_scenario(const std::string& path);
ScenarioModel load_scenario_text(const std::string& text);
std::string write_scenario(const ScenarioModel& s);

// FLAT2, HEIS, SPHERE, KNIFE.
ScenarioModel builtin_fixture(const std::string& name);
const std::vector<std::string>& fixture_names();

// Structural equality (expression trees, numbers, layout); used by the
// save/load round-trip contract.
bool structurally_equal(const ScenarioModel& a, const ScenarioModel& b);

}  // namespace distgeo
