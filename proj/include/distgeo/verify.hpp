#pragma once

#include <string>
#include <vector>

#include "distgeo/scenario.hpp"

namespace distgeo {

struct InvariantResult {
    std::string name;
    double max_residual = 0.0;
    double tol = 0.0;
    bool pass = false;
};

// Runs the numeric identity battery of every module over sampled points of
// the scenario box: ambient connection identities, frame and projection
// checks, both connection routes, shape-operator routes and the Lie/exterior
// derivative decomposition, the curvature dual path and the Gauss identity,
// classifier route agreement. Distribution checks are skipped when the
// scenario has no distribution.
std::vector<InvariantResult> run_verify(const ScenarioModel& scenario, int samples,
                                        std::uint64_t seed);

}  // namespace distgeo
