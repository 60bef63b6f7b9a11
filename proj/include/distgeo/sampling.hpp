#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "distgeo/linalg.hpp"

namespace distgeo {

// Where and how densely to sample a scenario's chart domain.
struct SampleSpec {
    std::vector<std::array<double, 2>> box;  // per-coordinate [lo, hi]
    std::uint64_t seed = 0;
    int count = 64;
};

// Quasi-random (Halton) points in the box; the seed offsets the sequence so
// distinct seeds give distinct but reproducible point sets.
std::vector<Vec<double>> sample_box(const SampleSpec& spec);

// Deterministic parallel map: results keyed by index, thread count capped by
// the DISTGEO_THREADS environment variable.
void parallel_for(int n, const std::function<void(int)>& body);

}  // namespace distgeo
