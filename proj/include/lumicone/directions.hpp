// Copyright 2026 The Lumicone Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <random>
#include <utility>
#include <vector>

#include "lumicone/geometry.hpp"

namespace lumicone::render {

inline Vec3 spherical_dir(double theta, double phi) {
    return {std::cos(theta) * std::sin(phi), std::sin(theta) * std::sin(phi), std::cos(phi)};
}

/// Uniform theta-phi grid with midpoint polar angles (poles never repeat) and
/// sin(phi) area weights normalized to sum exactly to one.
struct DirectionGrid {
    std::vector<Vec3> directions;  // row-major: phi rows of n_theta entries
    std::vector<double> weights;
    int n_phi = 0;
    int n_theta = 0;

    int index(int i_phi, int i_theta) const { return i_phi * n_theta + i_theta; }

    /// Neighbor pairs in theta (wrapping) and phi.
    std::vector<std::pair<int, int>> adjacent_pairs() const;
    double max_adjacent_separation() const;
};

DirectionGrid uniform_sphere_grid(int n_phi, int n_theta);

/// Desk-scale version of the reference 360 x 720 half-degree grid: steps are
/// multiplied by `divisor` (e.g. 30 gives a 12 x 24 grid).
DirectionGrid grid_from_divisor(int divisor);

/// Uniform direction on the sphere.
Vec3 random_direction(std::mt19937_64& rng);

/// Rejection-sampled uniform direction with u3 restricted to [lo, hi].
Vec3 random_band_direction(std::mt19937_64& rng, double lo, double hi);

}  // namespace lumicone::render
