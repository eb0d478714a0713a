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

#include "lumicone/directions.hpp"

#include <stdexcept>

namespace lumicone::render {

std::vector<std::pair<int, int>> DirectionGrid::adjacent_pairs() const {
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n_phi; ++i) {
        for (int j = 0; j < n_theta; ++j) {
            if (n_theta > 1) pairs.emplace_back(index(i, j), index(i, (j + 1) % n_theta));
            if (i + 1 < n_phi) pairs.emplace_back(index(i, j), index(i + 1, j));
        }
    }
    return pairs;
}

double DirectionGrid::max_adjacent_separation() const {
    double m = 0;
    for (const auto& [a, b] : adjacent_pairs()) {
        m = std::max(m, (directions[a] - directions[b]).norm());
    }
    return m;
}

DirectionGrid uniform_sphere_grid(int n_phi, int n_theta) {
    if (n_phi < 1 || n_theta < 1) throw std::invalid_argument("uniform_sphere_grid: empty grid");
    DirectionGrid grid;
    grid.n_phi = n_phi;
    grid.n_theta = n_theta;
    grid.directions.reserve(static_cast<size_t>(n_phi) * n_theta);
    grid.weights.reserve(grid.directions.capacity());
    double wsum = 0;
    for (int i = 0; i < n_phi; ++i) {
        const double phi = (i + 0.5) * M_PI / n_phi;
        for (int j = 0; j < n_theta; ++j) {
            const double theta = j * 2.0 * M_PI / n_theta;
            grid.directions.push_back(spherical_dir(theta, phi));
            grid.weights.push_back(std::sin(phi));
            wsum += std::sin(phi);
        }
    }
    for (auto& w : grid.weights) w /= wsum;
    return grid;
}

DirectionGrid grid_from_divisor(int divisor) {
    if (divisor < 1 || 360 % divisor != 0) {
        throw std::invalid_argument("grid divisor must divide 360");
    }
    return uniform_sphere_grid(360 / divisor, 720 / divisor);
}

Vec3 random_direction(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> uz(-1.0, 1.0);
    std::uniform_real_distribution<double> ut(0.0, 2.0 * M_PI);
    const double z = uz(rng);
    const double theta = ut(rng);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    return {r * std::cos(theta), r * std::sin(theta), z};
}

Vec3 random_band_direction(std::mt19937_64& rng, double lo, double hi) {
    if (lo < -1.0 || hi > 1.0 || lo >= hi) throw std::invalid_argument("bad u3 band");
    for (int tries = 0; tries < 100000; ++tries) {
        const Vec3 u = random_direction(rng);
        if (u.z() >= lo && u.z() <= hi) return u;
    }
    throw std::runtime_error("band rejection sampling failed");
}

}  // namespace lumicone::render
