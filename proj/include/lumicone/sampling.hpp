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

#include <vector>

#include "lumicone/mesh.hpp"

namespace lumicone::render {

/// Area-weighted point set discretizing the surface measure. Weights per
/// sample equal face_area / samples_per_face and sum to the surface area.
struct SampleSet {
    std::vector<Vec3> position;
    std::vector<int> face;
    std::vector<double> weight;
    double total_area = 0;
    int samples_per_face = 0;

    int size() const { return static_cast<int>(position.size()); }
};

/// Stratified per-face samples. Perfect-square counts use a triangular grid
/// (isotropic strata); other counts use equal-area strips that advance from
/// the (v0,v1) edge of each face toward v2, which lets callers steer the
/// strata direction through the face winding.
SampleSet sample_surface(const mesh::TriangulatedObject& obj, int samples_per_face);

/// Deterministic cosine-weighted hemisphere directions around unit normal n
/// (golden-angle spiral, equal weights 1/n_points).
std::vector<Vec3> cosine_hemisphere(const Vec3& n, int n_points);

}  // namespace lumicone::render
