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

#include <optional>
#include <vector>

#include "lumicone/mesh.hpp"

namespace lumicone::vis {

struct TriHit {
    double t;
    int face;
    double bary_s;  // weight of vertex 1
    double bary_t;  // weight of vertex 2
};

/// Watertight-enough Moller-Trumbore: inclusive barycentric bounds, rays
/// nearly parallel to the face plane (|det| < 1e-14) count as a miss.
std::optional<TriHit> intersect_triangle(const Vec3& v0, const Vec3& v1, const Vec3& v2,
                                         const Vec3& origin, const Vec3& dir, int face,
                                         double t_min);

/// Uniform spatial hash over the mesh bounding box with 3D-DDA traversal.
/// Immutable after construction; shared read-only across threads.
class UniformGrid {
public:
    explicit UniformGrid(const mesh::TriangulatedObject& obj);

    /// First hit with t > t_min, skipping exclude_face (-1 for none).
    std::optional<TriHit> first_hit(const Vec3& origin, const Vec3& dir, double t_min,
                                    int exclude_face = -1) const;

    /// Exhaustive reference used by tests and as a fallback for tiny meshes.
    std::optional<TriHit> first_hit_brute(const Vec3& origin, const Vec3& dir, double t_min,
                                          int exclude_face = -1) const;

    double mesh_diameter_hint() const { return diag_; }

private:
    const mesh::TriangulatedObject& obj_;
    Vec3 lo_, hi_;
    double diag_ = 0;
    int nx_ = 1, ny_ = 1, nz_ = 1;
    Vec3 cell_size_;
    std::vector<std::vector<int>> cells_;

    int cell_index(int ix, int iy, int iz) const { return (iz * ny_ + iy) * nx_ + ix; }
};

}  // namespace lumicone::vis
