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

#include <memory>
#include <optional>
#include <vector>

#include "lumicone/accel.hpp"
#include "lumicone/mesh.hpp"
#include "lumicone/sampling.hpp"

namespace lumicone::vis {

struct RayHit {
    double t = 0;
    int face_index = -1;
    Vec3 hit_point = Vec3::Zero();
};

/// Mesh plus its ray-cast acceleration structure and the self-intersection
/// offset (1e-7 of the diameter). Immutable; share by const reference.
class Scene {
public:
    explicit Scene(mesh::TriangulatedObject obj);
    Scene(const Scene&) = delete;
    Scene& operator=(const Scene&) = delete;

    const mesh::TriangulatedObject& object() const { return obj_; }
    const UniformGrid& grid() const { return *grid_; }
    double eps_ray() const { return eps_ray_; }
    double diameter() const { return diameter_; }

private:
    mesh::TriangulatedObject obj_;
    std::unique_ptr<UniformGrid> grid_;
    double diameter_;
    double eps_ray_;
};

/// First intersection with t > eps_ray, skipping exclude_face.
std::optional<RayHit> ray_first_hit(const Scene& scene, const Vec3& origin, const Vec3& direction,
                                    int exclude_face = -1);

/// First surface point from x toward the light (exists iff x is occluded).
std::optional<RayHit> shadow_retraction(const Scene& scene, const Vec3& x, int face,
                                        const Vec3& u);
/// First surface point shadowed by x (along -u).
std::optional<RayHit> shadow_projection(const Scene& scene, const Vec3& x, int face,
                                        const Vec3& u);

/// nu(x,u): the open ray from x toward u meets nothing else on the surface.
/// Throws if x does not lie on the given face.
bool point_direction_visible(const Scene& scene, const Vec3& x, int face, const Vec3& u);

/// V(x,x'): the open segment between two surface points is unobstructed.
/// Throws on coincident points.
bool point_point_visible(const Scene& scene, const Vec3& x, const Vec3& x_prime);

/// Cosine-weighted fraction of unoccluded hemisphere directions at x
/// (deterministic spiral quadrature; n_quadrature >= 64).
double pointwise_visibility(const Scene& scene, const Vec3& x, int face, int n_quadrature);

struct ShadowEdgeSet {
    std::vector<char> flagged;  // parallel to edge_table.edges
    double total_length = 0;
};

/// Edges that cast shadows under light direction u: silhouette candidates
/// (interior edges with opposite-facing adjacent faces, plus all boundary
/// edges) whose sampled shadow projections land on some face interior.
/// Counts full flagged-edge lengths, an upper estimate at this resolution.
ShadowEdgeSet shadowing_edges(const Scene& scene, const mesh::EdgeTable& edges, const Vec3& u,
                              int samples_per_edge);

struct DefectOptions {
    int surface_samples_per_face = 16;
    int n_quadrature = 256;
    int samples_per_edge = 5;
};

struct DefectReport {
    double chi_star = 0;
    double nu_star = 1;
    std::vector<double> chi_by_direction;
    DefectOptions options;
    int n_directions = 0;
};

/// Estimates (chi_star, nu_star) over a finite direction grid and a finite
/// surface sample set; estimates are monotone in the grid resolutions.
DefectReport convexity_defects(const Scene& scene, const mesh::EdgeTable& edges,
                               const std::vector<Vec3>& direction_grid,
                               const DefectOptions& options);

/// ObjectStats assembled from the defect estimates.
mesh::ObjectStats compute_stats(const Scene& scene, const DefectReport& defects);

}  // namespace lumicone::vis
