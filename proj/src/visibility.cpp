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

#include "lumicone/visibility.hpp"

#include <cmath>
#include <stdexcept>

#include "lumicone/parallel.hpp"

namespace lumicone::vis {

Scene::Scene(mesh::TriangulatedObject obj) : obj_(std::move(obj)) {
    grid_ = std::make_unique<UniformGrid>(obj_);
    diameter_ = mesh::diameter(obj_);
    eps_ray_ = 1e-7 * diameter_;
}

std::optional<RayHit> ray_first_hit(const Scene& scene, const Vec3& origin, const Vec3& direction,
                                    int exclude_face) {
    if (!is_unit(direction)) throw std::invalid_argument("ray_first_hit: direction not unit");
    auto hit = scene.grid().first_hit(origin, direction, scene.eps_ray(), exclude_face);
    if (!hit) return std::nullopt;
    return RayHit{hit->t, hit->face, origin + hit->t * direction};
}

std::optional<RayHit> shadow_retraction(const Scene& scene, const Vec3& x, int face,
                                        const Vec3& u) {
    return ray_first_hit(scene, x, u, face);
}

std::optional<RayHit> shadow_projection(const Scene& scene, const Vec3& x, int face,
                                        const Vec3& u) {
    return ray_first_hit(scene, x, -u, face);
}

bool point_direction_visible(const Scene& scene, const Vec3& x, int face, const Vec3& u) {
    if (!scene.object().point_on_face(face, x)) {
        throw std::invalid_argument("point_direction_visible: point not on the given face");
    }
    return !shadow_retraction(scene, x, face, u).has_value();
}

bool point_point_visible(const Scene& scene, const Vec3& x, const Vec3& x_prime) {
    const Vec3 d = x_prime - x;
    const double dist = d.norm();
    if (dist < 1e-12 * std::max(1.0, scene.diameter())) {
        throw std::invalid_argument("point_point_visible: coincident points");
    }
    const Vec3 dir = d / dist;
    auto hit = scene.grid().first_hit(x, dir, scene.eps_ray());
    return !(hit && hit->t < dist - scene.eps_ray());
}

double pointwise_visibility(const Scene& scene, const Vec3& x, int face, int n_quadrature) {
    if (n_quadrature < 64) throw std::invalid_argument("pointwise_visibility: n_quadrature < 64");
    if (!scene.object().point_on_face(face, x)) {
        throw std::invalid_argument("pointwise_visibility: point not on the given face");
    }
    const auto dirs = render::cosine_hemisphere(scene.object().normal(face), n_quadrature);
    int visible = 0;
    for (const auto& u : dirs) {
        if (!scene.grid().first_hit(x, u, scene.eps_ray(), face)) ++visible;
    }
    return static_cast<double>(visible) / n_quadrature;
}

namespace {

bool lands_on_face_interior(const Scene& scene, const Vec3& origin, const Vec3& dir) {
    auto hit = scene.grid().first_hit(origin, dir, scene.eps_ray());
    if (!hit) return false;
    const double eps = 1e-9;
    return hit->bary_s > eps && hit->bary_t > eps && hit->bary_s + hit->bary_t < 1.0 - eps;
}

}  // namespace

ShadowEdgeSet shadowing_edges(const Scene& scene, const mesh::EdgeTable& edges, const Vec3& u,
                              int samples_per_edge) {
    if (samples_per_edge < 3) throw std::invalid_argument("shadowing_edges: samples_per_edge < 3");
    const auto& obj = scene.object();
    ShadowEdgeSet result;
    result.flagged.assign(edges.edges.size(), 0);
    const Vec3 toward_shadow = -u;
    for (size_t e = 0; e < edges.edges.size(); ++e) {
        const auto& edge = edges.edges[e];
        if (edge.interior()) {
            const double c0 = obj.normal(edge.adjacent_faces[0]).dot(u);
            const double c1 = obj.normal(edge.adjacent_faces[1]).dot(u);
            if (!(c0 * c1 < 0)) continue;  // not a silhouette edge
        }
        // Boundary edges of an open surface occlude from either side, so they
        // are always silhouette candidates.
        const Vec3 a = obj.vertices()[edge.v0];
        const Vec3 b = obj.vertices()[edge.v1];
        bool casts = false;
        for (int s = 0; s < samples_per_edge && !casts; ++s) {
            const double f = (s + 0.5) / samples_per_edge;
            casts = lands_on_face_interior(scene, a + f * (b - a), toward_shadow);
        }
        if (casts) {
            result.flagged[e] = 1;
            result.total_length += edge.length;
        }
    }
    return result;
}

DefectReport convexity_defects(const Scene& scene, const mesh::EdgeTable& edges,
                               const std::vector<Vec3>& direction_grid,
                               const DefectOptions& options) {
    if (direction_grid.empty()) throw std::invalid_argument("convexity_defects: empty grid");
    DefectReport report;
    report.options = options;
    report.n_directions = static_cast<int>(direction_grid.size());
    report.chi_by_direction.assign(direction_grid.size(), 0.0);

    parallel_for(direction_grid.size(), [&](size_t i) {
        report.chi_by_direction[i] =
            shadowing_edges(scene, edges, direction_grid[i], options.samples_per_edge)
                .total_length;
    });
    for (double len : report.chi_by_direction) report.chi_star = std::max(report.chi_star, len);

    const auto samples = render::sample_surface(scene.object(), options.surface_samples_per_face);
    std::vector<double> nu(samples.size(), 1.0);
    parallel_for(static_cast<size_t>(samples.size()), [&](size_t i) {
        nu[i] = pointwise_visibility(scene, samples.position[i], samples.face[i],
                                     options.n_quadrature);
    });
    for (double v : nu) report.nu_star = std::min(report.nu_star, v);
    return report;
}

mesh::ObjectStats compute_stats(const Scene& scene, const DefectReport& defects) {
    mesh::ObjectStats stats;
    const auto& obj = scene.object();
    stats.rho_star = 0;
    for (double a : obj.albedo()) stats.rho_star = std::max(stats.rho_star, a);
    stats.nu_star = defects.nu_star;
    stats.chi_star = defects.chi_star;
    stats.surface_area = mesh::surface_area(obj);
    stats.diameter = scene.diameter();
    double depth = std::numeric_limits<double>::infinity();
    for (const auto& v : obj.vertices()) depth = std::min(depth, v.z());
    stats.depth = depth;
    stats.defect_grid_directions = defects.n_directions;
    stats.defect_surface_samples = defects.options.surface_samples_per_face;
    stats.defect_quadrature = defects.options.n_quadrature;
    stats.defect_edge_samples = defects.options.samples_per_edge;
    return stats;
}

}  // namespace lumicone::vis
