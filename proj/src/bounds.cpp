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

#include "lumicone/bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace lumicone::bounds {

namespace {

void check_separation(double separation) {
    if (separation < 0 || separation > std::sqrt(2.0) + 1e-12) {
        throw std::invalid_argument("separation outside [0, sqrt(2)]");
    }
}

}  // namespace

double direct_illumination_bound(const mesh::ObjectStats& stats, double separation, bool convex) {
    check_separation(separation);
    const double r2 = stats.rho_star * stats.rho_star;
    if (convex) return r2 * stats.surface_area * separation * separation;
    return 2.0 * r2 * stats.surface_area * separation * separation +
           32.0 * std::sqrt(2.0) * r2 * stats.diameter * stats.chi_star * separation;
}

InterreflectionBound interreflection_norm_bound(double rho_star, double nu_star) {
    if (rho_star <= 0 || rho_star > 1 || nu_star < 0 || nu_star > 1) {
        throw std::invalid_argument("interreflection_norm_bound: inputs out of range");
    }
    InterreflectionBound b;
    b.norm = rho_star * (1.0 - nu_star);
    if (b.norm >= 1.0) {
        throw std::runtime_error("interreflection resolvent undefined: rho*(1-nu) >= 1");
    }
    b.resolvent = 1.0 / (1.0 - b.norm);
    return b;
}

double sensor_norm_bound(const render::Camera& camera, double depth) {
    if (depth <= 0) throw std::invalid_argument("sensor_norm_bound: depth must be positive");
    return std::pow(2.0, 0.25) * camera.beta() * camera.focal_length * camera.pixel_side / depth;
}

double perturbation_prefactor(const mesh::ObjectStats& stats, const render::Camera& camera) {
    const InterreflectionBound t = interreflection_norm_bound(stats.rho_star, stats.nu_star);
    return sensor_norm_bound(camera, stats.depth) * stats.rho_star * t.resolvent;
}

double point_image_perturbation_bound(const mesh::ObjectStats& stats,
                                      const render::Camera& camera, double separation) {
    check_separation(separation);
    const double c = perturbation_prefactor(stats, camera);
    const double inner = 2.0 * stats.surface_area * separation * separation +
                         32.0 * std::sqrt(2.0) * stats.diameter * stats.chi_star * separation;
    return c * std::sqrt(inner);
}

TightnessReport tightness_ratio(const render::RenderContext& ctx,
                                const render::DirectionGrid& grid,
                                const mesh::ObjectStats& stats) {
    const auto images = render::point_images(ctx, grid.directions);
    TightnessReport report;
    for (const auto& [i, j] : grid.adjacent_pairs()) {
        PairBound pair;
        pair.i = i;
        pair.j = j;
        pair.separation = (grid.directions[i] - grid.directions[j]).norm();
        pair.observed = (images[i] - images[j]).norm();
        pair.bound = point_image_perturbation_bound(stats, ctx.camera(), pair.separation);
        if (pair.bound <= 0 && pair.observed > 0) {
            throw std::runtime_error("tightness_ratio: observed change with zero bound");
        }
        pair.ratio = pair.bound > 0 ? pair.observed / pair.bound : 0.0;
        report.r = std::max(report.r, pair.ratio);
        report.pairs.push_back(pair);
    }
    return report;
}

SqrtOrderResult sqrt_order_experiment(const vis::Scene& scene, const Vec3& u_fixed,
                                      const Vec3& sweep_toward,
                                      const std::vector<double>& separations,
                                      int samples_per_face) {
    if (separations.size() < 8) {
        throw std::invalid_argument("sqrt_order_experiment: need at least 8 separations");
    }
    double lo = separations[0], hi = separations[0];
    for (double s : separations) {
        lo = std::min(lo, s);
        hi = std::max(hi, s);
    }
    if (!(lo > 0) || std::log10(hi / lo) < 1.5) {
        throw std::invalid_argument("sqrt_order_experiment: separations must span 1.5 decades");
    }
    const auto samples = render::sample_surface(scene.object(), samples_per_face);
    const Vec3 u0 = u_fixed.normalized();
    const render::SurfaceField base = render::direct_irradiance(scene, samples, u0);

    SqrtOrderResult result;
    double sum_x = 0, sum_y = 0, sum_xx = 0, sum_xy = 0;
    int count = 0;
    for (double sep : separations) {
        const Vec3 u = rotate_towards(u0, sweep_toward, angle_from_chord(sep));
        const render::SurfaceField moved = render::direct_irradiance(scene, samples, u.normalized());
        double acc = 0;
        for (int i = 0; i < base.values.size(); ++i) {
            const double d = base.values[i] - moved.values[i];
            acc += samples.weight[i] * d * d;
        }
        const double change = std::sqrt(acc);
        result.separation.push_back(sep);
        result.field_change.push_back(change);
        if (change > 0) {
            const double x = std::log(sep), y = std::log(change);
            sum_x += x;
            sum_y += y;
            sum_xx += x * x;
            sum_xy += x * y;
            ++count;
        }
    }
    if (count < 2) throw std::runtime_error("sqrt_order_experiment: degenerate (all-zero) changes");
    const double denom = count * sum_xx - sum_x * sum_x;
    result.slope = (count * sum_xy - sum_x * sum_y) / denom;
    return result;
}

}  // namespace lumicone::bounds
