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

#include "lumicone/render.hpp"

namespace lumicone::bounds {

/// Squared-L2 bound on the direct-illumination change between light
/// directions at the given separation (chord length, at most sqrt(2)).
/// Nonconvex: 2 rho^2 area sep^2 + 32 sqrt(2) rho^2 diam chi sep.
/// Convex:    rho^2 area sep^2.
double direct_illumination_bound(const mesh::ObjectStats& stats, double separation, bool convex);

struct InterreflectionBound {
    double norm = 0;       // rho_star * (1 - nu_star)
    double resolvent = 1;  // 1 / (1 - norm)
};

/// Throws when rho_star * (1 - nu_star) >= 1 (resolvent undefined).
InterreflectionBound interreflection_norm_bound(double rho_star, double nu_star);

/// 2^{1/4} beta_c f_c s_c / depth.
double sensor_norm_bound(const render::Camera& camera, double depth);

/// 2^{1/4} beta_c rho_star f_c s_c / (depth (1 - rho_star (1 - nu_star))).
double perturbation_prefactor(const mesh::ObjectStats& stats, const render::Camera& camera);

/// L2 bound on the point-image change between directions at `separation`.
double point_image_perturbation_bound(const mesh::ObjectStats& stats,
                                      const render::Camera& camera, double separation);

struct PairBound {
    int i = 0, j = 0;
    double separation = 0;
    double observed = 0;
    double bound = 0;
    double ratio = 0;
};

struct TightnessReport {
    double r = 0;  // max observed/bound over adjacent grid pairs
    std::vector<PairBound> pairs;
};

/// Renders every grid direction and compares the observed image change with
/// the perturbation bound over all theta/phi-adjacent pairs. Throws if any
/// pair has a zero bound but a nonzero observation.
TightnessReport tightness_ratio(const render::RenderContext& ctx,
                                const render::DirectionGrid& grid,
                                const mesh::ObjectStats& stats);

struct SqrtOrderResult {
    std::vector<double> separation;
    std::vector<double> field_change;  // L2 norm of the direct-field difference
    double slope = 0;                  // log-log least-squares slope
};

/// Sweeps u' away from u_fixed (rotating toward `sweep_toward`) through the
/// given chord separations and measures the direct-illumination L2 change on
/// a strip-stratified sample set. Requires at least 8 separations spanning
/// 1.5 decades; throws if every difference is zero.
SqrtOrderResult sqrt_order_experiment(const vis::Scene& scene, const Vec3& u_fixed,
                                      const Vec3& sweep_toward,
                                      const std::vector<double>& separations,
                                      int samples_per_face);

}  // namespace lumicone::bounds
