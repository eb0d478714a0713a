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

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <optional>
#include <utility>
#include <vector>

#include "lumicone/directions.hpp"
#include "lumicone/sampling.hpp"
#include "lumicone/visibility.hpp"

namespace lumicone::render {

using ImageVector = Eigen::VectorXd;

/// Thin-lens perspective camera at the origin looking along +e3, sensor of
/// w x h square pixels of side pixel_side.
struct Camera {
    double focal_length = 1.0;
    double lens_diameter = 1.0;
    double gain = 1.0;
    double pixel_side = 0.003;
    int width = 32;
    int height = 32;

    int m() const { return width * height; }
    double beta() const {
        const double r = lens_diameter / focal_length;
        return gain / 4.0 * r * r;
    }
    void validate() const;

    /// Center of subpixel (sx,sy) of pixel (row,col) on the sensor plane, in
    /// sensor coordinates (z1,z2); k is the subpixel grid size.
    std::pair<double, double> subpixel_center(int row, int col, int sx, int sy, int k) const;
};

/// Per-sample scalar field over a SampleSet (radiosity, direct irradiance).
struct SurfaceField {
    Eigen::VectorXd values;
    double weighted_l2(const SampleSet& samples) const;
};

/// rho(x) <n(x),u>_+ nu(x,u) at every surface sample; zero on back faces and
/// shadowed points.
SurfaceField direct_irradiance(const vis::Scene& scene, const SampleSet& samples, const Vec3& u);

/// Discretized interreflection operator. Entries (i,j) hold
/// kappa(x_i,x_j) * w_j; kappa pairs with non-positive mutual cosines are
/// structural zeros, so the matrix is stored sparse.
struct InterreflectionKernel {
    Eigen::SparseMatrix<double> op;  // maps sampled fields to sampled fields
    double norm_estimate = 0;        // operator norm on the area-weighted L2
};

InterreflectionKernel interreflection_matrix(const vis::Scene& scene, const SampleSet& samples);

/// Neumann-series radiosity: sum of T^i * direct for i <= bounces, or the
/// exact dense solve of (I - T) g = direct when bounces is nullopt.
/// Throws if the kernel norm estimate is >= 1.
SurfaceField solve_radiosity(const SurfaceField& direct, const InterreflectionKernel& kernel,
                             std::optional<int> bounces);

/// Precomputed sensor operator: k x k midpoint subpixel rays per pixel; each
/// ray deposits beta * cos^4(alpha) * (pixel_side/k)^2 onto the nearest
/// surface sample of the first face it hits. sense() is exactly linear.
class PixelOperator {
public:
    PixelOperator(const Camera& camera, const vis::Scene& scene, const SampleSet& samples, int k);

    ImageVector sense(const SurfaceField& g) const;
    const Eigen::SparseMatrix<double>& matrix() const { return op_; }
    int subpixel() const { return k_; }

private:
    Eigen::SparseMatrix<double> op_;  // m x n_samples
    int k_;
};

struct RenderOptions {
    int samples_per_face = 16;
    int subpixel = 4;
    /// 0 renders direct light only (the experiment default); >0 adds that
    /// many interreflection bounces; nullopt solves interreflection exactly.
    std::optional<int> bounces = 0;
};

/// Bundles everything reusable across directions for one scene + camera.
class RenderContext {
public:
    RenderContext(const vis::Scene& scene, const Camera& camera, const RenderOptions& options);

    const vis::Scene& scene() const { return scene_; }
    const Camera& camera() const { return camera_; }
    const SampleSet& samples() const { return samples_; }
    const PixelOperator& pixels() const { return pixels_; }
    const RenderOptions& options() const { return options_; }
    const InterreflectionKernel* kernel() const { return kernel_ ? &*kernel_ : nullptr; }

    /// Image under point illumination from direction u (unit vector).
    ImageVector point_image(const Vec3& u) const;

private:
    const vis::Scene& scene_;
    Camera camera_;
    RenderOptions options_;
    SampleSet samples_;
    PixelOperator pixels_;
    std::optional<InterreflectionKernel> kernel_;
};

/// Renders every grid direction (parallel across directions).
std::vector<ImageVector> point_images(const RenderContext& ctx, const std::vector<Vec3>& dirs);

/// Area-weighted average of the per-direction images (weights from the grid).
ImageVector ambient_from_images(const DirectionGrid& grid,
                                const std::vector<ImageVector>& images);

/// Renders the grid and averages it into the ambient image y_a.
ImageVector ambient_image(const RenderContext& ctx, const DirectionGrid& grid);

/// sum_i weight_i * point_image(u_i) + alpha * ambient. Weights must be
/// nonnegative with sum at most one; alpha >= 0.
ImageVector render_illumination(const RenderContext& ctx,
                                const std::vector<std::pair<Vec3, double>>& sources, double alpha,
                                const ImageVector& ambient);

}  // namespace lumicone::render
