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

#include "lumicone/render.hpp"

#include <cmath>
#include <stdexcept>

#include "lumicone/parallel.hpp"

namespace lumicone::render {

void Camera::validate() const {
    if (focal_length <= 0 || lens_diameter <= 0 || gain <= 0 || pixel_side <= 0 || width < 1 ||
        height < 1) {
        throw std::invalid_argument("camera parameters must be positive");
    }
}

std::pair<double, double> Camera::subpixel_center(int row, int col, int sx, int sy, int k) const {
    const double z1 = (col - width / 2.0 + (sx + 0.5) / k) * pixel_side;
    const double z2 = (row - height / 2.0 + (sy + 0.5) / k) * pixel_side;
    return {z1, z2};
}

double SurfaceField::weighted_l2(const SampleSet& samples) const {
    double acc = 0;
    for (int i = 0; i < values.size(); ++i) acc += samples.weight[i] * values[i] * values[i];
    return std::sqrt(acc);
}

SurfaceField direct_irradiance(const vis::Scene& scene, const SampleSet& samples, const Vec3& u) {
    if (!is_unit(u)) throw std::invalid_argument("direct_irradiance: u not unit");
    const auto& obj = scene.object();
    SurfaceField field;
    field.values.setZero(samples.size());
    for (int i = 0; i < samples.size(); ++i) {
        const int f = samples.face[i];
        const double cosine = obj.normal(f).dot(u);
        if (cosine <= 0) continue;
        if (scene.grid().first_hit(samples.position[i], u, scene.eps_ray(), f)) continue;
        field.values[i] = obj.albedo_of(f) * cosine;
    }
    return field;
}

InterreflectionKernel interreflection_matrix(const vis::Scene& scene, const SampleSet& samples) {
    const auto& obj = scene.object();
    const int n = samples.size();
    std::vector<std::vector<Eigen::Triplet<double>>> rows(n);

    parallel_for(static_cast<size_t>(n), [&](size_t i_) {
        const int i = static_cast<int>(i_);
        const Vec3& xi = samples.position[i];
        const Vec3& ni = obj.normal(samples.face[i]);
        const double rho_i = obj.albedo_of(samples.face[i]);
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            const Vec3 d = samples.position[j] - xi;
            const double r2 = d.squaredNorm();
            if (r2 < 1e-24) continue;  // coincident samples contribute nothing
            const double ci = ni.dot(d);
            if (ci <= 0) continue;
            const double cj = obj.normal(samples.face[j]).dot(-d);
            if (cj <= 0) continue;
            if (samples.face[j] != samples.face[i] &&
                !vis::point_point_visible(scene, xi, samples.position[j])) {
                continue;
            }
            const double kappa = rho_i / M_PI * ci * cj / (r2 * r2);
            rows[i].emplace_back(i, j, kappa * samples.weight[j]);
        }
    });

    std::vector<Eigen::Triplet<double>> triplets;
    for (auto& r : rows) triplets.insert(triplets.end(), r.begin(), r.end());
    InterreflectionKernel kernel;
    kernel.op.resize(n, n);
    kernel.op.setFromTriplets(triplets.begin(), triplets.end());

    // Operator norm of T on the area-weighted L2: largest singular value of
    // S = W^{1/2} kappa W^{1/2}, estimated by power iteration on S^T S.
    Eigen::VectorXd sqw(n), isqw(n);
    for (int i = 0; i < n; ++i) {
        sqw[i] = std::sqrt(samples.weight[i]);
        isqw[i] = sqw[i] > 0 ? 1.0 / sqw[i] : 0.0;
    }
    auto apply_s = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
        return sqw.asDiagonal() * (kernel.op * (isqw.asDiagonal() * v));
    };
    auto apply_st = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
        return isqw.asDiagonal() * (kernel.op.transpose() * (sqw.asDiagonal() * v));
    };
    Eigen::VectorXd v = Eigen::VectorXd::Ones(n).normalized();
    double sigma2 = 0;
    for (int it = 0; it < 200; ++it) {
        Eigen::VectorXd w = apply_st(apply_s(v));
        const double nw = w.norm();
        if (nw < 1e-300) {
            sigma2 = 0;
            break;
        }
        const double next = nw;  // Rayleigh quotient for unit v
        v = w / nw;
        if (it > 10 && std::abs(next - sigma2) <= 1e-12 * std::max(1.0, next)) {
            sigma2 = next;
            break;
        }
        sigma2 = next;
    }
    kernel.norm_estimate = std::sqrt(std::max(0.0, sigma2));
    return kernel;
}

SurfaceField solve_radiosity(const SurfaceField& direct, const InterreflectionKernel& kernel,
                             std::optional<int> bounces) {
    if (kernel.norm_estimate >= 1.0) {
        throw std::runtime_error(
            "solve_radiosity: interreflection norm >= 1, Neumann series diverges");
    }
    SurfaceField g;
    if (bounces.has_value()) {
        if (*bounces < 0) throw std::invalid_argument("solve_radiosity: negative bounce count");
        g.values = direct.values;
        Eigen::VectorXd term = direct.values;
        for (int i = 0; i < *bounces; ++i) {
            term = kernel.op * term;
            g.values += term;
        }
    } else {
        Eigen::MatrixXd sys = Eigen::MatrixXd(kernel.op);
        sys = Eigen::MatrixXd::Identity(sys.rows(), sys.cols()) - sys;
        g.values = Eigen::PartialPivLU<Eigen::MatrixXd>(sys).solve(direct.values);
        g.values = g.values.cwiseMax(0.0);
    }
    return g;
}

PixelOperator::PixelOperator(const Camera& camera, const vis::Scene& scene,
                             const SampleSet& samples, int k)
    : k_(k) {
    camera.validate();
    if (k < 1) throw std::invalid_argument("PixelOperator: subpixel count must be >= 1");
    double min_depth = std::numeric_limits<double>::infinity();
    for (const auto& v : scene.object().vertices()) min_depth = std::min(min_depth, v.z());
    if (!(min_depth > 0)) {
        throw std::runtime_error("PixelOperator: object must lie strictly in front of the lens");
    }

    const int n_samples = samples.size();
    const int per_face = samples.samples_per_face;
    const double cell = camera.beta() * camera.pixel_side * camera.pixel_side / (k * k);
    std::vector<Eigen::Triplet<double>> triplets;
    for (int row = 0; row < camera.height; ++row) {
        for (int col = 0; col < camera.width; ++col) {
            const int pixel = row * camera.width + col;
            for (int sy = 0; sy < k; ++sy) {
                for (int sx = 0; sx < k; ++sx) {
                    const auto [z1, z2] = camera.subpixel_center(row, col, sx, sy, k);
                    const Vec3 dir = Vec3(-z1, -z2, camera.focal_length).normalized();
                    auto hit = scene.grid().first_hit(Vec3::Zero(), dir, 0.0);
                    if (!hit) continue;
                    const Vec3 p = hit->t * dir;
                    // nearest sample on the hit face
                    int best = -1;
                    double best_d = std::numeric_limits<double>::infinity();
                    const int base = hit->face * per_face;
                    for (int s = base; s < base + per_face && s < n_samples; ++s) {
                        const double d2 = (samples.position[s] - p).squaredNorm();
                        if (d2 < best_d) {
                            best_d = d2;
                            best = s;
                        }
                    }
                    if (best < 0) continue;
                    const double f2 = camera.focal_length * camera.focal_length;
                    const double cos2 = f2 / (f2 + z1 * z1 + z2 * z2);
                    triplets.emplace_back(pixel, best, cell * cos2 * cos2);
                }
            }
        }
    }
    op_.resize(camera.m(), n_samples);
    op_.setFromTriplets(triplets.begin(), triplets.end());
}

ImageVector PixelOperator::sense(const SurfaceField& g) const {
    if (g.values.size() != op_.cols()) {
        throw std::invalid_argument("sense: field size does not match sample count");
    }
    return op_ * g.values;
}

RenderContext::RenderContext(const vis::Scene& scene, const Camera& camera,
                             const RenderOptions& options)
    : scene_(scene),
      camera_(camera),
      options_(options),
      samples_(sample_surface(scene.object(), options.samples_per_face)),
      pixels_(camera, scene, samples_, options.subpixel) {
    if (!options.bounces.has_value() || *options.bounces != 0) {
        kernel_ = interreflection_matrix(scene, samples_);
    }
}

ImageVector RenderContext::point_image(const Vec3& u) const {
    SurfaceField g = direct_irradiance(scene_, samples_, u);
    if (kernel_) g = solve_radiosity(g, *kernel_, options_.bounces);
    return pixels_.sense(g);
}

std::vector<ImageVector> point_images(const RenderContext& ctx, const std::vector<Vec3>& dirs) {
    std::vector<ImageVector> images(dirs.size());
    parallel_for(dirs.size(), [&](size_t i) { images[i] = ctx.point_image(dirs[i]); });
    return images;
}

ImageVector ambient_from_images(const DirectionGrid& grid,
                                const std::vector<ImageVector>& images) {
    if (images.empty() || images.size() != grid.directions.size()) {
        throw std::invalid_argument("ambient_from_images: image count does not match grid");
    }
    ImageVector acc = ImageVector::Zero(images[0].size());
    for (size_t i = 0; i < images.size(); ++i) acc += grid.weights[i] * images[i];
    return acc;
}

ImageVector ambient_image(const RenderContext& ctx, const DirectionGrid& grid) {
    return ambient_from_images(grid, point_images(ctx, grid.directions));
}

ImageVector render_illumination(const RenderContext& ctx,
                                const std::vector<std::pair<Vec3, double>>& sources, double alpha,
                                const ImageVector& ambient) {
    if (alpha < 0) throw std::invalid_argument("render_illumination: negative ambient level");
    double total = 0;
    for (const auto& [u, w] : sources) {
        (void)u;
        if (w < 0) throw std::invalid_argument("render_illumination: negative source weight");
        total += w;
    }
    if (total > 1.0 + 1e-12) {
        throw std::invalid_argument("render_illumination: source weights exceed one");
    }
    ImageVector img = alpha * ambient;
    for (const auto& [u, w] : sources) {
        if (w == 0) continue;
        img += w * ctx.point_image(u);
    }
    return img;
}

}  // namespace lumicone::render
