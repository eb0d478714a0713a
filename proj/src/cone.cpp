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

#include "lumicone/cone.hpp"

#include <cmath>
#include <iostream>
#include <random>
#include <stdexcept>

#include "lumicone/bounds.hpp"
#include "lumicone/reduce.hpp"

namespace lumicone::cone {

ConeModel cone_from_images(const std::vector<render::ImageVector>& images,
                           const std::vector<Vec3>& directions,
                           const render::ImageVector& ambient, double alpha,
                           std::string provenance) {
    if (alpha < 0) throw std::invalid_argument("build_cone: negative ambient level");
    if (images.empty() || images.size() != directions.size()) {
        throw std::invalid_argument("build_cone: image/direction count mismatch");
    }
    const int m = static_cast<int>(images[0].size());
    std::vector<int> kept;
    for (size_t i = 0; i < images.size(); ++i) {
        const render::ImageVector gen = images[i] + alpha * ambient;
        if (gen.lpNorm<1>() > 0) {
            kept.push_back(static_cast<int>(i));
        } else {
            std::cerr << "build_cone: dropping fully dark direction " << i << "\n";
        }
    }
    const bool ambient_nonzero = ambient.lpNorm<1>() > 0;
    if (kept.empty() && !ambient_nonzero) {
        throw std::runtime_error("build_cone: all generators are zero (object invisible)");
    }
    ConeModel model;
    model.alpha = alpha;
    model.provenance = std::move(provenance);
    model.generators.resize(m, kept.size() + 1);
    for (size_t k = 0; k < kept.size(); ++k) {
        model.generators.col(k) = images[kept[k]] + alpha * ambient;
        model.directions.push_back(directions[kept[k]]);
    }
    model.generators.col(kept.size()) = ambient;
    return model;
}

ConeModel build_cone(const render::RenderContext& ctx, double alpha,
                     const render::DirectionGrid& grid, std::string provenance) {
    const auto images = render::point_images(ctx, grid.directions);
    const render::ImageVector ambient = render::ambient_from_images(grid, images);
    return cone_from_images(images, grid.directions, ambient, alpha, std::move(provenance));
}

std::pair<double, Eigen::VectorXd> nnls_distance(const render::ImageVector& y,
                                                 const ConeModel& cone) {
    if (y.size() != cone.generators.rows()) {
        throw std::invalid_argument("nnls_distance: image size mismatch");
    }
    NnlsResult res = nnls(cone.generators, y);
    return {res.distance, res.x};
}

double angle_to_cone(const render::ImageVector& y, const ConeModel& cone) {
    const double norm = y.norm();
    if (norm <= 0) throw std::invalid_argument("angle_to_cone: zero vector");
    const double d = nnls_distance(y, cone).first;
    return std::asin(std::clamp(d / norm, 0.0, 1.0));
}

DetectorConfig plan_detector(double tau, double eta, double delta) {
    if (!(tau > 0) || eta < 0 || (1.0 + eta) * tau >= M_PI / 2.0) {
        throw std::invalid_argument("plan_detector: need (1+eta)*tau in (0, pi/2)");
    }
    if (delta < 0) throw std::invalid_argument("plan_detector: negative discrepancy");
    const double max_delta = 0.5 * (std::sin((1.0 + eta) * tau) - std::sin(tau));
    if (delta > max_delta) {
        throw std::invalid_argument("plan_detector: discrepancy too large; maximum admissible is " +
                                    std::to_string(max_delta));
    }
    DetectorConfig config;
    config.tau = tau;
    config.eta = eta;
    config.delta = delta;
    config.xi = (eta == 0 && delta == 0)
                    ? tau
                    : std::asin(0.5 * std::sin(tau) + 0.5 * std::sin((1.0 + eta) * tau));
    return config;
}

Decision angular_detect(const render::ImageVector& y, const ConeModel& cone,
                        const DetectorConfig& config) {
    return angle_to_cone(y, cone) <= config.xi ? Decision::kAccept : Decision::kReject;
}

namespace {

double distance_to_cone(const Eigen::MatrixXd& gens, const Eigen::VectorXd& y) {
    return nnls(gens, y).distance;
}

// max over generator rays and random conic combinations of A, normalized to
// the unit sphere, of their distance to cone(B)
double sampled_direction(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, int n_samples,
                         std::mt19937_64& rng) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    double worst = 0;
    auto probe = [&](Eigen::VectorXd y) {
        const double norm = y.norm();
        if (norm < 1e-300) return;
        worst = std::max(worst, distance_to_cone(B, y / norm));
    };
    for (int j = 0; j < A.cols(); ++j) probe(A.col(j));
    Eigen::VectorXd x(A.cols());
    for (int s = 0; s < n_samples; ++s) {
        for (int j = 0; j < x.size(); ++j) x[j] = uni(rng);
        probe(A * x);
    }
    return worst;
}

}  // namespace

DiscrepancyEstimate estimate_discrepancy(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                                         int n_samples, std::uint64_t seed) {
    if (A.rows() != B.rows()) throw std::invalid_argument("estimate_discrepancy: m mismatch");
    DiscrepancyEstimate est;
    std::mt19937_64 rng(seed);
    est.lower = std::max(sampled_direction(A, B, n_samples, rng),
                         sampled_direction(B, A, n_samples, rng));
    if (A.cols() == B.cols()) {
        auto one_sided = [&](const Eigen::MatrixXd& base, const Eigen::MatrixXd& other) {
            const double gp = std::sqrt(reduce::relaxed_gamma_prime_sq(base, other - base,
                                                                       &est.notes));
            if (gp >= 1.0) return std::numeric_limits<double>::infinity();
            return std::max(gp, gp / (1.0 - gp));
        };
        est.upper = std::min(one_sided(A, B), one_sided(B, A));
        est.notes += "upper: spectral relaxation, reverse direction via gamma'/(1-gamma'); ";
    } else {
        est.notes += "upper unavailable: generator counts differ; ";
    }
    if (est.upper < est.lower) {
        // The relaxation is sound, so this only flags sampling slack.
        est.notes += "note: sampled lower exceeded relaxed upper by " +
                     std::to_string(est.lower - est.upper) + "; ";
        est.upper = std::max(est.upper, est.lower);
    }
    return est;
}

DiscrepancyEstimate estimate_discrepancy(const ConeModel& a, const ConeModel& b, int n_samples,
                                         std::uint64_t seed) {
    return estimate_discrepancy(a.generators, b.generators, n_samples, seed);
}

SamplingPlan required_sampling(double alpha, double epsilon, const mesh::ObjectStats& stats,
                               const render::Camera& camera, int m, double ya_norm) {
    if (alpha <= 0 || epsilon <= 0) {
        throw std::invalid_argument("required_sampling: alpha and epsilon must be positive");
    }
    if (ya_norm <= 0) throw std::invalid_argument("required_sampling: ambient image norm not positive");
    // Perturbation bound K(d) = C * sqrt(a2 d^2 + a1 d); require
    // 2 K(d) sqrt(m) / (alpha ||y_a||) <= epsilon.
    const double c = bounds::perturbation_prefactor(stats, camera);
    const double a2 = 2.0 * stats.surface_area * c * c;
    const double a1 = 32.0 * std::sqrt(2.0) * stats.diameter * stats.chi_star * c * c;
    const double rhs = epsilon * alpha * ya_norm / (2.0 * std::sqrt(static_cast<double>(m)));
    const double r2 = rhs * rhs;
    // stable (conjugate) root of a2 d^2 + a1 d = r2: immune to the
    // cancellation that the -a1 + sqrt(...) form suffers when a1 dominates
    const double d = 2.0 * r2 / (a1 + std::sqrt(a1 * a1 + 4.0 * a2 * r2));
    d = std::min(d, std::sqrt(2.0));  // the bound only holds for separations <= sqrt(2)
    SamplingPlan plan;
    plan.max_spacing = d;
    plan.estimated_count = 2.0 * M_PI * M_PI / (d * d);
    return plan;
}

double eta_star_estimate(const ConeModel& cone, int n_random, std::uint64_t seed) {
    const int m = cone.m();
    Eigen::MatrixXd unit = cone.generators;
    for (int j = 0; j < unit.cols(); ++j) {
        const double norm = unit.col(j).norm();
        if (norm > 0) unit.col(j) /= norm;
    }
    auto score = [&](const Eigen::VectorXd& w) {
        double worst = std::numeric_limits<double>::infinity();
        for (int j = 0; j < unit.cols(); ++j) worst = std::min(worst, w.dot(unit.col(j)));
        return worst;
    };
    // The all-ones probe certifies the 1/sqrt(m) floor for nonnegative images.
    Eigen::VectorXd best_w = Eigen::VectorXd::Constant(m, 1.0 / std::sqrt(double(m)));
    double best = score(best_w);
    Eigen::VectorXd mean = unit.rowwise().mean();
    if (mean.norm() > 0) best = std::max(best, score(mean / mean.norm()));
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    Eigen::VectorXd w(m);
    for (int s = 0; s < n_random; ++s) {
        for (int i = 0; i < m; ++i) w[i] = gauss(rng);
        const double n = w.norm();
        if (n > 0) best = std::max(best, score(w / n));
    }
    return best;
}

}  // namespace lumicone::cone
