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

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "lumicone/mesh.hpp"
#include "lumicone/nnls.hpp"
#include "lumicone/render.hpp"

namespace lumicone::cone {

/// V-description cone: columns are images under point illumination shifted by
/// alpha times the ambient image, with the ambient image itself appended as
/// the final column.
struct ConeModel {
    Eigen::MatrixXd generators;   // m x (directions + 1), all entries >= 0
    double alpha = 0;
    std::vector<Vec3> directions; // kept point-illumination directions
    std::string provenance;

    int m() const { return static_cast<int>(generators.rows()); }
    int n() const { return static_cast<int>(generators.cols()); }
};

/// Assembles a cone from pre-rendered point images. Fully dark directions are
/// dropped with a warning on stderr; throws if every column is zero.
ConeModel cone_from_images(const std::vector<render::ImageVector>& images,
                           const std::vector<Vec3>& directions,
                           const render::ImageVector& ambient, double alpha,
                           std::string provenance);

/// Renders the grid and assembles the cone model.
ConeModel build_cone(const render::RenderContext& ctx, double alpha,
                     const render::DirectionGrid& grid, std::string provenance = {});

/// min_{x>=0} ||y - A x||_2 via the active-set solver.
std::pair<double, Eigen::VectorXd> nnls_distance(const render::ImageVector& y,
                                                 const ConeModel& cone);

/// asin(d(y, cone) / ||y||); throws on the zero vector.
double angle_to_cone(const render::ImageVector& y, const ConeModel& cone);

struct DetectorConfig {
    double tau = 0;
    double eta = 0;
    double delta = 0;
    double xi = 0;
};

/// Midpoint threshold for the relaxed angular detector; throws (naming the
/// maximum admissible discrepancy) when delta exceeds
/// (sin((1+eta)tau) - sin(tau)) / 2.
DetectorConfig plan_detector(double tau, double eta, double delta);

enum class Decision { kAccept, kReject };

Decision angular_detect(const render::ImageVector& y, const ConeModel& cone,
                        const DetectorConfig& config);

struct DiscrepancyEstimate {
    double lower = 0;  // sampled lower bound on the Hausdorff cone distance
    double upper = std::numeric_limits<double>::infinity();  // spectral relaxation
    std::string notes;
};

/// Two-sided discrepancy estimate between cone(A) and cone(B): the lower
/// bound samples normalized generators and random conic combinations; the
/// upper bound (available when the column counts match) relaxes the lifted
/// quadratic maximization to a generalized eigenvalue problem.
DiscrepancyEstimate estimate_discrepancy(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                                         int n_samples, std::uint64_t seed = 1);
DiscrepancyEstimate estimate_discrepancy(const ConeModel& a, const ConeModel& b, int n_samples,
                                         std::uint64_t seed = 1);

struct SamplingPlan {
    double max_spacing = 0;     // largest admissible direction spacing (chord)
    double estimated_count = 0; // size of a uniform theta-phi grid at that spacing
};

/// Largest grid spacing d with 2 K(d) sqrt(m) / (alpha ||y_a||) <= epsilon,
/// where K is the point-image perturbation bound and sqrt(m) comes from the
/// certified floor on the cone spread.
SamplingPlan required_sampling(double alpha, double epsilon, const mesh::ObjectStats& stats,
                               const render::Camera& camera, int m, double ya_norm);

/// Sampled sup-inf estimate of the cone's angular spread; at least 1/sqrt(m)
/// by construction (the all-ones probe realizes the floor).
double eta_star_estimate(const ConeModel& cone, int n_random = 256, std::uint64_t seed = 1);

}  // namespace lumicone::cone
