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
#include <vector>

#include "lumicone/cone.hpp"
#include "lumicone/meshes.hpp"
#include "lumicone/reduce.hpp"
#include "lumicone/render.hpp"

namespace lumicone::cli {

struct MeshSpec {
    std::string builtin;     // one of the bundled names, or empty
    std::string path;        // OBJ path when builtin is empty
    std::string albedo_csv;  // optional sidecar
    double albedo = 0.75;    // constant albedo when no sidecar is given
    std::string label() const { return builtin.empty() ? path : builtin; }
};

mesh::TriangulatedObject load_mesh_spec(const MeshSpec& spec);

struct ExperimentConfig {
    std::uint64_t seed = 1;
    render::Camera camera;  // gain = focal = lens = 1, pixel 0.003, 32x32
    render::RenderOptions render_opts;
    MeshSpec target;
    std::vector<MeshSpec> negative_meshes;
    int grid_divisor = 45;  // 8 x 16 directions
    double alpha = 0.1;
    std::vector<double> alpha_list = {0.0, 1.0};
    std::vector<double> gamma_list = {0.15, 0.3};
    std::string illumination = "band";  // "band" or "uniform"
    double band_lo = -0.1;
    double band_hi = 0.4;
    int positives = 200;
    int negatives = 600;
    double roc_gamma = 0.11;
    std::vector<std::string> dictionaries = {"C1", "C2", "C3", "C4", "S9"};
    // reduce solver knobs
    double rho = 5.0;
    double tau = 0.2;
    int max_iters = 2000;
    double tol_primal_rel = 1e-6;
    double lambda = -1;
    double gamma_margin = 0.99;  // solve slightly inside the LMI budget
    double rank_tol = 1e-2;
    double zero_tol = 1e-2;
    std::string out_dir = ".";

    std::string canonical_json;  // exact dump used for the config hash
    std::uint64_t hash() const;

    static ExperimentConfig from_json_text(const std::string& text);
    static ExperimentConfig from_json_file(const std::string& path);
};

struct RocRow {
    double threshold = 0;
    double tpr = 0;
    double fpr = 0;
};

struct RocTable {
    std::string name;
    std::vector<RocRow> rows;
    double auc = 0;
    std::vector<double> positive_scores;
    std::vector<double> negative_scores;
};

/// Builds RocTable from angle scores (accept iff score <= threshold).
RocTable roc_from_scores(std::string name, std::vector<double> positives,
                         std::vector<double> negatives);

/// Renders positives from the target mesh and negatives from the other
/// meshes under the configured illumination distribution, scores every image
/// against each requested dictionary, and sweeps thresholds.
std::vector<RocTable> run_roc(const ExperimentConfig& config);

struct SweepRow {
    double alpha = 0;
    double gamma = 0;
    double ratio = 0;
    bool feasible = false;
    bool converged = false;
    int iterations = 0;
    double gamma_prime = 0;
    double delta_upper = 0;
    double sampled_lower = 0;
    double objective = 0;
};

/// Cone-preserving decomposition over the (alpha, gamma) grid; the point
/// images are rendered once and reused across ambient levels.
std::vector<SweepRow> run_reduction_sweep(const ExperimentConfig& config);

}  // namespace lumicone::cli
