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

#include "lumicone/experiments.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "lumicone/directions.hpp"
#include "lumicone/imageio.hpp"
#include "lumicone/nnls.hpp"
#include "lumicone/parallel.hpp"
#include "lumicone/visibility.hpp"

namespace lumicone::cli {

using nlohmann::json;

mesh::TriangulatedObject load_mesh_spec(const MeshSpec& spec) {
    if (!spec.builtin.empty()) return mesh::make_builtin(spec.builtin);
    if (spec.path.empty()) throw std::runtime_error("mesh spec needs builtin or path");
    if (!spec.albedo_csv.empty()) return mesh::load_mesh(spec.path, spec.albedo_csv);
    return mesh::load_mesh(spec.path, spec.albedo);
}

namespace {

MeshSpec mesh_spec_from_json(const json& j) {
    MeshSpec spec;
    spec.builtin = j.value("builtin", "");
    spec.path = j.value("path", "");
    spec.albedo_csv = j.value("albedo_csv", "");
    spec.albedo = j.value("albedo", 0.75);
    return spec;
}

}  // namespace

std::uint64_t ExperimentConfig::hash() const { return io::fnv1a(canonical_json); }

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
    json j = json::parse(text);
    ExperimentConfig c;
    c.seed = j.value("seed", 1ull);
    if (j.contains("camera")) {
        const auto& cam = j["camera"];
        c.camera.width = cam.value("width", 32);
        c.camera.height = cam.value("height", 32);
        c.camera.pixel_side = cam.value("pixel_side", 0.003);
        c.camera.focal_length = cam.value("focal_length", 1.0);
        c.camera.lens_diameter = cam.value("lens_diameter", 1.0);
        c.camera.gain = cam.value("gain", 1.0);
    }
    if (j.contains("render")) {
        const auto& r = j["render"];
        c.render_opts.samples_per_face = r.value("samples_per_face", 16);
        c.render_opts.subpixel = r.value("subpixel", 4);
        if (r.value("bounces", 0) < 0) {
            c.render_opts.bounces = std::nullopt;  // exact interreflection solve
        } else {
            c.render_opts.bounces = r.value("bounces", 0);
        }
    }
    if (j.contains("mesh")) c.target = mesh_spec_from_json(j["mesh"]);
    if (j.contains("negative_meshes")) {
        for (const auto& nm : j["negative_meshes"]) {
            c.negative_meshes.push_back(mesh_spec_from_json(nm));
        }
    }
    c.grid_divisor = j.value("grid_divisor", 45);
    c.alpha = j.value("alpha", 0.1);
    if (j.contains("alpha_list")) c.alpha_list = j["alpha_list"].get<std::vector<double>>();
    if (j.contains("gamma_list")) c.gamma_list = j["gamma_list"].get<std::vector<double>>();
    c.illumination = j.value("illumination", "band");
    if (j.contains("band")) {
        c.band_lo = j["band"][0];
        c.band_hi = j["band"][1];
    }
    c.positives = j.value("positives", 200);
    c.negatives = j.value("negatives", 600);
    c.roc_gamma = j.value("roc_gamma", 0.11);
    if (j.contains("dictionaries")) {
        c.dictionaries = j["dictionaries"].get<std::vector<std::string>>();
    }
    if (j.contains("reduce")) {
        const auto& r = j["reduce"];
        c.rho = r.value("rho", 5.0);
        c.tau = r.value("tau", 0.2);
        c.max_iters = r.value("max_iters", 2000);
        c.tol_primal_rel = r.value("tol_primal_rel", 1e-6);
        c.lambda = r.value("lambda", -1.0);
        c.gamma_margin = r.value("gamma_margin", 0.99);
        c.rank_tol = r.value("rank_tol", 1e-2);
        c.zero_tol = r.value("zero_tol", 1e-2);
    }
    c.out_dir = j.value("out_dir", ".");
    c.canonical_json = j.dump();
    if (c.positives < 1 || c.negatives < 1) throw std::runtime_error("counts must be positive");
    if (c.band_lo < -1 || c.band_hi > 1 || c.band_lo >= c.band_hi) {
        throw std::runtime_error("band limits must satisfy -1 <= lo < hi <= 1");
    }
    return c;
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return from_json_text(text);
}

RocTable roc_from_scores(std::string name, std::vector<double> positives,
                         std::vector<double> negatives) {
    RocTable table;
    table.name = std::move(name);
    table.positive_scores = positives;
    table.negative_scores = negatives;

    std::vector<double> thresholds;
    thresholds.reserve(positives.size() + negatives.size() + 1);
    thresholds.insert(thresholds.end(), positives.begin(), positives.end());
    thresholds.insert(thresholds.end(), negatives.begin(), negatives.end());
    std::sort(thresholds.begin(), thresholds.end());
    thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

    std::sort(positives.begin(), positives.end());
    std::sort(negatives.begin(), negatives.end());
    auto frac_leq = [](const std::vector<double>& v, double t) {
        return static_cast<double>(std::upper_bound(v.begin(), v.end(), t) - v.begin()) /
               static_cast<double>(v.size());
    };
    for (double t : thresholds) {
        table.rows.push_back(RocRow{t, frac_leq(positives, t), frac_leq(negatives, t)});
    }

    // Mann-Whitney AUC: probability a positive scores below a negative
    // (ties count half).
    double wins = 0;
    for (double p : positives) {
        const auto lo = std::lower_bound(negatives.begin(), negatives.end(), p);
        const auto hi = std::upper_bound(negatives.begin(), negatives.end(), p);
        wins += static_cast<double>(negatives.end() - hi) + 0.5 * (hi - lo);
    }
    table.auc = wins / (static_cast<double>(positives.size()) * negatives.size());
    return table;
}

namespace {

struct Dictionary {
    std::string name;
    Eigen::MatrixXd A;
    bool subspace = false;  // subspace scores use unconstrained least squares

    double score(const Eigen::VectorXd& y) const {
        const double norm = y.norm();
        if (norm <= 0) throw std::runtime_error("zero-norm test image");
        double dist;
        if (subspace) {
            dist = (y - A * (A.transpose() * y)).norm();  // A: orthonormal columns
        } else {
            dist = cone::nnls(A, y).distance;
        }
        return std::asin(std::clamp(dist / norm, 0.0, 1.0));
    }
};

// Deterministic golden-spiral directions on the spherical cap around `axis`.
std::vector<Vec3> cap_directions(const Vec3& axis, double max_angle, int count) {
    const auto frame = tangent_frame(axis.normalized());
    const double golden = M_PI * (3.0 - std::sqrt(5.0));
    const double cmin = std::cos(max_angle);
    std::vector<Vec3> dirs;
    for (int i = 0; i < count; ++i) {
        const double c = 1.0 - (i + 0.5) / count * (1.0 - cmin);
        const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
        const double phi = golden * i;
        dirs.push_back(s * std::cos(phi) * frame[0] + s * std::sin(phi) * frame[1] +
                       c * axis.normalized());
    }
    return dirs;
}

std::vector<Vec3> draw_directions(const ExperimentConfig& config, std::mt19937_64& rng,
                                  int count) {
    std::vector<Vec3> dirs;
    dirs.reserve(count);
    for (int i = 0; i < count; ++i) {
        if (config.illumination == "band") {
            dirs.push_back(render::random_band_direction(rng, config.band_lo, config.band_hi));
        } else if (config.illumination == "uniform") {
            dirs.push_back(render::random_direction(rng));
        } else {
            throw std::runtime_error("unknown illumination distribution: " + config.illumination);
        }
    }
    return dirs;
}

bool wants(const ExperimentConfig& config, const std::string& name) {
    return std::find(config.dictionaries.begin(), config.dictionaries.end(), name) !=
           config.dictionaries.end();
}

}  // namespace

std::vector<RocTable> run_roc(const ExperimentConfig& config) {
    if (config.negative_meshes.empty()) {
        throw std::runtime_error("run_roc: need at least one negative mesh");
    }
    const vis::Scene scene(load_mesh_spec(config.target));
    const render::RenderContext ctx(scene, config.camera, config.render_opts);
    const auto grid = render::grid_from_divisor(config.grid_divisor);
    const auto grid_images = render::point_images(ctx, grid.directions);
    const render::ImageVector ambient = render::ambient_from_images(grid, grid_images);
    const cone::ConeModel c1 = cone::cone_from_images(grid_images, grid.directions, ambient,
                                                      config.alpha, config.target.label());

    std::vector<Dictionary> dicts;
    if (wants(config, "C1")) dicts.push_back({"C1", c1.generators, false});
    if (wants(config, "C2")) {
        reduce::DecompositionProblem problem;
        problem.A_bar = c1.generators;
        problem.gamma = config.roc_gamma;
        if (config.gamma_margin < 1.0) {
            const double g = config.gamma_margin * config.roc_gamma / (1.0 + config.roc_gamma);
            problem.gamma_bar_override = g * g;
        }
        problem.rho = config.rho;
        problem.tau = config.tau;
        problem.lambda = config.lambda;
        problem.max_iters = config.max_iters;
        problem.tol_primal_rel = config.tol_primal_rel;
        const auto result = reduce::ladmm_solve(problem);
        dicts.push_back({"C2", result.L + result.S, false});
    }
    auto cap_cone = [&](const std::string& name, int count, double max_angle) {
        const auto dirs = cap_directions(Vec3(0, 0, -1), max_angle, count);
        const auto imgs = render::point_images(ctx, dirs);
        Eigen::MatrixXd A(ambient.size(), count + 1);
        for (int j = 0; j < count; ++j) A.col(j) = imgs[j] + config.alpha * ambient;
        A.col(count) = ambient;
        dicts.push_back({name, A, false});
    };
    // Frontal point-light subsets in the style of the standard capture rigs:
    // a tight 19-light set and a broader 64-light set.
    if (wants(config, "C3")) cap_cone("C3", 19, 25.0 * M_PI / 180.0);
    if (wants(config, "C4")) cap_cone("C4", 64, 70.0 * M_PI / 180.0);
    if (wants(config, "S9")) {
        Eigen::BDCSVD<Eigen::MatrixXd> svd(c1.generators, Eigen::ComputeThinU);
        const int k = std::min<int>(9, svd.matrixU().cols());
        dicts.push_back({"S9", svd.matrixU().leftCols(k), true});
    }

    // Test set: positives from the target, negatives split across the others.
    std::mt19937_64 rng(config.seed);
    const auto pos_dirs = draw_directions(config, rng, config.positives);
    std::vector<Eigen::VectorXd> pos_images(pos_dirs.size());
    parallel_for(pos_dirs.size(), [&](size_t i) {
        pos_images[i] = ctx.point_image(pos_dirs[i]) + config.alpha * ambient;
    });

    std::vector<Eigen::VectorXd> neg_images;
    const int per_mesh = config.negatives / static_cast<int>(config.negative_meshes.size());
    for (size_t nm = 0; nm < config.negative_meshes.size(); ++nm) {
        int count = per_mesh;
        if (nm + 1 == config.negative_meshes.size()) {
            count = config.negatives - per_mesh * (static_cast<int>(config.negative_meshes.size()) - 1);
        }
        const vis::Scene neg_scene(load_mesh_spec(config.negative_meshes[nm]));
        const render::RenderContext neg_ctx(neg_scene, config.camera, config.render_opts);
        const render::ImageVector neg_ambient = render::ambient_image(neg_ctx, grid);
        const auto dirs = draw_directions(config, rng, count);
        std::vector<Eigen::VectorXd> imgs(dirs.size());
        parallel_for(dirs.size(), [&](size_t i) {
            imgs[i] = neg_ctx.point_image(dirs[i]) + config.alpha * neg_ambient;
        });
        neg_images.insert(neg_images.end(), imgs.begin(), imgs.end());
    }

    std::vector<RocTable> tables;
    for (const auto& dict : dicts) {
        std::vector<double> pos_scores(pos_images.size()), neg_scores(neg_images.size());
        parallel_for(pos_images.size(),
                     [&](size_t i) { pos_scores[i] = dict.score(pos_images[i]); });
        parallel_for(neg_images.size(),
                     [&](size_t i) { neg_scores[i] = dict.score(neg_images[i]); });
        tables.push_back(roc_from_scores(dict.name, std::move(pos_scores), std::move(neg_scores)));
    }
    return tables;
}

std::vector<SweepRow> run_reduction_sweep(const ExperimentConfig& config) {
    const vis::Scene scene(load_mesh_spec(config.target));
    const render::RenderContext ctx(scene, config.camera, config.render_opts);
    const auto grid = render::grid_from_divisor(config.grid_divisor);
    const auto grid_images = render::point_images(ctx, grid.directions);
    const render::ImageVector ambient = render::ambient_from_images(grid, grid_images);

    std::vector<SweepRow> rows;
    for (double alpha : config.alpha_list) {
        const cone::ConeModel model = cone::cone_from_images(grid_images, grid.directions,
                                                             ambient, alpha, config.target.label());
        for (double gamma : config.gamma_list) {
            reduce::DecompositionProblem problem;
            problem.A_bar = model.generators;
            problem.gamma = gamma;
            if (config.gamma_margin < 1.0) {
                const double g = config.gamma_margin * gamma / (1.0 + gamma);
                problem.gamma_bar_override = g * g;
            }
            problem.rho = config.rho;
            problem.tau = config.tau;
            problem.lambda = config.lambda;
            problem.max_iters = config.max_iters;
            problem.tol_primal_rel = config.tol_primal_rel;
            const auto result = reduce::ladmm_solve(problem);

            // Certify on the unit-column pair (same cones, better metric).
            Eigen::MatrixXd a_scaled = problem.A_bar;
            Eigen::MatrixXd hat_scaled = result.L + result.S;
            for (int j = 0; j < a_scaled.cols(); ++j) {
                const double c = result.column_scale[j];
                if (c > 0) {
                    a_scaled.col(j) /= c;
                    hat_scaled.col(j) /= c;
                }
            }
            const auto cert = reduce::certify_solution(a_scaled, hat_scaled,
                                                       result.residual_spectral,
                                                       problem.gamma_bar(), gamma, 10000,
                                                       config.seed);

            SweepRow row;
            row.alpha = alpha;
            row.gamma = gamma;
            row.ratio = reduce::complexity_ratio(result.L, result.S,
                                                 static_cast<int>(problem.A_bar.rows()),
                                                 static_cast<int>(problem.A_bar.cols()),
                                                 config.rank_tol, config.zero_tol);
            row.feasible = cert.feasible;
            row.converged = result.converged;
            row.iterations = result.iterations;
            row.gamma_prime = cert.gamma_prime;
            row.delta_upper = cert.delta_upper;
            row.sampled_lower = cert.sampled_lower;
            row.objective = result.objective;
            rows.push_back(row);
        }
    }
    return rows;
}

}  // namespace lumicone::cli
