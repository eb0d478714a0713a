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

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "lumicone/bounds.hpp"
#include "lumicone/cone.hpp"
#include "lumicone/directions.hpp"
#include "lumicone/experiments.hpp"
#include "lumicone/imageio.hpp"
#include "lumicone/meshes.hpp"
#include "lumicone/reduce.hpp"
#include "lumicone/render.hpp"
#include "lumicone/visibility.hpp"

namespace {

using namespace lumicone;
using nlohmann::json;

cli::ExperimentConfig load_config(const std::string& path) {
    if (path.empty()) return cli::ExperimentConfig::from_json_text("{}");
    return cli::ExperimentConfig::from_json_file(path);
}

vis::DefectOptions defect_options(const cli::ExperimentConfig& config) {
    vis::DefectOptions opt;
    opt.surface_samples_per_face = config.render_opts.samples_per_face;
    return opt;
}

json stats_json(const mesh::ObjectStats& stats) {
    return json{{"rho_star", stats.rho_star},
                {"nu_star", stats.nu_star},
                {"chi_star", stats.chi_star},
                {"surface_area", stats.surface_area},
                {"diameter", stats.diameter},
                {"depth", stats.depth},
                {"defect_grid_directions", stats.defect_grid_directions},
                {"defect_surface_samples", stats.defect_surface_samples},
                {"defect_quadrature", stats.defect_quadrature},
                {"defect_edge_samples", stats.defect_edge_samples}};
}

int cmd_render(const std::string& config_path, const std::string& out, bool pgm) {
    const auto config = load_config(config_path);
    const vis::Scene scene(cli::load_mesh_spec(config.target));
    const render::RenderContext ctx(scene, config.camera, config.render_opts);
    const auto grid = render::grid_from_divisor(config.grid_divisor);
    const auto images = render::point_images(ctx, grid.directions);
    io::ImageSet set;
    set.width = config.camera.width;
    set.height = config.camera.height;
    set.alpha = config.alpha;
    set.directions = grid.directions;
    set.images = images;
    set.ambient = render::ambient_from_images(grid, images);
    set.options_json = config.canonical_json;
    io::save_image_set(out, set, pgm);
    std::cout << "wrote " << images.size() << " point images + ambient to " << out << "\n";
    return 0;
}

int cmd_defects(const std::string& config_path, const std::string& out_csv) {
    const auto config = load_config(config_path);
    const vis::Scene scene(cli::load_mesh_spec(config.target));
    const auto edges = mesh::build_edge_table(scene.object());
    const auto grid = render::grid_from_divisor(config.grid_divisor);
    const auto report = vis::convexity_defects(scene, edges, grid.directions,
                                               defect_options(config));
    io::CsvWriter csv(out_csv, "u_x,u_y,u_z,chi_length", config.hash());
    for (size_t i = 0; i < grid.directions.size(); ++i) {
        csv.row({grid.directions[i].x(), grid.directions[i].y(), grid.directions[i].z(),
                 report.chi_by_direction[i]});
    }
    csv.raw_row("# summary chi_star=" + std::to_string(report.chi_star) +
                " nu_star=" + std::to_string(report.nu_star));
    std::cout << "chi_star=" << report.chi_star << " nu_star=" << report.nu_star << "\n";
    return 0;
}

int cmd_cone(const std::string& config_path, const std::string& out, bool pgm) {
    const auto config = load_config(config_path);
    const vis::Scene scene(cli::load_mesh_spec(config.target));
    const render::RenderContext ctx(scene, config.camera, config.render_opts);
    const auto grid = render::grid_from_divisor(config.grid_divisor);
    const auto model = cone::build_cone(ctx, config.alpha, grid, config.target.label());
    io::save_cone(out, model, config.camera.width, config.camera.height, pgm);
    std::cout << "cone with " << model.n() << " generators (alpha=" << model.alpha << ") -> "
              << out << "\n";
    return 0;
}

int cmd_verify(const std::string& cone_dir, const std::string& image_path, double tau, double eta,
               double delta) {
    const auto model = io::load_cone(cone_dir);
    const Eigen::VectorXd y = io::read_f64(image_path);
    if (y.size() != model.m()) {
        throw std::runtime_error("test image has " + std::to_string(y.size()) +
                                 " pixels, cone expects " + std::to_string(model.m()));
    }
    const auto config = cone::plan_detector(tau, eta, delta);
    const double angle = cone::angle_to_cone(y, model);
    const auto decision = cone::angular_detect(y, model, config);
    std::cout << "angle=" << angle << " xi=" << config.xi << " tau=" << config.tau
              << " eta=" << config.eta << " delta=" << config.delta << " decision="
              << (decision == cone::Decision::kAccept ? "ACCEPT" : "REJECT") << "\n";
    return decision == cone::Decision::kAccept ? 0 : 1;
}

int cmd_bounds(const std::string& config_path, const std::string& out_csv,
               const std::string& out_json) {
    const auto config = load_config(config_path);
    const vis::Scene scene(cli::load_mesh_spec(config.target));
    const auto edges = mesh::build_edge_table(scene.object());
    const auto grid = render::grid_from_divisor(config.grid_divisor);
    const auto defects = vis::convexity_defects(scene, edges, grid.directions,
                                                defect_options(config));
    const auto stats = vis::compute_stats(scene, defects);
    const render::RenderContext ctx(scene, config.camera, config.render_opts);
    const auto report = bounds::tightness_ratio(ctx, grid, stats);

    io::CsvWriter csv(out_csv, "ux,uy,uz,vx,vy,vz,observed,bound,ratio", config.hash());
    for (const auto& p : report.pairs) {
        const Vec3& u = grid.directions[p.i];
        const Vec3& v = grid.directions[p.j];
        csv.row({u.x(), u.y(), u.z(), v.x(), v.y(), v.z(), p.observed, p.bound, p.ratio});
    }
    json summary;
    summary["r"] = report.r;
    summary["stats"] = stats_json(stats);
    summary["grid"] = {{"n_phi", grid.n_phi}, {"n_theta", grid.n_theta}};
    summary["config_hash"] = config.hash();
    std::ofstream(out_json) << summary.dump(2) << "\n";
    std::cout << "r=" << report.r << " over " << report.pairs.size() << " adjacent pairs\n";
    return 0;
}

int cmd_sqrt_order(const std::string& config_path, const std::string& out_csv) {
    const auto config = load_config(config_path);
    // Default subject: the unit two-plane toy in its local frame, swept so the
    // vertical square's shadow crosses the horizontal one.
    mesh::TriangulatedObject obj =
        config.target.builtin.empty() && config.target.path.empty()
            ? mesh::two_plane_toy()
            : cli::load_mesh_spec(config.target);
    const vis::Scene scene(std::move(obj));
    const double phi0 = 30.0 * M_PI / 180.0;
    const Vec3 u_fixed(0, std::cos(phi0), -std::sin(phi0));
    const Vec3 toward(0, 0, -1);
    std::vector<double> separations;
    for (int i = 0; i < 10; ++i) {
        separations.push_back(1.5e-3 * std::pow(std::pow(40.0, 1.0 / 9.0), i));
    }
    const auto result = bounds::sqrt_order_experiment(scene, u_fixed, toward, separations, 4098);
    io::CsvWriter csv(out_csv, "separation,field_change", config.hash());
    for (size_t i = 0; i < result.separation.size(); ++i) {
        csv.row({result.separation[i], result.field_change[i]});
    }
    csv.raw_row("# slope=" + std::to_string(result.slope));
    std::cout << "log-log slope=" << result.slope << "\n";
    return 0;
}

int cmd_reduce(const std::string& cone_dir, double gamma, double lambda, double rho, double tau,
               int max_iters, const std::string& out_dir) {
    const auto model = io::load_cone(cone_dir);
    reduce::DecompositionProblem problem;
    problem.A_bar = model.generators;
    problem.gamma = gamma;
    problem.lambda = lambda;
    problem.rho = rho;
    problem.tau = tau;
    problem.max_iters = max_iters;

    std::filesystem::create_directories(out_dir);
    io::CsvWriter iters(out_dir + "/iterations.csv", "k,objective,primal_residual",
                        io::fnv1a(cone_dir));
    const auto result = reduce::ladmm_solve(problem, [&](const reduce::IterSnapshot& snap) {
        iters.row({static_cast<double>(snap.k), snap.objective, snap.primal_residual});
    });

    Eigen::MatrixXd a_scaled = problem.A_bar;
    Eigen::MatrixXd hat_scaled = result.L + result.S;
    for (int j = 0; j < a_scaled.cols(); ++j) {
        if (result.column_scale[j] > 0) {
            a_scaled.col(j) /= result.column_scale[j];
            hat_scaled.col(j) /= result.column_scale[j];
        }
    }
    const auto cert = reduce::certify_solution(a_scaled, hat_scaled, result.residual_spectral,
                                               problem.gamma_bar(), gamma);

    io::write_matrix_f64(out_dir + "/L.f64", result.L);
    io::write_matrix_f64(out_dir + "/S.f64", result.S);
    json meta;
    meta["rows"] = result.L.rows();
    meta["cols"] = result.L.cols();
    meta["converged"] = result.converged;
    meta["iterations"] = result.iterations;
    meta["objective"] = result.objective;
    meta["primal_residual"] = result.primal_residual;
    meta["complexity_ratio"] = reduce::complexity_ratio(
        result.L, result.S, static_cast<int>(result.L.rows()),
        static_cast<int>(result.L.cols()), 1e-2, 1e-2);
    meta["certificate"] = {{"gamma", gamma},
                           {"gamma_prime", cert.gamma_prime},
                           {"gamma_prime_sq_upper", cert.gamma_prime_sq_upper},
                           {"delta_upper", cert.delta_upper},
                           {"sampled_lower", cert.sampled_lower},
                           {"feasible", cert.feasible},
                           {"notes", cert.notes}};
    std::ofstream(out_dir + "/certificate.json") << meta.dump(2) << "\n";
    // hitting max_iters still returns the best iterate; the flag is recorded
    std::cout << "reduce: iters=" << result.iterations << " converged=" << result.converged
              << " feasible=" << cert.feasible << " ratio=" << meta["complexity_ratio"] << "\n";
    return 0;
}

int cmd_roc(const std::string& config_path) {
    const auto config = load_config(config_path);
    std::filesystem::create_directories(config.out_dir);
    const auto tables = cli::run_roc(config);
    json summary;
    for (const auto& table : tables) {
        io::CsvWriter csv(config.out_dir + "/roc_" + table.name + ".csv", "threshold,tpr,fpr",
                          config.hash());
        for (const auto& row : table.rows) csv.row({row.threshold, row.tpr, row.fpr});
        summary[table.name] = table.auc;
        std::cout << "AUC(" << table.name << ")=" << table.auc << "\n";
    }
    std::ofstream(config.out_dir + "/roc_auc.json") << summary.dump(2) << "\n";
    return 0;
}

int cmd_sweep(const std::string& config_path) {
    const auto config = load_config(config_path);
    std::filesystem::create_directories(config.out_dir);
    const auto rows = cli::run_reduction_sweep(config);
    io::CsvWriter csv(config.out_dir + "/reduction_sweep.csv",
                      "alpha,gamma,complexity_ratio,feasible,converged,iterations,gamma_prime,"
                      "delta_upper,sampled_lower,objective",
                      config.hash());
    for (const auto& r : rows) {
        csv.row({r.alpha, r.gamma, r.ratio, static_cast<double>(r.feasible),
                 static_cast<double>(r.converged), static_cast<double>(r.iterations),
                 r.gamma_prime, r.delta_upper, r.sampled_lower, r.objective});
    }
    std::cout << "wrote " << rows.size() << " sweep rows\n";
    return 0;
}

int cmd_sample_plan(const std::string& config_path, double alpha, double epsilon) {
    const auto config = load_config(config_path);
    const vis::Scene scene(cli::load_mesh_spec(config.target));
    const auto edges = mesh::build_edge_table(scene.object());
    const auto grid = render::grid_from_divisor(config.grid_divisor);
    const auto defects = vis::convexity_defects(scene, edges, grid.directions,
                                                defect_options(config));
    const auto stats = vis::compute_stats(scene, defects);
    const render::RenderContext ctx(scene, config.camera, config.render_opts);
    const double ya_norm = render::ambient_image(ctx, grid).norm();
    const auto plan = cone::required_sampling(alpha, epsilon, stats, config.camera,
                                              config.camera.m(), ya_norm);
    json out;
    out["max_spacing"] = plan.max_spacing;
    out["estimated_count"] = plan.estimated_count;
    out["stats"] = stats_json(stats);
    out["ya_norm"] = ya_norm;
    std::cout << out.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lambertian illumination-cone toolkit"};
    app.require_subcommand(1);

    std::string config_path, out, image_path, cone_dir;
    bool pgm = false;
    double tau = M_PI / 6, eta = 1.0, delta = 0.0;
    double gamma = 0.3, lambda = -1, rho = 5.0, tau_step = 0.2;
    double alpha = 1.0, epsilon = 0.1;
    int max_iters = 2000;

    auto* render_cmd = app.add_subcommand("render", "render a direction grid to an image set");
    render_cmd->add_option("--config", config_path, "experiment config JSON");
    render_cmd->add_option("--out", out, "output directory")->required();
    render_cmd->add_flag("--pgm", pgm, "also write PGM previews");

    auto* defects_cmd = app.add_subcommand("defects", "chi/nu convexity defects over a grid");
    defects_cmd->add_option("--config", config_path);
    defects_cmd->add_option("--out", out, "output CSV")->required();

    auto* cone_cmd = app.add_subcommand("cone", "build and save a cone model");
    cone_cmd->add_option("--config", config_path);
    cone_cmd->add_option("--out", out, "output directory")->required();
    cone_cmd->add_flag("--pgm", pgm);

    auto* verify_cmd = app.add_subcommand("verify", "angular verification of a test image");
    verify_cmd->add_option("--cone", cone_dir, "cone directory")->required();
    verify_cmd->add_option("--image", image_path, "test image (.f64)")->required();
    verify_cmd->add_option("--tau", tau, "accept angle (radians)");
    verify_cmd->add_option("--eta", eta, "relaxation factor");
    verify_cmd->add_option("--delta", delta, "certified cone discrepancy");

    auto* bounds_cmd = app.add_subcommand("bounds", "perturbation-bound tightness over a grid");
    bounds_cmd->add_option("--config", config_path);
    bounds_cmd->add_option("--out", out, "output CSV")->required();
    std::string out_json = "bounds_summary.json";
    bounds_cmd->add_option("--summary", out_json, "output JSON summary");

    auto* sqrt_cmd = app.add_subcommand("sqrt-order", "field-change order experiment");
    sqrt_cmd->add_option("--config", config_path);
    sqrt_cmd->add_option("--out", out, "output CSV")->required();

    auto* reduce_cmd = app.add_subcommand("reduce", "cone-preserving low-rank+sparse reduction");
    reduce_cmd->add_option("--cone", cone_dir, "cone directory (single decomposition)");
    reduce_cmd->add_option("--config", config_path, "config JSON (alpha x gamma sweep)");
    reduce_cmd->add_option("--gamma", gamma, "target Hausdorff tolerance");
    reduce_cmd->add_option("--lambda", lambda, "sparsity weight (<=0 for sqrt(max(m,n)))");
    reduce_cmd->add_option("--rho", rho, "penalty parameter");
    reduce_cmd->add_option("--tau", tau_step, "linearized step size");
    reduce_cmd->add_option("--max-iters", max_iters);
    reduce_cmd->add_option("--out", out, "output directory");

    auto* roc_cmd = app.add_subcommand("roc", "verification ROC across dictionaries");
    roc_cmd->add_option("--config", config_path)->required();

    auto* plan_cmd = app.add_subcommand("sample-plan", "required sampling density");
    plan_cmd->add_option("--config", config_path);
    plan_cmd->add_option("--alpha", alpha, "ambient level")->required();
    plan_cmd->add_option("--epsilon", epsilon, "target cone approximation")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (render_cmd->parsed()) return cmd_render(config_path, out, pgm);
        if (defects_cmd->parsed()) return cmd_defects(config_path, out);
        if (cone_cmd->parsed()) return cmd_cone(config_path, out, pgm);
        if (verify_cmd->parsed()) return cmd_verify(cone_dir, image_path, tau, eta, delta);
        if (bounds_cmd->parsed()) return cmd_bounds(config_path, out, out_json);
        if (sqrt_cmd->parsed()) return cmd_sqrt_order(config_path, out);
        if (reduce_cmd->parsed()) {
            if (!cone_dir.empty()) {
                if (out.empty()) throw std::invalid_argument("reduce --cone needs --out");
                return cmd_reduce(cone_dir, gamma, lambda, rho, tau_step, max_iters, out);
            }
            if (config_path.empty()) {
                throw std::invalid_argument("reduce needs --cone or --config");
            }
            return cmd_sweep(config_path);
        }
        if (roc_cmd->parsed()) return cmd_roc(config_path);
        if (plan_cmd->parsed()) return cmd_sample_plan(config_path, alpha, epsilon);
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
