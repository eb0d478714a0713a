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

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "lumicone/experiments.hpp"
#include "lumicone/imageio.hpp"

using namespace lumicone;
namespace fs = std::filesystem;

namespace {

std::string work_dir() {
    const auto dir = fs::temp_directory_path() / "lumicone_cli_test";
    fs::create_directories(dir);
    return dir.string();
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(LUMICONE_BIN) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string small_config() {
    const std::string path = work_dir() + "/config.json";
    std::ofstream(path) << R"({
        "seed": 7,
        "camera": {"width": 12, "height": 12},
        "render": {"samples_per_face": 16, "subpixel": 2},
        "mesh": {"builtin": "toy"},
        "grid_divisor": 90,
        "alpha": 0.2
    })";
    return path;
}

}  // namespace

TEST_CASE("roc_from_scores") {
    SUBCASE("perfect separation") {
        const auto table = cli::roc_from_scores("t", {0.1, 0.2}, {0.3, 0.4, 0.5});
        CHECK(table.auc == 1.0);
        double prev_tpr = -1, prev_fpr = -1;
        for (const auto& row : table.rows) {
            CHECK(row.tpr >= prev_tpr);
            CHECK(row.fpr >= prev_fpr);
            prev_tpr = row.tpr;
            prev_fpr = row.fpr;
        }
        CHECK(table.rows.back().tpr == 1.0);
        CHECK(table.rows.back().fpr == 1.0);
    }
    SUBCASE("random scores are chance level") {
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        std::vector<double> pos(1000), neg(3000);
        for (auto& v : pos) v = uni(rng);
        for (auto& v : neg) v = uni(rng);
        const auto table = cli::roc_from_scores("chance", pos, neg);
        CHECK(table.auc == doctest::Approx(0.5).epsilon(0.06));
    }
}

TEST_CASE("config parsing") {
    const auto config = cli::ExperimentConfig::from_json_text(R"({
        "seed": 42,
        "camera": {"width": 16, "height": 16, "pixel_side": 0.004},
        "mesh": {"builtin": "face"},
        "negative_meshes": [{"builtin": "icosphere"}, {"path": "x.obj", "albedo": 0.5}],
        "grid_divisor": 60,
        "alpha": 0.25,
        "illumination": "band",
        "band": [-0.2, 0.3],
        "positives": 10,
        "negatives": 20,
        "reduce": {"rho": 2.5, "max_iters": 123}
    })");
    CHECK(config.seed == 42);
    CHECK(config.camera.width == 16);
    CHECK(config.camera.pixel_side == 0.004);
    CHECK(config.target.builtin == "face");
    CHECK(config.negative_meshes.size() == 2);
    CHECK(config.negative_meshes[1].albedo == 0.5);
    CHECK(config.grid_divisor == 60);
    CHECK(config.alpha == 0.25);
    CHECK(config.band_lo == -0.2);
    CHECK(config.band_hi == 0.3);
    CHECK(config.rho == 2.5);
    CHECK(config.max_iters == 123);
    CHECK(config.hash() == cli::ExperimentConfig::from_json_text(config.canonical_json).hash());

    CHECK_THROWS(cli::ExperimentConfig::from_json_text(R"({"band": [0.5, -0.5]})"));
    CHECK_THROWS(cli::ExperimentConfig::from_json_text(R"({"positives": 0})"));
}

TEST_CASE("image set and cone round trips") {
    const std::string dir = work_dir() + "/imgset";
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> uni(0.0, 1.0);

    io::ImageSet set;
    set.width = 4;
    set.height = 3;
    set.alpha = 0.5;
    for (int k = 0; k < 3; ++k) {
        Eigen::VectorXd img(12);
        for (int i = 0; i < 12; ++i) img[i] = uni(rng);
        set.images.push_back(img);
        set.directions.push_back(Vec3(uni(rng), uni(rng), uni(rng)).normalized());
    }
    set.ambient = set.images[0] * 0.25;
    io::save_image_set(dir, set, true);
    const auto loaded = io::load_image_set(dir);
    CHECK(loaded.width == 4);
    CHECK(loaded.height == 3);
    CHECK(loaded.alpha == 0.5);
    REQUIRE(loaded.images.size() == 3);
    for (int k = 0; k < 3; ++k) {
        CHECK((loaded.images[k] - set.images[k]).norm() == 0.0);  // bit-exact
        CHECK((loaded.directions[k] - set.directions[k]).norm() == 0.0);
    }
    CHECK((loaded.ambient - set.ambient).norm() == 0.0);
    CHECK(fs::exists(dir + "/img_0000.f64.pgm"));

    cone::ConeModel model;
    model.alpha = 0.5;
    model.generators.resize(12, 4);
    for (int k = 0; k < 3; ++k) {
        model.generators.col(k) = set.images[k];
        model.directions.push_back(set.directions[k]);
    }
    model.generators.col(3) = set.ambient;
    model.provenance = "round-trip";
    io::save_cone(dir + "_cone", model, 4, 3);
    const auto cone_back = io::load_cone(dir + "_cone");
    CHECK((cone_back.generators - model.generators).norm() == 0.0);
    CHECK(cone_back.provenance == "round-trip");
    CHECK(cone_back.alpha == 0.5);
}

TEST_CASE("matrix io round trip") {
    std::mt19937_64 rng(13);
    std::normal_distribution<double> g;
    Eigen::MatrixXd M(5, 7);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 7; ++j) M(i, j) = g(rng);
    const std::string path = work_dir() + "/mat.f64";
    io::write_matrix_f64(path, M);
    CHECK((io::read_matrix_f64(path, 5, 7) - M).norm() == 0.0);
    CHECK_THROWS(io::read_matrix_f64(path, 6, 7));
}

TEST_CASE("csv writer stamps the config hash") {
    const std::string path = work_dir() + "/out.csv";
    {
        io::CsvWriter csv(path, "a,b", 0xabcdefull);
        csv.row({1.5, 2.25});
    }
    std::ifstream in(path);
    std::string line1, line2, line3;
    std::getline(in, line1);
    std::getline(in, line2);
    std::getline(in, line3);
    CHECK(line1 == "a,b");
    CHECK(line2.find("# config_hash=") == 0);
    CHECK(line2.find("abcdef") != std::string::npos);
    CHECK(line3 == "1.5,2.25");
    CHECK(io::fnv1a("x") != io::fnv1a("y"));
    CHECK(io::fnv1a("same") == io::fnv1a("same"));
}

TEST_CASE("run_roc at micro scale") {
    auto config = cli::ExperimentConfig::from_json_text(R"({
        "seed": 5,
        "camera": {"width": 16, "height": 16},
        "render": {"samples_per_face": 16, "subpixel": 2},
        "mesh": {"builtin": "face"},
        "negative_meshes": [{"builtin": "icosphere"}],
        "grid_divisor": 90,
        "alpha": 0.1,
        "positives": 12,
        "negatives": 24,
        "dictionaries": ["C1", "S9"]
    })");
    const auto tables = cli::run_roc(config);
    REQUIRE(tables.size() == 2);
    CHECK(tables[0].name == "C1");
    CHECK(tables[1].name == "S9");
    CHECK(tables[0].auc >= 0.9);
    CHECK(tables[0].auc >= tables[1].auc - 1e-12);
    for (const auto& t : tables) {
        CHECK(t.positive_scores.size() == 12);
        CHECK(t.negative_scores.size() == 24);
    }
    // determinism: identical config and seed reproduce identical scores
    const auto again = cli::run_roc(config);
    for (size_t k = 0; k < tables.size(); ++k) {
        CHECK(tables[k].auc == again[k].auc);
        for (size_t i = 0; i < tables[k].positive_scores.size(); ++i) {
            CHECK(tables[k].positive_scores[i] == again[k].positive_scores[i]);
        }
    }
    CHECK_THROWS(cli::run_roc(cli::ExperimentConfig::from_json_text(R"({"positives": 1})")));
}

TEST_CASE("cli binary end to end") {
    const std::string dir = work_dir();
    const std::string config = small_config();

    SUBCASE("usage errors exit with 2") {
        CHECK(run_cli("") == 2);
        CHECK(run_cli("frobnicate") == 2);
        CHECK(run_cli("verify --cone missing") == 2);  // missing required --image
    }
    SUBCASE("defects is deterministic") {
        REQUIRE(run_cli("defects --config " + config + " --out " + dir + "/d1.csv") == 0);
        REQUIRE(run_cli("defects --config " + config + " --out " + dir + "/d2.csv") == 0);
        std::ifstream a(dir + "/d1.csv"), b(dir + "/d2.csv");
        std::stringstream sa, sb;
        sa << a.rdbuf();
        sb << b.rdbuf();
        CHECK(sa.str() == sb.str());
        CHECK(sa.str().find("u_x,u_y,u_z,chi_length") == 0);
    }
    SUBCASE("render, cone, verify, reduce, sample-plan") {
        REQUIRE(run_cli("render --config " + config + " --out " + dir + "/imgs --pgm") == 0);
        CHECK(fs::exists(dir + "/imgs/manifest.json"));
        CHECK(fs::exists(dir + "/imgs/ambient.f64"));

        REQUIRE(run_cli("cone --config " + config + " --out " + dir + "/cone") == 0);
        CHECK(fs::exists(dir + "/cone/manifest.json"));

        // a generator image of the cone must be accepted
        CHECK(run_cli("verify --cone " + dir + "/cone --image " + dir +
                      "/cone/img_0000.f64 --tau 0.3 --eta 1.0") == 0);
        // an orthogonal-ish random image must be rejected
        {
            Eigen::VectorXd junk = Eigen::VectorXd::Zero(144);
            junk[0] = 1.0;  // corner pixel the toy never lights
            io::write_f64(dir + "/junk.f64", junk);
        }
        CHECK(run_cli("verify --cone " + dir + "/cone --image " + dir +
                      "/junk.f64 --tau 0.3 --eta 1.0") == 1);
        // wrong image size is a numerical/usage failure, not a verdict
        {
            Eigen::VectorXd tiny = Eigen::VectorXd::Ones(7);
            io::write_f64(dir + "/tiny.f64", tiny);
        }
        CHECK(run_cli("verify --cone " + dir + "/cone --image " + dir +
                      "/tiny.f64 --tau 0.3 --eta 1.0") == 3);

        REQUIRE(run_cli("reduce --cone " + dir + "/cone --gamma 0.4 --max-iters 600 --out " +
                        dir + "/red") == 0);
        CHECK(fs::exists(dir + "/red/L.f64"));
        CHECK(fs::exists(dir + "/red/S.f64"));
        CHECK(fs::exists(dir + "/red/certificate.json"));
        CHECK(fs::exists(dir + "/red/iterations.csv"));

        CHECK(run_cli("sample-plan --config " + config + " --alpha 1 --epsilon 0.1") == 0);
    }
    SUBCASE("sqrt-order emits a slope") {
        REQUIRE(run_cli("sqrt-order --config " + config + " --out " + dir + "/sqrt.csv") == 0);
        std::ifstream in(dir + "/sqrt.csv");
        std::stringstream ss;
        ss << in.rdbuf();
        CHECK(ss.str().find("# slope=") != std::string::npos);
    }
}
