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

#include "lumicone/imageio.hpp"

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace lumicone::io {

namespace fs = std::filesystem;
using nlohmann::json;

void write_f64(const std::string& path, const Eigen::VectorXd& values) {
    std::FILE* out = std::fopen(path.c_str(), "wb");
    if (!out) throw std::runtime_error("cannot write " + path);
    std::fwrite(values.data(), sizeof(double), values.size(), out);
    std::fclose(out);
}

Eigen::VectorXd read_f64(const std::string& path) {
    std::FILE* in = std::fopen(path.c_str(), "rb");
    if (!in) throw std::runtime_error("cannot read " + path);
    std::fseek(in, 0, SEEK_END);
    const long bytes = std::ftell(in);
    std::fseek(in, 0, SEEK_SET);
    if (bytes < 0 || bytes % 8 != 0) {
        std::fclose(in);
        throw std::runtime_error(path + ": not a float64 file");
    }
    Eigen::VectorXd values(bytes / 8);
    const size_t got = std::fread(values.data(), sizeof(double), values.size(), in);
    std::fclose(in);
    if (got != static_cast<size_t>(values.size())) throw std::runtime_error(path + ": short read");
    return values;
}

void write_matrix_f64(const std::string& path, const Eigen::MatrixXd& M) {
    // row-major on disk
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> R = M;
    std::FILE* out = std::fopen(path.c_str(), "wb");
    if (!out) throw std::runtime_error("cannot write " + path);
    std::fwrite(R.data(), sizeof(double), R.size(), out);
    std::fclose(out);
}

Eigen::MatrixXd read_matrix_f64(const std::string& path, int rows, int cols) {
    Eigen::VectorXd flat = read_f64(path);
    if (flat.size() != static_cast<long>(rows) * cols) {
        throw std::runtime_error(path + ": size does not match requested shape");
    }
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> R(rows, cols);
    std::copy(flat.data(), flat.data() + flat.size(), R.data());
    return R;
}

void write_pgm(const std::string& path, const Eigen::VectorXd& image, int width, int height) {
    if (image.size() != static_cast<long>(width) * height) {
        throw std::invalid_argument("write_pgm: size mismatch");
    }
    const double top = image.maxCoeff();
    std::FILE* out = std::fopen(path.c_str(), "wb");
    if (!out) throw std::runtime_error("cannot write " + path);
    std::fprintf(out, "P5\n%d %d\n255\n", width, height);
    for (long i = 0; i < image.size(); ++i) {
        const double v = top > 0 ? image[i] / top : 0.0;
        const unsigned char byte = static_cast<unsigned char>(std::lround(255.0 * v));
        std::fputc(byte, out);
    }
    std::fclose(out);
}

namespace {

std::string image_name(size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "img_%04zu.f64", i);
    return buf;
}

}  // namespace

void save_image_set(const std::string& dir, const ImageSet& set, bool pgm_previews) {
    fs::create_directories(dir);
    json manifest;
    manifest["width"] = set.width;
    manifest["height"] = set.height;
    manifest["alpha"] = set.alpha;
    manifest["options"] = json::parse(set.options_json);
    manifest["images"] = json::array();
    for (size_t i = 0; i < set.images.size(); ++i) {
        const std::string name = image_name(i);
        write_f64(dir + "/" + name, set.images[i]);
        if (pgm_previews) {
            write_pgm(dir + "/" + name + ".pgm", set.images[i], set.width, set.height);
        }
        manifest["images"].push_back(
            {{"file", name},
             {"kind", "point"},
             {"direction",
              {set.directions[i].x(), set.directions[i].y(), set.directions[i].z()}}});
    }
    if (set.ambient.size() > 0) {
        write_f64(dir + "/ambient.f64", set.ambient);
        if (pgm_previews) write_pgm(dir + "/ambient.f64.pgm", set.ambient, set.width, set.height);
        manifest["ambient"] = "ambient.f64";
    }
    std::ofstream out(dir + "/manifest.json");
    out << manifest.dump(2) << "\n";
}

ImageSet load_image_set(const std::string& dir) {
    std::ifstream in(dir + "/manifest.json");
    if (!in) throw std::runtime_error("missing manifest: " + dir);
    json manifest = json::parse(in);
    ImageSet set;
    set.width = manifest.at("width");
    set.height = manifest.at("height");
    set.alpha = manifest.value("alpha", 0.0);
    set.options_json = manifest.value("options", json::object()).dump();
    for (const auto& entry : manifest.at("images")) {
        const auto d = entry.at("direction");
        set.directions.emplace_back(d[0], d[1], d[2]);
        set.images.push_back(read_f64(dir + "/" + entry.at("file").get<std::string>()));
    }
    if (manifest.contains("ambient")) {
        set.ambient = read_f64(dir + "/" + manifest.at("ambient").get<std::string>());
    }
    return set;
}

void save_cone(const std::string& dir, const cone::ConeModel& model, int width, int height,
               bool pgm_previews) {
    ImageSet set;
    set.width = width;
    set.height = height;
    set.alpha = model.alpha;
    set.directions = model.directions;
    const int n_point = model.n() - 1;
    for (int j = 0; j < n_point; ++j) set.images.push_back(model.generators.col(j));
    set.ambient = model.generators.col(n_point);
    json opts;
    opts["cone"] = true;
    opts["provenance"] = model.provenance;
    set.options_json = opts.dump();
    save_image_set(dir, set, pgm_previews);
}

cone::ConeModel load_cone(const std::string& dir) {
    const ImageSet set = load_image_set(dir);
    if (set.ambient.size() == 0) {
        throw std::runtime_error(dir + ": image set has no ambient column, not a cone");
    }
    cone::ConeModel model;
    model.alpha = set.alpha;
    model.directions = set.directions;
    model.provenance = json::parse(set.options_json).value("provenance", "");
    model.generators.resize(set.ambient.size(), set.images.size() + 1);
    for (size_t j = 0; j < set.images.size(); ++j) model.generators.col(j) = set.images[j];
    model.generators.col(set.images.size()) = set.ambient;
    return model;
}

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t hash = 1469598103934665603ull;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 1099511628211ull;
    }
    return hash;
}

CsvWriter::CsvWriter(const std::string& path, const std::string& header,
                     std::uint64_t config_hash) {
    out_ = std::fopen(path.c_str(), "w");
    if (!out_) throw std::runtime_error("cannot write " + path);
    std::fprintf(out_, "%s\n", header.c_str());
    std::fprintf(out_, "# config_hash=%016llx\n", static_cast<unsigned long long>(config_hash));
}

CsvWriter::~CsvWriter() {
    if (out_) std::fclose(out_);
}

void CsvWriter::raw_row(const std::string& line) { std::fprintf(out_, "%s\n", line.c_str()); }

void CsvWriter::row(const std::vector<double>& values) {
    std::string line;
    char buf[40];
    for (size_t i = 0; i < values.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", values[i]);
        if (i) line += ",";
        line += buf;
    }
    raw_row(line);
}

}  // namespace lumicone::io
