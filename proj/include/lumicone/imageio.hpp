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
#include "lumicone/render.hpp"

namespace lumicone::io {

/// Raw little-endian float64 vector files (row-major for images).
void write_f64(const std::string& path, const Eigen::VectorXd& values);
Eigen::VectorXd read_f64(const std::string& path);

void write_matrix_f64(const std::string& path, const Eigen::MatrixXd& M);
Eigen::MatrixXd read_matrix_f64(const std::string& path, int rows, int cols);

/// 8-bit max-normalized preview.
void write_pgm(const std::string& path, const Eigen::VectorXd& image, int width, int height);

/// Image directory: one .f64 file per image plus manifest.json carrying the
/// sensor size, ambient level, directions and options.
struct ImageSet {
    int width = 0;
    int height = 0;
    double alpha = 0;
    std::vector<Vec3> directions;           // one per point image
    std::vector<Eigen::VectorXd> images;    // point images
    Eigen::VectorXd ambient;                // may be empty
    std::string options_json = "{}";
};

void save_image_set(const std::string& dir, const ImageSet& set, bool pgm_previews = false);
ImageSet load_image_set(const std::string& dir);

/// Cone persistence reuses the image-directory format: generator columns are
/// stored with their directions, the ambient column separately.
void save_cone(const std::string& dir, const cone::ConeModel& model, int width, int height,
               bool pgm_previews = false);
cone::ConeModel load_cone(const std::string& dir);

/// FNV-1a hash used to stamp emitted CSV files with their config.
std::uint64_t fnv1a(const std::string& text);

/// CSV with a named header row and a config-hash comment row.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::string& header, std::uint64_t config_hash);
    ~CsvWriter();
    void raw_row(const std::string& line);
    void row(const std::vector<double>& values);

private:
    std::FILE* out_;
};

}  // namespace lumicone::io
