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

#include "lumicone/sampling.hpp"

#include <cmath>
#include <stdexcept>

namespace lumicone::render {

namespace {

void add_sample(SampleSet& set, const mesh::TriangulatedObject& obj, int f, double s, double t,
                double w) {
    set.position.push_back(obj.barycentric_point(f, s, t));
    set.face.push_back(f);
    set.weight.push_back(w);
}

// k*k congruent sub-triangles, sampled at their centroids.
void grid_samples(SampleSet& set, const mesh::TriangulatedObject& obj, int f, int k, double w) {
    const double inv = 1.0 / (3.0 * k);
    for (int a = 0; a < k; ++a) {
        for (int b = 0; b < k - a; ++b) {
            add_sample(set, obj, f, (3 * a + 1) * inv, (3 * b + 1) * inv, w);
            if (a + b < k - 1) {
                add_sample(set, obj, f, (3 * a + 2) * inv, (3 * b + 2) * inv, w);
            }
        }
    }
}

// K equal-area strips between the (v0,v1) edge (t=0) and v2 (t=1), each
// sampled at its centroid.
void strip_samples(SampleSet& set, const mesh::TriangulatedObject& obj, int f, int K, double w) {
    for (int i = 0; i < K; ++i) {
        const double t0 = 1.0 - std::sqrt(1.0 - static_cast<double>(i) / K);
        const double t1 = 1.0 - std::sqrt(1.0 - static_cast<double>(i + 1) / K);
        // Centroid of the trapezoid strip: integrate t*(1-t) over [t0,t1]
        // against the strip width (1-t).
        auto m1 = [](double t) { return t * t / 2.0 - t * t * t / 3.0; };
        auto m0 = [](double t) { return t - t * t / 2.0; };
        const double tbar = (m1(t1) - m1(t0)) / (m0(t1) - m0(t0));
        add_sample(set, obj, f, (1.0 - tbar) / 2.0, tbar, w);
    }
}

}  // namespace

SampleSet sample_surface(const mesh::TriangulatedObject& obj, int samples_per_face) {
    if (samples_per_face < 1) throw std::invalid_argument("samples_per_face must be >= 1");
    SampleSet set;
    set.samples_per_face = samples_per_face;
    set.position.reserve(static_cast<size_t>(obj.face_count()) * samples_per_face);
    const int k = static_cast<int>(std::lround(std::sqrt(double(samples_per_face))));
    const bool square = k * k == samples_per_face;
    for (int f = 0; f < obj.face_count(); ++f) {
        const double w = obj.face_area(f) / samples_per_face;
        if (square) {
            grid_samples(set, obj, f, k, w);
        } else {
            strip_samples(set, obj, f, samples_per_face, w);
        }
        set.total_area += obj.face_area(f);
    }
    return set;
}

std::vector<Vec3> cosine_hemisphere(const Vec3& n, int n_points) {
    if (n_points < 1) throw std::invalid_argument("cosine_hemisphere: need at least one point");
    const auto frame = tangent_frame(n);
    const double golden = M_PI * (3.0 - std::sqrt(5.0));
    std::vector<Vec3> dirs;
    dirs.reserve(n_points);
    for (int i = 0; i < n_points; ++i) {
        const double u = (i + 0.5) / n_points;  // CDF of the cosine-weighted polar angle
        const double r = std::sqrt(u);
        const double z = std::sqrt(1.0 - u);
        const double phi = golden * i;
        dirs.push_back(r * std::cos(phi) * frame[0] + r * std::sin(phi) * frame[1] + z * n);
    }
    return dirs;
}

}  // namespace lumicone::render
