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

#include "lumicone/accel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lumicone::vis {

std::optional<TriHit> intersect_triangle(const Vec3& v0, const Vec3& v1, const Vec3& v2,
                                         const Vec3& origin, const Vec3& dir, int face,
                                         double t_min) {
    const Vec3 e1 = v1 - v0;
    const Vec3 e2 = v2 - v0;
    const Vec3 p = dir.cross(e2);
    const double det = e1.dot(p);
    if (std::abs(det) < 1e-14) return std::nullopt;
    const double inv = 1.0 / det;
    const Vec3 tv = origin - v0;
    const double s = tv.dot(p) * inv;
    if (s < 0.0 || s > 1.0) return std::nullopt;
    const Vec3 q = tv.cross(e1);
    const double t = dir.dot(q) * inv;
    if (t < 0.0 || s + t > 1.0) return std::nullopt;
    const double ray_t = e2.dot(q) * inv;
    if (ray_t <= t_min) return std::nullopt;
    return TriHit{ray_t, face, s, t};
}

UniformGrid::UniformGrid(const mesh::TriangulatedObject& obj) : obj_(obj) {
    lo_ = Vec3::Constant(std::numeric_limits<double>::infinity());
    hi_ = -lo_;
    for (const auto& v : obj.vertices()) {
        lo_ = lo_.cwiseMin(v);
        hi_ = hi_.cwiseMax(v);
    }
    diag_ = (hi_ - lo_).norm();
    const double pad = std::max(1e-12, 1e-9 * diag_);
    lo_ -= Vec3::Constant(pad);
    hi_ += Vec3::Constant(pad);

    // Aim for ~4 faces per occupied cell; flat axes collapse to one cell.
    const Vec3 extent = hi_ - lo_;
    const double target = std::max(1.0, std::cbrt(obj.face_count() / 4.0));
    const double ref = std::max({extent.x(), extent.y(), extent.z()});
    for (int a = 0; a < 3; ++a) {
        int n = 1;
        if (extent[a] > 1e-7 * ref) {
            n = std::clamp(static_cast<int>(std::ceil(target * extent[a] / ref * 2.0)), 1, 64);
        }
        (a == 0 ? nx_ : a == 1 ? ny_ : nz_) = n;
    }
    cell_size_ = Vec3(extent.x() / nx_, extent.y() / ny_, extent.z() / nz_);
    cells_.assign(static_cast<size_t>(nx_) * ny_ * nz_, {});

    for (int f = 0; f < obj.face_count(); ++f) {
        const auto v = obj.face_vertices(f);
        Vec3 flo = v[0].cwiseMin(v[1]).cwiseMin(v[2]);
        Vec3 fhi = v[0].cwiseMax(v[1]).cwiseMax(v[2]);
        int i0[3], i1[3];
        for (int a = 0; a < 3; ++a) {
            const int n = (a == 0 ? nx_ : a == 1 ? ny_ : nz_);
            i0[a] = std::clamp(static_cast<int>((flo[a] - lo_[a]) / cell_size_[a]), 0, n - 1);
            i1[a] = std::clamp(static_cast<int>((fhi[a] - lo_[a]) / cell_size_[a]), 0, n - 1);
        }
        for (int iz = i0[2]; iz <= i1[2]; ++iz)
            for (int iy = i0[1]; iy <= i1[1]; ++iy)
                for (int ix = i0[0]; ix <= i1[0]; ++ix)
                    cells_[cell_index(ix, iy, iz)].push_back(f);
    }
}

std::optional<TriHit> UniformGrid::first_hit_brute(const Vec3& origin, const Vec3& dir,
                                                   double t_min, int exclude_face) const {
    std::optional<TriHit> best;
    for (int f = 0; f < obj_.face_count(); ++f) {
        if (f == exclude_face) continue;
        const auto v = obj_.face_vertices(f);
        auto hit = intersect_triangle(v[0], v[1], v[2], origin, dir, f, t_min);
        if (hit && (!best || hit->t < best->t)) best = hit;
    }
    return best;
}

std::optional<TriHit> UniformGrid::first_hit(const Vec3& origin, const Vec3& dir, double t_min,
                                             int exclude_face) const {
    if (static_cast<int>(cells_.size()) <= 8) {
        return first_hit_brute(origin, dir, t_min, exclude_face);
    }

    // Clip the ray against the bounding box.
    double t_enter = 0.0;
    double t_exit = std::numeric_limits<double>::infinity();
    for (int a = 0; a < 3; ++a) {
        if (std::abs(dir[a]) < 1e-300) {
            if (origin[a] < lo_[a] || origin[a] > hi_[a]) return std::nullopt;
        } else {
            double ta = (lo_[a] - origin[a]) / dir[a];
            double tb = (hi_[a] - origin[a]) / dir[a];
            if (ta > tb) std::swap(ta, tb);
            t_enter = std::max(t_enter, ta);
            t_exit = std::min(t_exit, tb);
        }
    }
    if (t_enter > t_exit) return std::nullopt;

    const Vec3 start = origin + t_enter * dir;
    int ix = std::clamp(static_cast<int>((start.x() - lo_.x()) / cell_size_.x()), 0, nx_ - 1);
    int iy = std::clamp(static_cast<int>((start.y() - lo_.y()) / cell_size_.y()), 0, ny_ - 1);
    int iz = std::clamp(static_cast<int>((start.z() - lo_.z()) / cell_size_.z()), 0, nz_ - 1);

    int step[3], idx[3] = {ix, iy, iz};
    const int dims[3] = {nx_, ny_, nz_};
    double t_max[3], t_delta[3];
    for (int a = 0; a < 3; ++a) {
        if (dir[a] > 1e-300) {
            step[a] = 1;
            t_max[a] = ((lo_[a] + (idx[a] + 1) * cell_size_[a]) - origin[a]) / dir[a];
            t_delta[a] = cell_size_[a] / dir[a];
        } else if (dir[a] < -1e-300) {
            step[a] = -1;
            t_max[a] = ((lo_[a] + idx[a] * cell_size_[a]) - origin[a]) / dir[a];
            t_delta[a] = -cell_size_[a] / dir[a];
        } else {
            step[a] = 0;
            t_max[a] = std::numeric_limits<double>::infinity();
            t_delta[a] = std::numeric_limits<double>::infinity();
        }
    }

    std::optional<TriHit> best;
    while (true) {
        const auto& bucket = cells_[cell_index(idx[0], idx[1], idx[2])];
        for (int f : bucket) {
            if (f == exclude_face) continue;
            const auto v = obj_.face_vertices(f);
            auto hit = intersect_triangle(v[0], v[1], v[2], origin, dir, f, t_min);
            if (hit && (!best || hit->t < best->t)) best = hit;
        }
        const int axis = (t_max[0] <= t_max[1] && t_max[0] <= t_max[2]) ? 0
                         : (t_max[1] <= t_max[2])                       ? 1
                                                                        : 2;
        const double cell_exit = t_max[axis];
        if (best && best->t <= cell_exit + 1e-12 * (1.0 + std::abs(cell_exit))) return best;
        if (cell_exit > t_exit) return best;
        idx[axis] += step[axis];
        if (idx[axis] < 0 || idx[axis] >= dims[axis]) return best;
        t_max[axis] += t_delta[axis];
    }
}

}  // namespace lumicone::vis
