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

#include "lumicone/meshes.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace lumicone::mesh {

namespace {
using Face = std::array<int, 3>;
}  // namespace

TriangulatedObject unit_right_triangle(double albedo) {
    std::vector<Vec3> v = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
    std::vector<Face> f = {{0, 1, 2}};  // normal (0,0,1)
    return TriangulatedObject(std::move(v), std::move(f), {albedo});
}

TriangulatedObject unit_cube(double albedo) {
    std::vector<Vec3> v = {
        {0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0},
        {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1},
    };
    // Outward winding on each of the six sides.
    std::vector<Face> f = {
        {0, 2, 1}, {0, 3, 2},  // z=0, normal -z
        {4, 5, 6}, {4, 6, 7},  // z=1, normal +z
        {0, 1, 5}, {0, 5, 4},  // y=0, normal -y
        {3, 7, 6}, {3, 6, 2},  // y=1, normal +y
        {0, 4, 7}, {0, 7, 3},  // x=0, normal -x
        {1, 2, 6}, {1, 6, 5},  // x=1, normal +x
    };
    return TriangulatedObject(std::move(v), std::move(f),
                              std::vector<double>(12, albedo));
}

TriangulatedObject icosphere(int subdiv, double radius, const Vec3& center, double albedo) {
    if (subdiv < 0) throw std::invalid_argument("icosphere: negative subdivision");
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Vec3> verts = {
        {-1, phi, 0}, {1, phi, 0}, {-1, -phi, 0}, {1, -phi, 0},
        {0, -1, phi}, {0, 1, phi}, {0, -1, -phi}, {0, 1, -phi},
        {phi, 0, -1}, {phi, 0, 1}, {-phi, 0, -1}, {-phi, 0, 1},
    };
    for (auto& v : verts) v.normalize();
    std::vector<Face> faces = {
        {0, 11, 5}, {0, 5, 1}, {0, 1, 7}, {0, 7, 10}, {0, 10, 11},
        {1, 5, 9}, {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
        {3, 9, 4}, {3, 4, 2}, {3, 2, 6}, {3, 6, 8}, {3, 8, 9},
        {4, 9, 5}, {2, 4, 11}, {6, 2, 10}, {8, 6, 7}, {9, 8, 1},
    };
    for (int level = 0; level < subdiv; ++level) {
        std::map<std::pair<int, int>, int> midpoint;
        auto mid = [&](int a, int b) {
            auto key = std::minmax(a, b);
            auto it = midpoint.find(key);
            if (it != midpoint.end()) return it->second;
            Vec3 m = (verts[a] + verts[b]).normalized();
            verts.push_back(m);
            const int idx = static_cast<int>(verts.size()) - 1;
            midpoint[key] = idx;
            return idx;
        };
        std::vector<Face> next;
        next.reserve(faces.size() * 4);
        for (const auto& f : faces) {
            const int a = mid(f[0], f[1]);
            const int b = mid(f[1], f[2]);
            const int c = mid(f[2], f[0]);
            next.push_back({f[0], a, c});
            next.push_back({f[1], b, a});
            next.push_back({f[2], c, b});
            next.push_back({a, b, c});
        }
        faces = std::move(next);
    }
    for (auto& v : verts) v = center + radius * v;
    return TriangulatedObject(std::move(verts), std::move(faces),
                              std::vector<double>(faces.size(), albedo));
}

TriangulatedObject two_plane_toy(double side, double albedo) {
    const double a = side;
    std::vector<Vec3> v = {
        {-a / 2, 0, 0},  // 0: A
        {a / 2, 0, 0},   // 1: B
        {a / 2, 0, a},   // 2: C
        {-a / 2, 0, a},  // 3: D
        {a / 2, a, 0},   // 4: B'
        {-a / 2, a, 0},  // 5: A'
    };
    // Vertex order matters downstream: surface strata advance from the
    // (v0,v1) edge toward v2, so these windings give constant-z strips on S1.
    std::vector<Face> f = {
        {1, 0, 2},  // S1, normal +y
        {3, 2, 0},  // S1, normal +y
        {0, 1, 4},  // S2, normal +z
        {4, 5, 0},  // S2, normal +z
    };
    return TriangulatedObject(std::move(v), std::move(f), std::vector<double>(4, albedo));
}

TriangulatedObject l_bracket(double scale, double albedo) {
    const double s = scale, t = 0.4 * scale, d = 0.5 * scale;
    // CCW cross-section polygon of the L in the xy plane.
    const std::array<std::array<double, 2>, 6> poly = {{
        {0, 0}, {s, 0}, {s, t}, {t, t}, {t, s}, {0, s},
    }};
    std::vector<Vec3> v;
    for (const auto& p : poly) v.emplace_back(p[0], p[1], 0.0);
    for (const auto& p : poly) v.emplace_back(p[0], p[1], d);
    std::vector<Face> f;
    // Caps (fan from vertex 0 stays inside the L for this polygon).
    for (int k = 1; k < 5; ++k) {
        f.push_back({0, k + 1, k});          // bottom, normal -z
        f.push_back({6, 6 + k, 6 + k + 1});  // top, normal +z
    }
    // Side walls.
    for (int k = 0; k < 6; ++k) {
        const int i = k, j = (k + 1) % 6;
        f.push_back({i, j, 6 + j});
        f.push_back({i, 6 + j, 6 + i});
    }
    return TriangulatedObject(std::move(v), std::move(f), std::vector<double>(20, albedo));
}

TriangulatedObject face_like(int subdiv, double radius, const Vec3& center, const Vec3& nose_dir,
                             double albedo) {
    TriangulatedObject base = icosphere(subdiv, 1.0, Vec3::Zero(), albedo);
    const Vec3 n0 = nose_dir.normalized();
    std::vector<Vec3> v = base.vertices();
    for (auto& p : v) {
        const Vec3 dir = p.normalized();
        const double bump = 0.9 * std::exp(-(dir - n0).squaredNorm() / (0.35 * 0.35));
        p = center + radius * (1.0 + bump) * dir;
    }
    return TriangulatedObject(std::move(v), std::vector<Face>(base.faces().begin(), base.faces().end()),
                              std::vector<double>(base.face_count(), albedo));
}

TriangulatedObject transformed(const TriangulatedObject& obj, const Mat3& rot, const Vec3& t,
                               double scale) {
    std::vector<Vec3> v = obj.vertices();
    for (auto& p : v) p = rot * (scale * p) + t;
    return TriangulatedObject(std::move(v),
                              std::vector<Face>(obj.faces().begin(), obj.faces().end()),
                              std::vector<double>(obj.albedo()));
}

Mat3 rotation_between(const Vec3& a, const Vec3& b) {
    const Vec3 u = a.normalized(), w = b.normalized();
    const double c = u.dot(w);
    if (c > 1.0 - 1e-12) return Mat3::Identity();
    Vec3 axis = u.cross(w);
    if (axis.norm() < 1e-12) {  // antipodal: rotate pi about any orthogonal axis
        axis = tangent_frame(u)[0];
        return Eigen::AngleAxisd(M_PI, axis).toRotationMatrix();
    }
    return Eigen::AngleAxisd(std::acos(std::clamp(c, -1.0, 1.0)), axis.normalized())
        .toRotationMatrix();
}

namespace {
constexpr double kDeskAlbedo = 0.75;
const Vec3 kDeskCenter(0, 0, 2.0);
}  // namespace

TriangulatedObject desk_icosphere() {
    return icosphere(2, 0.07, kDeskCenter, kDeskAlbedo);
}

TriangulatedObject desk_two_plane_toy() {
    // Rotate about x by -135 deg: both square normals end up facing the
    // camera (-z) so the concave side, and its shadows, are imaged.
    TriangulatedObject local = two_plane_toy(0.1, kDeskAlbedo);
    const Mat3 rot = Eigen::AngleAxisd(-0.75 * M_PI, Vec3::UnitX()).toRotationMatrix();
    return transformed(local, rot, kDeskCenter);
}

TriangulatedObject desk_l_bracket() {
    TriangulatedObject local = l_bracket(1.0, kDeskAlbedo);
    // Center the bracket, then aim the concave corner (local +x+y diagonal)
    // at the camera.
    TriangulatedObject centered = transformed(local, Mat3::Identity(),
                                              Vec3(-0.5, -0.5, -0.25), 1.0);
    const Mat3 rot = rotation_between(Vec3(1, 1, 0).normalized(), Vec3(0, 0, -1));
    return transformed(centered, rot, kDeskCenter, 0.09);
}

TriangulatedObject desk_face() {
    return face_like(2, 0.055, kDeskCenter, Vec3(0, 0, -1), kDeskAlbedo);
}

TriangulatedObject desk_cube() {
    TriangulatedObject local = unit_cube(kDeskAlbedo);
    TriangulatedObject centered =
        transformed(local, Mat3::Identity(), Vec3(-0.5, -0.5, -0.5), 1.0);
    const Mat3 rot = rotation_between(Vec3(1, 1, 1).normalized(), Vec3(0, 0, -1));
    return transformed(centered, rot, kDeskCenter, 0.08);
}

TriangulatedObject make_builtin(const std::string& name) {
    if (name == "icosphere") return desk_icosphere();
    if (name == "toy") return desk_two_plane_toy();
    if (name == "bracket") return desk_l_bracket();
    if (name == "face") return desk_face();
    if (name == "cube") return desk_cube();
    throw std::runtime_error("unknown builtin mesh: " + name);
}

}  // namespace lumicone::mesh
