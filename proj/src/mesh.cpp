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

#include "lumicone/mesh.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace lumicone::mesh {

namespace {

[[noreturn]] void fail(const std::string& msg) {
    std::cerr << "mesh validation: " << msg << "\n";
    throw std::runtime_error("mesh validation failed: " + msg);
}

}  // namespace

TriangulatedObject::TriangulatedObject(std::vector<Vec3> vertices,
                                       std::vector<std::array<int, 3>> faces,
                                       std::vector<double> albedo)
    : vertices_(std::move(vertices)), faces_(std::move(faces)), albedo_(std::move(albedo)) {
    if (faces_.empty()) fail("no faces");
    if (albedo_.size() != faces_.size()) fail("albedo count does not match face count");

    const int nv = static_cast<int>(vertices_.size());
    double total_area = 0;
    normals_.reserve(faces_.size());
    areas_.reserve(faces_.size());
    for (size_t f = 0; f < faces_.size(); ++f) {
        const auto& idx = faces_[f];
        for (int k = 0; k < 3; ++k) {
            if (idx[k] < 0 || idx[k] >= nv) fail("face vertex index out of range");
        }
        if (idx[0] == idx[1] || idx[1] == idx[2] || idx[0] == idx[2]) {
            fail("face with repeated vertex at face " + std::to_string(f));
        }
        const Vec3 e1 = vertices_[idx[1]] - vertices_[idx[0]];
        const Vec3 e2 = vertices_[idx[2]] - vertices_[idx[0]];
        const Vec3 cross = e1.cross(e2);
        const double area = 0.5 * cross.norm();
        areas_.push_back(area);
        total_area += area;
        normals_.push_back(area > 0 ? Vec3(cross / cross.norm()) : Vec3(0, 0, 0));

        if (albedo_[f] <= 0.0 || albedo_[f] > 1.0) {
            fail("albedo out of (0,1] at face " + std::to_string(f));
        }
    }
    for (size_t f = 0; f < faces_.size(); ++f) {
        if (areas_[f] < 1e-12 * total_area) {
            fail("degenerate (near zero-area) face " + std::to_string(f));
        }
    }

    // Interior edges must be traversed once in each direction; more than two
    // incidences means a non-manifold edge.
    std::map<std::pair<int, int>, int> directed;
    for (const auto& idx : faces_) {
        for (int k = 0; k < 3; ++k) {
            const int a = idx[k];
            const int b = idx[(k + 1) % 3];
            directed[{a, b}] += 1;
        }
    }
    for (const auto& [e, count] : directed) {
        if (count > 1) {
            fail("inconsistent orientation: directed edge (" + std::to_string(e.first) + "," +
                 std::to_string(e.second) + ") traversed " + std::to_string(count) + " times");
        }
        auto rev = directed.find({e.second, e.first});
        // count==1 with missing reverse is a boundary edge, which is fine.
        (void)rev;
    }
}

bool TriangulatedObject::point_on_face(int f, const Vec3& p, double tol) const {
    const auto v = face_vertices(f);
    const Vec3 e1 = v[1] - v[0];
    const Vec3 e2 = v[2] - v[0];
    const Vec3 d = p - v[0];
    const double scale = std::max(e1.norm(), e2.norm());
    if (std::abs(d.dot(normals_[f])) > tol * std::max(1.0, scale)) return false;
    // Solve d = s*e1 + t*e2 in the face plane.
    const double a = e1.dot(e1), b = e1.dot(e2), c = e2.dot(e2);
    const double det = a * c - b * b;
    if (det <= 0) return false;
    const double s = (c * d.dot(e1) - b * d.dot(e2)) / det;
    const double t = (a * d.dot(e2) - b * d.dot(e1)) / det;
    const double eps = tol;
    return s >= -eps && t >= -eps && s + t <= 1.0 + eps;
}

double surface_area(const TriangulatedObject& obj) {
    double a = 0;
    for (int f = 0; f < obj.face_count(); ++f) a += obj.face_area(f);
    return a;
}

double diameter(const TriangulatedObject& obj) {
    const auto& v = obj.vertices();
    double best = 0;
    for (size_t i = 0; i < v.size(); ++i) {
        for (size_t j = i + 1; j < v.size(); ++j) {
            best = std::max(best, (v[i] - v[j]).squaredNorm());
        }
    }
    return std::sqrt(best);
}

int EdgeTable::interior_count() const {
    int n = 0;
    for (const auto& e : edges) n += e.interior() ? 1 : 0;
    return n;
}

int EdgeTable::boundary_count() const {
    return static_cast<int>(edges.size()) - interior_count();
}

EdgeTable build_edge_table(const TriangulatedObject& obj) {
    std::map<std::pair<int, int>, std::vector<int>> adj;
    for (int f = 0; f < obj.face_count(); ++f) {
        const auto& idx = obj.faces()[f];
        for (int k = 0; k < 3; ++k) {
            int a = idx[k], b = idx[(k + 1) % 3];
            if (a > b) std::swap(a, b);
            adj[{a, b}].push_back(f);
        }
    }
    EdgeTable table;
    table.edges.reserve(adj.size());
    for (auto& [key, faces] : adj) {
        if (faces.size() > 2) {
            fail("non-manifold edge (" + std::to_string(key.first) + "," +
                 std::to_string(key.second) + ") shared by " + std::to_string(faces.size()) +
                 " faces");
        }
        Edge e;
        e.v0 = key.first;
        e.v1 = key.second;
        e.adjacent_faces = std::move(faces);
        e.length = (obj.vertices()[e.v0] - obj.vertices()[e.v1]).norm();
        if (!(e.length > 0)) fail("zero-length edge");
        table.edges.push_back(std::move(e));
    }
    return table;
}

namespace {

struct ObjData {
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 3>> faces;
};

ObjData parse_obj(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open mesh file: " + path);
    ObjData data;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ss(line);
        std::string tag;
        if (!(ss >> tag)) continue;
        if (tag == "#") continue;
        if (tag == "v") {
            double x, y, z;
            if (!(ss >> x >> y >> z)) {
                throw std::runtime_error(path + ":" + std::to_string(lineno) + ": bad vertex");
            }
            data.vertices.emplace_back(x, y, z);
        } else if (tag == "f") {
            std::vector<long> idx;
            std::string tok;
            while (ss >> tok) {
                // Accept "i", "i/t", "i/t/n" forms but only use the vertex index.
                idx.push_back(std::strtol(tok.c_str(), nullptr, 10));
            }
            if (idx.size() != 3) {
                throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                         ": non-triangle face with " + std::to_string(idx.size()) +
                                         " vertices");
            }
            std::array<int, 3> f{};
            for (int k = 0; k < 3; ++k) {
                long i = idx[k];
                if (i < 0) i = static_cast<long>(data.vertices.size()) + 1 + i;
                f[k] = static_cast<int>(i - 1);  // OBJ is 1-based
            }
            data.faces.push_back(f);
        }
        // other records (vn, vt, usemtl, ...) are ignored
    }
    if (data.faces.empty()) throw std::runtime_error(path + ": no faces found");
    return data;
}

}  // namespace

TriangulatedObject load_mesh(const std::string& path, double constant_albedo) {
    ObjData data = parse_obj(path);
    std::vector<double> albedo(data.faces.size(), constant_albedo);
    return TriangulatedObject(std::move(data.vertices), std::move(data.faces), std::move(albedo));
}

TriangulatedObject load_mesh(const std::string& path, const std::string& albedo_csv_path) {
    ObjData data = parse_obj(path);
    std::vector<double> albedo(data.faces.size(), -1.0);
    std::ifstream in(albedo_csv_path);
    if (!in) throw std::runtime_error("cannot open albedo csv: " + albedo_csv_path);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        std::string a, b;
        if (!std::getline(ss, a, ',') || !std::getline(ss, b)) {
            throw std::runtime_error("bad albedo csv line: " + line);
        }
        if (a == "face_index") continue;  // header
        const int f = std::stoi(a);
        if (f < 0 || f >= static_cast<int>(albedo.size())) {
            throw std::runtime_error("albedo csv face index out of range: " + a);
        }
        albedo[f] = std::stod(b);
    }
    for (size_t f = 0; f < albedo.size(); ++f) {
        if (albedo[f] < 0) {
            throw std::runtime_error("albedo csv missing face " + std::to_string(f));
        }
    }
    return TriangulatedObject(std::move(data.vertices), std::move(data.faces), std::move(albedo));
}

void save_obj(const TriangulatedObject& obj, const std::string& path) {
    std::FILE* out = std::fopen(path.c_str(), "w");
    if (!out) throw std::runtime_error("cannot write mesh file: " + path);
    for (const auto& v : obj.vertices()) {
        std::fprintf(out, "v %.17g %.17g %.17g\n", v.x(), v.y(), v.z());
    }
    for (const auto& f : obj.faces()) {
        std::fprintf(out, "f %d %d %d\n", f[0] + 1, f[1] + 1, f[2] + 1);
    }
    std::fclose(out);
}

}  // namespace lumicone::mesh
