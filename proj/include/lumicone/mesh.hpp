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

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lumicone/geometry.hpp"

namespace lumicone::mesh {

using FaceIndex = std::int32_t;

/// Triangle mesh with per-face albedo. Faces keep a consistent winding; the
/// right-hand-rule normal of each face is the outward side. Immutable after
/// construction and safe to share across threads.
class TriangulatedObject {
public:
    /// Validates and builds the object. Throws std::runtime_error on
    /// degenerate faces, out-of-range albedo, non-manifold edges, or
    /// inconsistent winding across interior edges.
    TriangulatedObject(std::vector<Vec3> vertices,
                       std::vector<std::array<int, 3>> faces,
                       std::vector<double> albedo);

    const std::vector<Vec3>& vertices() const { return vertices_; }
    const std::vector<std::array<int, 3>>& faces() const { return faces_; }
    const std::vector<double>& albedo() const { return albedo_; }

    int face_count() const { return static_cast<int>(faces_.size()); }
    int vertex_count() const { return static_cast<int>(vertices_.size()); }

    const Vec3& normal(int f) const { return normals_[f]; }
    double face_area(int f) const { return areas_[f]; }
    double albedo_of(int f) const { return albedo_[f]; }

    std::array<Vec3, 3> face_vertices(int f) const {
        return {vertices_[faces_[f][0]], vertices_[faces_[f][1]], vertices_[faces_[f][2]]};
    }

    Vec3 barycentric_point(int f, double s, double t) const {
        const auto v = face_vertices(f);
        return (1.0 - s - t) * v[0] + s * v[1] + t * v[2];
    }

    /// True if p lies on face f (within tol times the local scale).
    bool point_on_face(int f, const Vec3& p, double tol = 1e-9) const;

private:
    std::vector<Vec3> vertices_;
    std::vector<std::array<int, 3>> faces_;
    std::vector<double> albedo_;
    std::vector<Vec3> normals_;
    std::vector<double> areas_;
};

struct Edge {
    int v0, v1;                      // v0 < v1
    std::vector<int> adjacent_faces; // 1 (boundary) or 2 (interior)
    double length;
    bool interior() const { return adjacent_faces.size() == 2; }
};

struct EdgeTable {
    std::vector<Edge> edges;
    int interior_count() const;
    int boundary_count() const;
};

/// Global geometric statistics feeding the perturbation bounds.
struct ObjectStats {
    double rho_star = 0;      // max albedo, in (0,1]
    double nu_star = 1;       // min pointwise visibility estimate
    double chi_star = 0;      // max shadowing-edge length estimate
    double surface_area = 0;
    double diameter = 0;
    double depth = 0;         // min <e3, x> over vertices
    // Provenance of the nu/chi estimates.
    int defect_grid_directions = 0;
    int defect_surface_samples = 0;
    int defect_quadrature = 0;
    int defect_edge_samples = 0;
};

double surface_area(const TriangulatedObject& obj);

/// Max pairwise vertex distance; attained at vertices for a triangulated set.
double diameter(const TriangulatedObject& obj);

/// Builds the undirected edge table. Throws on edges shared by more than two
/// faces.
EdgeTable build_edge_table(const TriangulatedObject& obj);

/// Loads a Wavefront OBJ (v/f records only). Albedo comes either from
/// `constant_albedo` or from a sidecar CSV (`face_index,albedo`, 0-based).
TriangulatedObject load_mesh(const std::string& path, double constant_albedo);
TriangulatedObject load_mesh(const std::string& path, const std::string& albedo_csv_path);

/// Writes v/f records with round-trip-exact (17 significant digit) floats.
void save_obj(const TriangulatedObject& obj, const std::string& path);

}  // namespace lumicone::mesh
