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

#include <string>

#include "lumicone/mesh.hpp"

namespace lumicone::mesh {

// Canonical test fixtures, authored in their own local frames.

TriangulatedObject unit_right_triangle(double albedo = 1.0);
TriangulatedObject unit_cube(double albedo = 1.0);

/// Geodesic sphere: subdiv 0 is the icosahedron (20 faces); each level
/// quadruples the face count.
TriangulatedObject icosphere(int subdiv, double radius = 1.0, const Vec3& center = Vec3::Zero(),
                             double albedo = 1.0);

/// Two perpendicular squares of side `side` sharing an edge: S1 in the y=0
/// plane (normal +y, spanning z in [0,side]) and S2 in the z=0 plane
/// (normal +z, spanning y in [0,side]). Open surface, 4 triangles.
TriangulatedObject two_plane_toy(double side = 1.0, double albedo = 1.0);

/// L-shaped prism (closed manifold, 20 faces); arms of length `scale`,
/// thickness 0.4*scale, extruded 0.5*scale along +z. Nonconvex inner corner.
TriangulatedObject l_bracket(double scale = 1.0, double albedo = 1.0);

/// Icosphere with a radial bump ("nose") toward `nose_dir`; mildly nonconvex
/// around the bump so grazing light casts localized shadows.
TriangulatedObject face_like(int subdiv, double radius, const Vec3& center,
                             const Vec3& nose_dir, double albedo = 1.0);

/// Applies x -> R * (scale * x) + t to all vertices.
TriangulatedObject transformed(const TriangulatedObject& obj, const Mat3& rot, const Vec3& t,
                               double scale = 1.0);

/// Rotation taking unit vector a to unit vector b.
Mat3 rotation_between(const Vec3& a, const Vec3& b);

// Desk-scale scene instances: placed near (0,0,2) and sized to fit the 32x32
// default camera frustum; albedo 0.75.

TriangulatedObject desk_icosphere();
TriangulatedObject desk_two_plane_toy();
TriangulatedObject desk_l_bracket();
TriangulatedObject desk_face();
TriangulatedObject desk_cube();

/// Lookup by name ("icosphere", "toy", "bracket", "face", "cube"); throws on
/// unknown names.
TriangulatedObject make_builtin(const std::string& name);

}  // namespace lumicone::mesh
