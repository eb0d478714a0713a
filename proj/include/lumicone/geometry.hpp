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

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <array>
#include <cmath>
#include <stdexcept>

namespace lumicone {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline bool is_unit(const Vec3& v, double tol = 1e-12) {
    return std::abs(v.norm() - 1.0) <= tol;
}

/// Orthonormal tangent frame (t1, t2) for a unit normal n.
inline std::array<Vec3, 2> tangent_frame(const Vec3& n) {
    const Vec3 helper = std::abs(n.z()) < 0.9 ? Vec3(0, 0, 1) : Vec3(1, 0, 0);
    Vec3 t1 = helper.cross(n).normalized();
    Vec3 t2 = n.cross(t1);
    return {t1, t2};
}

/// Chord length on the unit sphere for a given angle.
inline double chord_from_angle(double angle) { return 2.0 * std::sin(angle / 2.0); }
inline double angle_from_chord(double chord) { return 2.0 * std::asin(chord / 2.0); }

/// Rotate v by `angle` within the plane spanned by (v, axis_toward), where
/// axis_toward need not be orthogonal to v.
inline Vec3 rotate_towards(const Vec3& v, const Vec3& toward, double angle) {
    Vec3 axis = v.cross(toward);
    const double n = axis.norm();
    if (n < 1e-15) throw std::invalid_argument("rotate_towards: collinear vectors");
    axis /= n;
    return Eigen::AngleAxisd(angle, axis) * v;
}

}  // namespace lumicone
