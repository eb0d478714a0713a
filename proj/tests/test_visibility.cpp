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

#include <random>

#include "lumicone/directions.hpp"
#include "lumicone/meshes.hpp"
#include "lumicone/visibility.hpp"

using namespace lumicone;

namespace {

std::pair<double, double> random_bary(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    double s = uni(rng), t = uni(rng);
    if (s + t > 1.0) {
        s = 1.0 - s;
        t = 1.0 - t;
    }
    return {s, t};
}

}  // namespace

TEST_CASE("ray_first_hit basics") {
    const vis::Scene tri(mesh::unit_right_triangle());

    auto hit = vis::ray_first_hit(tri, Vec3(0.25, 0.25, -1), Vec3(0, 0, 1));
    REQUIRE(hit.has_value());
    CHECK(hit->t == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(hit->face_index == 0);
    CHECK((hit->hit_point - Vec3(0.25, 0.25, 0)).norm() < 1e-9);

    CHECK(!vis::ray_first_hit(tri, Vec3(2, 2, -1), Vec3(0, 0, 1)).has_value());

    const vis::Scene cube(mesh::unit_cube());
    // centroid of a z=0 face, looking inward (+z): the far wall is at z=1
    const Vec3 centroid = (cube.object().face_vertices(0)[0] + cube.object().face_vertices(0)[1] +
                           cube.object().face_vertices(0)[2]) /
                          3.0;
    auto through = vis::ray_first_hit(cube, centroid, Vec3(0, 0, 1), 0);
    REQUIRE(through.has_value());
    CHECK(through->t == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("grid traversal matches brute force") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g;
    for (const auto& obj :
         {mesh::icosphere(2), mesh::two_plane_toy(), mesh::l_bracket(), mesh::desk_face()}) {
        const vis::Scene scene{mesh::TriangulatedObject(obj)};
        const double diam = scene.diameter();
        Vec3 center = Vec3::Zero();
        for (const auto& v : scene.object().vertices()) center += v;
        center /= scene.object().vertex_count();
        int hits = 0;
        for (int rep = 0; rep < 2000; ++rep) {
            const Vec3 origin = center + 0.5 * diam * Vec3(g(rng), g(rng), g(rng));
            const Vec3 dir = Vec3(g(rng), g(rng), g(rng)).normalized();
            const auto fast = scene.grid().first_hit(origin, dir, scene.eps_ray());
            const auto brute = scene.grid().first_hit_brute(origin, dir, scene.eps_ray());
            REQUIRE(fast.has_value() == brute.has_value());
            if (fast) {
                ++hits;
                CHECK(fast->face == brute->face);
                CHECK(fast->t == doctest::Approx(brute->t).epsilon(1e-12));
            }
        }
        CHECK(hits > 50);  // the comparison actually exercised intersections
    }
}

TEST_CASE("point_direction_visible") {
    const vis::Scene sphere(mesh::icosphere(2));
    std::mt19937_64 rng(3);
    SUBCASE("convex: every outward direction is visible") {
        std::uniform_int_distribution<int> face(0, sphere.object().face_count() - 1);
        for (int rep = 0; rep < 500; ++rep) {
            const int f = face(rng);
            const auto [s, t] = random_bary(rng);
            const Vec3 x = sphere.object().barycentric_point(f, s, t);
            Vec3 u = render::random_direction(rng);
            if (sphere.object().normal(f).dot(u) <= 0) u = -u;
            if (sphere.object().normal(f).dot(u) < 1e-6) continue;
            CHECK(vis::point_direction_visible(sphere, x, f, u));
        }
    }
    SUBCASE("toy: direction into the vertical square is blocked") {
        const vis::Scene toy(mesh::two_plane_toy());
        const Vec3 x(0, 0, 0.3);  // on S1 (face 0)
        CHECK(!vis::point_direction_visible(toy, x, 0, Vec3(0, 0.6, -0.8).normalized()));
        CHECK(vis::point_direction_visible(toy, x, 0, Vec3(0, 0.6, 0.8).normalized()));
    }
    SUBCASE("in-plane direction away from geometry is visible") {
        const vis::Scene tri(mesh::unit_right_triangle());
        CHECK(vis::point_direction_visible(tri, Vec3(0.25, 0.25, 0), 0, Vec3(1, 0, 0)));
    }
    SUBCASE("point off the face throws") {
        CHECK_THROWS(vis::point_direction_visible(sphere, Vec3(10, 10, 10), 0, Vec3(0, 0, 1)));
    }
}

TEST_CASE("point_point_visible") {
    SUBCASE("same planar face") {
        const vis::Scene tri(mesh::unit_right_triangle());
        CHECK(vis::point_point_visible(tri, Vec3(0.1, 0.1, 0), Vec3(0.5, 0.2, 0)));
        CHECK_THROWS(vis::point_point_visible(tri, Vec3(0.1, 0.1, 0), Vec3(0.1, 0.1, 0)));
    }
    SUBCASE("separating wall blocks") {
        // three parallel unit squares stacked along z
        std::vector<Vec3> v;
        std::vector<std::array<int, 3>> f;
        for (int k = 0; k < 3; ++k) {
            const double z = static_cast<double>(k);
            const int b = 4 * k;
            v.insert(v.end(), {{0, 0, z}, {1, 0, z}, {1, 1, z}, {0, 1, z}});
            f.push_back({b, b + 1, b + 2});
            f.push_back({b, b + 2, b + 3});
        }
        const vis::Scene walls{
            mesh::TriangulatedObject(std::move(v), std::move(f), std::vector<double>(6, 1.0))};
        CHECK(!vis::point_point_visible(walls, Vec3(0.4, 0.4, 0), Vec3(0.4, 0.4, 2)));
        CHECK(vis::point_point_visible(walls, Vec3(0.4, 0.4, 1), Vec3(0.4, 0.4, 2)));
    }
    SUBCASE("symmetric on random pairs") {
        const vis::Scene toy(mesh::l_bracket());
        std::mt19937_64 rng(5);
        std::uniform_int_distribution<int> face(0, toy.object().face_count() - 1);
        for (int rep = 0; rep < 1000; ++rep) {
            const int fa = face(rng), fb = face(rng);
            const auto [sa, ta] = random_bary(rng);
            const auto [sb, tb] = random_bary(rng);
            const Vec3 a = toy.object().barycentric_point(fa, sa, ta);
            const Vec3 b = toy.object().barycentric_point(fb, sb, tb);
            if ((a - b).norm() < 1e-6) continue;
            CHECK(vis::point_point_visible(toy, a, b) == vis::point_point_visible(toy, b, a));
        }
    }
}

TEST_CASE("pointwise_visibility") {
    SUBCASE("convex closed mesh is fully visible") {
        const vis::Scene sphere(mesh::icosphere(2));
        std::mt19937_64 rng(9);
        std::uniform_int_distribution<int> face(0, sphere.object().face_count() - 1);
        for (int rep = 0; rep < 20; ++rep) {
            const int f = face(rng);
            const auto [s, t] = random_bary(rng);
            const Vec3 x = sphere.object().barycentric_point(f, s, t);
            CHECK(vis::pointwise_visibility(sphere, x, f, 256) == doctest::Approx(1.0));
        }
    }
    SUBCASE("half-space blocked near the toy corner") {
        const vis::Scene toy(mesh::two_plane_toy());
        const Vec3 x(0, 0, 1e-4);
        CHECK(vis::pointwise_visibility(toy, x, 0, 2048) == doctest::Approx(0.5).epsilon(0.04));
    }
    SUBCASE("isolated triangle sees everything") {
        const vis::Scene tri(mesh::unit_right_triangle());
        CHECK(vis::pointwise_visibility(tri, Vec3(0.25, 0.25, 0), 0, 128) == 1.0);
    }
    SUBCASE("quadrature converges") {
        const vis::Scene toy(mesh::two_plane_toy());
        const Vec3 x(0.1, 0, 0.4);
        for (int n : {64, 128, 256, 512}) {
            const double a = vis::pointwise_visibility(toy, x, 0, n);
            const double b = vis::pointwise_visibility(toy, x, 0, 2 * n);
            CHECK(std::abs(a - b) < 2.0 / std::sqrt(static_cast<double>(n)));
        }
    }
    SUBCASE("n_quadrature below 64 rejected") {
        const vis::Scene tri(mesh::unit_right_triangle());
        CHECK_THROWS(vis::pointwise_visibility(tri, Vec3(0.25, 0.25, 0), 0, 32));
    }
}

TEST_CASE("visible iff no retraction, against the brute-force caster") {
    std::mt19937_64 rng(13);
    for (const auto& obj : {mesh::two_plane_toy(), mesh::l_bracket()}) {
        const vis::Scene scene{mesh::TriangulatedObject(obj)};
        std::uniform_int_distribution<int> face(0, scene.object().face_count() - 1);
        for (int rep = 0; rep < 1000; ++rep) {
            const int f = face(rng);
            const auto [s, t] = random_bary(rng);
            const Vec3 x = scene.object().barycentric_point(f, s, t);
            const Vec3 u = render::random_direction(rng);
            const bool visible = vis::point_direction_visible(scene, x, f, u);
            const bool brute_hit =
                scene.grid().first_hit_brute(x, u, scene.eps_ray(), f).has_value();
            CHECK(visible == !brute_hit);
        }
    }
}

TEST_CASE("shadowing_edges") {
    const auto toy_obj = mesh::two_plane_toy();
    const vis::Scene toy{mesh::TriangulatedObject(toy_obj)};
    const auto edges = mesh::build_edge_table(toy.object());

    SUBCASE("convex mesh casts nothing") {
        const vis::Scene sphere(mesh::icosphere(2));
        const auto sphere_edges = mesh::build_edge_table(sphere.object());
        for (const Vec3& u : {Vec3(0, 0, 1), Vec3(1, 0, 0), Vec3(0.6, -0.48, 0.64)}) {
            const auto set = vis::shadowing_edges(sphere, sphere_edges, u.normalized(), 5);
            CHECK(set.total_length == 0.0);
        }
    }
    SUBCASE("sweep configuration flags exactly the top edge") {
        // u tilted past vertical: S2's top edge shades S1
        const double phi = 30.0 * M_PI / 180.0;
        const Vec3 u(0, std::cos(phi), -std::sin(phi));
        const auto set = vis::shadowing_edges(toy, edges, u, 5);
        CHECK(set.total_length == doctest::Approx(1.0).epsilon(1e-9));
        // the flagged edge is the top of S2 (between vertices 4 and 5)
        for (size_t e = 0; e < edges.edges.size(); ++e) {
            const bool is_top = edges.edges[e].v0 == 4 && edges.edges[e].v1 == 5;
            CHECK(static_cast<bool>(set.flagged[e]) == is_top);
        }
    }
    SUBCASE("light from above both lit sides casts nothing") {
        const Vec3 u = Vec3(0, 1, 1).normalized();
        const auto set = vis::shadowing_edges(toy, edges, u, 5);
        CHECK(set.total_length == 0.0);
    }
    SUBCASE("rigid-motion invariance") {
        std::mt19937_64 rng(17);
        std::normal_distribution<double> g;
        for (int rep = 0; rep < 5; ++rep) {
            Eigen::Quaterniond q(g(rng), g(rng), g(rng), g(rng));
            q.normalize();
            const Mat3 rot = q.toRotationMatrix();
            const Vec3 shift(g(rng), g(rng), g(rng));
            const vis::Scene moved(mesh::transformed(toy_obj, rot, shift));
            const auto moved_edges = mesh::build_edge_table(moved.object());
            const Vec3 u = render::random_direction(rng);
            const double base = vis::shadowing_edges(toy, edges, u, 7).total_length;
            const double after =
                vis::shadowing_edges(moved, moved_edges, (rot * u).normalized(), 7).total_length;
            CHECK(after == doctest::Approx(base).epsilon(1e-9));
        }
    }
}

TEST_CASE("convexity_defects") {
    SUBCASE("icosphere: no defects") {
        const vis::Scene sphere(mesh::icosphere(2));
        const auto edges = mesh::build_edge_table(sphere.object());
        const auto grid = render::uniform_sphere_grid(6, 12);
        vis::DefectOptions opt;
        opt.surface_samples_per_face = 4;
        opt.n_quadrature = 256;
        const auto report = vis::convexity_defects(sphere, edges, grid.directions, opt);
        CHECK(report.chi_star == 0.0);
        CHECK(report.nu_star == doctest::Approx(1.0));
    }
    SUBCASE("toy: sweep-plane grid attains the full top edge") {
        const vis::Scene toy(mesh::two_plane_toy());
        const auto edges = mesh::build_edge_table(toy.object());
        // directions in the y-z sweep plane
        std::vector<Vec3> dirs;
        for (int i = 1; i < 36; ++i) {
            const double a = i * M_PI / 36.0;
            dirs.emplace_back(0, std::sin(a), std::cos(a));
        }
        vis::DefectOptions opt;
        opt.surface_samples_per_face = 4;
        const auto report = vis::convexity_defects(toy, edges, dirs, opt);
        CHECK(report.chi_star == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(report.nu_star < 0.9);
    }
    SUBCASE("removing the occluder restores full visibility") {
        // S1 alone: the two horizontal triangles of the toy
        const auto toy = mesh::two_plane_toy();
        std::vector<std::array<int, 3>> faces(toy.faces().begin(), toy.faces().begin() + 2);
        mesh::TriangulatedObject s1(std::vector<Vec3>(toy.vertices()), std::move(faces),
                                    {1.0, 1.0});
        const vis::Scene scene(std::move(s1));
        const auto edges = mesh::build_edge_table(scene.object());
        const auto grid = render::uniform_sphere_grid(4, 8);
        vis::DefectOptions opt;
        opt.surface_samples_per_face = 4;
        opt.n_quadrature = 128;
        const auto report = vis::convexity_defects(scene, edges, grid.directions, opt);
        CHECK(report.nu_star == doctest::Approx(1.0));
        CHECK(report.chi_star == 0.0);
    }
    SUBCASE("chi estimate is monotone under grid enrichment") {
        const vis::Scene bracket(mesh::l_bracket());
        const auto edges = mesh::build_edge_table(bracket.object());
        const auto coarse = render::uniform_sphere_grid(4, 8);
        std::vector<Vec3> enriched = coarse.directions;
        const auto extra = render::uniform_sphere_grid(7, 13);
        enriched.insert(enriched.end(), extra.directions.begin(), extra.directions.end());
        vis::DefectOptions opt;
        opt.surface_samples_per_face = 1;
        opt.n_quadrature = 64;
        const auto base = vis::convexity_defects(bracket, edges, coarse.directions, opt);
        const auto fine = vis::convexity_defects(bracket, edges, enriched, opt);
        CHECK(fine.chi_star >= base.chi_star);
        CHECK(base.chi_star > 0);  // the bracket really is nonconvex
    }
}
