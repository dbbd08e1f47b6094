// Copyright 2026 The hflow Authors.
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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <utility>

#include "hflow/disk_mesh.hpp"

using namespace hflow;

TEST_CASE("smallest mesh is a fan") {
    const DiskMesh m = build_disk_mesh(6, 1);
    CHECK(m.num_vertices() == 7);
    CHECK(m.num_triangles() == 6);
    std::set<std::pair<int, int>> edges;
    for (const auto& t : m.triangles) {
        for (int a = 0; a < 3; ++a) edges.insert(std::minmax(t[a], t[(a + 1) % 3]));
    }
    CHECK(static_cast<long>(m.num_vertices()) - static_cast<long>(edges.size()) + static_cast<long>(m.num_triangles()) == 1);
}

TEST_CASE("boundary loop and anchors") {
    const DiskMesh m = build_disk_mesh(12, 2);
    REQUIRE(m.num_boundary() == 12);
    for (int k = 0; k < 12; ++k) {
        CHECK(m.boundary_angles[k] == doctest::Approx(k * kPi / 6.0));
        CHECK(m.vertices[m.boundary_loop[k]].norm() == doctest::Approx(1.0));
    }
    CHECK(m.boundary_angles[m.anchor_indices[0]] == doctest::Approx(2.0 * kPi / 3.0));
    CHECK(m.boundary_angles[m.anchor_indices[1]] == doctest::Approx(4.0 * kPi / 3.0));
    CHECK(m.anchor_indices[2] == 0);
}

TEST_CASE("area equals the inscribed boundary polygon") {
    for (auto [nb, nr] : {std::pair{6, 1}, {12, 2}, {48, 8}, {96, 16}, {192, 32}}) {
        const DiskMesh m = build_disk_mesh(nb, nr);
        const double polygon = 0.5 * nb * std::sin(kTwoPi / nb);
        CHECK(m.total_area() == doctest::Approx(polygon).epsilon(1e-12));
        double lumped = 0.0, perimeter = 0.0;
        for (double w : m.lumped_mass) lumped += w;
        for (double w : m.boundary_mass) perimeter += w;
        CHECK(lumped == doctest::Approx(polygon).epsilon(1e-12));
        CHECK(perimeter == doctest::Approx(2.0 * nb * std::sin(kPi / nb)).epsilon(1e-12));
        // Defect decays like 1/n^2: n^2 (pi - area) -> 2 pi^3 / 3.
        CHECK(nb * nb * (kPi - m.total_area()) <= 2.0 * kPi * kPi * kPi / 3.0 + 1e-9);
        for (double a : m.areas) CHECK(a > 0.0);
    }
    CHECK(std::abs(build_disk_mesh(96, 16).total_area() - kPi) <= 3e-3);
}

TEST_CASE("invalid parameters") {
    CHECK_THROWS_AS(build_disk_mesh(10, 2), Error);
    CHECK_THROWS_AS(build_disk_mesh(3, 1), Error);
    CHECK_THROWS_AS(build_disk_mesh(12, 0), Error);
}

TEST_CASE("P1 gradients reproduce affine maps") {
    const DiskMesh m = build_disk_mesh(24, 4);
    const Field planar = planar_field(m);
    const Field c(m.num_vertices(), Vec3(0.3, -2.0, 5.0));
    const Field aff = sample_field(m, [](const Vec2& x) { return Vec3(x.x() + x.y(), x.y(), 2.0 * x.x()); });
    for (std::size_t t = 0; t < m.num_triangles(); ++t) {
        auto [d1, d2] = p1_gradient(m, planar, t);
        CHECK((d1 - Vec3(1, 0, 0)).norm() < 1e-12);
        CHECK((d2 - Vec3(0, 1, 0)).norm() < 1e-12);
        auto [c1, c2] = p1_gradient(m, c, t);
        CHECK(c1.norm() < 1e-12);
        CHECK(c2.norm() < 1e-12);
        auto [a1, a2] = p1_gradient(m, aff, t);
        CHECK((a1 - Vec3(1, 0, 2)).norm() < 1e-12);
        CHECK((a2 - Vec3(1, 1, 0)).norm() < 1e-12);
    }
    CHECK_THROWS_AS(p1_gradient(m, planar, m.num_triangles()), Error);
}

TEST_CASE("lumped L2 inner product") {
    const DiskMesh m = build_disk_mesh(96, 16);
    const Field e1(m.num_vertices(), Vec3(1, 0, 0));
    const Field e2(m.num_vertices(), Vec3(0, 1, 0));
    CHECK(l2_inner(m, e1, e1) == doctest::Approx(m.total_area()).epsilon(1e-12));
    CHECK(l2_inner(m, e1, e2) == 0.0);
    const Field x = sample_field(m, [](const Vec2& p) { return Vec3(p.x(), 0, 0); });
    CHECK(std::abs(l2_inner(m, x, x) - kPi / 4.0) <= 0.01 * kPi / 4.0);
    CHECK_THROWS_AS(l2_inner(m, x, Field(3)), Error);
}
