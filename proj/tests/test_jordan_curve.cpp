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

#include "hflow/jordan_curve.hpp"

using namespace hflow;

namespace {

std::vector<Vec3> circle_points(int m) {
    std::vector<Vec3> p;
    for (int k = 0; k < m; ++k) p.emplace_back(std::cos(kTwoPi * k / m), std::sin(kTwoPi * k / m), 0.0);
    return p;
}

std::vector<Vec3> ellipse_points(int m, double a, double b) {
    std::vector<Vec3> p;
    for (int k = 0; k < m; ++k) p.emplace_back(a * std::cos(kTwoPi * k / m), b * std::sin(kTwoPi * k / m), 0.0);
    return p;
}

}  // namespace

TEST_CASE("circle from 16 samples") {
    const JordanCurve c = curve_from_samples(circle_points(16), {0, 5, 10});
    CHECK((c.eval(0.0) - Vec3(1, 0, 0)).norm() < 1e-12);
    CHECK(c.eval(kTwoPi) == c.eval(0.0));
    CHECK((c.eval_d1(0.0) - Vec3(0, 1, 0)).norm() < 1e-3);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) worst = std::max(worst, std::abs(c.eval(kTwoPi * i / 10000.0).norm() - 1.0));
    CHECK(worst <= 1e-3);
    const auto ph = c.anchor_phases();
    CHECK(ph[0] < ph[1]);
    CHECK(ph[1] < ph[2]);
    CHECK(ph[2] < ph[0] + kTwoPi);
}

TEST_CASE("lifted anchor phases") {
    // Anchors given out of phase order wrap past 2*pi.
    const JordanCurve c = curve_from_samples(circle_points(12), {4, 8, 0});
    const auto ph = c.anchor_phases();
    CHECK(ph[0] == doctest::Approx(2.0 * kPi / 3.0));
    CHECK(ph[1] == doctest::Approx(4.0 * kPi / 3.0));
    CHECK(ph[2] == doctest::Approx(kTwoPi));
    const auto q = c.anchor_points();
    CHECK((q[2] - Vec3(1, 0, 0)).norm() < 1e-12);
}

TEST_CASE("derivatives against finite differences") {
    const JordanCurve c = curve_from_samples(ellipse_points(40, 2.0, 1.0), {0, 13, 27});
    const double phi = 1.3, h = 1e-5;
    const Vec3 fd1 = (c.eval(phi + h) - c.eval(phi - h)) / (2 * h);
    CHECK((fd1 - c.eval_d1(phi)).norm() <= 1e-6 * c.eval_d1(phi).norm());
    const Vec3 fd2 = (c.eval_d1(phi + h) - c.eval_d1(phi - h)) / (2 * h);
    CHECK((fd2 - c.eval_d2(phi)).norm() <= 1e-5 * c.eval_d2(phi).norm());
    for (double p : {-7.0, -0.2, 3.0, 9.5}) CHECK((c.eval(p + kTwoPi) - c.eval(p)).norm() < 1e-12);
}

TEST_CASE("closest phase") {
    const JordanCurve c = curve_from_samples(ellipse_points(64, 2.0, 1.0), {0, 21, 42});
    for (double p : {0.1, 1.0, 2.5, 4.0, 6.1}) {
        const double q = c.closest_phase(c.eval(p));
        CHECK(std::abs(std::remainder(q - p, kTwoPi)) < 1e-8);
    }
}

TEST_CASE("rejections") {
    CHECK_THROWS_AS(curve_from_samples(circle_points(3), {0, 1, 2}), Error);
    try {
        curve_from_samples(circle_points(3), {0, 1, 2});
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::TooFewPoints);
    }
    // Figure eight.
    std::vector<Vec3> eight;
    for (int k = 0; k < 32; ++k) {
        const double t = kTwoPi * k / 32;
        eight.emplace_back(std::sin(t), std::sin(t) * std::cos(t), 0.0);
    }
    try {
        curve_from_samples(eight, {1, 11, 21});
        FAIL("figure eight accepted");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::SelfIntersecting);
    }
    auto pts = circle_points(12);
    pts[5] = pts[4];
    try {
        curve_from_samples(pts, {0, 4, 8});
        FAIL("repeated sample accepted");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Degenerate);
    }
    CHECK_THROWS_AS(curve_from_samples(circle_points(12), {0, 0, 8}), Error);
    CHECK_THROWS_AS(curve_from_samples(circle_points(12), {0, 8, 4}), Error);
}

TEST_CASE("chord-arc constants of the circle") {
    const JordanCurve c = circle_curve(96);
    const auto r2 = chord_arc(c, 256, 2.0);
    CHECK(std::abs(r2.M - kPi / 2.0) <= 0.1 * kPi / 2.0);
    const auto r1 = chord_arc(c, 256, 1.0);
    CHECK(r1.M == doctest::Approx(kPi / 3.0).epsilon(0.02));
    CHECK(chord_arc(c, 256).M >= 1.0);
}

TEST_CASE("chord-arc report survives denser sampling") {
    const JordanCurve c = curve_from_samples(ellipse_points(128, 2.0, 1.0), {0, 43, 85});
    const auto rep = chord_arc(c, 512);
    CHECK(rep.M >= 1.0);
    CHECK(rep.delta > 0.0);
    // Independent check: 2048 points, arc lengths by cumulative chords.
    const int n = 2048;
    std::vector<Vec3> p(n);
    std::vector<double> s(n + 1, 0.0);
    for (int i = 0; i < n; ++i) p[i] = c.eval(kTwoPi * i / n);
    for (int i = 0; i < n; ++i) s[i + 1] = s[i] + (p[(i + 1) % n] - p[i]).norm();
    const double L = s[n];
    double worst = 0.0;
    for (int i = 0; i < n; i += 4) {
        for (int j = i + 1; j < n; j += 3) {
            const double chord = (p[i] - p[j]).norm();
            if (chord > rep.delta || chord == 0.0) continue;
            const double arc = std::min(s[j] - s[i], L - (s[j] - s[i]));
            worst = std::max(worst, arc / chord);
        }
    }
    CHECK(worst <= rep.M * 1.01);
}
