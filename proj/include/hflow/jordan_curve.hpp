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

#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "hflow/common.hpp"

namespace hflow {

/// Boundary contour as a 2*pi-periodic cubic spline through samples taken at
/// equispaced phases 2*pi*k/m.
class JordanCurve {
public:
    /// Throws TooFewPoints, Degenerate, SelfIntersecting or InvalidArgument.
    JordanCurve(std::vector<Vec3> points, std::array<int, 3> anchors);

    Vec3 eval(double phase) const;
    Vec3 eval_d1(double phase) const;
    Vec3 eval_d2(double phase) const;

    const std::vector<Vec3>& control_points() const { return points_; }
    const std::array<int, 3>& anchor_sample_indices() const { return anchor_idx_; }

    /// Anchor phases lifted so that phi1 < phi2 < phi3 < phi1 + 2*pi, phi1 in [0, 2*pi).
    const std::array<double, 3>& anchor_phases() const { return anchor_phases_; }
    std::array<Vec3, 3> anchor_points() const;

    double phase_of_sample(int k) const { return kTwoPi * k / static_cast<double>(points_.size()); }
    double diameter() const { return diameter_; }

    /// Phase in [0, 2*pi) of the spline point nearest to p.
    double closest_phase(const Vec3& p) const;

private:
    struct Local {
        std::size_t k;
        double t;  // in [0, 1)
    };
    Local locate(double phase) const;

    std::vector<Vec3> points_;
    std::vector<Vec3> second_;  // second derivatives w.r.t. phase at the knots
    std::array<int, 3> anchor_idx_{};
    std::array<double, 3> anchor_phases_{};
    double step_ = 0.0;
    double diameter_ = 0.0;
};

JordanCurve curve_from_samples(std::vector<Vec3> points, std::array<int, 3> anchors);

/// m equispaced samples of the circle of the given radius in the z = 0 plane;
/// anchors at phases 2*pi/3, 4*pi/3, 2*pi (m must be divisible by 3).
JordanCurve circle_curve(int m, double radius = 1.0);

struct ChordArcReport {
    double delta = 0.0;
    double M = 1.0;
};

/// Sampled chord-arc constants. Without delta, picks the largest chord bound
/// for which the sampled ratio stays <= 100.
ChordArcReport chord_arc(const JordanCurve& curve, int n_samples, std::optional<double> delta = std::nullopt);

}  // namespace hflow
