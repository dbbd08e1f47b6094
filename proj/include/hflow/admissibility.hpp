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
#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "hflow/curvature.hpp"
#include "hflow/disk_mesh.hpp"
#include "hflow/jordan_curve.hpp"
#include "hflow/obstacle.hpp"

namespace hflow {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// A locked entry of the boundary phase vector.
struct AnchorValue {
    std::size_t position;
    double value;
};

/// Weighted L2 projection of values onto {lo <= x_0 <= ... <= x_{n-1} <= hi}
/// (pool adjacent violators followed by clamping).
std::vector<double> isotonic_projection(std::span<const double> values, std::span<const double> weights,
                                        double lo = -kInfinity, double hi = kInfinity);

/// Projection onto cyclically nondecreasing phase vectors (last entry at most
/// first + period) with the anchor entries locked. Anchors must be sorted by
/// position; each arc between consecutive anchors is projected independently.
/// Throws InfeasibleAnchors if the anchor values are not cyclically monotone.
std::vector<double> project_monotone(std::span<const double> phases, std::span<const double> weights,
                                     std::span<const AnchorValue> anchors, double period = kTwoPi);

/// Locked boundary phases that realize the three-point condition on this
/// mesh/curve pair, sorted by boundary position.
std::array<AnchorValue, 3> anchor_lock(const DiskMesh& mesh, const JordanCurve& curve);

/// Interior vertex positions plus monotone boundary phases.
struct SurfaceState {
    Field interior;               // vertex ids num_boundary() .. num_vertices()-1
    std::vector<double> phases;   // one per boundary position, lifted (not reduced mod 2*pi)
    bool operator==(const SurfaceState&) const = default;
};

/// Phases interpolated linearly in the angle between the anchors.
std::vector<double> anchor_interpolated_phases(const DiskMesh& mesh, const JordanCurve& curve);

/// Radial interpolation between the boundary trace and its centroid, plus an
/// optional bump height * (1 - r^2) along +z.
SurfaceState initial_state(const DiskMesh& mesh, const JordanCurve& curve, double bump_height = 0.0);

/// Full vertex field: boundary vertex i maps to curve(phases[i]).
/// Throws InfeasibleAnchors (lock or monotonicity broken) or ObstacleViolation.
Field realize(const DiskMesh& mesh, const JordanCurve& curve, const Obstacle& A, const SurfaceState& state);

/// Inverse of realize() for a full field whose boundary lies on the curve.
SurfaceState recover_state(const DiskMesh& mesh, const JordanCurve& curve, std::span<const Vec3> u);

/// Verdict for one sufficient condition.
struct ConditionResult {
    bool pass = false;
    bool supported = true;
    double value = 0.0;      // the quantity being tested
    double threshold = 0.0;  // what it is compared against
    double margin = 0.0;     // positive when passing
    std::string note;
    bool operator==(const ConditionResult&) const = default;
};

struct ConditionReport {
    double c = 0.0;
    double s = kInfinity;
    double sigma = kInfinity;
    double initial_dirichlet = 0.0;
    std::map<std::string, ConditionResult> conditions;  // h1 h2 h3 h4 rand assum_uo
    bool admissible = false;
};

enum class Condition { H1, H2, H3, H4, Rand, AssumUo };

/// Evaluate a single condition. Throws UnsupportedCombination for H2/H4
/// with a callback H.
ConditionResult check_condition(Condition which, const PrescribedCurvature& H, const Obstacle& A,
                                double initial_dirichlet, double c, double s);

/// All conditions; admissible iff one of H1-H4 holds together with Rand and
/// the initial-energy bound. Unsupported entries are reported as failing.
ConditionReport check_conditions(const PrescribedCurvature& H, const Obstacle& A, double initial_dirichlet, double c,
                                 double s);

/// (1 + c) / (1 - c) for finite s, +inf otherwise.
double sigma_factor(double c, double s);
/// sigma * D(u0), +inf when s is infinite. Throws for c outside (0, 1).
double energy_cap(double c, double s, double initial_dirichlet);

}  // namespace hflow
