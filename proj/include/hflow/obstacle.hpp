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

#include <variant>

#include "hflow/common.hpp"

namespace hflow {

/// Convex constraint set for the surface values.
class Obstacle {
public:
    struct AllSpace {};
    struct Ball {
        Vec3 center;
        double radius;
    };

    static Obstacle all_space() { return Obstacle(AllSpace{}); }
    static Obstacle ball(const Vec3& center, double radius);

    bool is_ball() const { return std::holds_alternative<Ball>(shape_); }
    bool has_boundary() const { return is_ball(); }
    const Ball& as_ball() const;

    /// Nearest point of the set; the identity on it.
    Vec3 project(const Vec3& p) const;
    bool contains(const Vec3& p) const;

    /// Smallest principal curvature of the boundary (inward normal) at a.
    /// Throws NoBoundary for all space, NotOnBoundary if a is off the sphere.
    double min_principal_curvature(const Vec3& a) const;

    /// Lebesgue measure; +inf for all space.
    double volume() const;

    bool operator==(const Obstacle& other) const;

private:
    explicit Obstacle(std::variant<AllSpace, Ball> s) : shape_(std::move(s)) {}
    std::variant<AllSpace, Ball> shape_;
};

}  // namespace hflow
