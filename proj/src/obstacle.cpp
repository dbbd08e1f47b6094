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

#include "hflow/obstacle.hpp"

#include <cmath>
#include <limits>

namespace hflow {

Obstacle Obstacle::ball(const Vec3& center, double radius) {
    if (!(radius > 0.0) || !std::isfinite(radius)) {
        throw Error(ErrorKind::InvalidArgument, "ball radius must be positive and finite");
    }
    return Obstacle(Ball{center, radius});
}

const Obstacle::Ball& Obstacle::as_ball() const {
    if (!is_ball()) throw Error(ErrorKind::NoBoundary, "obstacle is all of R^3");
    return std::get<Ball>(shape_);
}

Vec3 Obstacle::project(const Vec3& p) const {
    if (!is_ball()) return p;
    const auto& b = std::get<Ball>(shape_);
    const Vec3 d = p - b.center;
    const double r = d.norm();
    if (r <= b.radius) return p;
    return b.center + (b.radius / r) * d;
}

bool Obstacle::contains(const Vec3& p) const {
    if (!is_ball()) return true;
    const auto& b = std::get<Ball>(shape_);
    return (p - b.center).norm() <= b.radius * (1.0 + 1e-12);
}

double Obstacle::min_principal_curvature(const Vec3& a) const {
    if (!is_ball()) throw Error(ErrorKind::NoBoundary, "all of R^3 has no boundary");
    const auto& b = std::get<Ball>(shape_);
    if (std::abs((a - b.center).norm() - b.radius) > 1e-9) {
        throw Error(ErrorKind::NotOnBoundary, "point is not on the sphere");
    }
    return 1.0 / b.radius;
}

double Obstacle::volume() const {
    if (!is_ball()) return std::numeric_limits<double>::infinity();
    const double r = std::get<Ball>(shape_).radius;
    return 4.0 / 3.0 * kPi * r * r * r;
}

bool Obstacle::operator==(const Obstacle& other) const {
    if (is_ball() != other.is_ball()) return false;
    if (!is_ball()) return true;
    const auto& a = std::get<Ball>(shape_);
    const auto& b = std::get<Ball>(other.shape_);
    return a.center == b.center && a.radius == b.radius;
}

}  // namespace hflow
