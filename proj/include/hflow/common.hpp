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

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace hflow {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

/// One R^3 value per mesh vertex, indexed like DiskMesh::vertices.
using Field = std::vector<Vec3>;
/// One R^2 value per mesh vertex (domain vector fields).
using Field2 = std::vector<Vec2>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

enum class ErrorKind {
    InvalidArgument,
    TooFewPoints,
    SelfIntersecting,
    Degenerate,
    NotOnBoundary,
    NoBoundary,
    OutsideObstacle,
    NonAdmissibleField,
    InfeasibleAnchors,
    ObstacleViolation,
    UnsupportedCombination,
    NotAdmissible,
    LineSearchStall,
    Io,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace hflow
