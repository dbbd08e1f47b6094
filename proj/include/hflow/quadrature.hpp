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
#include <vector>

namespace hflow {

struct LineRule {
    std::vector<double> nodes;    // in [0, 1]
    std::vector<double> weights;  // sum to 1
};

/// n-point Gauss-Legendre rule on [0, 1]; exact for degree 2n - 1.
LineRule gauss_legendre01(int n);

struct TriangleRule {
    std::vector<std::array<double, 3>> bary;
    std::vector<double> weights;  // sum to 1 (multiply by the area)
    int degree = 1;
};

/// Symmetric triangle rule exact to at least the requested polynomial degree
/// (available degrees: 1, 2, 4, 5).
TriangleRule triangle_rule(int degree);

}  // namespace hflow
