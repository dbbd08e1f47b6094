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

#include <functional>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "hflow/common.hpp"

namespace hflow {

/// Prescribed mean curvature H: R^3 -> R.
class PrescribedCurvature {
public:
    enum class Kind { Constant, Radial, Callback };

    struct Constant {
        double value;
    };
    /// H(xi) = profile(|xi - center|), piecewise linear in the radius with
    /// constant extension outside the table.
    struct Radial {
        Vec3 center;
        std::vector<double> radii;
        std::vector<double> values;
    };
    struct Callback {
        std::function<double(const Vec3&)> fn;
        double declared_sup;
    };

    static PrescribedCurvature constant(double h);
    static PrescribedCurvature radial(const Vec3& center, std::vector<std::pair<double, double>> table,
                                      std::optional<double> declared_sup = std::nullopt);
    static PrescribedCurvature callback(std::function<double(const Vec3&)> fn, double declared_sup);

    Kind kind() const;
    bool is_constant() const { return kind() == Kind::Constant; }
    /// True when H vanishes identically (only decidable for table kinds).
    bool is_zero() const;

    double operator()(const Vec3& xi) const;
    Vec3 gradient(const Vec3& xi) const;
    double sup_bound() const { return sup_bound_; }

    const Constant* as_constant() const { return std::get_if<Constant>(&data_); }
    const Radial* as_radial() const { return std::get_if<Radial>(&data_); }

    /// Radial profile value at distance r (Radial kind only).
    double profile(double r) const;

private:
    PrescribedCurvature(std::variant<Constant, Radial, Callback> d, double sup)
        : data_(std::move(d)), sup_bound_(sup) {}

    std::variant<Constant, Radial, Callback> data_;
    double sup_bound_;
};

}  // namespace hflow
