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

#include "hflow/curvature.hpp"

#include <algorithm>
#include <cmath>

namespace hflow {

PrescribedCurvature PrescribedCurvature::constant(double h) {
    if (!std::isfinite(h)) throw Error(ErrorKind::InvalidArgument, "H must be finite");
    return PrescribedCurvature(Constant{h}, std::abs(h));
}

PrescribedCurvature PrescribedCurvature::radial(const Vec3& center, std::vector<std::pair<double, double>> table,
                                                std::optional<double> declared_sup) {
    if (table.empty()) throw Error(ErrorKind::InvalidArgument, "radial H table is empty");
    Radial r{center, {}, {}};
    double sup = 0.0;
    for (std::size_t k = 0; k < table.size(); ++k) {
        const auto [rad, val] = table[k];
        if (!(rad >= 0.0) || !std::isfinite(val)) throw Error(ErrorKind::InvalidArgument, "bad radial H entry");
        if (k > 0 && !(rad > table[k - 1].first)) {
            throw Error(ErrorKind::InvalidArgument, "radial H radii must be strictly increasing");
        }
        r.radii.push_back(rad);
        r.values.push_back(val);
        sup = std::max(sup, std::abs(val));
    }
    if (declared_sup) {
        if (*declared_sup < sup) throw Error(ErrorKind::InvalidArgument, "declared sup_bound below table maximum");
        sup = *declared_sup;
    }
    return PrescribedCurvature(std::move(r), sup);
}

PrescribedCurvature PrescribedCurvature::callback(std::function<double(const Vec3&)> fn, double declared_sup) {
    if (!fn) throw Error(ErrorKind::InvalidArgument, "empty H callback");
    if (!(declared_sup >= 0.0)) throw Error(ErrorKind::InvalidArgument, "sup_bound must be >= 0");
    return PrescribedCurvature(Callback{std::move(fn), declared_sup}, declared_sup);
}

PrescribedCurvature::Kind PrescribedCurvature::kind() const {
    return static_cast<Kind>(data_.index());
}

bool PrescribedCurvature::is_zero() const {
    if (const auto* c = as_constant()) return c->value == 0.0;
    if (const auto* r = as_radial()) {
        return std::all_of(r->values.begin(), r->values.end(), [](double v) { return v == 0.0; });
    }
    return sup_bound_ == 0.0;
}

double PrescribedCurvature::profile(double rad) const {
    const auto* r = as_radial();
    if (!r) throw Error(ErrorKind::InvalidArgument, "profile() needs a radial H");
    const auto& x = r->radii;
    const auto& y = r->values;
    if (rad <= x.front()) return y.front();
    if (rad >= x.back()) return y.back();
    const auto it = std::upper_bound(x.begin(), x.end(), rad);
    const std::size_t k = static_cast<std::size_t>(it - x.begin()) - 1;
    const double t = (rad - x[k]) / (x[k + 1] - x[k]);
    return (1.0 - t) * y[k] + t * y[k + 1];
}

double PrescribedCurvature::operator()(const Vec3& xi) const {
    switch (kind()) {
        case Kind::Constant: return std::get<Constant>(data_).value;
        case Kind::Radial: {
            const auto& r = std::get<Radial>(data_);
            return profile((xi - r.center).norm());
        }
        case Kind::Callback: return std::get<Callback>(data_).fn(xi);
    }
    return 0.0;
}

Vec3 PrescribedCurvature::gradient(const Vec3& xi) const {
    switch (kind()) {
        case Kind::Constant: return Vec3::Zero();
        case Kind::Radial: {
            const auto& r = std::get<Radial>(data_);
            const Vec3 d = xi - r.center;
            const double rad = d.norm();
            const auto& x = r.radii;
            if (rad <= x.front() || rad >= x.back() || rad == 0.0) return Vec3::Zero();
            const auto it = std::upper_bound(x.begin(), x.end(), rad);
            const std::size_t k = static_cast<std::size_t>(it - x.begin()) - 1;
            const double slope = (r.values[k + 1] - r.values[k]) / (x[k + 1] - x[k]);
            return (slope / rad) * d;
        }
        case Kind::Callback: {
            const auto& fn = std::get<Callback>(data_).fn;
            const double eps = 1e-6;
            Vec3 g;
            for (int a = 0; a < 3; ++a) {
                Vec3 e = Vec3::Zero();
                e[a] = eps;
                g[a] = (fn(xi + e) - fn(xi - e)) / (2.0 * eps);
            }
            return g;
        }
    }
    return Vec3::Zero();
}

}  // namespace hflow
