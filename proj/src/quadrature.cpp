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

#include "hflow/quadrature.hpp"

#include <cmath>

#include "hflow/common.hpp"

namespace hflow {

LineRule gauss_legendre01(int n) {
    if (n < 1 || n > 64) throw Error(ErrorKind::InvalidArgument, "Gauss-Legendre order must be in [1, 64]");
    LineRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 1.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) p0 = 1.0;
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // Map [-1, 1] to [0, 1], ascending.
        rule.nodes[n - 1 - i] = 0.5 * (x + 1.0);
        rule.weights[n - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

TriangleRule triangle_rule(int degree) {
    TriangleRule r;
    auto add3 = [&](double a, double b, double w) {
        r.bary.push_back({a, a, b});
        r.bary.push_back({a, b, a});
        r.bary.push_back({b, a, a});
        for (int k = 0; k < 3; ++k) r.weights.push_back(w);
    };
    if (degree <= 1) {
        r.bary.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
        r.weights.push_back(1.0);
        r.degree = 1;
    } else if (degree == 2) {
        add3(1.0 / 6.0, 2.0 / 3.0, 1.0 / 3.0);
        r.degree = 2;
    } else if (degree <= 4) {
        add3(0.445948490915965, 0.108103018168070, 0.223381589678011);
        add3(0.091576213509771, 0.816847572980459, 0.109951743655322);
        r.degree = 4;
    } else if (degree == 5) {
        r.bary.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
        r.weights.push_back(0.225);
        add3(0.470142064105115, 0.059715871789770, 0.132394152788506);
        add3(0.101286507323456, 0.797426985353087, 0.125939180544827);
        r.degree = 5;
    } else {
        throw Error(ErrorKind::InvalidArgument, "triangle rules are available up to degree 5");
    }
    return r;
}

}  // namespace hflow
