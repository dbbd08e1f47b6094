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

#include "hflow/quadrature.hpp"

using namespace hflow;

TEST_CASE("Gauss-Legendre on [0,1] integrates monomials exactly") {
    for (int n = 1; n <= 8; ++n) {
        const LineRule r = gauss_legendre01(n);
        REQUIRE(r.nodes.size() == static_cast<std::size_t>(n));
        for (int p = 0; p <= 2 * n - 1; ++p) {
            double s = 0.0;
            for (int i = 0; i < n; ++i) s += r.weights[i] * std::pow(r.nodes[i], p);
            CHECK(s == doctest::Approx(1.0 / (p + 1)).epsilon(1e-13));
        }
    }
}

TEST_CASE("triangle rules integrate to their degree") {
    // Reference triangle integrals: int l1^a l2^b l3^c / area = 2 a! b! c! / (a+b+c+2)!
    auto exact = [](int a, int b, int c) {
        return 2.0 * std::tgamma(a + 1) * std::tgamma(b + 1) * std::tgamma(c + 1) / std::tgamma(a + b + c + 3);
    };
    for (int deg : {1, 2, 4, 5}) {
        const TriangleRule r = triangle_rule(deg);
        CHECK(r.degree == deg);
        for (int a = 0; a <= deg; ++a) {
            for (int b = 0; a + b <= deg; ++b) {
                const int c = deg - a - b;
                double s = 0.0;
                for (std::size_t i = 0; i < r.bary.size(); ++i) {
                    s += r.weights[i] * std::pow(r.bary[i][0], a) * std::pow(r.bary[i][1], b) * std::pow(r.bary[i][2], c);
                }
                CHECK(s == doctest::Approx(exact(a, b, c)).epsilon(1e-12));
            }
        }
    }
}
