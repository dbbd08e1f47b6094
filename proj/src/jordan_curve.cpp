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

#include "hflow/jordan_curve.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace hflow {

namespace {

// Solves the cyclic system x_{k-1} + 4 x_k + x_{k+1} = r_k (Sherman-Morrison
// on top of a Thomas sweep).
std::vector<Vec3> solve_cyclic_141(const std::vector<Vec3>& rhs) {
    const std::size_t n = rhs.size();
    const double a = 1.0, b = 4.0, c = 1.0;
    const double alpha = c;  // corner entries
    const double beta = a;
    const double gamma = -b;

    std::vector<double> diag(n, b);
    diag[0] = b - gamma;
    diag[n - 1] = b - alpha * beta / gamma;

    auto thomas = [&](auto rhs_at, auto& out) {
        std::vector<double> cp(n);
        using T = std::decay_t<decltype(rhs_at(0))>;
        std::vector<T> dp(n);
        cp[0] = c / diag[0];
        dp[0] = rhs_at(0) / diag[0];
        for (std::size_t i = 1; i < n; ++i) {
            const double m = diag[i] - a * cp[i - 1];
            cp[i] = c / m;
            dp[i] = (rhs_at(i) - a * dp[i - 1]) / m;
        }
        out[n - 1] = dp[n - 1];
        for (std::size_t i = n - 1; i-- > 0;) out[i] = dp[i] - cp[i] * out[i + 1];
    };

    std::vector<Vec3> x(n);
    thomas([&](std::size_t i) { return rhs[i]; }, x);
    std::vector<double> z(n);
    thomas([&](std::size_t i) { return i == 0 ? gamma : (i == n - 1 ? alpha : 0.0); }, z);

    const Vec3 num = x[0] + (beta / gamma) * x[n - 1];
    const double den = 1.0 + z[0] + (beta / gamma) * z[n - 1];
    const Vec3 fact = num / den;
    for (std::size_t i = 0; i < n; ++i) x[i] -= fact * z[i];
    return x;
}

double segment_distance(const Vec3& p0, const Vec3& p1, const Vec3& q0, const Vec3& q1) {
    const Vec3 d1 = p1 - p0, d2 = q1 - q0, r = p0 - q0;
    const double a = d1.squaredNorm(), e = d2.squaredNorm(), f = d2.dot(r);
    const double c = d1.dot(r), b = d1.dot(d2);
    const double denom = a * e - b * b;
    double s = denom > 1e-300 ? std::clamp((b * f - c * e) / denom, 0.0, 1.0) : 0.0;
    double t = (b * s + f) / e;
    if (t < 0.0) {
        t = 0.0;
        s = std::clamp(-c / a, 0.0, 1.0);
    } else if (t > 1.0) {
        t = 1.0;
        s = std::clamp((b - c) / a, 0.0, 1.0);
    }
    return ((p0 + s * d1) - (q0 + t * d2)).norm();
}

}  // namespace

JordanCurve::JordanCurve(std::vector<Vec3> points, std::array<int, 3> anchors)
    : points_(std::move(points)), anchor_idx_(anchors) {
    const int m = static_cast<int>(points_.size());
    if (m < 8) throw Error(ErrorKind::TooFewPoints, "need at least 8 samples, got " + std::to_string(m));
    for (int k : anchors) {
        if (k < 0 || k >= m) throw Error(ErrorKind::InvalidArgument, "anchor index out of range");
    }
    const int a1 = anchors[0];
    const int g2 = ((anchors[1] - a1) % m + m) % m;
    const int g3 = ((anchors[2] - a1) % m + m) % m;
    if (g2 == 0 || g3 == 0 || g2 == g3) throw Error(ErrorKind::InvalidArgument, "anchors must be distinct");
    if (g2 > g3) throw Error(ErrorKind::InvalidArgument, "anchors must be in cyclic order");

    for (int k = 0; k < m; ++k) {
        for (int l = k + 1; l < m; ++l) diameter_ = std::max(diameter_, (points_[k] - points_[l]).norm());
    }
    for (int k = 0; k < m; ++k) {
        if ((points_[(k + 1) % m] - points_[k]).norm() <= 1e-12 * std::max(diameter_, 1e-300)) {
            throw Error(ErrorKind::Degenerate, "repeated consecutive samples at index " + std::to_string(k));
        }
    }

    step_ = kTwoPi / m;
    std::vector<Vec3> rhs(m);
    const double scale = 6.0 / (step_ * step_);
    for (int k = 0; k < m; ++k) {
        rhs[k] = scale * (points_[(k + 1) % m] - 2.0 * points_[k] + points_[(k + m - 1) % m]);
    }
    second_ = solve_cyclic_141(rhs);

    for (int k = 0; k < 3; ++k) {
        anchor_phases_[k] = phase_of_sample(anchors[k]) + (anchors[k] < a1 ? kTwoPi : 0.0);
    }

    // Regularity and injectivity on a fine polyline.
    const int n = std::clamp(8 * m, 256, 4096);
    std::vector<Vec3> fine(n);
    double min_speed = 1e300;
    for (int i = 0; i < n; ++i) {
        const double phi = kTwoPi * i / n;
        fine[i] = eval(phi);
        min_speed = std::min(min_speed, eval_d1(phi).norm());
    }
    if (min_speed <= 1e-8 * diameter_) {
        throw Error(ErrorKind::Degenerate, "spline derivative vanishes (min |d/dphi| = " + std::to_string(min_speed) + ")");
    }
    const double tol = 1e-6 * diameter_;
    double max_seg = 0.0;
    for (int i = 0; i < n; ++i) max_seg = std::max(max_seg, (fine[(i + 1) % n] - fine[i]).norm());
    for (int i = 0; i < n; ++i) {
        const Vec3& p0 = fine[i];
        const Vec3& p1 = fine[(i + 1) % n];
        for (int j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) continue;  // adjacent through the seam
            const Vec3& q0 = fine[j];
            if ((q0 - p0).norm() > 2.0 * max_seg + tol) continue;
            if (segment_distance(p0, p1, q0, fine[(j + 1) % n]) <= tol) {
                throw Error(ErrorKind::SelfIntersecting,
                            "curve comes within " + std::to_string(tol) + " of itself near phases " +
                                std::to_string(kTwoPi * i / n) + " and " + std::to_string(kTwoPi * j / n));
            }
        }
    }
}

JordanCurve::Local JordanCurve::locate(double phase) const {
    double x = phase - kTwoPi * std::floor(phase / kTwoPi);
    if (x >= kTwoPi || x < 0.0) x = 0.0;
    const double u = x / step_;
    auto k = static_cast<std::size_t>(std::floor(u));
    double t = u - static_cast<double>(k);
    if (k >= points_.size()) {
        k = points_.size() - 1;
        t = 1.0;
    }
    return {k, t};
}

Vec3 JordanCurve::eval(double phase) const {
    const auto [k, t] = locate(phase);
    const std::size_t k1 = (k + 1) % points_.size();
    const double s = 1.0 - t;
    return s * points_[k] + t * points_[k1] +
           (step_ * step_ / 6.0) * ((s * s * s - s) * second_[k] + (t * t * t - t) * second_[k1]);
}

Vec3 JordanCurve::eval_d1(double phase) const {
    const auto [k, t] = locate(phase);
    const std::size_t k1 = (k + 1) % points_.size();
    const double s = 1.0 - t;
    return (points_[k1] - points_[k]) / step_ +
           (step_ / 6.0) * (-(3.0 * s * s - 1.0) * second_[k] + (3.0 * t * t - 1.0) * second_[k1]);
}

Vec3 JordanCurve::eval_d2(double phase) const {
    const auto [k, t] = locate(phase);
    const std::size_t k1 = (k + 1) % points_.size();
    return (1.0 - t) * second_[k] + t * second_[k1];
}

std::array<Vec3, 3> JordanCurve::anchor_points() const {
    return {points_[anchor_idx_[0]], points_[anchor_idx_[1]], points_[anchor_idx_[2]]};
}

double JordanCurve::closest_phase(const Vec3& p) const {
    const int n = 16 * static_cast<int>(points_.size());
    double best = 0.0, best_d = 1e300;
    for (int i = 0; i < n; ++i) {
        const double phi = kTwoPi * i / n;
        const double d = (eval(phi) - p).squaredNorm();
        if (d < best_d) {
            best_d = d;
            best = phi;
        }
    }
    // Newton on g(phi) = (c(phi) - p) . c'(phi)
    for (int it = 0; it < 20; ++it) {
        const Vec3 r = eval(best) - p;
        const Vec3 d1 = eval_d1(best);
        const double g = r.dot(d1);
        const double dg = d1.squaredNorm() + r.dot(eval_d2(best));
        if (dg <= 0.0) break;
        const double delta = std::clamp(g / dg, -0.5 * step_, 0.5 * step_);
        best -= delta;
        if (std::abs(delta) < 1e-15) break;
    }
    return best - kTwoPi * std::floor(best / kTwoPi);
}

JordanCurve curve_from_samples(std::vector<Vec3> points, std::array<int, 3> anchors) {
    return JordanCurve(std::move(points), anchors);
}

JordanCurve circle_curve(int m, double radius) {
    if (m % 3 != 0) throw Error(ErrorKind::InvalidArgument, "circle sample count must be divisible by 3");
    std::vector<Vec3> pts(m);
    for (int k = 0; k < m; ++k) {
        const double t = kTwoPi * k / m;
        pts[k] = Vec3(radius * std::cos(t), radius * std::sin(t), 0.0);
    }
    return JordanCurve(std::move(pts), {m / 3, 2 * m / 3, 0});
}

ChordArcReport chord_arc(const JordanCurve& curve, int n_samples, std::optional<double> delta) {
    if (n_samples < 64) throw Error(ErrorKind::InvalidArgument, "chord_arc needs at least 64 samples");
    const int n = n_samples;
    std::vector<Vec3> p(n);
    std::vector<double> s(n + 1, 0.0);
    // 3-point Gauss-Legendre per sub-interval for the arc length.
    const double gx[3] = {-std::sqrt(0.6), 0.0, std::sqrt(0.6)};
    const double gw[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
    const double dphi = kTwoPi / n;
    for (int i = 0; i < n; ++i) {
        const double a = dphi * i;
        p[i] = curve.eval(a);
        double len = 0.0;
        for (int q = 0; q < 3; ++q) len += gw[q] * curve.eval_d1(a + 0.5 * dphi * (1.0 + gx[q])).norm();
        s[i + 1] = s[i] + 0.5 * dphi * len;
    }
    const double total = s[n];

    struct Pair {
        double chord, ratio;
    };
    std::vector<Pair> pairs;
    pairs.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double chord = (p[i] - p[j]).norm();
            const double arc = s[j] - s[i];
            const double shorter = std::min(arc, total - arc);
            pairs.push_back({chord, chord > 0.0 ? shorter / chord : 1e300});
        }
    }

    ChordArcReport rep;
    if (delta) {
        rep.delta = *delta;
        for (const auto& pr : pairs) {
            if (pr.chord <= *delta) rep.M = std::max(rep.M, pr.ratio);
        }
        return rep;
    }
    std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) { return a.chord < b.chord; });
    double running = 1.0;
    rep.delta = pairs.front().chord;
    for (const auto& pr : pairs) {
        const double next = std::max(running, pr.ratio);
        if (next > 100.0) break;
        running = next;
        rep.delta = pr.chord;
    }
    rep.M = running;
    return rep;
}

}  // namespace hflow
