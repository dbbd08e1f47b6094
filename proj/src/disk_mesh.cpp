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

#include "hflow/disk_mesh.hpp"

#include <cmath>
#include <string>

namespace hflow {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::TooFewPoints: return "TooFewPoints";
        case ErrorKind::SelfIntersecting: return "SelfIntersecting";
        case ErrorKind::Degenerate: return "Degenerate";
        case ErrorKind::NotOnBoundary: return "NotOnBoundary";
        case ErrorKind::NoBoundary: return "NoBoundary";
        case ErrorKind::OutsideObstacle: return "OutsideObstacle";
        case ErrorKind::NonAdmissibleField: return "NonAdmissibleField";
        case ErrorKind::InfeasibleAnchors: return "InfeasibleAnchors";
        case ErrorKind::ObstacleViolation: return "ObstacleViolation";
        case ErrorKind::UnsupportedCombination: return "UnsupportedCombination";
        case ErrorKind::NotAdmissible: return "NotAdmissible";
        case ErrorKind::LineSearchStall: return "LineSearchStall";
        case ErrorKind::Io: return "Io";
    }
    return "Unknown";
}

namespace {

int ring_count(int n_boundary, int n_rings, int r) {
    const long num = static_cast<long>(n_boundary) * r;
    const int raw = static_cast<int>((num + n_rings - 1) / n_rings);
    // Nearest multiple of 3; an integer is never equidistant from two of them.
    const int rem = raw % 3;
    int rounded = rem == 0 ? raw : (rem == 1 ? raw - 1 : raw + 1);
    return std::max(rounded, 3);
}

}  // namespace

double DiskMesh::total_area() const {
    double s = 0.0;
    for (double a : areas) s += a;
    return s;
}

DiskMesh build_disk_mesh(int n_boundary, int n_rings) {
    if (n_boundary < 6 || n_boundary % 3 != 0) {
        throw Error(ErrorKind::InvalidArgument,
                    "n_boundary must be >= 6 and divisible by 3, got " + std::to_string(n_boundary));
    }
    if (n_rings < 1) {
        throw Error(ErrorKind::InvalidArgument, "n_rings must be >= 1, got " + std::to_string(n_rings));
    }

    DiskMesh mesh;
    // ring_start[r] is the first vertex id of ring r; ring 0 is the centre.
    std::vector<int> counts(n_rings + 1), ring_start(n_rings + 1);
    counts[0] = 1;
    for (int r = 1; r <= n_rings; ++r) counts[r] = ring_count(n_boundary, n_rings, r);

    int next = 0;
    for (int r = n_rings; r >= 1; --r) {
        ring_start[r] = next;
        const double rho = static_cast<double>(r) / n_rings;
        for (int k = 0; k < counts[r]; ++k) {
            const double theta = kTwoPi * k / counts[r];
            if (r == n_rings) {
                mesh.vertices.emplace_back(std::cos(theta), std::sin(theta));
            } else {
                mesh.vertices.emplace_back(rho * std::cos(theta), rho * std::sin(theta));
            }
        }
        next += counts[r];
    }
    ring_start[0] = next;
    mesh.vertices.emplace_back(0.0, 0.0);

    auto id = [&](int r, int k) { return ring_start[r] + (k % counts[r]); };

    for (int k = 0; k < counts[1]; ++k) {
        mesh.triangles.push_back({id(0, 0), id(1, k), id(1, k + 1)});
    }
    for (int r = 2; r <= n_rings; ++r) {
        const int a = counts[r - 1];
        const int b = counts[r];
        int i = 0, j = 0;
        while (i < a || j < b) {
            // Advance on whichever ring has the nearer next angle.
            const double next_inner = static_cast<double>(i + 1) / a;
            const double next_outer = static_cast<double>(j + 1) / b;
            if (j < b && (i == a || next_outer <= next_inner)) {
                mesh.triangles.push_back({id(r - 1, i), id(r, j), id(r, j + 1)});
                ++j;
            } else {
                mesh.triangles.push_back({id(r - 1, i), id(r, j), id(r - 1, i + 1)});
                ++i;
            }
        }
    }

    const int nb = counts[n_rings];
    mesh.boundary_loop.resize(nb);
    mesh.boundary_angles.resize(nb);
    for (int k = 0; k < nb; ++k) {
        mesh.boundary_loop[k] = k;
        mesh.boundary_angles[k] = kTwoPi * k / nb;
    }
    mesh.anchor_indices = {nb / 3, 2 * nb / 3, 0};

    const std::size_t nv = mesh.vertices.size();
    mesh.lumped_mass.assign(nv, 0.0);
    mesh.areas.resize(mesh.triangles.size());
    mesh.basis_gradients.resize(mesh.triangles.size());
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const auto& tri = mesh.triangles[t];
        const Vec2& p0 = mesh.vertices[tri[0]];
        const Vec2& p1 = mesh.vertices[tri[1]];
        const Vec2& p2 = mesh.vertices[tri[2]];
        const Vec2 e1 = p1 - p0;
        const Vec2 e2 = p2 - p0;
        const double det = e1.x() * e2.y() - e1.y() * e2.x();
        if (!(det > 0.0)) {
            throw Error(ErrorKind::Degenerate, "mesh generator produced a non-positive triangle");
        }
        mesh.areas[t] = 0.5 * det;
        // grad N_a = rot90(opposite edge) / (2 * area)
        auto grad = [&](const Vec2& from, const Vec2& to) -> Vec2 {
            return Vec2(-(to.y() - from.y()), to.x() - from.x()) / det;
        };
        mesh.basis_gradients[t] = {grad(p1, p2), grad(p2, p0), grad(p0, p1)};
        for (int v : tri) mesh.lumped_mass[v] += mesh.areas[t] / 3.0;
    }

    mesh.boundary_mass.assign(nb, 0.0);
    for (int k = 0; k < nb; ++k) {
        const double len = (mesh.vertices[(k + 1) % nb] - mesh.vertices[k]).norm();
        mesh.boundary_mass[k] += 0.5 * len;
        mesh.boundary_mass[(k + 1) % nb] += 0.5 * len;
    }
    return mesh;
}

std::pair<Vec3, Vec3> p1_gradient(const DiskMesh& mesh, std::span<const Vec3> u, std::size_t t) {
    if (t >= mesh.triangles.size()) throw Error(ErrorKind::InvalidArgument, "triangle index out of range");
    if (u.size() != mesh.vertices.size()) throw Error(ErrorKind::InvalidArgument, "field size mismatch");
    const auto& tri = mesh.triangles[t];
    const auto& g = mesh.basis_gradients[t];
    Vec3 d1 = Vec3::Zero(), d2 = Vec3::Zero();
    for (int a = 0; a < 3; ++a) {
        d1 += g[a].x() * u[tri[a]];
        d2 += g[a].y() * u[tri[a]];
    }
    return {d1, d2};
}

double l2_inner(const DiskMesh& mesh, std::span<const Vec3> u, std::span<const Vec3> v) {
    if (u.size() != mesh.vertices.size() || v.size() != mesh.vertices.size()) {
        throw Error(ErrorKind::InvalidArgument, "field size mismatch in l2_inner");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) s += mesh.lumped_mass[i] * u[i].dot(v[i]);
    return s;
}

Field planar_field(const DiskMesh& mesh) {
    return sample_field(mesh, [](const Vec2& x) { return Vec3(x.x(), x.y(), 0.0); });
}

}  // namespace hflow
