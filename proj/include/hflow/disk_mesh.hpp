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
#include <span>
#include <utility>
#include <vector>

#include "hflow/common.hpp"

namespace hflow {

/// Triangulation of the closed unit disk built from concentric rings.
///
/// Vertex layout: the boundary ring comes first (vertex i is boundary
/// position i, at angle 2*pi*i/n_boundary), then the inner rings from the
/// outside in, and the centre last. The structure is immutable once built.
struct DiskMesh {
    std::vector<Vec2> vertices;
    std::vector<std::array<int, 3>> triangles;  // counterclockwise

    std::vector<int> boundary_loop;        // counterclockwise, starts at angle 0
    std::vector<double> boundary_angles;   // strictly increasing in [0, 2*pi)
    std::array<int, 3> anchor_indices{};   // boundary positions of angles 2*pi*k/3, k = 1, 2, 3

    std::vector<double> lumped_mass;       // area / 3 per incident triangle
    std::vector<double> boundary_mass;     // half the adjacent chord lengths, per boundary position

    // Per-triangle P1 data.
    std::vector<double> areas;
    std::vector<std::array<Vec2, 3>> basis_gradients;

    std::size_t num_vertices() const { return vertices.size(); }
    std::size_t num_triangles() const { return triangles.size(); }
    std::size_t num_boundary() const { return boundary_loop.size(); }
    bool is_boundary(int v) const { return v < static_cast<int>(boundary_loop.size()); }
    double total_area() const;
};

/// Concentric-ring mesh. Ring r (1..n_rings) has radius r/n_rings and
/// ceil(n_boundary*r/n_rings) vertices rounded to the nearest multiple of 3.
DiskMesh build_disk_mesh(int n_boundary, int n_rings);

/// Constant gradient (D1 u, D2 u) of the affine interpolant on triangle t.
std::pair<Vec3, Vec3> p1_gradient(const DiskMesh& mesh, std::span<const Vec3> u, std::size_t t);

/// Lumped-mass inner product sum_i m_i u_i . v_i.
double l2_inner(const DiskMesh& mesh, std::span<const Vec3> u, std::span<const Vec3> v);

/// Planar embedding (x, y, 0) of the mesh vertices.
Field planar_field(const DiskMesh& mesh);

/// Evaluate f at every vertex.
template <class F>
Field sample_field(const DiskMesh& mesh, F&& f) {
    Field out;
    out.reserve(mesh.vertices.size());
    for (const Vec2& x : mesh.vertices) out.push_back(f(x));
    return out;
}

}  // namespace hflow
