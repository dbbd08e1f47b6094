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

#include <complex>
#include <span>
#include <vector>

#include "hflow/curvature.hpp"
#include "hflow/disk_mesh.hpp"
#include "hflow/obstacle.hpp"

namespace hflow {

/// Quadrature orders for the H-volume: Gauss points along the homotopy
/// parameter and the polynomial degree of the triangle rule.
struct VolumeQuadrature {
    int q_s = 2;
    int q_x = 2;
    bool operator==(const VolumeQuadrature&) const = default;
};

/// Dirichlet energy 1/2 sum_t area_t (|D1 u|^2 + |D2 u|^2).
double dirichlet(const DiskMesh& mesh, std::span<const Vec3> u);
/// Stiffness action; the exact gradient of dirichlet() in the vertex values.
Field dirichlet_gradient(const DiskMesh& mesh, std::span<const Vec3> u);

/// H-weighted volume swept by the straight-line homotopy from v to u,
///   int_B int_0^1 H(U) <U_s, U_x1 x U_x2> ds dx,  U = (1-s) v + s u.
/// Throws OutsideObstacle if a vertex of u or v is outside A.
double h_volume(const DiskMesh& mesh, std::span<const Vec3> u, std::span<const Vec3> v,
                const PrescribedCurvature& H, const Obstacle& A, VolumeQuadrature q = {});

/// Exact gradient of h_volume(u, v) with respect to the vertex values of u
/// (same quadrature, including the dH terms for non-constant H).
Field h_volume_gradient(const DiskMesh& mesh, std::span<const Vec3> u, std::span<const Vec3> v,
                        const PrescribedCurvature& H, VolumeQuadrature q = {});

/// Continuum first variation load of the volume: H at the triangle centroid
/// times D1u x D2u, distributed with the barycentric weights area/3.
Field volume_first_variation(const DiskMesh& mesh, std::span<const Vec3> u, const PrescribedCurvature& H);

/// |V(ut, u) + V(u, v) - V(ut, v)|.
double volume_additivity_check(const DiskMesh& mesh, std::span<const Vec3> u, std::span<const Vec3> ut,
                               std::span<const Vec3> v, const PrescribedCurvature& H, const Obstacle& A,
                               VolumeQuadrature q = {});

struct FTerms {
    double dirichlet = 0.0;
    double volume = 0.0;     // V_H(u, u0), enters F with factor 2
    double proximal = 0.0;   // 1/(2h) ||u - z||^2
    double total() const { return dirichlet + 2.0 * volume + proximal; }
};

/// Terms of F(u) = D(u) + 2 V_H(u, u0) + 1/(2h) int |u - z|^2.
FTerms f_terms(const DiskMesh& mesh, std::span<const Vec3> u, std::span<const Vec3> u0, std::span<const Vec3> z,
               double h, const PrescribedCurvature& H, const Obstacle& A, VolumeQuadrature q = {});
double f_value(const DiskMesh& mesh, std::span<const Vec3> u, std::span<const Vec3> u0, std::span<const Vec3> z,
               double h, const PrescribedCurvature& H, const Obstacle& A, VolumeQuadrature q = {});
/// F(a) - F(b), accumulated triangle by triangle so that small decreases
/// are not lost to rounding in the totals.
double f_difference(const DiskMesh& mesh, std::span<const Vec3> a, std::span<const Vec3> b, std::span<const Vec3> u0,
                    std::span<const Vec3> z, double h, const PrescribedCurvature& H, const Obstacle& A,
                    VolumeQuadrature q = {});
/// Exact gradient of f_value in the vertex values of u. h may be +inf, which
/// drops the proximal term.
Field f_gradient(const DiskMesh& mesh, std::span<const Vec3> u, std::span<const Vec3> u0, std::span<const Vec3> z,
                 double h, const PrescribedCurvature& H, VolumeQuadrature q = {});

/// Per-triangle Hopf differential |D1u|^2 - |D2u|^2 - 2i D1u.D2u.
std::vector<std::complex<double>> hopf(const DiskMesh& mesh, std::span<const Vec3> u);
/// L1 norm sum_t area_t |h_t|.
double hopf_residual(const DiskMesh& mesh, std::span<const Vec3> u);

/// int Re(h[u] dbar eta) + int f . (Du eta), eta a P1 field tangential on
/// the boundary and zero at the anchors (else NonAdmissibleField).
double inner_variation_residual(const DiskMesh& mesh, std::span<const Vec3> u, std::span<const Vec3> f,
                                std::span<const Vec2> eta);

/// Cotangent-formula mean curvature vector of the embedded triangle mesh
/// (half the Laplace-Beltrami of the position, mixed Voronoi areas).
/// Boundary entries are zero.
Field mean_curvature_vectors(const DiskMesh& mesh, std::span<const Vec3> u);

}  // namespace hflow
