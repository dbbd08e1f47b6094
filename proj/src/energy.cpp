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

#include "hflow/energy.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include "hflow/quadrature.hpp"
#include "parallel.hpp"

namespace hflow {

namespace {

void check_size(const DiskMesh& mesh, std::size_t n, const char* what) {
    if (n != mesh.vertices.size()) {
        throw Error(ErrorKind::InvalidArgument, std::string(what) + ": field size does not match the mesh");
    }
}

void check_inside(const Obstacle& A, std::span<const Vec3> u, const char* what) {
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (!A.contains(u[i])) {
            throw Error(ErrorKind::OutsideObstacle, std::string(what) + ": vertex " + std::to_string(i) + " is outside A");
        }
    }
}

double sum(const std::vector<double>& v) {
    // Fixed left-to-right order keeps results independent of the thread count.
    return std::accumulate(v.begin(), v.end(), 0.0);
}

Field scatter(const DiskMesh& mesh, const std::vector<std::array<Vec3, 3>>& local) {
    Field out(mesh.vertices.size(), Vec3::Zero());
    for (std::size_t t = 0; t < local.size(); ++t) {
        const auto& tri = mesh.triangles[t];
        for (int a = 0; a < 3; ++a) out[tri[a]] += local[t][a];
    }
    return out;
}

struct VolumeRules {
    LineRule s;
    TriangleRule x;
};

VolumeRules make_rules(VolumeQuadrature q) {
    if (q.q_s < 1) throw Error(ErrorKind::InvalidArgument, "q_s must be >= 1");
    return {gauss_legendre01(q.q_s), triangle_rule(q.q_x)};
}

double triangle_volume(const DiskMesh& mesh, std::span<const Vec3> u, std::span<const Vec3> v, std::size_t t,
                       const VolumeRules& rules, const PrescribedCurvature& H, bool constant, double h0) {
    const auto& tri = mesh.triangles[t];
    const auto [dv1, dv2] = p1_gradient(mesh, v, t);
    const auto [du1, du2] = p1_gradient(mesh, u, t);
    const Vec3 dw1 = du1 - dv1, dw2 = du2 - dv2;
    double acc = 0.0;
    for (std::size_t is = 0; is < rules.s.nodes.size(); ++is) {
        const double s = rules.s.nodes[is];
        const Vec3 ux = dv1 + s * dw1;
        const Vec3 uy = dv2 + s * dw2;
        const Vec3 c = ux.cross(uy);
        for (std::size_t ix = 0; ix < rules.x.bary.size(); ++ix) {
            const auto& l = rules.x.bary[ix];
            Vec3 w = Vec3::Zero(), U = Vec3::Zero();
            for (int a = 0; a < 3; ++a) {
                const Vec3 wa = u[tri[a]] - v[tri[a]];
                w += l[a] * wa;
                U += l[a] * (v[tri[a]] + s * wa);
            }
            const double hval = constant ? h0 : H(U);
            acc += rules.s.weights[is] * rules.x.weights[ix] * hval * w.dot(c);
        }
    }
    return mesh.areas[t] * acc;
}

}  // namespace

double dirichlet(const DiskMesh& mesh, std::span<const Vec3> u) {
    check_size(mesh, u.size(), "dirichlet");
    std::vector<double> e(mesh.num_triangles());
    detail::parallel_for(e.size(), [&](std::size_t t) {
        const auto [d1, d2] = p1_gradient(mesh, u, t);
        e[t] = 0.5 * mesh.areas[t] * (d1.squaredNorm() + d2.squaredNorm());
    });
    return sum(e);
}

Field dirichlet_gradient(const DiskMesh& mesh, std::span<const Vec3> u) {
    check_size(mesh, u.size(), "dirichlet_gradient");
    std::vector<std::array<Vec3, 3>> local(mesh.num_triangles());
    detail::parallel_for(local.size(), [&](std::size_t t) {
        const auto [d1, d2] = p1_gradient(mesh, u, t);
        const auto& g = mesh.basis_gradients[t];
        for (int a = 0; a < 3; ++a) local[t][a] = mesh.areas[t] * (g[a].x() * d1 + g[a].y() * d2);
    });
    return scatter(mesh, local);
}

double h_volume(const DiskMesh& mesh, std::span<const Vec3> u, std::span<const Vec3> v,
                const PrescribedCurvature& H, const Obstacle& A, VolumeQuadrature q) {
    check_size(mesh, u.size(), "h_volume");
    check_size(mesh, v.size(), "h_volume");
    check_inside(A, u, "h_volume(u)");
    check_inside(A, v, "h_volume(v)");
    const VolumeRules rules = make_rules(q);
    const bool constant = H.is_constant();
    const double h0 = constant ? H(Vec3::Zero()) : 0.0;

    std::vector<double> vol(mesh.num_triangles());
    detail::parallel_for(vol.size(), [&](std::size_t t) { vol[t] = triangle_volume(mesh, u, v, t, rules, H, constant, h0); });
    return sum(vol);
}

Field h_volume_gradient(const DiskMesh& mesh, std::span<const Vec3> u, std::span<const Vec3> v,
                        const PrescribedCurvature& H, VolumeQuadrature q) {
    check_size(mesh, u.size(), "h_volume_gradient");
    check_size(mesh, v.size(), "h_volume_gradient");
    const VolumeRules rules = make_rules(q);
    const bool constant = H.is_constant();
    const double h0 = constant ? H(Vec3::Zero()) : 0.0;

    std::vector<std::array<Vec3, 3>> local(mesh.num_triangles());
    detail::parallel_for(local.size(), [&](std::size_t t) {
        const auto& tri = mesh.triangles[t];
        const auto& g = mesh.basis_gradients[t];
        const auto [dv1, dv2] = p1_gradient(mesh, v, t);
        const auto [du1, du2] = p1_gradient(mesh, u, t);
        const Vec3 dw1 = du1 - dv1, dw2 = du2 - dv2;
        std::array<Vec3, 3> acc{Vec3::Zero(), Vec3::Zero(), Vec3::Zero()};
        for (std::size_t is = 0; is < rules.s.nodes.size(); ++is) {
            const double s = rules.s.nodes[is];
            const Vec3 ux = dv1 + s * dw1;
            const Vec3 uy = dv2 + s * dw2;
            const Vec3 c = ux.cross(uy);
            for (std::size_t ix = 0; ix < rules.x.bary.size(); ++ix) {
                const auto& l = rules.x.bary[ix];
                Vec3 w = Vec3::Zero(), U = Vec3::Zero();
                for (int a = 0; a < 3; ++a) {
                    const Vec3 wa = u[tri[a]] - v[tri[a]];
                    w += l[a] * wa;
                    U += l[a] * (v[tri[a]] + s * wa);
                }
                const double weight = rules.s.weights[is] * rules.x.weights[ix];
                const double hval = constant ? h0 : H(U);
                const Vec3 uy_w = uy.cross(w);
                const Vec3 w_ux = w.cross(ux);
                Vec3 dh = Vec3::Zero();
                if (!constant) dh = H.gradient(U) * w.dot(c);
                for (int a = 0; a < 3; ++a) {
                    Vec3 term = hval * (l[a] * c + s * (g[a].x() * uy_w + g[a].y() * w_ux));
                    if (!constant) term += s * l[a] * dh;
                    acc[a] += weight * term;
                }
            }
        }
        for (int a = 0; a < 3; ++a) local[t][a] = mesh.areas[t] * acc[a];
    });
    return scatter(mesh, local);
}

Field volume_first_variation(const DiskMesh& mesh, std::span<const Vec3> u, const PrescribedCurvature& H) {
    check_size(mesh, u.size(), "volume_first_variation");
    std::vector<std::array<Vec3, 3>> local(mesh.num_triangles());
    detail::parallel_for(local.size(), [&](std::size_t t) {
        const auto& tri = mesh.triangles[t];
        const auto [d1, d2] = p1_gradient(mesh, u, t);
        const Vec3 centroid = (u[tri[0]] + u[tri[1]] + u[tri[2]]) / 3.0;
        const Vec3 load = (mesh.areas[t] / 3.0) * H(centroid) * d1.cross(d2);
        local[t] = {load, load, load};
    });
    return scatter(mesh, local);
}

double volume_additivity_check(const DiskMesh& mesh, std::span<const Vec3> u, std::span<const Vec3> ut,
                               std::span<const Vec3> v, const PrescribedCurvature& H, const Obstacle& A,
                               VolumeQuadrature q) {
    const double a = h_volume(mesh, ut, u, H, A, q);
    const double b = h_volume(mesh, u, v, H, A, q);
    const double c = h_volume(mesh, ut, v, H, A, q);
    return std::abs(a + b - c);
}

FTerms f_terms(const DiskMesh& mesh, std::span<const Vec3> u, std::span<const Vec3> u0, std::span<const Vec3> z,
               double h, const PrescribedCurvature& H, const Obstacle& A, VolumeQuadrature q) {
    if (!(h > 0.0)) throw Error(ErrorKind::InvalidArgument, "time step h must be positive");
    check_size(mesh, z.size(), "f_value");
    FTerms terms;
    terms.dirichlet = dirichlet(mesh, u);
    terms.volume = H.is_zero() ? 0.0 : h_volume(mesh, u, u0, H, A, q);
    if (std::isfinite(h)) {
        double s = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) s += mesh.lumped_mass[i] * (u[i] - z[i]).squaredNorm();
        terms.proximal = s / (2.0 * h);
    }
    return terms;
}

double f_value(const DiskMesh& mesh, std::span<const Vec3> u, std::span<const Vec3> u0, std::span<const Vec3> z,
               double h, const PrescribedCurvature& H, const Obstacle& A, VolumeQuadrature q) {
    return f_terms(mesh, u, u0, z, h, H, A, q).total();
}

double f_difference(const DiskMesh& mesh, std::span<const Vec3> a, std::span<const Vec3> b, std::span<const Vec3> u0,
                    std::span<const Vec3> z, double h, const PrescribedCurvature& H, const Obstacle& A,
                    VolumeQuadrature q) {
    if (!(h > 0.0)) throw Error(ErrorKind::InvalidArgument, "time step h must be positive");
    check_size(mesh, a.size(), "f_difference");
    check_size(mesh, b.size(), "f_difference");
    check_size(mesh, z.size(), "f_difference");
    const bool with_volume = !H.is_zero();
    if (with_volume) {
        check_size(mesh, u0.size(), "f_difference");
        check_inside(A, a, "f_difference(a)");
        check_inside(A, b, "f_difference(b)");
        check_inside(A, u0, "f_difference(u0)");
    }
    const VolumeRules rules = make_rules(q);
    const bool constant = H.is_constant();
    const double h0 = constant ? H(Vec3::Zero()) : 0.0;

    std::vector<double> part(mesh.num_triangles());
    detail::parallel_for(part.size(), [&](std::size_t t) {
        const auto [a1, a2] = p1_gradient(mesh, a, t);
        const auto [b1, b2] = p1_gradient(mesh, b, t);
        double d = 0.5 * mesh.areas[t] * ((a1 - b1).dot(a1 + b1) + (a2 - b2).dot(a2 + b2));
        if (with_volume) {
            d += 2.0 * (triangle_volume(mesh, a, u0, t, rules, H, constant, h0) -
                        triangle_volume(mesh, b, u0, t, rules, H, constant, h0));
        }
        part[t] = d;
    });
    double total = sum(part);
    if (std::isfinite(h)) {
        double prox = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            prox += mesh.lumped_mass[i] * (a[i] - b[i]).dot(a[i] + b[i] - 2.0 * z[i]);
        }
        total += prox / (2.0 * h);
    }
    return total;
}

Field f_gradient(const DiskMesh& mesh, std::span<const Vec3> u, std::span<const Vec3> u0, std::span<const Vec3> z,
                 double h, const PrescribedCurvature& H, VolumeQuadrature q) {
    if (!(h > 0.0)) throw Error(ErrorKind::InvalidArgument, "time step h must be positive");
    check_size(mesh, z.size(), "f_gradient");
    Field g = dirichlet_gradient(mesh, u);
    if (!H.is_zero()) {
        const Field gv = h_volume_gradient(mesh, u, u0, H, q);
        for (std::size_t i = 0; i < g.size(); ++i) g[i] += 2.0 * gv[i];
    }
    if (std::isfinite(h)) {
        for (std::size_t i = 0; i < g.size(); ++i) g[i] += (mesh.lumped_mass[i] / h) * (u[i] - z[i]);
    }
    return g;
}

std::vector<std::complex<double>> hopf(const DiskMesh& mesh, std::span<const Vec3> u) {
    check_size(mesh, u.size(), "hopf");
    std::vector<std::complex<double>> out(mesh.num_triangles());
    for (std::size_t t = 0; t < out.size(); ++t) {
        const auto [d1, d2] = p1_gradient(mesh, u, t);
        out[t] = {d1.squaredNorm() - d2.squaredNorm(), -2.0 * d1.dot(d2)};
    }
    return out;
}

double hopf_residual(const DiskMesh& mesh, std::span<const Vec3> u) {
    const auto h = hopf(mesh, u);
    double s = 0.0;
    for (std::size_t t = 0; t < h.size(); ++t) s += mesh.areas[t] * std::abs(h[t]);
    return s;
}

double inner_variation_residual(const DiskMesh& mesh, std::span<const Vec3> u, std::span<const Vec3> f,
                                std::span<const Vec2> eta) {
    check_size(mesh, u.size(), "inner_variation_residual");
    check_size(mesh, f.size(), "inner_variation_residual");
    check_size(mesh, eta.size(), "inner_variation_residual");
    constexpr double tol = 1e-10;
    for (std::size_t k = 0; k < mesh.num_boundary(); ++k) {
        const int v = mesh.boundary_loop[k];
        if (std::abs(eta[v].dot(mesh.vertices[v])) > tol) {
            throw Error(ErrorKind::NonAdmissibleField, "eta is not tangential at boundary vertex " + std::to_string(v));
        }
    }
    for (int k : mesh.anchor_indices) {
        const int v = mesh.boundary_loop[k];
        if (eta[v].norm() > tol) {
            throw Error(ErrorKind::NonAdmissibleField, "eta does not vanish at anchor vertex " + std::to_string(v));
        }
    }

    const TriangleRule rule = triangle_rule(2);
    std::vector<double> part(mesh.num_triangles());
    detail::parallel_for(part.size(), [&](std::size_t t) {
        const auto& tri = mesh.triangles[t];
        const auto& g = mesh.basis_gradients[t];
        const auto [d1, d2] = p1_gradient(mesh, u, t);
        Vec2 eta_x = Vec2::Zero(), eta_y = Vec2::Zero();
        for (int a = 0; a < 3; ++a) {
            eta_x += g[a].x() * eta[tri[a]];
            eta_y += g[a].y() * eta[tri[a]];
        }
        const std::complex<double> h(d1.squaredNorm() - d2.squaredNorm(), -2.0 * d1.dot(d2));
        const std::complex<double> dbar(0.5 * (eta_x.x() - eta_y.y()), 0.5 * (eta_x.y() + eta_y.x()));
        double acc = (h * dbar).real();
        double transport = 0.0;
        for (std::size_t ix = 0; ix < rule.bary.size(); ++ix) {
            const auto& l = rule.bary[ix];
            Vec3 fq = Vec3::Zero();
            Vec2 eq = Vec2::Zero();
            for (int a = 0; a < 3; ++a) {
                fq += l[a] * f[tri[a]];
                eq += l[a] * eta[tri[a]];
            }
            transport += rule.weights[ix] * fq.dot(eq.x() * d1 + eq.y() * d2);
        }
        part[t] = mesh.areas[t] * (acc + transport);
    });
    return sum(part);
}

Field mean_curvature_vectors(const DiskMesh& mesh, std::span<const Vec3> u) {
    check_size(mesh, u.size(), "mean_curvature_vectors");
    const std::size_t nv = u.size();
    Field lap(nv, Vec3::Zero());
    std::vector<double> area(nv, 0.0);
    for (const auto& tri : mesh.triangles) {
        const Vec3 p[3] = {u[tri[0]], u[tri[1]], u[tri[2]]};
        const double tri_area = 0.5 * (p[1] - p[0]).cross(p[2] - p[0]).norm();
        if (tri_area <= 0.0) continue;
        double cot[3];
        bool obtuse_at[3];
        for (int k = 0; k < 3; ++k) {
            const Vec3 e1 = p[(k + 1) % 3] - p[k];
            const Vec3 e2 = p[(k + 2) % 3] - p[k];
            cot[k] = e1.dot(e2) / e1.cross(e2).norm();
            obtuse_at[k] = e1.dot(e2) < 0.0;
        }
        const bool obtuse = obtuse_at[0] || obtuse_at[1] || obtuse_at[2];
        for (int k = 0; k < 3; ++k) {
            // Edge (i, j) opposite vertex k.
            const int i = (k + 1) % 3, j = (k + 2) % 3;
            const Vec3 e = p[j] - p[i];
            lap[tri[i]] += 0.5 * cot[k] * e;
            lap[tri[j]] -= 0.5 * cot[k] * e;
        }
        for (int k = 0; k < 3; ++k) {
            if (!obtuse) {
                const int i = (k + 1) % 3, j = (k + 2) % 3;
                area[tri[k]] += 0.125 * ((p[j] - p[k]).squaredNorm() * cot[i] + (p[i] - p[k]).squaredNorm() * cot[j]);
            } else {
                area[tri[k]] += obtuse_at[k] ? 0.5 * tri_area : 0.25 * tri_area;
            }
        }
    }
    Field out(nv, Vec3::Zero());
    for (std::size_t v = 0; v < nv; ++v) {
        if (mesh.is_boundary(static_cast<int>(v)) || area[v] <= 0.0) continue;
        // Laplace-Beltrami of the position is twice the mean curvature vector.
        out[v] = lap[v] / (2.0 * area[v]);
    }
    return out;
}

}  // namespace hflow
