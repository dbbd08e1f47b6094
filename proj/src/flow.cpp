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

#include "hflow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hflow {

void validate(const FlowConfig& cfg) {
    auto fail = [](const std::string& key, const std::string& why) {
        throw Error(ErrorKind::InvalidArgument, key + ": " + why);
    };
    if (!(cfg.h > 0.0)) fail("h", "must be positive");
    if (cfg.max_steps < 0) fail("max_steps", "must be nonnegative");
    if (cfg.inner.max_iters < 1) fail("inner.max_iters", "must be positive");
    if (!(cfg.inner.grad_tol > 0.0)) fail("inner.grad_tol", "must be positive");
    if (!(cfg.inner.armijo_c > 0.0 && cfg.inner.armijo_c < 1.0)) fail("inner.armijo_c", "must lie in (0,1)");
    if (!(cfg.inner.step_shrink > 0.0 && cfg.inner.step_shrink < 1.0)) fail("inner.step_shrink", "must lie in (0,1)");
    if (!(cfg.inner.init_step > 0.0)) fail("inner.init_step", "must be positive");
    if (!(cfg.dt_tol > 0.0)) fail("dt_tol", "must be positive");
    if (!(cfg.hopf_tol > 0.0)) fail("hopf_tol", "must be positive");
    if (!(cfg.c > 0.0 && cfg.c < 1.0)) fail("c", "must lie in (0,1)");
    if (!(cfg.s > 0.0)) fail("s", "must be positive");
    if (cfg.cadence < 0) fail("cadence", "must be nonnegative");
    if (cfg.n_test < 1) fail("n_test", "must be positive");
}

namespace {

Field assemble(const DiskMesh& mesh, const JordanCurve& curve, const SurfaceState& st) {
    const std::size_t nb = mesh.num_boundary();
    Field u(mesh.num_vertices());
    for (std::size_t i = 0; i < nb; ++i) u[mesh.boundary_loop[i]] = curve.eval(st.phases[i]);
    std::copy(st.interior.begin(), st.interior.end(), u.begin() + static_cast<std::ptrdiff_t>(nb));
    return u;
}

double mass_norm(const DiskMesh& mesh, std::span<const Vec3> a, std::span<const Vec3> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += mesh.lumped_mass[i] * (a[i] - b[i]).squaredNorm();
    return std::sqrt(s);
}

bool is_anchor(const std::array<AnchorValue, 3>& lock, std::size_t pos) {
    return std::any_of(lock.begin(), lock.end(), [&](const AnchorValue& a) { return a.position == pos; });
}

/// Gradient of F in the state variables plus the diagonal metric.
struct ReducedGradient {
    Field interior;
    std::vector<double> phases;
    std::vector<double> phase_metric;
};

ReducedGradient reduce(const DiskMesh& mesh, const JordanCurve& curve, const SurfaceState& st, const Field& g,
                       const std::array<AnchorValue, 3>& lock) {
    const std::size_t nb = mesh.num_boundary();
    ReducedGradient r;
    r.interior.assign(g.begin() + static_cast<std::ptrdiff_t>(nb), g.end());
    r.phases.resize(nb);
    r.phase_metric.resize(nb);
    for (std::size_t i = 0; i < nb; ++i) {
        const int v = mesh.boundary_loop[i];
        const Vec3 t = curve.eval_d1(st.phases[i]);
        r.phases[i] = is_anchor(lock, i) ? 0.0 : g[v].dot(t);
        r.phase_metric[i] = mesh.lumped_mass[v] * std::max(t.squaredNorm(), 1e-300);
    }
    return r;
}

/// P(x - alpha * M^{-1} g).
SurfaceState trial(const DiskMesh& mesh, const Obstacle& A, const SurfaceState& x, const ReducedGradient& rg,
                   const std::array<AnchorValue, 3>& lock, double alpha) {
    const std::size_t nb = mesh.num_boundary();
    SurfaceState y;
    y.interior.resize(x.interior.size());
    for (std::size_t k = 0; k < x.interior.size(); ++k) {
        y.interior[k] = A.project(x.interior[k] - (alpha / mesh.lumped_mass[nb + k]) * rg.interior[k]);
    }
    std::vector<double> ph(nb);
    for (std::size_t i = 0; i < nb; ++i) ph[i] = x.phases[i] - alpha * rg.phases[i] / rg.phase_metric[i];
    y.phases = project_monotone(ph, rg.phase_metric, lock);
    return y;
}

/// <g, y - x> and |y - x|_M^2 in state coordinates.
std::pair<double, double> pair_with(const DiskMesh& mesh, const SurfaceState& x, const SurfaceState& y,
                                    const ReducedGradient& rg) {
    const std::size_t nb = mesh.num_boundary();
    double dot = 0.0, sq = 0.0;
    for (std::size_t k = 0; k < x.interior.size(); ++k) {
        const Vec3 d = y.interior[k] - x.interior[k];
        dot += rg.interior[k].dot(d);
        sq += mesh.lumped_mass[nb + k] * d.squaredNorm();
    }
    for (std::size_t i = 0; i < nb; ++i) {
        const double d = y.phases[i] - x.phases[i];
        dot += rg.phases[i] * d;
        sq += rg.phase_metric[i] * d * d;
    }
    return {dot, sq};
}

}  // namespace

InnerResult minimize_f(const Problem& p, const SurfaceState& start, std::span<const Vec3> z, double h,
                       const InnerSolverConfig& cfg, VolumeQuadrature q) {
    const auto lock = anchor_lock(p.mesh, p.curve);
    auto value = [&](const Field& u) { return f_value(p.mesh, u, p.u0, z, h, p.H, p.A, q); };
    auto gradient = [&](const Field& u) { return f_gradient(p.mesh, u, p.u0, z, h, p.H, q); };

    InnerResult res;
    res.state = start;
    Field u = assemble(p.mesh, p.curve, res.state);
    res.f_value = value(u);
    ReducedGradient rg = reduce(p.mesh, p.curve, res.state, gradient(u), lock);
    double alpha = cfg.init_step;

    for (int it = 0;; ++it) {
        const SurfaceState unit = trial(p.mesh, p.A, res.state, rg, lock, 1.0);
        res.projected_gradient = std::sqrt(pair_with(p.mesh, res.state, unit, rg).second);
        if (res.projected_gradient <= cfg.grad_tol) {
            res.reached_tol = true;
            break;
        }
        if (it >= cfg.max_iters) break;

        bool accepted = false;
        SurfaceState next;
        Field u_next;
        double f_next = 0.0;
        for (int shrink = 0; shrink < 80; ++shrink) {
            next = trial(p.mesh, p.A, res.state, rg, lock, alpha);
            const auto [dot, sq] = pair_with(p.mesh, res.state, next, rg);
            if (sq == 0.0) break;
            u_next = assemble(p.mesh, p.curve, next);
            const double decrease = f_difference(p.mesh, u_next, u, p.u0, z, h, p.H, p.A, q);
            if (decrease < 0.0 && decrease <= cfg.armijo_c * dot) {
                f_next = res.f_value + decrease;
                accepted = true;
                break;
            }
            alpha *= cfg.step_shrink;
        }
        if (!accepted) {
            res.stalled = true;
            break;
        }

        ReducedGradient rg_next = reduce(p.mesh, p.curve, next, gradient(u_next), lock);
        // Barzilai-Borwein step in the mass metric.
        double sDs = 0.0, sy = 0.0;
        const std::size_t nb = p.mesh.num_boundary();
        for (std::size_t k = 0; k < next.interior.size(); ++k) {
            const Vec3 s = next.interior[k] - res.state.interior[k];
            sDs += p.mesh.lumped_mass[nb + k] * s.squaredNorm();
            sy += s.dot(rg_next.interior[k] - rg.interior[k]);
        }
        for (std::size_t i = 0; i < nb; ++i) {
            const double s = next.phases[i] - res.state.phases[i];
            sDs += rg.phase_metric[i] * s * s;
            sy += s * (rg_next.phases[i] - rg.phases[i]);
        }
        alpha = sy > 0.0 ? std::clamp(sDs / sy, 1e-12, 1e12) : std::min(alpha * 4.0, 1e12);

        res.state = std::move(next);
        res.f_value = f_next;
        u = std::move(u_next);
        rg = std::move(rg_next);
        res.iterations = it + 1;
    }
    res.f_value = value(u);
    return res;
}

StepResult rothe_step(const Problem& p, const SurfaceState& prev, const FlowConfig& cfg) {
    const Field z = realize(p.mesh, p.curve, p.A, prev);
    InnerResult inner = minimize_f(p, prev, z, cfg.h, cfg.inner, cfg.quadrature);

    StepResult out;
    out.state = std::move(inner.state);
    out.u = realize(p.mesh, p.curve, p.A, out.state);
    Field f(out.u.size());
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = (out.u[i] - z[i]) / cfg.h;

    StepRecord& r = out.record;
    const FTerms terms = f_terms(p.mesh, out.u, p.u0, z, cfg.h, p.H, p.A, cfg.quadrature);
    r.dirichlet = terms.dirichlet;
    r.h_volume = terms.volume;
    r.f_value = terms.total();
    r.dissipation_increment = terms.proximal;
    r.dt_norm = mass_norm(p.mesh, out.u, z) / cfg.h;
    r.hopf_residual = hopf_residual(p.mesh, out.u);
    r.neumann_residual =
        neumann_residual(p.mesh, p.curve, p.H, out.u, out.state.phases, f, cfg.n_test, &p.u0, cfg.quadrature);
    r.stationarity_residual = stationarity_residual(p.mesh, out.u, f, stationarity_test_family(p.mesh));
    r.inner_iters = inner.iterations;
    r.stalled = inner.stalled;
    return out;
}

FlowResult run_flow(const DiskMesh& mesh, const JordanCurve& curve, const Obstacle& A, const PrescribedCurvature& H,
                    const SurfaceState& initial, const FlowConfig& cfg, const StepObserver& observer) {
    validate(cfg);
    Problem p{mesh, curve, A, H, realize(mesh, curve, A, initial)};
    const double d0 = dirichlet(mesh, p.u0);

    FlowResult res;
    res.conditions = check_conditions(H, A, d0, cfg.c, cfg.s);
    if (!res.conditions.admissible && !cfg.override_admissibility) {
        throw Error(ErrorKind::NotAdmissible, "no sufficient condition certifies the data; set the override to run anyway");
    }

    const Field zero(mesh.num_vertices(), Vec3::Zero());
    const auto family = stationarity_test_family(mesh);
    StepRecord r0;
    r0.dirichlet = d0;
    r0.f_value = d0;
    r0.hopf_residual = hopf_residual(mesh, p.u0);
    r0.neumann_residual = neumann_residual(mesh, curve, H, p.u0, initial.phases, zero, cfg.n_test, &p.u0, cfg.quadrature);
    r0.stationarity_residual = stationarity_residual(mesh, p.u0, zero, family);
    res.trace.steps.push_back(r0);
    if (observer) observer(r0, initial, p.u0);

    constexpr double ledger_tol = 1e-8;
    const double cap = energy_cap(cfg.c, cfg.s, d0);
    SurfaceState state = initial;
    double total = 0.0;
    for (int j = 1; j <= cfg.max_steps; ++j) {
        StepResult step = rothe_step(p, state, cfg);
        StepRecord& r = step.record;
        total += r.dissipation_increment;
        r.step = j;
        r.time = j * cfg.h;
        r.dissipation_total = total;

        std::ostringstream msg;
        if (total > 2.0 * d0 + ledger_tol) {
            msg << "step " << j << ": cumulative dissipation " << total << " exceeds 2 D(u0) = " << 2.0 * d0;
            res.trace.warnings.push_back(msg.str());
        }
        if (std::isfinite(cap) && r.dirichlet > cap + ledger_tol) {
            msg.str("");
            msg << "step " << j << ": Dirichlet energy " << r.dirichlet << " exceeds the cap " << cap;
            res.trace.warnings.push_back(msg.str());
        }
        if (r.stalled) res.trace.warnings.push_back("step " + std::to_string(j) + ": line search stalled");

        state = std::move(step.state);
        res.trace.steps.push_back(r);
        if (observer) observer(r, state, step.u);
        if (r.dt_norm <= cfg.dt_tol && r.hopf_residual <= cfg.hopf_tol * r.dirichlet) {
            res.trace.converged = true;
            break;
        }
    }
    res.final_state = std::move(state);
    return res;
}

double neumann_residual(const DiskMesh& mesh, const JordanCurve& curve, const PrescribedCurvature& H,
                        std::span<const Vec3> u, std::span<const double> phases, std::span<const Vec3> f, int n_test,
                        const Field* u0, VolumeQuadrature q) {
    const std::size_t nb = mesh.num_boundary();
    if (u.size() != mesh.num_vertices() || f.size() != u.size() || phases.size() != nb) {
        throw Error(ErrorKind::InvalidArgument, "neumann_residual: size mismatch");
    }
    Field g = dirichlet_gradient(mesh, u);
    if (!H.is_zero()) {
        const Field gv = u0 ? h_volume_gradient(mesh, u, *u0, H, q) : volume_first_variation(mesh, u, H);
        for (std::size_t i = 0; i < g.size(); ++i) g[i] += 2.0 * gv[i];
    }
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += mesh.lumped_mass[i] * f[i];

    std::vector<double> gphi(nb), weight(nb);
    for (std::size_t i = 0; i < nb; ++i) {
        const Vec3 t = curve.eval_d1(phases[i]);
        gphi[i] = g[mesh.boundary_loop[i]].dot(t);
        weight[i] = mesh.boundary_mass[i] * std::max(t.squaredNorm(), 1e-300);
    }

    std::array<AnchorValue, 3> lock{};
    {
        // Lock at the current anchor phases so that the family is feasible for this state.
        std::array<int, 3> pos = mesh.anchor_indices;
        std::sort(pos.begin(), pos.end());
        for (int k = 0; k < 3; ++k) lock[k] = {static_cast<std::size_t>(pos[k]), phases[pos[k]]};
    }

    const int per_arc = std::max(1, (n_test + 5) / 6);
    double worst = 0.0;
    std::vector<double> trial(nb);
    for (int k = 0; k < 3; ++k) {
        const std::size_t a = lock[k].position;
        const std::size_t len = (k == 2 ? lock[0].position + nb : lock[k + 1].position) - a;
        if (len < 2) continue;
        const double width = std::max(1.0, static_cast<double>(len) / (2.0 * per_arc));
        for (int c = 0; c < per_arc; ++c) {
            const double center = static_cast<double>(len) * (c + 0.5) / per_arc;
            for (double sign : {1.0, -1.0}) {
                for (std::size_t i = 0; i < nb; ++i) trial[i] = phases[i];
                for (std::size_t j = 1; j < len; ++j) {
                    const double hat = std::max(0.0, 1.0 - std::abs(static_cast<double>(j) - center) / width);
                    trial[(a + j) % nb] += sign * 1e-3 * hat;
                }
                const auto proj = project_monotone(trial, weight, lock);
                double pairing = 0.0, norm2 = 0.0;
                for (std::size_t i = 0; i < nb; ++i) {
                    const double d = proj[i] - phases[i];
                    pairing += gphi[i] * d;
                    norm2 += weight[i] * d * d;
                }
                if (norm2 <= 0.0) continue;
                worst = std::max(worst, -pairing / std::sqrt(norm2));
            }
        }
    }
    return worst;
}

std::vector<Field2> stationarity_test_family(const DiskMesh& mesh) {
    std::vector<Field2> family;
    constexpr double radius = 0.35, spacing = 0.5;
    for (int i = -2; i <= 2; ++i) {
        for (int j = -2; j <= 2; ++j) {
            const Vec2 c(i * spacing, j * spacing);
            if (c.norm() + radius > 1.0) continue;
            for (int dir = 0; dir < 2; ++dir) {
                Field2 eta(mesh.num_vertices(), Vec2::Zero());
                for (std::size_t v = 0; v < eta.size(); ++v) {
                    const double t = (mesh.vertices[v] - c).norm() / radius;
                    if (t < 1.0) eta[v][dir] = (1.0 - t * t) * (1.0 - t * t);
                }
                family.push_back(std::move(eta));
            }
        }
    }
    const std::size_t nb = mesh.num_boundary();
    for (int mode = 0; mode < 5; ++mode) {
        Field2 eta(mesh.num_vertices(), Vec2::Zero());
        for (std::size_t v = 0; v < eta.size(); ++v) {
            const Vec2& x = mesh.vertices[v];
            const double rho = x.norm();
            if (rho == 0.0) continue;
            const double th = v < nb ? mesh.boundary_angles[v] : std::atan2(x.y(), x.x());
            const double g = std::sin(3.0 * th) * std::array<double, 5>{1.0, std::cos(th), std::sin(th),
                                                                          std::cos(2.0 * th), std::sin(2.0 * th)}[mode];
            eta[v] = std::pow(rho, 6) * g * Vec2(-std::sin(th), std::cos(th));
        }
        for (int a : mesh.anchor_indices) eta[mesh.boundary_loop[a]] = Vec2::Zero();
        family.push_back(std::move(eta));
    }
    return family;
}

double w1inf_norm(const DiskMesh& mesh, std::span<const Vec2> eta) {
    double nodal = 0.0, grad = 0.0;
    for (const Vec2& e : eta) nodal = std::max(nodal, e.norm());
    for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
        const auto& tri = mesh.triangles[t];
        const auto& g = mesh.basis_gradients[t];
        Eigen::Matrix2d J = Eigen::Matrix2d::Zero();
        for (int a = 0; a < 3; ++a) J += eta[tri[a]] * g[a].transpose();
        grad = std::max(grad, J.norm());
    }
    return nodal + grad;
}

double stationarity_residual(const DiskMesh& mesh, std::span<const Vec3> u, std::span<const Vec3> f,
                             std::span<const Field2> family) {
    double worst = 0.0;
    for (const Field2& eta : family) {
        worst = std::max(worst, std::abs(inner_variation_residual(mesh, u, f, eta)) / (1.0 + w1inf_norm(mesh, eta)));
    }
    return worst;
}

InnerResult solve_stationary(const DiskMesh& mesh, const JordanCurve& curve, const Obstacle& A,
                             const PrescribedCurvature& H, const SurfaceState& initial, const FlowConfig& cfg) {
    validate(cfg);
    Problem p{mesh, curve, A, H, realize(mesh, curve, A, initial)};
    return minimize_f(p, initial, p.u0, kInfinity, cfg.inner, cfg.quadrature);
}

}  // namespace hflow
