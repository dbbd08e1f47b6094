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

#include "hflow/flow.hpp"

using namespace hflow;

namespace {

struct Setup {
    DiskMesh mesh;
    JordanCurve curve;
    Obstacle A;
    PrescribedCurvature H;
    Setup(int nb, int nr, double H0 = 0.0, Obstacle A0 = Obstacle::all_space())
        : mesh(build_disk_mesh(nb, nr)), curve(circle_curve(nb)), A(std::move(A0)), H(PrescribedCurvature::constant(H0)) {}
};

SurfaceState flat_disk(const DiskMesh& m, const JordanCurve& c) {
    SurfaceState st = initial_state(m, c);
    const Field planar = planar_field(m);
    st.interior.assign(planar.begin() + static_cast<std::ptrdiff_t>(m.num_boundary()), planar.end());
    return st;
}

double l2_norm_diff(const DiskMesh& m, const Field& a, const Field& b) {
    Field d(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
    return std::sqrt(l2_inner(m, d, d));
}

double max_diff(const Field& a, const Field& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, (a[i] - b[i]).norm());
    return d;
}

}  // namespace

TEST_CASE("the flat disk is a fixed point of a Rothe step") {
    Setup s(24, 4);
    const SurfaceState flat = flat_disk(s.mesh, s.curve);
    const Field u0 = realize(s.mesh, s.curve, s.A, flat);
    CHECK(max_diff(u0, planar_field(s.mesh)) <= 1e-14);
    FlowConfig cfg;
    const Problem p{s.mesh, s.curve, s.A, s.H, u0};
    const StepResult r = rothe_step(p, flat, cfg);
    CHECK(l2_norm_diff(s.mesh, r.u, u0) <= cfg.inner.grad_tol * cfg.h);
    CHECK(r.record.dirichlet == doctest::Approx(dirichlet(s.mesh, u0)).epsilon(1e-12));
    CHECK(r.record.dissipation_increment <= 1e-14);
}

TEST_CASE("a Rothe step decreases the energy") {
    Setup s(24, 4);
    const SurfaceState start = initial_state(s.mesh, s.curve, 0.5);
    const Field u0 = realize(s.mesh, s.curve, s.A, start);
    FlowConfig cfg;
    const Problem p{s.mesh, s.curve, s.A, s.H, u0};
    const StepResult r = rothe_step(p, start, cfg);
    const double d0 = dirichlet(s.mesh, u0);
    CHECK(r.record.dirichlet < d0);
    CHECK(r.record.dirichlet + r.record.dissipation_increment <= d0);
    CHECK(r.record.dissipation_increment > 0.0);
    CHECK_FALSE(r.record.stalled);
    CHECK(r.record.f_value == doctest::Approx(f_value(s.mesh, r.u, u0, u0, cfg.h, s.H, s.A)).epsilon(1e-12));
}

TEST_CASE("a very long step agrees with the stationary solve") {
    Setup s(24, 4, 0.3, Obstacle::ball(Vec3::Zero(), 3.0));
    const SurfaceState start = initial_state(s.mesh, s.curve, 0.4);
    const Field u0 = realize(s.mesh, s.curve, s.A, start);
    FlowConfig cfg;
    cfg.h = 1e6;
    const Problem p{s.mesh, s.curve, s.A, s.H, u0};
    const StepResult step = rothe_step(p, start, cfg);
    const InnerResult st = solve_stationary(s.mesh, s.curve, s.A, s.H, start, cfg);
    const Field us = realize(s.mesh, s.curve, s.A, st.state);
    CHECK(st.reached_tol);
    CHECK_FALSE(step.record.stalled);
    const double es = dirichlet(s.mesh, us) + 2 * h_volume(s.mesh, us, u0, s.H, s.A);
    const double ef = step.record.dirichlet + 2 * step.record.h_volume;
    CHECK(std::abs(es - ef) <= 10 * cfg.inner.grad_tol);
    CHECK(max_diff(us, step.u) <= 1e-4);
}

TEST_CASE("run_flow with no steps returns the initial state") {
    Setup s(24, 4);
    const SurfaceState start = initial_state(s.mesh, s.curve, 0.3);
    FlowConfig cfg;
    cfg.max_steps = 0;
    cfg.s = 20.0;
    const FlowResult res = run_flow(s.mesh, s.curve, s.A, s.H, start, cfg);
    REQUIRE(res.trace.steps.size() == 1);
    CHECK(res.trace.steps[0].step == 0);
    CHECK(res.trace.steps[0].dissipation_total == 0.0);
    CHECK(res.final_state == start);
    CHECK(res.conditions.admissible);
}

TEST_CASE("inadmissible data is refused unless overridden") {
    Setup s(24, 4, 1.4, Obstacle::ball(Vec3::Zero(), 1.0 + 1e-9));
    const SurfaceState start = initial_state(s.mesh, s.curve);
    FlowConfig cfg;
    cfg.max_steps = 1;
    try {
        run_flow(s.mesh, s.curve, s.A, s.H, start, cfg);
        FAIL("no error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotAdmissible);
    }
    cfg.override_admissibility = true;
    CHECK(run_flow(s.mesh, s.curve, s.A, s.H, start, cfg).trace.steps.size() == 2);
}

TEST_CASE("invalid flow configuration") {
    FlowConfig cfg;
    cfg.h = 0.0;
    CHECK_THROWS_AS(validate(cfg), Error);
    cfg = FlowConfig{};
    cfg.c = 1.0;
    CHECK_THROWS_AS(validate(cfg), Error);
    cfg = FlowConfig{};
    cfg.inner.step_shrink = 1.0;
    CHECK_THROWS_AS(validate(cfg), Error);
    CHECK_NOTHROW(validate(FlowConfig{}));
}

TEST_CASE("energy ledger along a run") {
    Setup s(36, 6, 0.3, Obstacle::ball(Vec3::Zero(), 3.0));
    const SurfaceState start = initial_state(s.mesh, s.curve, 0.5);
    FlowConfig cfg;
    cfg.max_steps = 15;
    cfg.s = 20.0;
    int seen = 0;
    const FlowResult res = run_flow(s.mesh, s.curve, s.A, s.H, start, cfg,
                                    [&](const StepRecord&, const SurfaceState&, std::span<const Vec3>) { ++seen; });
    CHECK(seen == static_cast<int>(res.trace.steps.size()));
    const auto& steps = res.trace.steps;
    const double e0 = steps[0].dirichlet + 2 * steps[0].h_volume;
    const double d0 = steps[0].dirichlet;
    double total = 0.0;
    for (std::size_t j = 1; j < steps.size(); ++j) {
        const StepRecord& r = steps[j];
        const StepRecord& q = steps[j - 1];
        CHECK(r.step == static_cast<int>(j));
        CHECK(r.time == doctest::Approx(j * cfg.h));
        CHECK(r.dirichlet + 2 * r.h_volume + r.dissipation_increment <= q.dirichlet + 2 * q.h_volume + 1e-12);
        total += r.dissipation_increment;
        CHECK(r.dissipation_total == doctest::Approx(total));
        CHECK(r.dissipation_total <= 2 * d0);
        CHECK(r.dirichlet <= 2 * d0);
        CHECK(r.dirichlet + 2 * r.h_volume + r.dissipation_total <= e0 + 1e-10);
    }
    CHECK(res.trace.warnings.empty());
}

TEST_CASE("Neumann residual") {
    Setup s(48, 8);
    const SurfaceState flat = flat_disk(s.mesh, s.curve);
    const Field u = realize(s.mesh, s.curve, s.A, flat);
    const Field zero(u.size(), Vec3::Zero());
    CHECK(neumann_residual(s.mesh, s.curve, s.H, u, flat.phases, zero, 24) <= 1e-10);

    SurfaceState moved = flat;
    for (std::size_t i = 0; i < 48; ++i) {
        if (i != 0 && i != 16 && i != 32) moved.phases[i] += 0.08 * std::sin(6.0 * s.mesh.boundary_angles[i]);
    }
    const Field v = realize(s.mesh, s.curve, s.A, moved);
    CHECK(neumann_residual(s.mesh, s.curve, s.H, v, moved.phases, zero, 24) > 1e-3);
}

TEST_CASE("stationarity residual") {
    const DiskMesh m = build_disk_mesh(48, 8);
    const auto family = stationarity_test_family(m);
    CHECK(family.size() == 15);
    for (const Field2& eta : family) {
        CHECK(w1inf_norm(m, eta) > 0.0);
        for (int k = 0; k < 3; ++k) {
            const int v = m.boundary_loop[m.anchor_indices[k]];
            CHECK(eta[v].norm() < 1e-14);
        }
    }
    const Field zero(m.num_vertices(), Vec3::Zero());
    CHECK(stationarity_residual(m, planar_field(m), zero, family) <= 1e-14);
    const Field stretch = sample_field(m, [](const Vec2& x) { return Vec3(2 * x.x(), x.y(), 0); });
    CHECK(stationarity_residual(m, stretch, zero, family) >= 0.1);
}

TEST_CASE("stationary solve for the minimal disk") {
    Setup s(96, 16);
    FlowConfig cfg;
    const InnerResult flat = solve_stationary(s.mesh, s.curve, s.A, s.H, flat_disk(s.mesh, s.curve), cfg);
    CHECK(flat.iterations <= 1);
    CHECK(flat.reached_tol);
    const InnerResult r = solve_stationary(s.mesh, s.curve, s.A, s.H, initial_state(s.mesh, s.curve, 0.5), cfg);
    const double d = dirichlet(s.mesh, realize(s.mesh, s.curve, s.A, r.state));
    CHECK(std::abs(d - kPi) <= 0.02 * kPi);
    CHECK(r.reached_tol);
}
