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

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hflow/admissibility.hpp"
#include "hflow/energy.hpp"

namespace hflow {

struct InnerSolverConfig {
    int max_iters = 5000;
    double grad_tol = 1e-6;
    double armijo_c = 1e-4;
    double step_shrink = 0.5;
    double init_step = 1.0;
    bool operator==(const InnerSolverConfig&) const = default;
};

struct FlowConfig {
    double h = 0.05;
    int max_steps = 2000;
    InnerSolverConfig inner;
    double dt_tol = 1e-4;
    double hopf_tol = 1e-3;  // relative to the Dirichlet energy of the step
    double c = 1.0 / 3.0;
    double s = kInfinity;
    int cadence = 10;        // frame output every cadence steps (0 disables)
    int n_test = 24;         // boundary test directions for the Neumann residual
    VolumeQuadrature quadrature;
    bool override_admissibility = false;
    bool operator==(const FlowConfig&) const = default;
};

/// Throws InvalidArgument naming the first offending field.
void validate(const FlowConfig& cfg);

/// One row of the trace. Step 0 describes the initial surface.
struct StepRecord {
    int step = 0;
    double time = 0.0;
    double dirichlet = 0.0;
    double h_volume = 0.0;
    double f_value = 0.0;
    double dissipation_increment = 0.0;
    double dissipation_total = 0.0;
    double dt_norm = 0.0;
    double hopf_residual = 0.0;
    double neumann_residual = 0.0;
    double stationarity_residual = 0.0;
    int inner_iters = 0;
    bool stalled = false;
};

struct FlowTrace {
    std::vector<StepRecord> steps;
    std::vector<std::string> warnings;  // ledger or energy-cap breaches
    bool converged = false;
};

/// Outcome of the projected-gradient minimization.
struct InnerResult {
    SurfaceState state;
    double f_value = 0.0;
    double projected_gradient = 0.0;
    int iterations = 0;
    bool stalled = false;     // line search failed; state is the last accepted iterate
    bool reached_tol = false;
};

/// Everything that stays fixed along a run.
struct Problem {
    const DiskMesh& mesh;
    const JordanCurve& curve;
    const Obstacle& A;
    const PrescribedCurvature& H;
    Field u0;  // realized reference surface of the H-volume
};

/// Minimize D + 2 V_H(., u0) + 1/(2h) |. - z|^2 over feasible states starting
/// from start (h = inf drops the proximal term).
InnerResult minimize_f(const Problem& p, const SurfaceState& start, std::span<const Vec3> z, double h,
                       const InnerSolverConfig& cfg, VolumeQuadrature q = {});

struct StepResult {
    SurfaceState state;
    Field u;
    StepRecord record;
};

/// One minimizing-movements step from prev. record.step/time/dissipation_total
/// are left for the caller; residuals are filled in.
StepResult rothe_step(const Problem& p, const SurfaceState& prev, const FlowConfig& cfg);

using StepObserver = std::function<void(const StepRecord&, const SurfaceState&, std::span<const Vec3>)>;

struct FlowResult {
    FlowTrace trace;
    SurfaceState final_state;
    ConditionReport conditions;
};

/// Iterate rothe_step until dt_norm <= dt_tol and hopf <= hopf_tol * D, or
/// max_steps. The observer sees every record including step 0.
FlowResult run_flow(const DiskMesh& mesh, const JordanCurve& curve, const Obstacle& A, const PrescribedCurvature& H,
                    const SurfaceState& initial, const FlowConfig& cfg, const StepObserver& observer = {});

/// Worst violation of the weak Neumann inequality over n_test anchor-respecting
/// monotone phase perturbations, normalized by the boundary L2 size of the
/// perturbation. f is the time derivative. The volume load is the exact
/// gradient of V_H(., *u0) when u0 is given, the continuum load otherwise.
double neumann_residual(const DiskMesh& mesh, const JordanCurve& curve, const PrescribedCurvature& H,
                        std::span<const Vec3> u, std::span<const double> phases, std::span<const Vec3> f, int n_test,
                        const Field* u0 = nullptr, VolumeQuadrature q = {});

/// Interior bumps on a lattice plus boundary-tangential trigonometric fields
/// vanishing at the anchors, sampled at the mesh vertices.
std::vector<Field2> stationarity_test_family(const DiskMesh& mesh);

/// Discrete W^{1,inf} norm: max nodal size plus max triangle gradient.
double w1inf_norm(const DiskMesh& mesh, std::span<const Vec2> eta);

/// max over the family of |inner variation| / (1 + |eta|_{W^{1,inf}}).
double stationarity_residual(const DiskMesh& mesh, std::span<const Vec3> u, std::span<const Vec3> f,
                             std::span<const Field2> family);

/// Direct minimization of D + 2 V_H(., u0), no proximal term.
InnerResult solve_stationary(const DiskMesh& mesh, const JordanCurve& curve, const Obstacle& A,
                             const PrescribedCurvature& H, const SurfaceState& initial, const FlowConfig& cfg);

}  // namespace hflow
