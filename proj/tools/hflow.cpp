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

// hflow: command-line driver.
//   hflow check <config>
//   hflow flow <config>
//   hflow stationary <config>
//   hflow diagnose <config> <surface.obj>
// Exit codes: 0 ok/admissible, 1 inadmissible, 2 runtime error, 3 config error.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>

#include "hflow/io.hpp"

namespace fs = std::filesystem;
using namespace hflow;

namespace {

constexpr int kOk = 0, kInadmissible = 1, kRuntime = 2, kConfig = 3;

struct Loaded {
    RunConfig cfg;
    Scenario sc;
    fs::path out_dir;
};

Loaded load(const std::string& config_path, bool make_output) {
    const fs::path p(config_path);
    RunConfig cfg = load_config(p);
    Scenario sc = build_scenario(cfg, p.parent_path());
    fs::path out = fs::path(cfg.output_directory).is_absolute() ? fs::path(cfg.output_directory)
                                                                 : p.parent_path() / cfg.output_directory;
    if (make_output) fs::create_directories(out);
    return {std::move(cfg), std::move(sc), std::move(out)};
}

std::string frame_name(int step) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "frame_%06d.obj", step);
    return buf;
}

ConditionReport conditions_for(const Loaded& L, const Field& u0) {
    return check_conditions(L.sc.H, L.sc.A, dirichlet(L.sc.mesh, u0), L.cfg.flow.c, L.cfg.flow.s);
}

int cmd_check(const std::string& config) {
    Loaded L = load(config, true);
    const Field u0 = realize(L.sc.mesh, L.sc.curve, L.sc.A, L.sc.initial);
    const ConditionReport rep = conditions_for(L, u0);
    nlohmann::json j{{"command", "check"}, {"conditions", to_json(rep)}};
    write_report(L.out_dir / "report.json", j);
    std::cout << j.dump(2) << '\n';
    return rep.admissible ? kOk : kInadmissible;
}

int cmd_flow(const std::string& config) {
    Loaded L = load(config, true);
    const Scenario& sc = L.sc;
    const int cadence = L.cfg.flow.cadence;
    int last_written = -1;
    auto observer = [&](const StepRecord& r, const SurfaceState&, std::span<const Vec3> u) {
        if (cadence > 0 && r.step % cadence == 0) {
            write_frame(L.out_dir / frame_name(r.step), sc.mesh, u);
            last_written = r.step;
        }
        std::fprintf(stderr, "step %5d  D=%.8f  dt=%.3e  hopf=%.3e  iters=%d\n", r.step, r.dirichlet, r.dt_norm,
                     r.hopf_residual, r.inner_iters);
    };

    FlowResult res;
    try {
        res = run_flow(sc.mesh, sc.curve, sc.A, sc.H, sc.initial, L.cfg.flow, observer);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::NotAdmissible) throw;
        const Field u0 = realize(sc.mesh, sc.curve, sc.A, sc.initial);
        nlohmann::json j{{"command", "flow"}, {"conditions", to_json(conditions_for(L, u0))}, {"error", e.what()}};
        write_report(L.out_dir / "report.json", j);
        std::cerr << e.what() << '\n';
        return kInadmissible;
    }

    const Field u = realize(sc.mesh, sc.curve, sc.A, res.final_state);
    const StepRecord& last = res.trace.steps.back();
    if (last.step != last_written) write_frame(L.out_dir / frame_name(last.step), sc.mesh, u);
    write_trace(L.out_dir / "trace.csv", res.trace);

    nlohmann::json j{{"command", "flow"},
                     {"conditions", to_json(res.conditions)},
                     {"converged", res.trace.converged},
                     {"steps", last.step},
                     {"final", to_json(last)},
                     {"warnings", res.trace.warnings}};
    write_report(L.out_dir / "report.json", j);
    std::cout << j.dump(2) << '\n';
    return kOk;
}

int cmd_stationary(const std::string& config) {
    Loaded L = load(config, true);
    const Scenario& sc = L.sc;
    const Field u0 = realize(sc.mesh, sc.curve, sc.A, sc.initial);
    const ConditionReport rep = conditions_for(L, u0);
    nlohmann::json j{{"command", "stationary"}, {"conditions", to_json(rep)}};
    if (!rep.admissible && !L.cfg.flow.override_admissibility) {
        j["error"] = "data not admissible";
        write_report(L.out_dir / "report.json", j);
        std::cerr << "NotAdmissible: no sufficient condition certifies the data\n";
        return kInadmissible;
    }
    const InnerResult res = solve_stationary(sc.mesh, sc.curve, sc.A, sc.H, sc.initial, L.cfg.flow);
    const Field u = realize(sc.mesh, sc.curve, sc.A, res.state);
    write_frame(L.out_dir / "stationary.obj", sc.mesh, u);
    const Field zero(u.size(), Vec3::Zero());
    j["iterations"] = res.iterations;
    j["reached_tol"] = res.reached_tol;
    j["stalled"] = res.stalled;
    j["projected_gradient"] = res.projected_gradient;
    j["dirichlet"] = dirichlet(sc.mesh, u);
    j["f_value"] = res.f_value;
    j["hopf_residual"] = hopf_residual(sc.mesh, u);
    j["neumann_residual"] =
        neumann_residual(sc.mesh, sc.curve, sc.H, u, res.state.phases, zero, L.cfg.flow.n_test, &u0, L.cfg.flow.quadrature);
    j["stationarity_residual"] = stationarity_residual(sc.mesh, u, zero, stationarity_test_family(sc.mesh));
    write_report(L.out_dir / "report.json", j);
    std::cout << j.dump(2) << '\n';
    return kOk;
}

int cmd_diagnose(const std::string& config, const std::string& surface) {
    Loaded L = load(config, false);
    const Scenario& sc = L.sc;
    const Field u = read_obj(surface);
    if (u.size() != sc.mesh.num_vertices()) {
        throw Error(ErrorKind::InvalidArgument, surface + " has " + std::to_string(u.size()) + " vertices, the mesh has " +
                                                    std::to_string(sc.mesh.num_vertices()));
    }
    const SurfaceState st = recover_state(sc.mesh, sc.curve, u);
    const Field zero(u.size(), Vec3::Zero());
    double off_curve = 0.0;
    for (std::size_t i = 0; i < sc.mesh.num_boundary(); ++i) {
        off_curve = std::max(off_curve, (u[sc.mesh.boundary_loop[i]] - sc.curve.eval(st.phases[i])).norm());
    }
    nlohmann::json j{{"command", "diagnose"},
                     {"surface", surface},
                     {"dirichlet", dirichlet(sc.mesh, u)},
                     {"hopf_residual", hopf_residual(sc.mesh, u)},
                     {"neumann_residual", neumann_residual(sc.mesh, sc.curve, sc.H, u, st.phases, zero, L.cfg.flow.n_test)},
                     {"stationarity_residual", stationarity_residual(sc.mesh, u, zero, stationarity_test_family(sc.mesh))},
                     {"boundary_distance_to_curve", off_curve}};
    std::cout << j.dump(2) << '\n';
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rothe-scheme heat flow for disk-type surfaces of prescribed mean curvature"};
    app.require_subcommand(1);
    std::string config, surface;
    auto* check = app.add_subcommand("check", "Evaluate the sufficient conditions for the configured data");
    check->add_option("config", config, "JSON run configuration")->required();
    auto* flow = app.add_subcommand("flow", "Run the evolution and write frames, trace.csv and report.json");
    flow->add_option("config", config, "JSON run configuration")->required();
    auto* stat = app.add_subcommand("stationary", "Minimize D + 2 V_H directly");
    stat->add_option("config", config, "JSON run configuration")->required();
    auto* diag = app.add_subcommand("diagnose", "Residuals of a surface stored as OBJ");
    diag->add_option("config", config, "JSON run configuration")->required();
    diag->add_option("surface", surface, "OBJ surface on the configured mesh")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kConfig;
    }

    try {
        if (*check) return cmd_check(config);
        if (*flow) return cmd_flow(config);
        if (*stat) return cmd_stationary(config);
        if (*diag) return cmd_diagnose(config, surface);
    } catch (const ConfigError& e) {
        std::cerr << e.what() << '\n';
        return kConfig;
    } catch (const std::exception& e) {
        std::cerr << e.what() << '\n';
        return kRuntime;
    }
    return kRuntime;
}
