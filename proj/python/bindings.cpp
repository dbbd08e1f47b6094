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

// Python bindings for the hflow core.

#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hflow/io.hpp"

namespace py = pybind11;
using namespace hflow;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Field to_field(const Array& a) {
    if (a.ndim() != 2 || a.shape(1) != 3) throw std::invalid_argument("expected an array of shape (n, 3)");
    Field out(static_cast<std::size_t>(a.shape(0)));
    auto r = a.unchecked<2>();
    for (py::ssize_t i = 0; i < a.shape(0); ++i) out[i] = Vec3(r(i, 0), r(i, 1), r(i, 2));
    return out;
}

Field2 to_field2(const Array& a) {
    if (a.ndim() != 2 || a.shape(1) != 2) throw std::invalid_argument("expected an array of shape (n, 2)");
    Field2 out(static_cast<std::size_t>(a.shape(0)));
    auto r = a.unchecked<2>();
    for (py::ssize_t i = 0; i < a.shape(0); ++i) out[i] = Vec2(r(i, 0), r(i, 1));
    return out;
}

template <class V>
Array to_array(const std::vector<V>& f) {
    constexpr int d = V::RowsAtCompileTime;
    Array out({static_cast<py::ssize_t>(f.size()), static_cast<py::ssize_t>(d)});
    auto w = out.mutable_unchecked<2>();
    for (std::size_t i = 0; i < f.size(); ++i) {
        for (int k = 0; k < d; ++k) w(i, k) = f[i][k];
    }
    return out;
}

Vec3 to_vec3(const std::array<double, 3>& a) { return {a[0], a[1], a[2]}; }

py::object json_to_py(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

py::dict flow_result(const FlowResult& r) {
    py::list steps;
    for (const StepRecord& s : r.trace.steps) steps.append(json_to_py(to_json(s)));
    py::dict d;
    d["steps"] = steps;
    d["warnings"] = r.trace.warnings;
    d["converged"] = r.trace.converged;
    d["final_state"] = r.final_state;
    d["conditions"] = json_to_py(to_json(r.conditions));
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Rothe-scheme heat flow for disk-type surfaces of prescribed mean curvature";

    py::register_exception<Error>(m, "HflowError");
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    py::class_<DiskMesh>(m, "DiskMesh")
        .def_property_readonly("vertices", [](const DiskMesh& d) { return to_array(d.vertices); })
        .def_property_readonly("triangles", [](const DiskMesh& d) { return d.triangles; })
        .def_readonly("boundary_loop", &DiskMesh::boundary_loop)
        .def_readonly("boundary_angles", &DiskMesh::boundary_angles)
        .def_readonly("anchor_indices", &DiskMesh::anchor_indices)
        .def_readonly("lumped_mass", &DiskMesh::lumped_mass)
        .def_readonly("boundary_mass", &DiskMesh::boundary_mass)
        .def_readonly("areas", &DiskMesh::areas)
        .def_property_readonly("num_vertices", &DiskMesh::num_vertices)
        .def_property_readonly("num_triangles", &DiskMesh::num_triangles)
        .def_property_readonly("num_boundary", &DiskMesh::num_boundary)
        .def("total_area", &DiskMesh::total_area);
    m.def("build_disk_mesh", &build_disk_mesh, py::arg("n_boundary"), py::arg("n_rings"));
    m.def("planar_field", [](const DiskMesh& d) { return to_array(planar_field(d)); });

    py::class_<JordanCurve>(m, "JordanCurve")
        .def(py::init([](const Array& pts, std::array<int, 3> anchors) { return JordanCurve(to_field(pts), anchors); }),
             py::arg("points"), py::arg("anchors"))
        .def("eval", [](const JordanCurve& c, double t) {
            const Vec3 v = c.eval(t);
            return std::array<double, 3>{v.x(), v.y(), v.z()};
        })
        .def("eval_d1", [](const JordanCurve& c, double t) {
            const Vec3 v = c.eval_d1(t);
            return std::array<double, 3>{v.x(), v.y(), v.z()};
        })
        .def_property_readonly("anchor_phases", &JordanCurve::anchor_phases)
        .def_property_readonly("control_points", [](const JordanCurve& c) { return to_array(c.control_points()); })
        .def("closest_phase", [](const JordanCurve& c, std::array<double, 3> p) { return c.closest_phase(to_vec3(p)); });
    m.def("circle_curve", &circle_curve, py::arg("m"), py::arg("radius") = 1.0);

    py::class_<Obstacle>(m, "Obstacle")
        .def_static("all_space", &Obstacle::all_space)
        .def_static("ball", [](std::array<double, 3> c, double r) { return Obstacle::ball(to_vec3(c), r); },
                    py::arg("center"), py::arg("radius"))
        .def("project", [](const Obstacle& A, std::array<double, 3> p) {
            const Vec3 q = A.project(to_vec3(p));
            return std::array<double, 3>{q.x(), q.y(), q.z()};
        })
        .def("contains", [](const Obstacle& A, std::array<double, 3> p) { return A.contains(to_vec3(p)); })
        .def("volume", &Obstacle::volume);

    py::class_<PrescribedCurvature>(m, "PrescribedCurvature")
        .def_static("constant", &PrescribedCurvature::constant)
        .def_static("radial",
                    [](std::array<double, 3> c, std::vector<std::pair<double, double>> table) {
                        return PrescribedCurvature::radial(to_vec3(c), std::move(table));
                    },
                    py::arg("center"), py::arg("table"))
        .def_static("callback",
                    [](std::function<double(std::array<double, 3>)> fn, double sup) {
                        return PrescribedCurvature::callback(
                            [fn](const Vec3& x) {
                                py::gil_scoped_acquire gil;
                                return fn({x.x(), x.y(), x.z()});
                            },
                            sup);
                    },
                    py::arg("fn"), py::arg("declared_sup"))
        .def("__call__", [](const PrescribedCurvature& H, std::array<double, 3> p) { return H(to_vec3(p)); })
        .def_property_readonly("sup_bound", &PrescribedCurvature::sup_bound);

    py::class_<VolumeQuadrature>(m, "VolumeQuadrature")
        .def(py::init<>())
        .def_readwrite("q_s", &VolumeQuadrature::q_s)
        .def_readwrite("q_x", &VolumeQuadrature::q_x);

    m.def("dirichlet", [](const DiskMesh& d, const Array& u) { return dirichlet(d, to_field(u)); });
    m.def("dirichlet_gradient",
          [](const DiskMesh& d, const Array& u) { return to_array(dirichlet_gradient(d, to_field(u))); });
    m.def("h_volume",
          [](const DiskMesh& d, const Array& u, const Array& v, const PrescribedCurvature& H, const Obstacle& A,
             VolumeQuadrature q) { return h_volume(d, to_field(u), to_field(v), H, A, q); },
          py::arg("mesh"), py::arg("u"), py::arg("v"), py::arg("H"), py::arg("A"), py::arg("q") = VolumeQuadrature{});
    m.def("volume_additivity_check",
          [](const DiskMesh& d, const Array& u, const Array& ut, const Array& v, const PrescribedCurvature& H,
             const Obstacle& A) { return volume_additivity_check(d, to_field(u), to_field(ut), to_field(v), H, A); });
    m.def("f_value",
          [](const DiskMesh& d, const Array& u, const Array& u0, const Array& z, double h, const PrescribedCurvature& H,
             const Obstacle& A) { return f_value(d, to_field(u), to_field(u0), to_field(z), h, H, A); },
          py::arg("mesh"), py::arg("u"), py::arg("u0"), py::arg("z"), py::arg("h"), py::arg("H"), py::arg("A"));
    m.def("f_gradient",
          [](const DiskMesh& d, const Array& u, const Array& u0, const Array& z, double h, const PrescribedCurvature& H) {
              return to_array(f_gradient(d, to_field(u), to_field(u0), to_field(z), h, H));
          },
          py::arg("mesh"), py::arg("u"), py::arg("u0"), py::arg("z"), py::arg("h"), py::arg("H"));
    m.def("hopf_residual", [](const DiskMesh& d, const Array& u) { return hopf_residual(d, to_field(u)); });
    m.def("mean_curvature_vectors",
          [](const DiskMesh& d, const Array& u) { return to_array(mean_curvature_vectors(d, to_field(u))); });
    m.def("stationarity_residual", [](const DiskMesh& d, const Array& u, const Array& f) {
        return stationarity_residual(d, to_field(u), to_field(f), stationarity_test_family(d));
    });
    m.def("inner_variation_residual", [](const DiskMesh& d, const Array& u, const Array& f, const Array& eta) {
        return inner_variation_residual(d, to_field(u), to_field(f), to_field2(eta));
    });

    py::class_<SurfaceState>(m, "SurfaceState")
        .def(py::init([](const Array& interior, std::vector<double> phases) {
                 return SurfaceState{to_field(interior), std::move(phases)};
             }),
             py::arg("interior"), py::arg("phases"))
        .def_property_readonly("interior", [](const SurfaceState& s) { return to_array(s.interior); })
        .def_readonly("phases", &SurfaceState::phases);
    m.def("initial_state", &initial_state, py::arg("mesh"), py::arg("curve"), py::arg("bump_height") = 0.0);
    m.def("realize", [](const DiskMesh& d, const JordanCurve& c, const Obstacle& A, const SurfaceState& s) {
        return to_array(realize(d, c, A, s));
    });
    m.def("recover_state",
          [](const DiskMesh& d, const JordanCurve& c, const Array& u) { return recover_state(d, c, to_field(u)); });
    m.def("project_monotone",
          [](std::vector<double> phases, std::vector<double> weights, std::vector<std::pair<std::size_t, double>> anchors,
             double period) {
              std::vector<AnchorValue> a;
              for (auto [p, v] : anchors) a.push_back({p, v});
              return project_monotone(phases, weights, a, period);
          },
          py::arg("phases"), py::arg("weights"), py::arg("anchors"), py::arg("period") = kTwoPi);

    m.def("check_conditions",
          [](const PrescribedCurvature& H, const Obstacle& A, double d0, double c, double s) {
              return json_to_py(to_json(check_conditions(H, A, d0, c, s)));
          },
          py::arg("H"), py::arg("A"), py::arg("initial_dirichlet"), py::arg("c"), py::arg("s") = kInfinity);
    m.def("energy_cap", &energy_cap, py::arg("c"), py::arg("s"), py::arg("initial_dirichlet"));

    py::class_<InnerSolverConfig>(m, "InnerSolverConfig")
        .def(py::init<>())
        .def_readwrite("max_iters", &InnerSolverConfig::max_iters)
        .def_readwrite("grad_tol", &InnerSolverConfig::grad_tol)
        .def_readwrite("armijo_c", &InnerSolverConfig::armijo_c)
        .def_readwrite("step_shrink", &InnerSolverConfig::step_shrink)
        .def_readwrite("init_step", &InnerSolverConfig::init_step);
    py::class_<FlowConfig>(m, "FlowConfig")
        .def(py::init<>())
        .def_readwrite("h", &FlowConfig::h)
        .def_readwrite("max_steps", &FlowConfig::max_steps)
        .def_readwrite("inner", &FlowConfig::inner)
        .def_readwrite("dt_tol", &FlowConfig::dt_tol)
        .def_readwrite("hopf_tol", &FlowConfig::hopf_tol)
        .def_readwrite("c", &FlowConfig::c)
        .def_readwrite("s", &FlowConfig::s)
        .def_readwrite("cadence", &FlowConfig::cadence)
        .def_readwrite("n_test", &FlowConfig::n_test)
        .def_readwrite("quadrature", &FlowConfig::quadrature)
        .def_readwrite("override_admissibility", &FlowConfig::override_admissibility);

    m.def("run_flow",
          [](const DiskMesh& d, const JordanCurve& c, const Obstacle& A, const PrescribedCurvature& H,
             const SurfaceState& initial, const FlowConfig& cfg) {
              FlowResult r;
              {
                  py::gil_scoped_release release;
                  r = run_flow(d, c, A, H, initial, cfg);
              }
              return flow_result(r);
          },
          py::arg("mesh"), py::arg("curve"), py::arg("A"), py::arg("H"), py::arg("initial"), py::arg("config"));
    m.def("solve_stationary",
          [](const DiskMesh& d, const JordanCurve& c, const Obstacle& A, const PrescribedCurvature& H,
             const SurfaceState& initial, const FlowConfig& cfg) {
              InnerResult r;
              {
                  py::gil_scoped_release release;
                  r = solve_stationary(d, c, A, H, initial, cfg);
              }
              py::dict out;
              out["state"] = r.state;
              out["f_value"] = r.f_value;
              out["projected_gradient"] = r.projected_gradient;
              out["iterations"] = r.iterations;
              out["stalled"] = r.stalled;
              out["reached_tol"] = r.reached_tol;
              return out;
          },
          py::arg("mesh"), py::arg("curve"), py::arg("A"), py::arg("H"), py::arg("initial"), py::arg("config"));

    py::class_<RunConfig>(m, "RunConfig")
        .def_readwrite("flow", &RunConfig::flow)
        .def_readwrite("n_boundary", &RunConfig::n_boundary)
        .def_readwrite("n_rings", &RunConfig::n_rings)
        .def_readwrite("output_directory", &RunConfig::output_directory)
        .def("to_json", [](const RunConfig& c) { return json_to_py(to_json(c)); });
    m.def("parse_config", &parse_config, py::arg("text"));
    m.def("load_config", [](const std::string& p) { return load_config(p); }, py::arg("path"));
    py::class_<Scenario>(m, "Scenario")
        .def_readonly("mesh", &Scenario::mesh)
        .def_readonly("curve", &Scenario::curve)
        .def_readonly("A", &Scenario::A)
        .def_readonly("H", &Scenario::H)
        .def_readonly("initial", &Scenario::initial);
    m.def("build_scenario", [](const RunConfig& c, const std::string& base) { return build_scenario(c, base); },
          py::arg("config"), py::arg("base") = std::string());
}
