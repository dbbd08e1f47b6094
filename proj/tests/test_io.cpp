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

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "hflow/io.hpp"

using namespace hflow;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("hflow_test_io_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<SchemaError> errors_of(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.errors();
    }
    return {};
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(HFLOW_CLI) + " " + args + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

const char* kInadmissible = R"({
  "mesh": {"n_boundary": 24, "n_rings": 4},
  "curve": {"samples": 24, "radius": 0.9},
  "obstacle": {"type": "ball", "center": [0, 0, 0], "radius": 1.0},
  "H": {"type": "constant", "value": 1.4},
  "isoperimetric": {"c": 0.3, "s": "inf"},
  "flow": {"max_steps": 3},
  "output": {"directory": "out"}
})";

}  // namespace

TEST_CASE("defaults") {
    const RunConfig cfg = parse_config("{}");
    CHECK(cfg.flow.inner.armijo_c == 1e-4);
    CHECK(cfg.flow.inner.grad_tol == 1e-6);
    CHECK(cfg.flow.h == 0.05);
    CHECK(cfg.n_boundary == 96);
    CHECK(cfg.n_rings == 16);
    CHECK(cfg.obstacle.type == "all_space");
    CHECK(cfg.H.type == "constant");
    CHECK(cfg.H.value == 0.0);
    CHECK(std::isinf(cfg.flow.s));
    CHECK(cfg == RunConfig{});
}

TEST_CASE("schema errors name the key") {
    const auto c = errors_of(R"({"isoperimetric": {"c": 1.5}})");
    REQUIRE(c.size() == 1);
    CHECK(c[0] == SchemaError{"isoperimetric.c", "must lie in (0,1)"});
    const auto n = errors_of(R"({"mesh": {"n_boundary": 10}})");
    REQUIRE(n.size() == 1);
    CHECK(n[0] == SchemaError{"mesh.n_boundary", "must be divisible by 3"});
    const auto u = errors_of(R"({"flow": {"hh": 1}})");
    REQUIRE(u.size() == 1);
    CHECK(u[0].key == "flow.hh");
    CHECK(errors_of(R"({"flow": {"h": "fast"}, "H": {"type": "wavy"}})").size() == 2);
    CHECK(errors_of("[1, 2").size() == 1);
}

TEST_CASE("shipped configs round-trip") {
    int count = 0;
    for (const auto& entry : fs::directory_iterator(HFLOW_CONFIG_DIR)) {
        if (entry.path().extension() != ".json") continue;
        ++count;
        const RunConfig cfg = load_config(entry.path());
        CHECK(parse_config(to_json(cfg).dump()) == cfg);
    }
    CHECK(count >= 2);
}

TEST_CASE("radial curvature config") {
    const RunConfig cfg = parse_config(
        R"({"H": {"type": "radial", "center": [0, 0, 1], "table": [[0, 1.0], [2, 0.5]]}, "isoperimetric": {"s": 4}})");
    CHECK(cfg.H.table.size() == 2);
    CHECK(cfg.flow.s == 4.0);
    CHECK(parse_config(to_json(cfg).dump()) == cfg);
    const auto H = make_curvature(cfg.H);
    CHECK(H(Vec3(0, 0, 2)) == doctest::Approx(0.75));
}

TEST_CASE("number format") {
    CHECK(format_obj_number(1.0) == "1.000000000000e0");
    CHECK(format_obj_number(0.0) == "0.000000000000e0");
    CHECK(format_obj_number(-0.125) == "-1.250000000000e-1");
    CHECK(format_obj_number(12345.0) == "1.234500000000e4");
}

TEST_CASE("OBJ frames") {
    const fs::path dir = scratch_dir("obj");
    const DiskMesh m = build_disk_mesh(12, 2);
    const Field u = planar_field(m);
    write_frame(dir / "frame_000000.obj", m, u);
    const std::string text = slurp(dir / "frame_000000.obj");
    CHECK(text.substr(0, text.find('\n')) == "v 1.000000000000e0 0.000000000000e0 0.000000000000e0");
    CHECK(text.find('\r') == std::string::npos);
    const Field back = read_obj(dir / "frame_000000.obj");
    REQUIRE(back.size() == u.size());
    for (std::size_t i = 0; i < u.size(); ++i) CHECK((back[i] - u[i]).norm() <= 1e-12);
    std::size_t faces = 0;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) faces += line.rfind("f ", 0) == 0;
    CHECK(faces == m.num_triangles());
    CHECK_THROWS(write_frame(dir / "missing" / "x.obj", m, u));
    CHECK_THROWS(read_obj(dir / "nope.obj"));
}

TEST_CASE("trace CSV") {
    const std::string header =
        "step,time,dirichlet,h_volume,f_value,dissipation_increment,dissipation_total,dt_norm,hopf_residual,"
        "neumann_residual,stationarity_residual,inner_iters";
    std::string joined;
    for (const auto& c : trace_columns()) joined += (joined.empty() ? "" : ",") + c;
    CHECK(joined == header);

    const DiskMesh m = build_disk_mesh(12, 2);
    const JordanCurve c = circle_curve(12);
    FlowConfig cfg;
    cfg.max_steps = 0;
    const FlowResult res = run_flow(m, c, Obstacle::all_space(), PrescribedCurvature::constant(0.0),
                                    initial_state(m, c, 0.2), cfg);
    const std::string csv = format_trace(res.trace);
    std::istringstream in(csv);
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);) lines.push_back(line);
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] == header);
    CHECK(lines[1].rfind("0,0.000000000000e+00,", 0) == 0);
    CHECK(std::count(lines[1].begin(), lines[1].end(), ',') == 11);
    CHECK(csv.back() == '\n');
}

TEST_CASE("reports") {
    const RunConfig cfg = parse_config(kInadmissible);
    const Scenario sc = build_scenario(cfg);
    const Field u0 = realize(sc.mesh, sc.curve, sc.A, sc.initial);
    const ConditionReport rep = check_conditions(sc.H, sc.A, dirichlet(sc.mesh, u0), cfg.flow.c, cfg.flow.s);
    const fs::path dir = scratch_dir("report");
    write_report(dir / "report.json", nlohmann::json{{"conditions", to_json(rep)}});
    const auto j = nlohmann::json::parse(slurp(dir / "report.json"));
    CHECK(j["conditions"]["rand"]["pass"] == false);
    CHECK(j["conditions"]["h3"]["pass"] == true);
    CHECK(j["conditions"]["admissible"] == false);
    CHECK(j["conditions"]["sigma"] == "inf");
    CHECK(number_to_json(std::nan("")) == "nan");
    CHECK(number_to_json(2.5) == 2.5);
}

TEST_CASE("CLI exit codes") {
    const fs::path dir = scratch_dir("cli");
    std::ofstream(dir / "bad.json") << R"({"isoperimetric": {"c": 1.5}})";
    std::ofstream(dir / "inadmissible.json") << kInadmissible;
    std::string ok = kInadmissible;
    ok.replace(ok.find("1.4"), 3, "0.2");
    std::ofstream(dir / "ok.json") << ok;

    CHECK(run_cli("check " + (dir / "bad.json").string()) == 3);
    CHECK(run_cli("check " + (dir / "missing.json").string()) == 2);
    CHECK(run_cli("check " + (dir / "inadmissible.json").string()) == 1);
    CHECK(run_cli("flow " + (dir / "inadmissible.json").string()) == 1);
    CHECK(run_cli("check " + (dir / "ok.json").string()) == 0);
    CHECK(fs::exists(dir / "out" / "report.json"));
    CHECK(run_cli("flow " + (dir / "ok.json").string()) == 0);
    CHECK(fs::exists(dir / "out" / "trace.csv"));
    CHECK(fs::exists(dir / "out" / "frame_000000.obj"));
    CHECK(fs::exists(dir / "out" / "frame_000003.obj"));
    CHECK(run_cli("diagnose " + (dir / "ok.json").string() + " " + (dir / "out" / "frame_000003.obj").string()) == 0);
    CHECK(run_cli("diagnose " + (dir / "ok.json").string() + " " + (dir / "out" / "none.obj").string()) == 2);
    CHECK(run_cli("stationary " + (dir / "ok.json").string()) == 0);
    CHECK(run_cli("bogus") == 3);
}
