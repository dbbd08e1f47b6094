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

#include "hflow/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace hflow {

using nlohmann::json;

namespace {

std::string join_errors(const std::vector<SchemaError>& errors) {
    std::string s = "invalid config";
    for (const auto& e : errors) s += "\n  " + e.key + ": " + e.reason;
    return s;
}

/// Collects schema errors while reading one object.
class Section {
public:
    Section(const json& obj, std::string prefix, std::vector<SchemaError>& errors)
        : obj_(obj), prefix_(std::move(prefix)), errors_(errors) {}

    std::string key(const std::string& k) const { return prefix_.empty() ? k : prefix_ + "." + k; }
    void fail(const std::string& k, const std::string& reason) const { errors_.push_back({key(k), reason}); }
    bool has(const std::string& k) const { return obj_.is_object() && obj_.contains(k); }
    const json& at(const std::string& k) const { return obj_.at(k); }

    void allow(std::initializer_list<const char*> keys) const {
        if (!obj_.is_object()) return;
        const std::set<std::string> ok(keys.begin(), keys.end());
        for (const auto& [k, v] : obj_.items()) {
            if (!ok.count(k)) fail(k, "unknown key");
        }
    }

    Section child(const std::string& k) const {
        static const json empty = json::object();
        if (!has(k)) return Section(empty, key(k), errors_);
        if (!obj_.at(k).is_object()) {
            fail(k, "must be an object");
            return Section(empty, key(k), errors_);
        }
        return Section(obj_.at(k), key(k), errors_);
    }

    /// Numbers also accept "inf" when allow_inf is set.
    void number(const std::string& k, double& out, bool allow_inf = false) const {
        if (!has(k)) return;
        const json& v = obj_.at(k);
        if (allow_inf && v.is_string() && v.get<std::string>() == "inf") {
            out = std::numeric_limits<double>::infinity();
        } else if (v.is_number()) {
            out = v.get<double>();
        } else {
            fail(k, allow_inf ? "must be a number or \"inf\"" : "must be a number");
        }
    }

    void integer(const std::string& k, int& out) const {
        if (!has(k)) return;
        const json& v = obj_.at(k);
        if (v.is_number_integer()) {
            out = v.get<int>();
        } else {
            fail(k, "must be an integer");
        }
    }

    void boolean(const std::string& k, bool& out) const {
        if (!has(k)) return;
        if (obj_.at(k).is_boolean()) {
            out = obj_.at(k).get<bool>();
        } else {
            fail(k, "must be a boolean");
        }
    }

    void string(const std::string& k, std::string& out) const {
        if (!has(k)) return;
        if (obj_.at(k).is_string()) {
            out = obj_.at(k).get<std::string>();
        } else {
            fail(k, "must be a string");
        }
    }

    void vec3(const std::string& k, Vec3& out) const {
        if (!has(k)) return;
        const json& v = obj_.at(k);
        if (v.is_array() && v.size() == 3 && v[0].is_number() && v[1].is_number() && v[2].is_number()) {
            out = Vec3(v[0].get<double>(), v[1].get<double>(), v[2].get<double>());
        } else {
            fail(k, "must be an array of three numbers");
        }
    }

private:
    const json& obj_;
    std::string prefix_;
    std::vector<SchemaError>& errors_;
};

json vec_to_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

}  // namespace

ConfigError::ConfigError(std::vector<SchemaError> errors)
    : std::runtime_error(join_errors(errors)), errors_(std::move(errors)) {}

RunConfig parse_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::vector<SchemaError>{{"", std::string("not valid JSON: ") + e.what()}});
    }
    if (!root.is_object()) throw ConfigError(std::vector<SchemaError>{{"", "config must be a JSON object"}});

    std::vector<SchemaError> errors;
    RunConfig cfg;
    const Section top(root, "", errors);
    top.allow({"mesh", "curve_file", "curve", "obstacle", "H", "isoperimetric", "initial", "flow", "output"});

    const Section mesh = top.child("mesh");
    mesh.allow({"n_boundary", "n_rings"});
    mesh.integer("n_boundary", cfg.n_boundary);
    mesh.integer("n_rings", cfg.n_rings);
    if (cfg.n_boundary < 6) mesh.fail("n_boundary", "must be at least 6");
    else if (cfg.n_boundary % 3 != 0) mesh.fail("n_boundary", "must be divisible by 3");
    if (cfg.n_rings < 1) mesh.fail("n_rings", "must be at least 1");

    top.string("curve_file", cfg.curve.file);
    const Section curve = top.child("curve");
    curve.allow({"samples", "radius"});
    curve.integer("samples", cfg.curve.circle_samples);
    curve.number("radius", cfg.curve.circle_radius);
    if (cfg.curve.circle_samples < 9 || cfg.curve.circle_samples % 3 != 0) {
        curve.fail("samples", "must be a multiple of 3, at least 9");
    }
    if (!(cfg.curve.circle_radius > 0.0)) curve.fail("radius", "must be positive");
    if (top.has("curve") && top.has("curve_file")) top.fail("curve", "give either curve or curve_file, not both");

    const Section obst = top.child("obstacle");
    obst.allow({"type", "center", "radius"});
    obst.string("type", cfg.obstacle.type);
    obst.vec3("center", cfg.obstacle.center);
    obst.number("radius", cfg.obstacle.radius);
    if (cfg.obstacle.type != "all_space" && cfg.obstacle.type != "ball") {
        obst.fail("type", "must be \"all_space\" or \"ball\"");
    }
    if (!(cfg.obstacle.radius > 0.0) || !std::isfinite(cfg.obstacle.radius)) obst.fail("radius", "must be positive");

    const Section h = top.child("H");
    h.allow({"type", "value", "center", "table", "sup_bound"});
    h.string("type", cfg.H.type);
    h.number("value", cfg.H.value);
    h.vec3("center", cfg.H.center);
    if (h.has("sup_bound")) {
        double sb = 0.0;
        h.number("sup_bound", sb);
        cfg.H.sup_bound = sb;
    }
    if (h.has("table")) {
        const json& t = h.at("table");
        bool ok = t.is_array() && !t.empty();
        if (ok) {
            for (const json& row : t) {
                if (!(row.is_array() && row.size() == 2 && row[0].is_number() && row[1].is_number())) {
                    ok = false;
                    break;
                }
                cfg.H.table.emplace_back(row[0].get<double>(), row[1].get<double>());
            }
        }
        if (!ok) {
            cfg.H.table.clear();
            h.fail("table", "must be a nonempty array of [radius, value] pairs");
        }
    }
    if (cfg.H.type == "constant") {
        if (!std::isfinite(cfg.H.value)) h.fail("value", "must be finite");
        if (h.has("table") || h.has("center")) h.fail("type", "constant H takes only value and sup_bound");
    } else if (cfg.H.type == "radial") {
        if (!h.has("table")) h.fail("table", "required for radial H");
        if (h.has("value")) h.fail("value", "not used by radial H");
        for (std::size_t k = 0; k < cfg.H.table.size(); ++k) {
            if (cfg.H.table[k].first < 0.0 || (k > 0 && cfg.H.table[k].first <= cfg.H.table[k - 1].first)) {
                h.fail("table", "radii must be nonnegative and strictly increasing");
                break;
            }
        }
    } else {
        h.fail("type", "must be \"constant\" or \"radial\"");
    }
    if (cfg.H.sup_bound && !(*cfg.H.sup_bound >= 0.0)) h.fail("sup_bound", "must be nonnegative");

    FlowConfig& f = cfg.flow;
    const Section iso = top.child("isoperimetric");
    iso.allow({"c", "s"});
    iso.number("c", f.c);
    iso.number("s", f.s, true);
    if (!(f.c > 0.0 && f.c < 1.0)) iso.fail("c", "must lie in (0,1)");
    if (!(f.s > 0.0)) iso.fail("s", "must be positive or \"inf\"");

    const Section init = top.child("initial");
    init.allow({"type", "bump_height"});
    init.string("type", cfg.initial.type);
    init.number("bump_height", cfg.initial.bump_height);
    if (cfg.initial.type != "cone" && cfg.initial.type != "planar") init.fail("type", "must be \"cone\" or \"planar\"");
    if (!std::isfinite(cfg.initial.bump_height)) init.fail("bump_height", "must be finite");

    const Section fl = top.child("flow");
    fl.allow({"h", "max_steps", "inner", "dt_tol", "hopf_tol", "n_test", "quadrature", "override_admissibility"});
    fl.number("h", f.h);
    fl.integer("max_steps", f.max_steps);
    fl.number("dt_tol", f.dt_tol);
    fl.number("hopf_tol", f.hopf_tol);
    fl.integer("n_test", f.n_test);
    fl.boolean("override_admissibility", f.override_admissibility);
    if (!(f.h > 0.0) || !std::isfinite(f.h)) fl.fail("h", "must be positive and finite");
    if (f.max_steps < 0) fl.fail("max_steps", "must be nonnegative");
    if (!(f.dt_tol > 0.0)) fl.fail("dt_tol", "must be positive");
    if (!(f.hopf_tol > 0.0)) fl.fail("hopf_tol", "must be positive");
    if (f.n_test < 1) fl.fail("n_test", "must be positive");

    const Section in = fl.child("inner");
    in.allow({"max_iters", "grad_tol", "armijo_c", "step_shrink", "init_step"});
    in.integer("max_iters", f.inner.max_iters);
    in.number("grad_tol", f.inner.grad_tol);
    in.number("armijo_c", f.inner.armijo_c);
    in.number("step_shrink", f.inner.step_shrink);
    in.number("init_step", f.inner.init_step);
    if (f.inner.max_iters < 1) in.fail("max_iters", "must be positive");
    if (!(f.inner.grad_tol > 0.0)) in.fail("grad_tol", "must be positive");
    if (!(f.inner.armijo_c > 0.0 && f.inner.armijo_c < 1.0)) in.fail("armijo_c", "must lie in (0,1)");
    if (!(f.inner.step_shrink > 0.0 && f.inner.step_shrink < 1.0)) in.fail("step_shrink", "must lie in (0,1)");
    if (!(f.inner.init_step > 0.0)) in.fail("init_step", "must be positive");

    const Section quad = fl.child("quadrature");
    quad.allow({"q_s", "q_x"});
    quad.integer("q_s", f.quadrature.q_s);
    quad.integer("q_x", f.quadrature.q_x);
    if (f.quadrature.q_s < 1 || f.quadrature.q_s > 16) quad.fail("q_s", "must lie in 1..16");
    if (f.quadrature.q_x != 1 && f.quadrature.q_x != 2 && f.quadrature.q_x != 4 && f.quadrature.q_x != 5) {
        quad.fail("q_x", "must be 1, 2, 4 or 5");
    }

    const Section out = top.child("output");
    out.allow({"directory", "cadence"});
    out.string("directory", cfg.output_directory);
    out.integer("cadence", f.cadence);
    if (f.cadence < 0) out.fail("cadence", "must be nonnegative");
    if (cfg.output_directory.empty()) out.fail("directory", "must not be empty");

    if (!errors.empty()) throw ConfigError(std::move(errors));
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open config " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

json to_json(const RunConfig& cfg) {
    const FlowConfig& f = cfg.flow;
    json j;
    j["mesh"] = {{"n_boundary", cfg.n_boundary}, {"n_rings", cfg.n_rings}};
    if (cfg.curve.file.empty()) {
        j["curve"] = {{"samples", cfg.curve.circle_samples}, {"radius", cfg.curve.circle_radius}};
    } else {
        j["curve_file"] = cfg.curve.file;
    }
    j["obstacle"] = {{"type", cfg.obstacle.type}};
    if (cfg.obstacle.type == "ball") {
        j["obstacle"]["center"] = vec_to_json(cfg.obstacle.center);
        j["obstacle"]["radius"] = cfg.obstacle.radius;
    }
    j["H"] = {{"type", cfg.H.type}};
    if (cfg.H.type == "constant") {
        j["H"]["value"] = cfg.H.value;
    } else {
        j["H"]["center"] = vec_to_json(cfg.H.center);
        json table = json::array();
        for (const auto& [r, v] : cfg.H.table) table.push_back({r, v});
        j["H"]["table"] = table;
    }
    if (cfg.H.sup_bound) j["H"]["sup_bound"] = *cfg.H.sup_bound;
    j["isoperimetric"] = {{"c", f.c}, {"s", number_to_json(f.s)}};
    j["initial"] = {{"type", cfg.initial.type}, {"bump_height", cfg.initial.bump_height}};
    j["flow"] = {{"h", f.h},
                 {"max_steps", f.max_steps},
                 {"dt_tol", f.dt_tol},
                 {"hopf_tol", f.hopf_tol},
                 {"n_test", f.n_test},
                 {"override_admissibility", f.override_admissibility},
                 {"inner",
                  {{"max_iters", f.inner.max_iters},
                   {"grad_tol", f.inner.grad_tol},
                   {"armijo_c", f.inner.armijo_c},
                   {"step_shrink", f.inner.step_shrink},
                   {"init_step", f.inner.init_step}}},
                 {"quadrature", {{"q_s", f.quadrature.q_s}, {"q_x", f.quadrature.q_x}}}};
    j["output"] = {{"directory", cfg.output_directory}, {"cadence", f.cadence}};
    return j;
}

JordanCurve read_curve(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open curve file " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::Io, path.string() + ": " + e.what());
    }
    try {
        std::vector<Vec3> pts;
        for (const json& p : j.at("points")) pts.emplace_back(p.at(0).get<double>(), p.at(1).get<double>(), p.at(2).get<double>());
        const auto a = j.at("anchors");
        return JordanCurve(std::move(pts), {a.at(0).get<int>(), a.at(1).get<int>(), a.at(2).get<int>()});
    } catch (const json::exception& e) {
        throw Error(ErrorKind::Io, path.string() + ": expected {\"points\": [[x,y,z],...], \"anchors\": [i,j,k]}");
    }
}

Obstacle make_obstacle(const ObstacleSpec& spec) {
    return spec.type == "ball" ? Obstacle::ball(spec.center, spec.radius) : Obstacle::all_space();
}

PrescribedCurvature make_curvature(const CurvatureSpec& spec) {
    if (spec.type == "radial") return PrescribedCurvature::radial(spec.center, spec.table, spec.sup_bound);
    auto H = PrescribedCurvature::constant(spec.value);
    if (spec.sup_bound && *spec.sup_bound < std::abs(spec.value)) {
        throw Error(ErrorKind::InvalidArgument, "sup_bound is below |H|");
    }
    return H;
}

Scenario build_scenario(const RunConfig& cfg, const std::filesystem::path& base) {
    DiskMesh mesh = build_disk_mesh(cfg.n_boundary, cfg.n_rings);
    JordanCurve curve = cfg.curve.file.empty()
                            ? circle_curve(cfg.curve.circle_samples, cfg.curve.circle_radius)
                            : read_curve(std::filesystem::path(cfg.curve.file).is_absolute()
                                             ? std::filesystem::path(cfg.curve.file)
                                             : base / cfg.curve.file);
    SurfaceState init = initial_state(mesh, curve, cfg.initial.bump_height);
    if (cfg.initial.type == "planar") {
        for (std::size_t k = 0; k < init.interior.size(); ++k) {
            const Vec2& x = mesh.vertices[mesh.num_boundary() + k];
            init.interior[k] = Vec3(x.x(), x.y(), cfg.initial.bump_height * (1.0 - x.squaredNorm()));
        }
    }
    return {std::move(mesh), std::move(curve), make_obstacle(cfg.obstacle), make_curvature(cfg.H), std::move(init)};
}

std::string format_obj_number(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12e", x);
    std::string s(buf);
    const auto e = s.find('e');
    if (e == std::string::npos) return s;
    std::string mant = s.substr(0, e + 1);
    const int expo = std::atoi(s.c_str() + e + 1);
    return mant + std::to_string(expo);
}

void write_frame(const std::filesystem::path& path, const DiskMesh& mesh, std::span<const Vec3> u) {
    if (u.size() != mesh.num_vertices()) throw Error(ErrorKind::InvalidArgument, "frame size does not match the mesh");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
    for (const Vec3& p : u) {
        out << "v " << format_obj_number(p.x()) << ' ' << format_obj_number(p.y()) << ' ' << format_obj_number(p.z())
            << '\n';
    }
    for (const auto& t : mesh.triangles) out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
    if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

Field read_obj(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
    Field u;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.rfind("v ", 0) != 0) continue;
        std::istringstream ss(line.substr(2));
        double x, y, z;
        if (!(ss >> x >> y >> z)) throw Error(ErrorKind::Io, path.string() + ":" + std::to_string(lineno) + ": bad vertex");
        u.emplace_back(x, y, z);
    }
    return u;
}

const std::vector<std::string>& trace_columns() {
    static const std::vector<std::string> cols{"step",          "time",
                                               "dirichlet",     "h_volume",
                                               "f_value",       "dissipation_increment",
                                               "dissipation_total", "dt_norm",
                                               "hopf_residual", "neumann_residual",
                                               "stationarity_residual", "inner_iters"};
    return cols;
}

std::string format_trace(const FlowTrace& trace) {
    std::string out;
    const auto& cols = trace_columns();
    for (std::size_t k = 0; k < cols.size(); ++k) out += (k ? "," : "") + cols[k];
    out += '\n';
    char buf[64];
    auto num = [&](double x) {
        std::snprintf(buf, sizeof buf, ",%.12e", x);
        out += buf;
    };
    for (const StepRecord& r : trace.steps) {
        out += std::to_string(r.step);
        num(r.time);
        num(r.dirichlet);
        num(r.h_volume);
        num(r.f_value);
        num(r.dissipation_increment);
        num(r.dissipation_total);
        num(r.dt_norm);
        num(r.hopf_residual);
        num(r.neumann_residual);
        num(r.stationarity_residual);
        out += ',' + std::to_string(r.inner_iters) + '\n';
    }
    return out;
}

void write_trace(const std::filesystem::path& path, const FlowTrace& trace) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
    out << format_trace(trace);
    if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

json number_to_json(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return x;
}

json to_json(const ConditionReport& report) {
    json j;
    j["c"] = report.c;
    j["s"] = number_to_json(report.s);
    j["sigma"] = number_to_json(report.sigma);
    j["initial_dirichlet"] = number_to_json(report.initial_dirichlet);
    j["admissible"] = report.admissible;
    for (const auto& [name, r] : report.conditions) {
        j[name] = {{"pass", r.pass},
                   {"supported", r.supported},
                   {"value", number_to_json(r.value)},
                   {"threshold", number_to_json(r.threshold)},
                   {"margin", number_to_json(r.margin)},
                   {"note", r.note}};
    }
    return j;
}

json to_json(const StepRecord& r) {
    return {{"step", r.step},
            {"time", r.time},
            {"dirichlet", r.dirichlet},
            {"h_volume", r.h_volume},
            {"f_value", r.f_value},
            {"dissipation_increment", r.dissipation_increment},
            {"dissipation_total", r.dissipation_total},
            {"dt_norm", r.dt_norm},
            {"hopf_residual", r.hopf_residual},
            {"neumann_residual", r.neumann_residual},
            {"stationarity_residual", r.stationarity_residual},
            {"inner_iters", r.inner_iters},
            {"stalled", r.stalled}};
}

void write_report(const std::filesystem::path& path, const json& report) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
    out << report.dump(2) << '\n';
    if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

}  // namespace hflow
