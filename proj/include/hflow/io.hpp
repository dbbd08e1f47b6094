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

#include <filesystem>
#include <nlohmann/json.hpp>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hflow/flow.hpp"

namespace hflow {

struct SchemaError {
    std::string key;     // dotted path, e.g. "isoperimetric.c"
    std::string reason;
    bool operator==(const SchemaError&) const = default;
};

/// Every schema violation found in one config.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<SchemaError> errors);
    const std::vector<SchemaError>& errors() const { return errors_; }

private:
    std::vector<SchemaError> errors_;
};

struct CurveSpec {
    std::string file;        // JSON {"points": [[x,y,z],...], "anchors": [i,j,k]}; empty selects the circle
    int circle_samples = 96;
    double circle_radius = 1.0;
    bool operator==(const CurveSpec&) const = default;
};

struct ObstacleSpec {
    std::string type = "all_space";  // all_space | ball
    Vec3 center = Vec3::Zero();
    double radius = 1.0;
    bool operator==(const ObstacleSpec&) const = default;
};

struct CurvatureSpec {
    std::string type = "constant";  // constant | radial
    double value = 0.0;
    Vec3 center = Vec3::Zero();
    std::vector<std::pair<double, double>> table;
    std::optional<double> sup_bound;
    bool operator==(const CurvatureSpec&) const = default;
};

struct InitialSpec {
    std::string type = "cone";  // cone | planar
    double bump_height = 0.0;
    bool operator==(const InitialSpec&) const = default;
};

struct RunConfig {
    int n_boundary = 96;
    int n_rings = 16;
    CurveSpec curve;
    ObstacleSpec obstacle;
    CurvatureSpec H;
    InitialSpec initial;
    FlowConfig flow;  // carries c, s and the output cadence
    std::string output_directory = "hflow_out";
    bool operator==(const RunConfig&) const = default;
};

/// Parse and validate; throws ConfigError listing every problem.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const RunConfig& cfg);

/// Objects built from a config. Relative curve paths resolve against base.
struct Scenario {
    DiskMesh mesh;
    JordanCurve curve;
    Obstacle A;
    PrescribedCurvature H;
    SurfaceState initial;
};
Scenario build_scenario(const RunConfig& cfg, const std::filesystem::path& base = {});

JordanCurve read_curve(const std::filesystem::path& path);
Obstacle make_obstacle(const ObstacleSpec& spec);
PrescribedCurvature make_curvature(const CurvatureSpec& spec);

/// Number in the frame format: 12 digits after the point, shortest exponent.
std::string format_obj_number(double x);

void write_frame(const std::filesystem::path& path, const DiskMesh& mesh, std::span<const Vec3> u);
/// Vertex positions of an OBJ file, in file order.
Field read_obj(const std::filesystem::path& path);

/// The trace column names, in file order.
const std::vector<std::string>& trace_columns();
std::string format_trace(const FlowTrace& trace);
void write_trace(const std::filesystem::path& path, const FlowTrace& trace);

/// Non-finite values are stored as the strings "inf", "-inf", "nan".
nlohmann::json number_to_json(double x);
nlohmann::json to_json(const ConditionReport& report);
nlohmann::json to_json(const StepRecord& record);
void write_report(const std::filesystem::path& path, const nlohmann::json& report);

}  // namespace hflow
