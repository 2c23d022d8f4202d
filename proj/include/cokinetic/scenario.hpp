#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cokinetic/curve.hpp"
#include "cokinetic/isotopy.hpp"
#include "cokinetic/linalg.hpp"
#include "cokinetic/report.hpp"

namespace cokinetic {

inline constexpr const char* kScenarioSchema = "cokinetic-scenario/1";
inline constexpr const char* kReportSchema = "cokinetic-report/1";
inline constexpr const char* kVersion = "1.0.0";

// Scenario-schema serialization of the model objects.
Json model_to_json(const ModelSpec& m);
Json poly_to_json(const PolyT& p);
Json generator_to_json(const Generator& g);
Json reeb_to_json(const ReebComponent& r);
Json curve_to_json(const ReparamCurve& c);
Json affine_to_json(const AffineMap& a);
// Generator, Reeb component (when present), kind and steps of a forward path.
Json isotopy_to_json(const CoIsotopy& iso);

// Defaults apply per scenario and may be overridden per task.
struct Tolerances {
    double tol_flow = 1e-8;
    double tol_quad = 1e-6;
    double tol_residual = 1e-5;
    double tol_newton = 1e-10;
    double tol_winding = 1e-6;
    int steps = 1024;
    int osc = 256;
    int grid = 64;
    int samples = 64;
    Json to_json() const;
};

struct Task {
    std::string name;
    std::string command;
    Json arguments = Json::object();
    Tolerances tol;
    bool steps_override = false;  // the task set "steps" itself
    std::uint64_t seed = 0;
};

struct Scenario {
    std::string name;
    ModelSpec model;
    std::uint64_t seed = 0;
    Tolerances defaults;
    std::vector<std::string> isotopy_order;
    std::map<std::string, CoIsotopy> isotopies;
    std::map<std::string, ReparamCurve> curves;
    std::map<std::string, CosymplecticCouple> couples;
    std::vector<Task> tasks;

    const CoIsotopy& isotopy(const std::string& name) const;
    const ReparamCurve& curve(const std::string& name) const;
};

// Seed of a named object: the scenario seed mixed with FNV-1a of the name.
std::uint64_t derived_seed(std::uint64_t scenario_seed, const std::string& name);

// Throws SchemaError (message starts with a JSON pointer) or ReferenceError.
Scenario parse_scenario(const Json& doc);
// Throws ParseError on malformed JSON.
Scenario parse_scenario_text(const std::string& text);
Scenario load_scenario(const std::string& path);

// Commands accepted in tasks, in documentation order.
std::vector<std::string> command_names();

struct TaskResult {
    std::string name;
    std::string command;
    bool pass = false;
    Json result = Json::object();  // command output; absent on error
    std::string error_code;        // empty unless the task threw
    std::string error_message;
    std::string csv;               // per-task CSV, format depends on the command
    double seconds = 0.0;          // wall time, kept out of the JSON
    Json to_json() const;
};

struct RunReport {
    std::string scenario;
    std::uint64_t seed = 0;
    std::vector<TaskResult> tasks;
    bool pass = true;
    Json environment = Json::object();

    // The environment stamp is the last key; drop it for determinism checks.
    Json to_json(bool with_environment = true) const;
    // task,command,pass,error_code
    std::string summary_csv() const;
};

// Runs tasks in declaration order. `only` keeps tasks whose name or command
// matches; an unmatched filter is a ReferenceError.
RunReport run_scenario(const Scenario& sc, const std::string& only = "");
RunReport run_scenario(const Scenario& sc, const std::vector<std::string>& only);

// 0 pass, 1 some task failed.
int exit_code(const RunReport& r);

}  // namespace cokinetic
