#include "doctest.h"

#include "cokinetic/scenario.hpp"
#include "cokinetic/suites.hpp"
#include "helpers.hpp"

using namespace cokinetic;
using testing::pt;

namespace {

Json base_doc() {
    return Json::parse(R"({
      "schema": "cokinetic-scenario/1",
      "name": "unit",
      "seed": 5,
      "model": {"n": 1, "z_topology": "circle"},
      "isotopies": [
        {"name": "id", "identity": true},
        {"name": "S", "kind": "coHamiltonian", "generator": {"terms": [{"k": [0, 1, 0], "b": 1}]}}
      ],
      "tasks": [
        {"name": "len", "command": "length", "arguments": {"isotopy": "S", "expect": 2}, "tolerances": {"osc": 64}}
      ]
    })");
}

// Returns the error code and message raised while parsing.
std::pair<ErrorCode, std::string> parse_error(const Json& doc) {
    try {
        parse_scenario(doc);
    } catch (const Error& e) {
        return {e.code(), e.what()};
    }
    FAIL("expected a scenario error");
    return {ErrorCode::InvalidArgument, ""};
}

bool contains(const std::string& s, const std::string& needle) { return s.find(needle) != std::string::npos; }

}  // namespace

TEST_CASE("minimal scenario") {
    const auto sc = parse_scenario(Json::parse(R"({
      "schema": "cokinetic-scenario/1", "name": "m", "seed": 1,
      "model": {"n": 1, "z_topology": "circle"},
      "isotopies": [{"name": "id", "identity": true}],
      "tasks": [{"name": "l", "command": "length", "arguments": {"isotopy": "id"}}]
    })"));
    CHECK(sc.tasks.size() == 1u);
    CHECK(sc.isotopy("id").is_identity());
    CHECK(sc.defaults.tol_flow == 1e-8);
    CHECK(sc.defaults.tol_quad == 1e-6);
    CHECK(sc.defaults.steps == 1024);
    CHECK(sc.defaults.osc == 256);
    CHECK(sc.defaults.grid == 64);
    const auto rep = run_scenario(sc);
    CHECK(rep.pass);
    CHECK(exit_code(rep) == 0);
}

TEST_CASE("schema errors carry JSON pointers") {
    SUBCASE("z-dependence") {
        auto doc = base_doc();
        doc["isotopies"][1]["generator"]["terms"][0]["k"] = {0, 1, 1};
        const auto [code, msg] = parse_error(doc);
        CHECK(code == ErrorCode::SchemaError);
        CHECK(contains(msg, "z-dependence forbidden for co-Hamiltonian kind"));
        CHECK(contains(msg, "/isotopies/1/generator/terms/0/k"));
    }
    SUBCASE("unknown key") {
        auto doc = base_doc();
        doc["model"]["genus"] = 2;
        const auto [code, msg] = parse_error(doc);
        CHECK(code == ErrorCode::SchemaError);
        CHECK(contains(msg, "/model/genus"));
    }
    SUBCASE("wrong schema") {
        auto doc = base_doc();
        doc["schema"] = "other/2";
        CHECK(parse_error(doc).first == ErrorCode::SchemaError);
    }
    SUBCASE("duplicate names") {
        auto doc = base_doc();
        doc["isotopies"][1]["name"] = "id";
        CHECK(parse_error(doc).first == ErrorCode::SchemaError);
    }
    SUBCASE("bad tolerance") {
        auto doc = base_doc();
        doc["tolerances"] = {{"tol_flow", -1.0}};
        CHECK(contains(parse_error(doc).second, "/tolerances/tol_flow"));
    }
    SUBCASE("unknown command") {
        auto doc = base_doc();
        doc["tasks"][0]["command"] = "teleport";
        CHECK(contains(parse_error(doc).second, "/tasks/0/command"));
    }
}

TEST_CASE("reference errors name the missing object") {
    auto doc = base_doc();
    doc["tasks"][0]["arguments"]["isotopy"] = "ghost";
    const auto [code, msg] = parse_error(doc);
    CHECK(code == ErrorCode::ReferenceError);
    CHECK(contains(msg, "ghost"));

    auto from = base_doc();
    from["isotopies"].push_back({{"name", "T"}, {"from", "nowhere"}, {"inverse", true}});
    CHECK(parse_error(from).first == ErrorCode::ReferenceError);

    const auto sc = parse_scenario(base_doc());
    CHECK_THROWS_AS(sc.isotopy("nope"), Error);
    CHECK_THROWS_AS(run_scenario(sc, "nope"), Error);
}

TEST_CASE("malformed JSON") {
    try {
        parse_scenario_text("{\"schema\": ");
        FAIL("expected ParseError");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ParseError);
    }
    try {
        load_scenario("/nonexistent/scenario.json");
        FAIL("expected ParseError");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ParseError);
    }
}

TEST_CASE("running tasks") {
    const auto sc = parse_scenario(base_doc());
    const auto rep = run_scenario(sc);
    REQUIRE(rep.tasks.size() == 1u);
    const auto& t = rep.tasks[0];
    CHECK(t.pass);
    const double v = t.result["length"]["value"].get<double>();
    CHECK(v == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(t.result["length"]["value_lo"].get<double>() <= 2.0);
    CHECK(t.result["length"]["value_hi"].get<double>() >= 2.0);
    const auto j = rep.to_json();
    CHECK(j["schema"] == kReportSchema);
    CHECK(j.contains("environment"));
    CHECK_FALSE(rep.to_json(false).contains("environment"));
    CHECK(rep.summary_csv().rfind("task,command,pass,error_code\n", 0) == 0);

    auto failing = base_doc();
    failing["tasks"][0]["arguments"]["expect"] = 3.0;
    const auto bad = run_scenario(parse_scenario(failing));
    CHECK_FALSE(bad.pass);
    CHECK(exit_code(bad) == 1);
}

TEST_CASE("task errors are reported per task") {
    auto doc = base_doc();
    doc["tasks"].push_back({{"name", "bad-fact"}, {"command", "fact"}, {"arguments", {{"fact", 6}, {"a", "S"}, {"b", "S"}}}});
    doc["tasks"].push_back({{"name", "gamma"}, {"command", "gamma"}});
    const auto rep = run_scenario(parse_scenario(doc));
    REQUIRE(rep.tasks.size() == 3u);
    CHECK(rep.tasks[2].pass);
}

TEST_CASE("empty task list") {
    auto doc = base_doc();
    doc["tasks"] = Json::array();
    const auto rep = run_scenario(parse_scenario(doc));
    CHECK(rep.pass);
    CHECK(rep.tasks.empty());
}

TEST_CASE("filters") {
    auto doc = base_doc();
    doc["tasks"].push_back({{"name", "g"}, {"command", "gamma"}});
    const auto sc = parse_scenario(doc);
    CHECK(run_scenario(sc, "g").tasks.size() == 1u);
    CHECK(run_scenario(sc, "length").tasks.size() == 1u);
    CHECK(run_scenario(sc, std::vector<std::string>{"g", "len"}).tasks.size() == 2u);
}

TEST_CASE("reports are deterministic") {
    auto doc = base_doc();
    doc["isotopies"].push_back({{"name", "R"}, {"random", {{"kind", "coHamiltonian"}, {"max_terms", 3}}}});
    doc["tasks"] = Json::parse(R"([
      {"name": "f1", "command": "fact", "arguments": {"fact": 1, "a": "R"}, "tolerances": {"samples": 8}},
      {"name": "w", "command": "mean-winding", "arguments": {"isotopy": "R", "form": [1, 0, 0], "resolution": 8}}
    ])");
    const auto sc = parse_scenario(doc);
    set_worker_override(1);
    const std::string a = run_scenario(sc).to_json(false).dump();
    set_worker_override(4);
    const std::string b = run_scenario(sc).to_json(false).dump();
    set_worker_override(0);
    CHECK(a == b);
    CHECK(run_scenario(parse_scenario(doc)).to_json(false).dump() == a);
}

TEST_CASE("seeds and serialization round trip") {
    CHECK(derived_seed(1, "a") != derived_seed(1, "b"));
    CHECK(derived_seed(1, "a") != derived_seed(2, "a"));
    CHECK(derived_seed(7, "x") == derived_seed(7, "x"));

    auto doc = base_doc();
    doc["isotopies"].push_back(
        {{"name", "R"}, {"random", {{"kind", "almostCoHamiltonian"}, {"reeb", {{"mmax", 2}}}}}});
    const auto sc = parse_scenario(doc);
    const CoIsotopy& r = sc.isotopy("R");
    Json spec = isotopy_to_json(r);
    spec["name"] = "R2";
    doc["isotopies"].push_back(spec);
    const auto sc2 = parse_scenario(doc);
    const CoIsotopy& r2 = sc2.isotopy("R2");
    CHECK(r2.kind() == r.kind());
    for (const Vec& p : {pt(0.1, 0.2, 0.3), pt(3, 4, 5)}) CHECK(r2.flow(p, 1.0) == r.flow(p, 1.0));
    CHECK(curve_to_json(ReparamCurve::smooth_plateau(0.1))["kind"] == "smooth-plateau");
}

TEST_CASE("suite registry") {
    const auto names = suite_names();
    CHECK(names.size() == 10u);
    CHECK_THROWS_AS(run_suite("nope"), Error);
    SuiteOptions o;
    o.trials = 2;
    o.samples = 8;
    CHECK(run_suite("algebra", o).pass());
}
