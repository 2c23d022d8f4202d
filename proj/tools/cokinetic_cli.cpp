// cokinetic command line.
//
//   cokinetic run <scenario.json> [--only <task>]... [--out report.json] [--csv dir/]
//   cokinetic validate <scenario.json>
//   cokinetic suite <name> [--trials N] [--samples N] [--osc-res N] [--seed S] [--out report.json]
//   cokinetic list
//
// Exit codes: 0 pass, 1 some task or check failed, 2 scenario or usage error.
// COKINETIC_THREADS caps the worker threads.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "cokinetic/scenario.hpp"
#include "cokinetic/suites.hpp"

namespace fs = std::filesystem;
using namespace cokinetic;

namespace {

constexpr int kExitScenarioError = 2;

bool write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    return static_cast<bool>(out);
}

// Task names may contain anything; keep file names portable.
std::string file_stem(const std::string& name) {
    std::string s;
    for (char c : name) s += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.') ? c : '_';
    return s.empty() ? "task" : s;
}

int emit(const Json& j, const std::string& out_path) {
    const std::string text = j.dump(2) + "\n";
    if (out_path.empty()) {
        std::cout << text;
        return 0;
    }
    if (!write_file(out_path, text)) {
        std::cerr << "error: cannot write " << out_path << "\n";
        return kExitScenarioError;
    }
    return 0;
}

bool scenario_error(const Error& e) {
    return e.code() == ErrorCode::ParseError || e.code() == ErrorCode::SchemaError || e.code() == ErrorCode::ReferenceError;
}

int cmd_run(const std::string& path, const std::vector<std::string>& only, const std::string& out_path,
            const std::string& csv_dir) {
    RunReport report;
    try {
        const Scenario sc = load_scenario(path);
        report = run_scenario(sc, only);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return scenario_error(e) ? kExitScenarioError : 1;
    }
    if (int rc = emit(report.to_json(), out_path)) return rc;
    if (!csv_dir.empty()) {
        std::error_code ec;
        fs::create_directories(csv_dir, ec);
        if (ec) {
            std::cerr << "error: cannot create " << csv_dir << ": " << ec.message() << "\n";
            return kExitScenarioError;
        }
        bool ok = write_file(fs::path(csv_dir) / "summary.csv", report.summary_csv());
        for (const auto& t : report.tasks) ok = ok && write_file(fs::path(csv_dir) / (file_stem(t.name) + ".csv"), t.csv);
        if (!ok) {
            std::cerr << "error: cannot write CSV files under " << csv_dir << "\n";
            return kExitScenarioError;
        }
    }
    for (const auto& t : report.tasks)
        std::cerr << (t.pass ? "PASS " : "FAIL ") << t.name << " (" << t.command << ")"
                  << (t.error_code.empty() ? "" : " " + t.error_code) << "\n";
    return exit_code(report);
}

int cmd_validate(const std::string& path) {
    try {
        const Scenario sc = load_scenario(path);
        std::cout << "ok: " << sc.isotopies.size() << " isotopies, " << sc.curves.size() << " curves, " << sc.tasks.size()
                  << " tasks\n";
        return 0;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitScenarioError;
    }
}

int cmd_suite(const std::string& name, const SuiteOptions& opt, const std::string& out_path) {
    const auto t0 = std::chrono::steady_clock::now();
    VerificationReport rep;
    try {
        rep = run_suite(name, opt);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return scenario_error(e) ? kExitScenarioError : 1;
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (int rc = emit(rep.to_json(), out_path)) return rc;
    std::cerr << (rep.pass() ? "PASS " : "FAIL ") << name << " in " << secs << " s\n";
    return rep.pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Verification toolkit for flows on flat cosymplectic models"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    std::string path, out_path, csv_dir, suite_name;
    std::vector<std::string> only;
    SuiteOptions sopt;

    auto* run = app.add_subcommand("run", "Run the tasks of a scenario file");
    run->add_option("scenario", path, "Scenario JSON")->required()->check(CLI::ExistingFile);
    run->add_option("--only", only, "Keep tasks with this name or command (repeatable)");
    run->add_option("--out", out_path, "Write the JSON report here instead of stdout");
    run->add_option("--csv", csv_dir, "Directory for summary.csv and per-task CSV files");

    auto* validate = app.add_subcommand("validate", "Check a scenario file without running it");
    validate->add_option("scenario", path, "Scenario JSON")->required()->check(CLI::ExistingFile);

    auto* suite = app.add_subcommand("suite", "Run a packaged property suite");
    suite->add_option("name", suite_name, "Suite name")->required()->check(CLI::IsMember(suite_names()));
    suite->add_option("--trials", sopt.trials, "Number of random trials (0 keeps the suite default)");
    suite->add_option("--samples", sopt.samples, "Sample points per check (0 keeps the suite default)");
    suite->add_option("--osc-res", sopt.osc_res, "Oscillation grid resolution (0 keeps the suite default)");
    suite->add_option("--steps", sopt.steps, "RK4 steps on [0, 1]")->check(CLI::PositiveNumber);
    suite->add_option("--seed", sopt.seed, "Random seed");
    suite->add_option("--out", out_path, "Write the JSON report here instead of stdout");

    auto* list = app.add_subcommand("list", "List task commands and suites");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitScenarioError;
    }

    if (run->parsed()) return cmd_run(path, only, out_path, csv_dir);
    if (validate->parsed()) return cmd_validate(path);
    if (suite->parsed()) return cmd_suite(suite_name, sopt, out_path);
    if (list->parsed()) {
        std::cout << "commands:";
        for (const auto& c : command_names()) std::cout << ' ' << c;
        std::cout << "\nsuites:";
        for (const auto& s : suite_names()) std::cout << ' ' << s;
        std::cout << "\n";
    }
    return 0;
}
