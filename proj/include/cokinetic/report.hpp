#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace cokinetic {

using Json = nlohmann::ordered_json;

// One named residual or bound with its tolerance and where that tolerance
// came from.
struct Check {
    std::string name;
    double value = 0.0;
    double bound = 0.0;
    bool pass = true;
    std::string relation;  // "<=", ">=", "<", "flag"
    std::string tolerance_source;
};

class VerificationReport {
public:
    VerificationReport() = default;
    explicit VerificationReport(std::string name) : name_(std::move(name)) {}

    const std::string& name() const { return name_; }
    void set_name(std::string n) { name_ = std::move(n); }

    // value <= bound; NaN fails.
    bool check_le(const std::string& name, double value, double bound, const std::string& source = "");
    // value < bound
    bool check_lt(const std::string& name, double value, double bound, const std::string& source = "");
    bool check_ge(const std::string& name, double value, double bound, const std::string& source = "");
    bool flag(const std::string& name, bool ok, const std::string& note = "");

    // Values recorded without a pass/fail role.
    Json& data() { return data_; }
    const Json& data() const { return data_; }

    // Folds a sub-report in: its checks are prefixed with its name.
    void absorb(const VerificationReport& sub);

    const std::vector<Check>& checks() const { return checks_; }
    bool pass() const;
    int failures() const;
    // Largest value among checks whose name contains `needle` (0 when none).
    double max_value(const std::string& needle) const;

    Json to_json() const;
    // name,value,bound,relation,pass,tolerance_source
    std::string to_csv() const;

private:
    std::string name_;
    std::vector<Check> checks_;
    Json data_ = Json::object();
};

}  // namespace cokinetic
