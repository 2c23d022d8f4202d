#include "cokinetic/report.hpp"

#include <cmath>
#include <sstream>

namespace cokinetic {

namespace {
Json num(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}
}  // namespace

bool VerificationReport::check_le(const std::string& name, double value, double bound, const std::string& source) {
    const bool ok = value <= bound;
    checks_.push_back({name, value, bound, ok, "<=", source});
    return ok;
}

bool VerificationReport::check_lt(const std::string& name, double value, double bound, const std::string& source) {
    const bool ok = value < bound;
    checks_.push_back({name, value, bound, ok, "<", source});
    return ok;
}

bool VerificationReport::check_ge(const std::string& name, double value, double bound, const std::string& source) {
    const bool ok = value >= bound;
    checks_.push_back({name, value, bound, ok, ">=", source});
    return ok;
}

bool VerificationReport::flag(const std::string& name, bool ok, const std::string& note) {
    checks_.push_back({name, ok ? 1.0 : 0.0, 1.0, ok, "flag", note});
    return ok;
}

void VerificationReport::absorb(const VerificationReport& sub) {
    for (Check c : sub.checks_) {
        c.name = sub.name_ + "/" + c.name;
        checks_.push_back(std::move(c));
    }
    if (!sub.data_.empty()) data_[sub.name_] = sub.data_;
}

bool VerificationReport::pass() const { return failures() == 0; }

int VerificationReport::failures() const {
    int f = 0;
    for (const auto& c : checks_) f += c.pass ? 0 : 1;
    return f;
}

double VerificationReport::max_value(const std::string& needle) const {
    double m = 0;
    for (const auto& c : checks_)
        if (c.name.find(needle) != std::string::npos && c.value > m) m = c.value;
    return m;
}

Json VerificationReport::to_json() const {
    Json j;
    j["name"] = name_;
    j["pass"] = pass();
    Json arr = Json::array();
    for (const auto& c : checks_) {
        Json e;
        e["name"] = c.name;
        e["value"] = num(c.value);
        e["relation"] = c.relation;
        e["bound"] = num(c.bound);
        e["pass"] = c.pass;
        if (!c.tolerance_source.empty()) e["tolerance_source"] = c.tolerance_source;
        arr.push_back(std::move(e));
    }
    j["checks"] = std::move(arr);
    if (!data_.empty()) j["data"] = data_;
    return j;
}

std::string VerificationReport::to_csv() const {
    std::ostringstream os;
    os.precision(17);
    os << "name,value,bound,relation,pass,tolerance_source\n";
    for (const auto& c : checks_)
        os << c.name << ',' << c.value << ',' << c.bound << ',' << c.relation << ',' << (c.pass ? 1 : 0) << ','
           << c.tolerance_source << '\n';
    return os.str();
}

}  // namespace cokinetic
